//! Deterministic scalar numerics: bracketed root finding, adaptive
//! Gauss–Kronrod quadrature, Richardson-extrapolated central differences and
//! a scanline level-set tracer.
//!
//! Every routine takes fallible closures (`FnMut(f64) -> Result<f64>`) so that
//! domain errors raised by the thermodynamic formulas propagate unchanged.
//! Nothing here depends on evaluation order beyond the fixed order documented
//! on each function, so identical inputs give bit-identical outputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and grid sizes shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NumericsConfig {
    /// Parameter-space tolerance for root refinement, relative to `max(1, |x|)`.
    pub root_tol: f64,
    /// Absolute tolerance for adaptive quadrature.
    pub quad_tol: f64,
    /// Finite-difference step relative to `max(1, |x|)`.
    pub fd_step_scale: f64,
    /// Number of cells used when scanning an interval for sign changes.
    pub scan_grid: usize,
    /// Iteration cap for root refinement.
    pub max_iters: usize,
    /// Bisection depth cap for adaptive quadrature.
    pub max_depth: usize,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            root_tol: 1e-12,
            quad_tol: 1e-9,
            fd_step_scale: 1e-5,
            scan_grid: 512,
            max_iters: 200,
            max_depth: 48,
        }
    }
}

impl NumericsConfig {
    pub fn validate(&self) -> Result<()> {
        let reals = [
            ("root_tol", self.root_tol),
            ("quad_tol", self.quad_tol),
            ("fd_step_scale", self.fd_step_scale),
        ];
        for (name, v) in reals {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.scan_grid == 0 || self.max_iters == 0 || self.max_depth == 0 {
            return Err(Error::InvalidParameter(
                "scan_grid, max_iters and max_depth must be positive".into(),
            ));
        }
        Ok(())
    }
}

fn finite_at(x: f64, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::EvaluationFailed { x })
    }
}

/// Brent's method on `[a, b]`.
///
/// Requires `f(a)·f(b) < 0` (an exact zero at an endpoint is returned as is).
/// The bracket never leaves the initial interval and shrinks monotonically;
/// iteration stops once its half-width is below
/// `root_tol · max(1, |x|)`.
pub fn find_root_bracketed<F>(f: F, a: f64, b: f64, cfg: &NumericsConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    brent(f, a, b, cfg, |_, _| {})
}

/// Same as [`find_root_bracketed`] but also returns the bracket held at the
/// start of each iteration.
pub fn find_root_with_history<F>(
    f: F,
    a: f64,
    b: f64,
    cfg: &NumericsConfig,
) -> Result<(f64, Vec<(f64, f64)>)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut history = Vec::new();
    let root = brent(f, a, b, cfg, |lo, hi| history.push((lo, hi)))?;
    Ok((root, history))
}

fn brent<F, O>(mut f: F, a: f64, b: f64, cfg: &NumericsConfig, mut observe: O) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
    O: FnMut(f64, f64),
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite bracket [{a}, {b}]")));
    }
    let (mut a, mut b) = (a, b);
    let mut fa = finite_at(a, f(a)?)?;
    let mut fb = finite_at(b, f(b)?)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NotBracketed { a, b });
    }

    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..cfg.max_iters {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * cfg.root_tol * b.abs().max(1.0);
        let xm = 0.5 * (c - b);
        observe(b.min(c), b.max(c));
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when only two points differ
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = finite_at(b, f(b)?)?;
    }
    Err(Error::MaxIters { iters: cfg.max_iters, last: b })
}

/// Scans `[a, b]` on a uniform grid of `cells` cells and refines every sign
/// change of `f` with Brent's method. Roots are returned in increasing grid
/// order. Grid points where `f` fails or is non-finite break the scan there
/// (no bracket is formed across them). Grid nodes where `f` is exactly zero
/// are reported as roots.
pub fn scan_roots<F>(mut f: F, a: f64, b: f64, cells: usize, cfg: &NumericsConfig) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let cells = cells.max(1);
    let h = (b - a) / cells as f64;
    let node = |i: usize| if i == cells { b } else { a + h * i as f64 };
    let values: Vec<Option<f64>> = (0..=cells)
        .map(|i| f(node(i)).ok().filter(|v| v.is_finite()))
        .collect();
    let mut roots = Vec::new();
    for i in 0..cells {
        match (values[i], values[i + 1]) {
            (Some(lo), _) if lo == 0.0 => roots.push(node(i)),
            (Some(lo), Some(hi)) if lo.signum() != hi.signum() && hi != 0.0 => {
                roots.push(find_root_bracketed(&mut f, node(i), node(i + 1), cfg)?);
            }
            _ => {}
        }
    }
    if values[cells] == Some(0.0) {
        roots.push(b);
    }
    Ok(roots)
}

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate and |Kronrod − Gauss| on one panel.
fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = finite_at(center, f(center)?)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = finite_at(center - dx, f(center - dx)?)?;
        let f2 = finite_at(center + dx, f(center + dx)?)?;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

/// Adaptive interval-halving Gauss–Kronrod (7/15) quadrature of `f` over
/// `[a, b]` with absolute tolerance `cfg.quad_tol`.
///
/// Panels are refined depth-first, left before right. `b < a` is allowed and
/// flips the sign.
pub fn integrate_adaptive<F>(mut f: F, a: f64, b: f64, cfg: &NumericsConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let (est, err) = gk15(&mut f, lo, hi)?;
    Ok(sign * refine(&mut f, lo, hi, est, err, cfg.quad_tol, 0, cfg)?)
}

fn refine<F>(
    f: &mut F,
    a: f64,
    b: f64,
    est: f64,
    err: f64,
    tol: f64,
    depth: usize,
    cfg: &NumericsConfig,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if err <= tol || err <= 50.0 * f64::EPSILON * est.abs() {
        return Ok(est);
    }
    if depth >= cfg.max_depth {
        return Err(Error::MaxDepth { depth, a, b });
    }
    let mid = 0.5 * (a + b);
    let (left, left_err) = gk15(f, a, mid)?;
    let (right, right_err) = gk15(f, mid, b)?;
    let left = refine(f, a, mid, left, left_err, 0.5 * tol, depth + 1, cfg)?;
    let right = refine(f, mid, b, right, right_err, 0.5 * tol, depth + 1, cfg)?;
    Ok(left + right)
}

/// Central difference at `x` with step `h = fd_step_scale · max(1, |x|)`,
/// Richardson-extrapolated from steps `h` and `h/2`.
pub fn derivative_central<F>(f: F, x: f64, cfg: &NumericsConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    derivative_with_step(f, x, cfg.fd_step_scale * x.abs().max(1.0))
}

/// Richardson-extrapolated central difference with an explicit base step.
pub fn derivative_with_step<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidParameter(format!("finite-difference step {h}")));
    }
    let mut eval = |x: f64| -> Result<f64> {
        match f(x) {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::EvaluationFailed { x }),
        }
    };
    let coarse = (eval(x + h)? - eval(x - h)?) / (2.0 * h);
    let fine = (eval(x + 0.5 * h)? - eval(x - 0.5 * h)?) / h;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Which parameter plane a contour lives in (x axis listed first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Plane {
    /// x = λ, y = T.
    LambdaT,
    /// x = ν, y = T.
    NuT,
    /// x = t, y = T.
    TimeT,
}

/// Axis along which each scanline is searched for roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanAxis {
    X,
    Y,
}

/// Rectangular window `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

/// A traced level set: ordered polylines of `(x, y)` samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub level: f64,
    pub plane: Option<Plane>,
    pub polylines: Vec<Vec<(f64, f64)>>,
}

impl Contour {
    pub fn is_empty(&self) -> bool {
        self.polylines.iter().all(|p| p.is_empty())
    }

    pub fn points(&self) -> impl Iterator<Item = &(f64, f64)> {
        self.polylines.iter().flatten()
    }
}

/// One scanline: the fixed coordinate and the roots found along the other axis.
pub type Scanline = (f64, Vec<f64>);

/// Roots of `g(s) − level` on `[lo, hi]`, scanned on `cells` cells.
pub fn scanline_roots<G>(
    mut g: G,
    level: f64,
    lo: f64,
    hi: f64,
    cells: usize,
    cfg: &NumericsConfig,
) -> Vec<f64>
where
    G: FnMut(f64) -> f64,
{
    scan_roots(|s| Ok(g(s) - level), lo, hi, cells, cfg).unwrap_or_default()
}

/// Links per-scanline roots into polylines by nearest-neighbour continuation.
///
/// A root continues the polyline whose latest sample sits on the previous
/// scanline and is within `max_jump` along the scan axis; closest pairs are
/// matched first. Anything unmatched opens a new polyline.
pub fn link_scanlines(lines: &[Scanline], axis: ScanAxis, max_jump: f64) -> Vec<Vec<(f64, f64)>> {
    let point = |fixed: f64, root: f64| match axis {
        ScanAxis::X => (root, fixed),
        ScanAxis::Y => (fixed, root),
    };
    let mut polylines: Vec<Vec<(f64, f64)>> = Vec::new();
    // (polyline index, last root) for polylines that touched the previous line
    let mut active: Vec<(usize, f64)> = Vec::new();
    for (fixed, roots) in lines {
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (ri, r) in roots.iter().enumerate() {
            for (ai, (_, last)) in active.iter().enumerate() {
                let dist = (r - last).abs();
                if dist <= max_jump {
                    pairs.push((dist, ri, ai));
                }
            }
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        let mut root_owner: Vec<Option<usize>> = vec![None; roots.len()];
        let mut taken = vec![false; active.len()];
        for (_, ri, ai) in pairs {
            if root_owner[ri].is_none() && !taken[ai] {
                root_owner[ri] = Some(active[ai].0);
                taken[ai] = true;
            }
        }
        let mut next_active = Vec::with_capacity(roots.len());
        for (ri, r) in roots.iter().enumerate() {
            let idx = match root_owner[ri] {
                Some(idx) => idx,
                None => {
                    polylines.push(Vec::new());
                    polylines.len() - 1
                }
            };
            polylines[idx].push(point(*fixed, *r));
            next_active.push((idx, *r));
        }
        active = next_active;
    }
    polylines
}

/// Scanline extraction of `{(x, y) : f(x, y) = level}` over `window`.
///
/// `resolution = (nx, ny)` cells. With `ScanAxis::X` every horizontal grid
/// line `y_j` is searched along x on `nx` cells (and vice versa); the roots
/// are linked with a jump threshold of two scan-axis cells.
pub fn trace_level_set<F>(
    mut f: F,
    level: f64,
    window: Window,
    resolution: (usize, usize),
    axis: ScanAxis,
    cfg: &NumericsConfig,
) -> Contour
where
    F: FnMut(f64, f64) -> f64,
{
    let layout = ScanLayout::new(window, resolution, axis);
    let lines: Vec<Scanline> = layout
        .fixed_values()
        .into_iter()
        .map(|v| {
            let roots = scanline_roots(
                |s| match axis {
                    ScanAxis::X => f(s, v),
                    ScanAxis::Y => f(v, s),
                },
                level,
                layout.scan.0,
                layout.scan.1,
                layout.scan_cells,
                cfg,
            );
            (v, roots)
        })
        .collect();
    Contour {
        level,
        plane: None,
        polylines: link_scanlines(&lines, axis, layout.max_jump()),
    }
}

/// Grid geometry of a scanline trace, exposed so callers can evaluate
/// scanlines in parallel and link them with [`link_scanlines`].
#[derive(Debug, Clone, Copy)]
pub struct ScanLayout {
    pub fixed: (f64, f64),
    pub fixed_cells: usize,
    pub scan: (f64, f64),
    pub scan_cells: usize,
}

impl ScanLayout {
    pub fn new(window: Window, resolution: (usize, usize), axis: ScanAxis) -> Self {
        let (nx, ny) = (resolution.0.max(1), resolution.1.max(1));
        match axis {
            ScanAxis::X => ScanLayout { fixed: window.y, fixed_cells: ny, scan: window.x, scan_cells: nx },
            ScanAxis::Y => ScanLayout { fixed: window.x, fixed_cells: nx, scan: window.y, scan_cells: ny },
        }
    }

    pub fn fixed_values(&self) -> Vec<f64> {
        let (a, b) = self.fixed;
        let n = self.fixed_cells;
        (0..=n)
            .map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 })
            .collect()
    }

    pub fn max_jump(&self) -> f64 {
        2.0 * (self.scan.1 - self.scan.0).abs() / self.scan_cells as f64
    }
}
