//! Carnot (TS) and Tλ cycles.
//!
//! A cycle has four corners, `1 = (T_hot, λ₁)`, `2 = (T_hot, λ₂)`,
//! `3 = (T_cold, λ₂)`, `4 = (T_cold, λ₁)`, so the hot isotherm carries
//! `1 → 2`. The Tλ cycle joins the isotherms by iso-λ legs at fixed ν; the
//! broken-regime Carnot cycle joins them by isentropes along which ν is varied
//! with T. In the PT-symmetric regime the Carnot isentropes vary λ instead,
//! which needs four distinct λ values.
//!
//! Sign conventions: `ΔQ > 0` is heat absorbed, `ΔW > 0` is work done by the
//! system, and `ΔW = ΔQ − ΔU` on every leg.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_adaptive, scan_roots, NumericsConfig};
use crate::spectrum::{split_at_time, ModelParams, TimeDependence};
use crate::thermo::{self, heat_capacity_exact, pressure, EvalDomain};

/// A `λ` with equal entropy at two temperatures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyMatch {
    pub lambda: f64,
    pub s_common: f64,
}

fn model(n: u32, nu: f64, lambda: f64) -> Result<ModelParams> {
    ModelParams::new(n, nu, lambda)
}

/// All roots of `S(T1, λ) − S(T2, λ)` inside `bracket`, in increasing λ.
///
/// Points where either entropy is undefined (unbounded spectrum) are skipped.
pub fn entropy_match_lambda(
    t1: f64,
    t2: f64,
    nu: f64,
    n: u32,
    bracket: (f64, f64),
    cfg: &NumericsConfig,
) -> Result<Vec<EntropyMatch>> {
    if t1 == t2 {
        return Err(Error::InvalidParameter("entropy matching needs T1 != T2".into()));
    }
    let base = model(n, nu, 0.0)?;
    let (a, b) = (bracket.0.min(bracket.1), bracket.0.max(bracket.1));
    let diff = |lam: f64| -> Result<f64> {
        let p = base.with_lambda(lam);
        Ok(thermo::static_entropy(t1, &p)? - thermo::static_entropy(t2, &p)?)
    };
    let roots = scan_roots(diff, a, b, cfg.scan_grid, cfg)?;
    if roots.is_empty() {
        return Err(Error::NoRootInBracket { a, b });
    }
    roots
        .into_iter()
        .map(|lambda| {
            let s_common = thermo::static_entropy(t1, &base.with_lambda(lambda))?;
            Ok(EntropyMatch { lambda, s_common })
        })
        .collect()
}

/// Picks the match whose common entropy is closest to `target`.
pub fn select_by_entropy(matches: &[EntropyMatch], target: f64) -> Option<EntropyMatch> {
    matches
        .iter()
        .copied()
        .min_by(|a, b| (a.s_common - target).abs().total_cmp(&(b.s_common - target).abs()))
}

/// Which parameter moves along an isentrope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsentropeVariable {
    NuVaries,
    LambdaVaries,
}

/// Samples `(T, ν)` or `(T, λ)` along a line of constant entropy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsentropePath {
    pub constant: IsentropeVariable,
    pub s_level: f64,
    /// The parameter held fixed (λ for `NuVaries`, ν for `LambdaVaries`).
    pub held: f64,
    pub samples: Vec<(f64, f64)>,
}

fn temperature_grid(t_from: f64, t_to: f64, steps: usize) -> Vec<f64> {
    if t_from == t_to || steps == 0 {
        return vec![t_from];
    }
    (0..=steps)
        .map(|i| if i == steps { t_to } else { t_from + (t_to - t_from) * i as f64 / steps as f64 })
        .collect()
}

/// Traces `S(T, ν, λ) = s_level` for ν at fixed λ by continuation from
/// `nu_start` at `t_from`.
///
/// At each temperature the root nearest the previous ν is taken from a bracket
/// whose radius starts at `10⁻³·max(1, ν)` and doubles up to eight times.
pub fn trace_isentrope_nu(
    s_level: f64,
    lambda: f64,
    n: u32,
    t_from: f64,
    t_to: f64,
    steps: usize,
    nu_start: f64,
    cfg: &NumericsConfig,
) -> Result<IsentropePath> {
    let base = model(n, nu_start, lambda)?;
    let nu_floor = if lambda > 0.0 { (n as f64 * lambda).sqrt() } else { 0.0 };
    let mut predictor = nu_start;
    let mut samples = Vec::new();
    for t in temperature_grid(t_from, t_to, steps) {
        let residual = |nu: f64| thermo::static_entropy(t, &base.with_nu(nu)).map(|s| s - s_level);
        let mut radius = 1e-3 * predictor.max(1.0);
        let mut found = None;
        for _ in 0..=8 {
            let lo = (predictor - radius).max(nu_floor + 1e-12 * predictor.max(1.0));
            let hi = predictor + radius;
            let roots = scan_roots(residual, lo, hi, 16, cfg)?;
            found = roots
                .into_iter()
                .min_by(|a, b| (a - predictor).abs().total_cmp(&(b - predictor).abs()));
            if found.is_some() {
                break;
            }
            radius *= 2.0;
        }
        let nu = found.ok_or(Error::BranchLost { t })?;
        samples.push((t, nu));
        predictor = nu;
    }
    Ok(IsentropePath { constant: IsentropeVariable::NuVaries, s_level, held: lambda, samples })
}

/// Traces `S(T, ν, λ) = s_level` for λ at fixed ν, scanning `window` at every
/// temperature. More than one root at any temperature is reported as
/// [`Error::MultiValued`].
pub fn trace_isentrope_lambda(
    s_level: f64,
    nu: f64,
    n: u32,
    t_from: f64,
    t_to: f64,
    steps: usize,
    window: (f64, f64),
    cfg: &NumericsConfig,
) -> Result<IsentropePath> {
    let base = model(n, nu, 0.0)?;
    let mut samples = Vec::new();
    for t in temperature_grid(t_from, t_to, steps) {
        let residual =
            |lam: f64| thermo::static_entropy(t, &base.with_lambda(lam)).map(|s| s - s_level);
        let roots = scan_roots(residual, window.0, window.1, cfg.scan_grid, cfg)?;
        match roots.len() {
            0 => return Err(Error::BranchLost { t }),
            1 => samples.push((t, roots[0])),
            k => return Err(Error::MultiValued { t, roots: k }),
        }
    }
    Ok(IsentropePath { constant: IsentropeVariable::LambdaVaries, s_level, held: nu, samples })
}

/// A cycle corner with its ensemble values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CyclePoint {
    pub label: u8,
    #[serde(rename = "T")]
    pub t: f64,
    pub lambda: f64,
    pub nu: f64,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "U")]
    pub u: f64,
}

impl CyclePoint {
    pub fn evaluate(label: u8, t: f64, nu: f64, lambda: f64, n: u32) -> Result<Self> {
        let d = EvalDomain::static_at(t, &model(n, nu, lambda)?)?;
        Ok(CyclePoint {
            label,
            t,
            lambda,
            nu,
            s: thermo::entropy(&d),
            u: thermo::internal_energy(&d),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    Isothermal,
    IsoLambda,
    IsentropeNu,
    IsentropeLambda,
    TimeEvolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepIntegrals {
    pub dq: f64,
    pub dw: f64,
    pub du: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleStep {
    pub from: u8,
    pub to: u8,
    pub kind: StepKind,
    #[serde(rename = "dQ")]
    pub dq: f64,
    #[serde(rename = "dW")]
    pub dw: f64,
    #[serde(rename = "dU")]
    pub du: f64,
}

/// Heat, work and energy change of one leg.
///
/// * isothermal: `ΔQ = T ΔS`, `ΔW = ∫ p dλ` by quadrature;
/// * iso-λ: `ΔQ = ∫ T (∂S/∂T) dT` by quadrature, `ΔW = 0`;
/// * isentropes and time evolution: `ΔQ = 0`, `ΔW = −ΔU`.
///
/// `ΔU` always comes from the closed form at the endpoints. Quadrature
/// results that disagree with the first law by more than `10⁻⁶` relative are
/// rejected.
pub fn step_integrals(
    kind: StepKind,
    from: &CyclePoint,
    to: &CyclePoint,
    n: u32,
    cfg: &NumericsConfig,
) -> Result<StepIntegrals> {
    let du = to.u - from.u;
    let quad = NumericsConfig { quad_tol: 0.01 * cfg.quad_tol, ..*cfg };
    let agree = |a: f64, b: f64| (a - b).abs() <= 1e-6 * (1.0 + b.abs());
    match kind {
        StepKind::Isothermal => {
            if from.t != to.t || from.nu != to.nu {
                return Err(Error::InvalidParameter("isothermal leg needs equal T and nu".into()));
            }
            let base = model(n, from.nu, from.lambda)?;
            let dq = from.t * (to.s - from.s);
            let dw = integrate_adaptive(
                |lam| pressure(from.t, &base.with_lambda(lam)),
                from.lambda,
                to.lambda,
                &quad,
            )?;
            if !agree(dw, dq - du) {
                return Err(Error::QuadratureNotConverged(format!(
                    "isothermal work {dw} vs T dS - dU = {}",
                    dq - du
                )));
            }
            Ok(StepIntegrals { dq, dw, du })
        }
        StepKind::IsoLambda => {
            if from.lambda != to.lambda || from.nu != to.nu {
                return Err(Error::InvalidParameter("iso-lambda leg needs equal lambda and nu".into()));
            }
            let p = model(n, from.nu, from.lambda)?;
            let dq = integrate_adaptive(
                |t| Ok(heat_capacity_exact(&EvalDomain::static_at(t, &p)?)),
                from.t,
                to.t,
                &quad,
            )?;
            if !agree(dq, du) {
                return Err(Error::QuadratureNotConverged(format!("iso-lambda heat {dq} vs dU {du}")));
            }
            Ok(StepIntegrals { dq, dw: 0.0, du })
        }
        StepKind::IsentropeNu | StepKind::IsentropeLambda | StepKind::TimeEvolution => {
            Ok(StepIntegrals { dq: 0.0, dw: -du, du })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleKind {
    TLambda,
    CarnotBroken,
    CarnotSymmetric,
}

/// `Gamma1` is the rectangle in the TS plane (Carnot), `Gamma2` follows the
/// iso-λ arches (Tλ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathLabel {
    Gamma1,
    Gamma2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub kind: CycleKind,
    pub path_label: PathLabel,
    pub points: Vec<CyclePoint>,
    pub steps: Vec<CycleStep>,
    pub loop_q: f64,
    pub loop_w: f64,
    pub loop_u: f64,
    pub efficiency: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub isentropes: Vec<IsentropePath>,
}

impl CycleReport {
    pub fn point(&self, label: u8) -> Option<&CyclePoint> {
        self.points.iter().find(|p| p.label == label)
    }

    /// Largest `|ΔU|` over the legs; the scale for loop-closure checks.
    pub fn max_abs_du(&self) -> f64 {
        self.steps.iter().map(|s| s.du.abs()).fold(0.0, f64::max)
    }
}

/// How to pick one corner λ: the entropy-matching root inside `window`
/// whose common entropy is closest to `entropy`, or the root closest to the
/// window centre when no target is given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaCorner {
    pub window: (f64, f64),
    #[serde(default)]
    pub entropy: Option<f64>,
}

/// Corner specification for the broken-regime cycles (shared λ₁, λ₂).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrokenCycleSpec {
    pub t_cold: f64,
    pub t_hot: f64,
    pub nu: f64,
    #[serde(rename = "N")]
    pub n: u32,
    pub lambda1: LambdaCorner,
    pub lambda2: LambdaCorner,
    /// Samples per traced isentrope (Carnot only).
    #[serde(default = "default_trace_steps")]
    pub trace_steps: usize,
}

/// Corner specification for the PT-symmetric Carnot cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricCycleSpec {
    pub t_cold: f64,
    pub t_hot: f64,
    pub nu: f64,
    #[serde(rename = "N")]
    pub n: u32,
    pub s_low: f64,
    pub s_high: f64,
    pub lambda_window: (f64, f64),
    #[serde(default = "default_trace_steps")]
    pub trace_steps: usize,
}

fn default_trace_steps() -> usize {
    200
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CycleSpec {
    TLambda(BrokenCycleSpec),
    CarnotBroken(BrokenCycleSpec),
    CarnotSymmetric(SymmetricCycleSpec),
}

fn infeasible(e: Error) -> Error {
    match e {
        Error::CycleInfeasible(_) => e,
        other => Error::CycleInfeasible(other.to_string()),
    }
}

fn resolve_corner(spec: &BrokenCycleSpec, corner: &LambdaCorner, cfg: &NumericsConfig) -> Result<EntropyMatch> {
    let matches = entropy_match_lambda(spec.t_cold, spec.t_hot, spec.nu, spec.n, corner.window, cfg)?;
    let pick = match corner.entropy {
        Some(target) => select_by_entropy(&matches, target),
        None => {
            let centre = 0.5 * (corner.window.0 + corner.window.1);
            matches
                .iter()
                .copied()
                .min_by(|a, b| (a.lambda - centre).abs().total_cmp(&(b.lambda - centre).abs()))
        }
    };
    pick.ok_or(Error::NoRootInBracket { a: corner.window.0, b: corner.window.1 })
}

/// Solves the corner conditions and assembles the requested cycle.
pub fn build_cycle(spec: &CycleSpec, cfg: &NumericsConfig) -> Result<CycleReport> {
    match spec {
        CycleSpec::TLambda(s) | CycleSpec::CarnotBroken(s) => {
            if !(s.t_hot > s.t_cold && s.t_cold > 0.0) {
                return Err(Error::InvalidParameter("need 0 < t_cold < t_hot".into()));
            }
            let l1 = resolve_corner(s, &s.lambda1, cfg).map_err(infeasible)?;
            let l2 = resolve_corner(s, &s.lambda2, cfg).map_err(infeasible)?;
            if matches!(spec, CycleSpec::TLambda(_)) {
                tlambda_cycle(s.t_cold, s.t_hot, s.nu, s.n, l1.lambda, l2.lambda, cfg)
            } else {
                carnot_broken_cycle(s.t_cold, s.t_hot, s.nu, s.n, l1.lambda, l2.lambda, s.trace_steps, cfg)
            }
        }
        CycleSpec::CarnotSymmetric(s) => carnot_symmetric_cycle(s, cfg),
    }
}

fn corners(t_cold: f64, t_hot: f64, nu: f64, n: u32, l1: f64, l2: f64) -> Result<[CyclePoint; 4]> {
    Ok([
        CyclePoint::evaluate(1, t_hot, nu, l1, n)?,
        CyclePoint::evaluate(2, t_hot, nu, l2, n)?,
        CyclePoint::evaluate(3, t_cold, nu, l2, n)?,
        CyclePoint::evaluate(4, t_cold, nu, l1, n)?,
    ])
}

/// Tλ cycle on fixed corners (no corner solving).
pub fn tlambda_cycle(
    t_cold: f64,
    t_hot: f64,
    nu: f64,
    n: u32,
    lambda1: f64,
    lambda2: f64,
    cfg: &NumericsConfig,
) -> Result<CycleReport> {
    let pts = corners(t_cold, t_hot, nu, n, lambda1, lambda2).map_err(infeasible)?;
    let kinds = [StepKind::Isothermal, StepKind::IsoLambda, StepKind::Isothermal, StepKind::IsoLambda];
    assemble(CycleKind::TLambda, PathLabel::Gamma2, pts, kinds, n, Vec::new(), cfg)
}

/// Broken-regime Carnot cycle on fixed corners; both ν-isentropes are traced
/// and must return to the cycle's ν.
pub fn carnot_broken_cycle(
    t_cold: f64,
    t_hot: f64,
    nu: f64,
    n: u32,
    lambda1: f64,
    lambda2: f64,
    trace_steps: usize,
    cfg: &NumericsConfig,
) -> Result<CycleReport> {
    let pts = corners(t_cold, t_hot, nu, n, lambda1, lambda2).map_err(infeasible)?;
    let down = trace_isentrope_nu(pts[1].s, lambda2, n, t_hot, t_cold, trace_steps, nu, cfg)
        .map_err(infeasible)?;
    let up = trace_isentrope_nu(pts[3].s, lambda1, n, t_cold, t_hot, trace_steps, nu, cfg)
        .map_err(infeasible)?;
    for path in [&down, &up] {
        let end = path.samples.last().map(|s| s.1).unwrap_or(f64::NAN);
        if !((end - nu).abs() <= 1e-6 * nu) {
            return Err(Error::CycleInfeasible(format!(
                "isentrope at S = {} ends at nu = {end}, not {nu}",
                path.s_level
            )));
        }
    }
    let kinds = [StepKind::Isothermal, StepKind::IsentropeNu, StepKind::Isothermal, StepKind::IsentropeNu];
    assemble(CycleKind::CarnotBroken, PathLabel::Gamma1, pts, kinds, n, vec![down, up], cfg)
}

fn carnot_symmetric_cycle(s: &SymmetricCycleSpec, cfg: &NumericsConfig) -> Result<CycleReport> {
    if !(s.t_hot > s.t_cold && s.t_cold > 0.0) {
        return Err(Error::InvalidParameter("need 0 < t_cold < t_hot".into()));
    }
    let high = trace_isentrope_lambda(s.s_high, s.nu, s.n, s.t_hot, s.t_cold, s.trace_steps, s.lambda_window, cfg)
        .map_err(infeasible)?;
    let low = trace_isentrope_lambda(s.s_low, s.nu, s.n, s.t_cold, s.t_hot, s.trace_steps, s.lambda_window, cfg)
        .map_err(infeasible)?;
    let first = |p: &IsentropePath| p.samples[0].1;
    let last = |p: &IsentropePath| p.samples[p.samples.len() - 1].1;
    let pts = [
        CyclePoint::evaluate(1, s.t_hot, s.nu, last(&low), s.n)?,
        CyclePoint::evaluate(2, s.t_hot, s.nu, first(&high), s.n)?,
        CyclePoint::evaluate(3, s.t_cold, s.nu, last(&high), s.n)?,
        CyclePoint::evaluate(4, s.t_cold, s.nu, first(&low), s.n)?,
    ];
    let kinds = [
        StepKind::Isothermal,
        StepKind::IsentropeLambda,
        StepKind::Isothermal,
        StepKind::IsentropeLambda,
    ];
    assemble(CycleKind::CarnotSymmetric, PathLabel::Gamma1, pts, kinds, s.n, vec![high, low], cfg)
}

fn assemble(
    kind: CycleKind,
    path_label: PathLabel,
    points: [CyclePoint; 4],
    kinds: [StepKind; 4],
    n: u32,
    isentropes: Vec<IsentropePath>,
    cfg: &NumericsConfig,
) -> Result<CycleReport> {
    let mut steps = Vec::with_capacity(4);
    for (i, step_kind) in kinds.iter().enumerate() {
        let from = &points[i];
        let to = &points[(i + 1) % 4];
        let si = step_integrals(*step_kind, from, to, n, cfg).map_err(infeasible)?;
        steps.push(CycleStep { from: from.label, to: to.label, kind: *step_kind, dq: si.dq, dw: si.dw, du: si.du });
    }
    let loop_q: f64 = steps.iter().map(|s| s.dq).sum();
    let loop_w: f64 = steps.iter().map(|s| s.dw).sum();
    let loop_u: f64 = steps.iter().map(|s| s.du).sum();
    let heat_in: f64 = steps.iter().map(|s| s.dq).filter(|q| *q > 0.0).sum();
    let efficiency = if heat_in > 0.0 { loop_w / heat_in } else { 0.0 };
    Ok(CycleReport {
        kind,
        path_label,
        points: points.to_vec(),
        steps,
        loop_q,
        loop_w,
        loop_u,
        efficiency,
        isentropes,
    })
}

/// Ideal-gas Stirling efficiency
/// `R(T2 − T1) / (R T2 + c_v (T2 − T1)/ln(λ2/λ1))` with `R = 1`.
pub fn stirling_reference_efficiency(t1: f64, t2: f64, lambda1: f64, lambda2: f64, cv_over_r: f64) -> Result<f64> {
    let ln_ratio = volume_log_ratio(lambda1, lambda2)?;
    if t2 < t1 {
        return Err(Error::InvalidParameter(format!("need T2 >= T1, got T1 = {t1}, T2 = {t2}")));
    }
    let span = t2 - t1;
    Ok(span / (t2 + cv_over_r * span / ln_ratio))
}

/// The `c_v/R` for which the Stirling efficiency equals `eta`.
pub fn stirling_matching_cv(t1: f64, t2: f64, lambda1: f64, lambda2: f64, eta: f64) -> Result<f64> {
    let ln_ratio = volume_log_ratio(lambda1, lambda2)?;
    let span = t2 - t1;
    if !(span > 0.0 && eta != 0.0) {
        return Err(Error::InvalidParameter("need T2 > T1 and non-zero efficiency".into()));
    }
    Ok((span / eta - t2) * ln_ratio / span)
}

fn volume_log_ratio(lambda1: f64, lambda2: f64) -> Result<f64> {
    let ratio = lambda2 / lambda1;
    if !(ratio > 0.0) || ratio == 1.0 || !ratio.is_finite() {
        return Err(Error::InvalidRatio(ratio));
    }
    Ok(ratio.ln())
}

/// Entropy of the time-dependent model at `(T, t)`.
pub fn time_entropy(t_temp: f64, time: f64, p: &ModelParams, td: &TimeDependence) -> Result<f64> {
    Ok(thermo::entropy(&EvalDomain::new(split_at_time(time, p, td)?, t_temp)?))
}

/// All times in `t_bracket` at which `S(T, t) = s_level`.
pub fn time_isentrope_roots(
    s_level: f64,
    t_temp: f64,
    p: &ModelParams,
    td: &TimeDependence,
    t_bracket: (f64, f64),
    cfg: &NumericsConfig,
) -> Result<Vec<f64>> {
    let tight = NumericsConfig { root_tol: cfg.root_tol * 1e-3, ..*cfg };
    scan_roots(
        |time| time_entropy(t_temp, time, p, td).map(|s| s - s_level),
        t_bracket.0,
        t_bracket.1,
        cfg.scan_grid,
        &tight,
    )
}

/// The time in `t_bracket` closest to the bracket centre at which the
/// time-dependent entropy at temperature `t_temp` equals `s_level`.
pub fn time_isentrope_solve(
    s_level: f64,
    t_temp: f64,
    p: &ModelParams,
    td: &TimeDependence,
    t_bracket: (f64, f64),
    cfg: &NumericsConfig,
) -> Result<f64> {
    let centre = 0.5 * (t_bracket.0 + t_bracket.1);
    time_isentrope_roots(s_level, t_temp, p, td, t_bracket, cfg)?
        .into_iter()
        .min_by(|a, b| (a - centre).abs().total_cmp(&(b - centre).abs()))
        .ok_or(Error::NoRootInBracket { a: t_bracket.0, b: t_bracket.1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    const T1: f64 = 5.53240;
    const T2: f64 = 5.91528;

    fn cfg() -> NumericsConfig {
        NumericsConfig::default()
    }

    #[test]
    fn entropy_match_near_lambda1() {
        let m = entropy_match_lambda(T1, T2, 12.0, 160, (-24.5, -23.5), &cfg()).unwrap();
        assert_eq!(m.len(), 1);
        assert!((m[0].lambda + 24.0).abs() < 1e-4);
        assert!((m[0].s_common + 2.51338).abs() < 5e-4);
    }

    #[test]
    fn entropy_match_selects_lambda2_by_target() {
        let m = entropy_match_lambda(T1, T2, 12.0, 160, (-80.0, -30.0), &cfg()).unwrap();
        assert!(m.len() >= 2);
        let l2 = select_by_entropy(&m, 3.16977).unwrap();
        assert!((l2.s_common - 3.16977).abs() < 1e-3);
        // ln(λ2/λ1) from the Stirling identity at η = 0.05503, c_v = 5/4
        assert!(((l2.lambda / -24.0).ln() - 0.459).abs() < 1e-3);
    }

    #[test]
    fn entropy_match_fails_in_symmetric_regime() {
        let err = entropy_match_lambda(35.5489, 88.4576, 25.0, 120, (0.0, 625.0 / 120.0), &cfg()).unwrap_err();
        assert!(matches!(err, Error::NoRootInBracket { .. }));
        assert!(entropy_match_lambda(2.0, 2.0, 25.0, 120, (0.0, 1.0), &cfg()).is_err());
    }

    #[test]
    fn degenerate_isentrope_trace() {
        let s = thermo::static_entropy(T2, &ModelParams::new(160, 12.0, -24.0).unwrap()).unwrap();
        let path = trace_isentrope_nu(s, -24.0, 160, T2, T2, 10, 12.0, &cfg()).unwrap();
        assert_eq!(path.samples.len(), 1);
        assert!((path.samples[0].1 - 12.0).abs() < 1e-9);
    }

    #[test]
    fn lambda_isentrope_is_multivalued_in_broken_regime() {
        let err = trace_isentrope_lambda(-2.51338, 12.0, 160, T2, T1, 10, (-80.0, -0.01), &cfg()).unwrap_err();
        assert!(matches!(err, Error::MultiValued { .. }));
    }

    #[test]
    fn lambda_isentrope_symmetric_regime() {
        for s in [6.0, 4.7726] {
            let path =
                trace_isentrope_lambda(s, 25.0, 120, 88.4576, 35.5489, 50, (1e-9, 625.0 / 120.0), &cfg()).unwrap();
            assert_eq!(path.samples.len(), 51);
            for &(t, lam) in &path.samples {
                let sv = thermo::static_entropy(t, &ModelParams::new(120, 25.0, lam).unwrap()).unwrap();
                assert!((sv - s).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling_reference_efficiency(3.0, 3.0, -24.0, -38.0, 1.25).unwrap(), 0.0);
        assert!(matches!(stirling_reference_efficiency(1.0, 2.0, -24.0, 38.0, 1.0), Err(Error::InvalidRatio(_))));
        assert!(matches!(stirling_reference_efficiency(1.0, 2.0, -24.0, -24.0, 1.0), Err(Error::InvalidRatio(_))));
        let eta = stirling_reference_efficiency(1.0, 2.0, 1.0, 3.0, 0.7).unwrap();
        let cv = stirling_matching_cv(1.0, 2.0, 1.0, 3.0, eta).unwrap();
        assert!((cv - 0.7).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cycle_has_no_work() {
        let r = tlambda_cycle(T1, T2, 12.0, 160, -24.0, -24.0, &cfg()).unwrap();
        assert_eq!(r.loop_w, 0.0);
        assert_eq!(r.efficiency, 0.0);
    }

    #[test]
    fn step_kind_preconditions() {
        let a = CyclePoint::evaluate(1, T2, 12.0, -24.0, 160).unwrap();
        let b = CyclePoint::evaluate(2, T1, 12.0, -38.0, 160).unwrap();
        assert!(step_integrals(StepKind::Isothermal, &a, &b, 160, &cfg()).is_err());
        assert!(step_integrals(StepKind::IsoLambda, &a, &b, 160, &cfg()).is_err());
        let s = step_integrals(StepKind::TimeEvolution, &a, &b, 160, &cfg()).unwrap();
        assert_eq!(s.dq, 0.0);
        assert_eq!(s.dw, -s.du);
    }
}
