//! Model parameters and the mode-frequency pair `W± = ν ± gap`.
//!
//! The Hermitian counterpart of the boson-bath Hamiltonian decouples into two
//! oscillators with frequencies `W±`; every thermodynamic quantity in this
//! crate is a function of `ν` and the gap alone. In the PT-symmetric regime
//! (`λ > 0`) the gap is real, in the spontaneously broken regime (`λ < 0`) it
//! is imaginary and `W±` form a complex-conjugate pair.
//!
//! With a time-dependent Dyson map the static gap `√(Nλ)` is replaced by the
//! coefficient function `μ(t)`; here it is evaluated in complex arithmetic and
//! then classified as real or imaginary, so both regimes share one code path.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{find_root_bracketed, NumericsConfig};

/// Relative tolerance used to decide whether a complex value is real or
/// purely imaginary.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// Raw couplings of the non-Hermitian Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub g: f64,
    pub k: f64,
}

/// `λ = g² − k²`, the combination that plays the role of a volume.
pub fn lambda_from_couplings(c: CouplingParams) -> f64 {
    c.g * c.g - c.k * c.k
}

/// Dyson-map angle `γ` with `tanh(2γ) = −k/g`. Only real for `|k| < |g|`.
pub fn dyson_gamma(c: CouplingParams) -> Result<f64> {
    if c.k.abs() >= c.g.abs() {
        return Err(Error::BrokenRegimeGamma { g: c.g, k: c.k });
    }
    Ok(0.5 * (-c.k / c.g).atanh())
}

/// Bath size, oscillator frequency and coupling `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    #[serde(rename = "N")]
    pub n: u32,
    pub nu: f64,
    pub lambda: f64,
}

impl ModelParams {
    pub fn new(n: u32, nu: f64, lambda: f64) -> Result<Self> {
        let p = ModelParams { n, nu, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn from_couplings(n: u32, nu: f64, c: CouplingParams) -> Result<Self> {
        Self::new(n, nu, lambda_from_couplings(c))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        if !(self.nu.is_finite() && self.nu > 0.0) {
            return Err(Error::InvalidParameter(format!("nu must be positive, got {}", self.nu)));
        }
        if !self.lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda must be finite, got {}", self.lambda)));
        }
        Ok(())
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        ModelParams { lambda, ..self }
    }

    pub fn with_nu(self, nu: f64) -> Self {
        ModelParams { nu, ..self }
    }

    pub fn sqrt_n(&self) -> f64 {
        (self.n as f64).sqrt()
    }
}

/// Integration constants of the time-dependent Dyson map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeDependence {
    pub c1: f64,
    #[serde(default)]
    pub c2: f64,
}

impl TimeDependence {
    pub fn new(c1: f64) -> Self {
        TimeDependence { c1, c2: 0.0 }
    }

    fn check(&self) -> Result<()> {
        if self.c1 == 0.0 || !self.c1.is_finite() || !self.c2.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "c1 must be finite and non-zero, c2 finite (c1 = {}, c2 = {})",
                self.c1, self.c2
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapKind {
    /// `W± = ν ± gap`, real spectrum.
    RealGap,
    /// `W± = ν ± i·gap`, complex-conjugate pair.
    ImaginaryGap,
}

/// The mode-frequency pair encoded as `ν` and a non-negative gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSplit {
    pub nu: f64,
    pub gap_kind: GapKind,
    pub gap: f64,
}

impl SpectralSplit {
    pub fn real(nu: f64, gap: f64) -> Self {
        SpectralSplit { nu, gap_kind: GapKind::RealGap, gap: gap.abs() }
    }

    pub fn imaginary(nu: f64, gap: f64) -> Self {
        SpectralSplit { nu, gap_kind: GapKind::ImaginaryGap, gap: gap.abs() }
    }

    fn offset(&self) -> Complex64 {
        match self.gap_kind {
            GapKind::RealGap => Complex64::new(self.gap, 0.0),
            GapKind::ImaginaryGap => Complex64::new(0.0, self.gap),
        }
    }

    pub fn w_plus(&self) -> Complex64 {
        self.nu + self.offset()
    }

    pub fn w_minus(&self) -> Complex64 {
        self.nu - self.offset()
    }

    /// Eigenvalue `n₊W₊ + n₋W₋` of the decoupled pair.
    pub fn level(&self, n_plus: u64, n_minus: u64) -> Complex64 {
        self.w_plus() * n_plus as f64 + self.w_minus() * n_minus as f64
    }
}

/// Static split: gap `√(N|λ|)`, real for `λ ≥ 0`, imaginary for `λ < 0`.
pub fn static_split(p: &ModelParams) -> SpectralSplit {
    let gap = (p.n as f64 * p.lambda.abs()).sqrt();
    if p.lambda >= 0.0 {
        SpectralSplit::real(p.nu, gap)
    } else {
        SpectralSplit::imaginary(p.nu, gap)
    }
}

/// Classifies `z` as real or purely imaginary, returning the kind and `|z|`
/// along the surviving axis.
pub fn classify(z: Complex64, tol: f64) -> Result<(GapKind, f64)> {
    let scale = z.norm();
    if z.im.abs() <= tol * scale {
        Ok((GapKind::RealGap, z.re.abs()))
    } else if z.re.abs() <= tol * scale {
        Ok((GapKind::ImaginaryGap, z.im.abs()))
    } else {
        Err(Error::NonClassifiableMu { re: z.re, im: z.im })
    }
}

/// `μ(t)` with its classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuValue {
    pub value: Complex64,
    pub gap_kind: GapKind,
    pub gap: f64,
}

/// Angular frequency of the time-dependent coefficient functions, `2λ√N`.
///
/// `sin²` and `tan` of `ω(t + c2)` repeat with period `π/|ω|`.
pub fn time_frequency(p: &ModelParams) -> f64 {
    2.0 * p.lambda * p.sqrt_n()
}

/// Period of `μ(t)` and `μ_I(t)` modulo branch jumps; `None` at `λ = 0`.
pub fn mu_period(p: &ModelParams) -> Option<f64> {
    let w = time_frequency(p);
    (w != 0.0).then(|| PI / w.abs())
}

/// Time-dependent gap `μ(t) = λ√N √(c1² + λ) / (2λ + 2c1² sin²[ω(t + c2)])`.
pub fn mu(t: f64, p: &ModelParams, td: &TimeDependence) -> Result<MuValue> {
    td.check()?;
    let c1sq = td.c1 * td.c1;
    let value = if p.lambda == 0.0 {
        // removable singularity: both one-sided limits give √N|c1|/2
        Complex64::new(0.5 * p.sqrt_n() * td.c1.abs(), 0.0)
    } else {
        let root = Complex64::new(c1sq + p.lambda, 0.0).sqrt();
        let numerator = p.lambda * p.sqrt_n() * root;
        let phase = Complex64::new(time_frequency(p) * (t + td.c2), 0.0);
        let s = phase.sin();
        let denominator = 2.0 * p.lambda + 2.0 * c1sq * s * s;
        if denominator.norm() == 0.0 {
            return Err(Error::RealGapUnbounded { gap: f64::INFINITY, nu: p.nu });
        }
        numerator / denominator
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::EvaluationFailed { x: t });
    }
    let (gap_kind, gap) = classify(value, CLASSIFY_TOL)?;
    Ok(MuValue { value, gap_kind, gap })
}

/// Dyson-map angle `μ_I(t) = ½ arctan{√(c1² + λ)/√λ · tan[ω(t + c2)]}`,
/// continued across the poles of `tan` so that it is continuous in `t`.
pub fn mu_imag(t: f64, p: &ModelParams, td: &TimeDependence) -> Result<f64> {
    td.check()?;
    if p.lambda == 0.0 {
        return Ok(0.0);
    }
    let ratio = Complex64::new(td.c1 * td.c1 + p.lambda, 0.0).sqrt()
        / Complex64::new(p.lambda, 0.0).sqrt();
    let (kind, _) = classify(ratio, CLASSIFY_TOL)?;
    if kind != GapKind::RealGap {
        // arctan of an imaginary argument: the angle itself is not real
        let z = (ratio * Complex64::new(time_frequency(p) * (t + td.c2), 0.0).tan()).atan() * 0.5;
        return Err(Error::NonClassifiableMu { re: z.re, im: z.im });
    }
    let k = ratio.re;
    let theta = time_frequency(p) * (t + td.c2);
    // atan2 keeps the quadrant of θ, so arctan(k tan θ) is continued by
    // whole turns towards ±θ without ever evaluating tan at its poles
    let phi = (k * theta.sin()).atan2(theta.cos());
    let target = k.signum() * theta;
    let turns = ((target - phi) / (2.0 * PI)).round();
    Ok(0.5 * (phi + 2.0 * PI * turns))
}

/// Instantaneous split `W±(t) = ν ± μ(t)`.
pub fn split_at_time(t: f64, p: &ModelParams, td: &TimeDependence) -> Result<SpectralSplit> {
    let m = mu(t, p, td)?;
    match m.gap_kind {
        GapKind::RealGap if m.gap >= p.nu => Err(Error::RealGapUnbounded { gap: m.gap, nu: p.nu }),
        GapKind::RealGap => Ok(SpectralSplit::real(p.nu, m.gap)),
        GapKind::ImaginaryGap => Ok(SpectralSplit::imaginary(p.nu, m.gap)),
    }
}

/// Argument of the arccos in the closed-form coincidence times,
/// `1 + (2λ − √λ √(c1² + λ))/c1²`, as a real number when it is one.
pub fn coincidence_argument(p: &ModelParams, td: &TimeDependence) -> Result<f64> {
    td.check()?;
    let c1sq = td.c1 * td.c1;
    let lam = Complex64::new(p.lambda, 0.0);
    let arg = 1.0 + (2.0 * lam - lam.sqrt() * (c1sq + lam).sqrt()) / c1sq;
    if arg.im.abs() > 1e-12 * arg.norm().max(1.0) {
        return Err(Error::OutsideRealityWindow(format!(
            "arccos argument {} + {}i is complex at lambda = {}",
            arg.re, arg.im, p.lambda
        )));
    }
    Ok(arg.re)
}

/// Closed-form coincidence time for branch `n`, shifted by `−c2`.
pub fn coincidence_time_closed_form(p: &ModelParams, td: &TimeDependence, n: i64) -> Result<f64> {
    if p.lambda == 0.0 {
        return Err(Error::OutsideRealityWindow(
            "lambda = 0: the time-dependent gap never reaches the static one".into(),
        ));
    }
    let arg = coincidence_argument(p, td)?;
    let slack = 4.0 * f64::EPSILON;
    if !(-1.0 - slack..=1.0 + slack).contains(&arg) {
        return Err(Error::OutsideRealityWindow(format!(
            "arccos argument {arg} outside [-1, 1] at lambda = {}",
            p.lambda
        )));
    }
    let w = time_frequency(p);
    Ok(arg.clamp(-1.0, 1.0).acos() / (2.0 * w) + PI * n as f64 / w - td.c2)
}

/// Gap mismatch `|μ(t)| − √(N|λ|)` whose zeros are the coincidence times.
pub fn coincidence_residual(t: f64, p: &ModelParams, td: &TimeDependence) -> Result<f64> {
    let m = mu(t, p, td)?;
    Ok(m.gap - (p.n as f64 * p.lambda.abs()).sqrt())
}

/// Time at which the time-dependent gap coincides with the static one.
///
/// The closed form seeds a bracketed refinement of [`coincidence_residual`];
/// the refined root is returned. Tangential coincidences (at the edge of the
/// reality window) cannot be bracketed and fall back to the closed form after
/// checking its residual.
pub fn coincidence_time(
    p: &ModelParams,
    td: &TimeDependence,
    n: i64,
    cfg: &NumericsConfig,
) -> Result<f64> {
    let guess = coincidence_time_closed_form(p, td, n)?;
    let w = time_frequency(p).abs();
    let phi = coincidence_argument(p, td)?.clamp(-1.0, 1.0).acos();
    // neighbouring roots sit 2φ/ω below and (2π − 2φ)/(2ω) above the guess
    let half_width = 0.5 * phi.min(PI - phi) / w;
    let residual = |t: f64| coincidence_residual(t, p, td);
    let scale = (p.n as f64 * p.lambda.abs()).sqrt().max(1.0);
    if half_width > 1e-9 * guess.abs().max(1.0 / w) {
        let (lo, hi) = (guess - half_width, guess + half_width);
        let (rlo, rhi) = (residual(lo)?, residual(hi)?);
        if rlo.signum() != rhi.signum() {
            let tight = NumericsConfig { root_tol: cfg.root_tol.min(1e-12) * (1.0 / w).min(1.0), ..*cfg };
            return find_root_bracketed(residual, lo, hi, &tight);
        }
    }
    let r = residual(guess)?;
    if r.abs() <= 1e-8 * scale {
        Ok(guess)
    } else {
        Err(Error::OutsideRealityWindow(format!(
            "closed-form time {guess} leaves a gap mismatch of {r}"
        )))
    }
}
