//! Maxwell construction and spinodal decomposition in the broken regime.
//!
//! On an isotherm the pressure `p(λ)` vanishes at `λ₀⁽ⁿ⁾ = −n²π²T²/N`, so the
//! λ-axis is the Maxwell line. Even zeros are minima of `F(λ)` and pair up into
//! binodal intervals `[λ₀⁽²ⁿ⁺²⁾, λ₀⁽²ⁿ⁾]`; the spinodal is the sub-interval
//! between the inflection points of `F`, where `∂p/∂λ > 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{derivative_central, find_root_bracketed, integrate_adaptive, scan_roots, NumericsConfig};
use crate::spectrum::ModelParams;
use crate::thermo::{pressure, pressure_rescaled, static_entropy, static_free_energy};

/// `λ₀⁽ⁿ⁾ = −n²π²T²/N`.
pub fn pressure_zero(k: u32, t: f64, n: u32) -> f64 {
    let k = k as f64;
    -k * k * PI * PI * t * t / n as f64
}

/// Closed-form zeros for `k = 1..=k_max`, each confirmed as a sign-changing
/// root of the pressure.
pub fn pressure_zeros(t: f64, nu: f64, n: u32, k_max: u32, cfg: &NumericsConfig) -> Result<Vec<f64>> {
    if !(t > 0.0) || k_max == 0 {
        return Err(Error::InvalidParameter(format!("need T > 0 and k_max >= 1, got T = {t}, k_max = {k_max}")));
    }
    (1..=k_max)
        .map(|k| {
            let zero = pressure_zero(k, t, n);
            let root = refine_pressure_zero(k, t, nu, n, cfg)?;
            if (root - zero).abs() > 1e-10 * zero.abs() {
                return Err(Error::EvaluationFailed { x: zero });
            }
            Ok(zero)
        })
        .collect()
}

/// Brent refinement of the k-th pressure zero between its neighbours'
/// midpoints. Works on `p·e^{ν/T}`, which has the same zeros.
pub fn refine_pressure_zero(k: u32, t: f64, nu: f64, n: u32, cfg: &NumericsConfig) -> Result<f64> {
    let base = ModelParams::new(n, nu, 0.0)?;
    let kf = k as f64;
    // y = √(N|λ|)/T is linear in k, so bracket in y and map back
    let to_lambda = |y: f64| -y * y * t * t / n as f64;
    let a = to_lambda((kf - 0.5) * PI);
    let b = to_lambda((kf + 0.5) * PI);
    let tight = NumericsConfig { root_tol: 1e-14, ..*cfg };
    find_root_bracketed(|lam| pressure_rescaled(t, &base.with_lambda(lam)), b, a, &tight)
}

/// `ln tanh(x/2)` without cancellation for large `x`.
fn ln_tanh_half(x: f64) -> f64 {
    let e = (-x).exp();
    (-e).ln_1p() - e.ln_1p()
}

/// `I⁽ⁿ⁾ = ∫ p dλ` from `λ₀⁽ⁿ⁻¹⁾` to `λ₀⁽ⁿ⁾` (with `λ₀⁽⁰⁾ = 0`), equal to
/// `T ln{[cos((n−1)π) − cosh(ν/T)] / [cos(nπ) − cosh(ν/T)]}`.
pub fn isotherm_area(k: u32, t: f64, nu: f64) -> Result<f64> {
    if k == 0 || !(t > 0.0) {
        return Err(Error::InvalidParameter("isotherm area needs k >= 1 and T > 0".into()));
    }
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * 2.0 * t * ln_tanh_half(nu / t))
}

/// `I⁽ⁿ⁾` by adaptive quadrature of the pressure.
pub fn isotherm_area_quadrature(k: u32, t: f64, nu: f64, n: u32, cfg: &NumericsConfig) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("isotherm area needs k >= 1".into()));
    }
    let base = ModelParams::new(n, nu, 0.0)?;
    let quad = NumericsConfig { quad_tol: 1e-3 * cfg.quad_tol, ..*cfg };
    integrate_adaptive(
        |lam| pressure(t, &base.with_lambda(lam)),
        pressure_zero(k - 1, t, n),
        pressure_zero(k, t, n),
        &quad,
    )
}

/// Phase fractions of a mixture at `λ` between coexisting states `λ₁`, `λ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureState {
    pub lambda: f64,
    pub n1: f64,
    pub n2: f64,
}

pub fn lever_fractions(lambda: f64, lambda1: f64, lambda2: f64) -> Result<MixtureState> {
    let (lo, hi) = (lambda1.min(lambda2), lambda1.max(lambda2));
    if lambda1 == lambda2 || !(lambda >= lo && lambda <= hi) {
        return Err(Error::OutOfBinodal { lambda, lo, hi });
    }
    let n1 = (lambda2 - lambda) / (lambda2 - lambda1);
    Ok(MixtureState { lambda, n1, n2: 1.0 - n1 })
}

fn check_branch(branch: u32) -> Result<()> {
    if branch == 0 {
        return Err(Error::InvalidParameter("binodal branches are numbered from 1".into()));
    }
    Ok(())
}

/// The `branch`-th binodal `[λ₀⁽²ⁿ⁺²⁾, λ₀⁽²ⁿ⁾]` (lower end first).
pub fn binodal(t: f64, n: u32, branch: u32) -> Result<(f64, f64)> {
    check_branch(branch)?;
    Ok((pressure_zero(2 * branch + 2, t, n), pressure_zero(2 * branch, t, n)))
}

/// `F_het(λ) = n₁F(λ₁) + n₂F(λ₂)`, which collapses to `F(λ₁)` because the
/// two endpoint free energies coincide.
pub fn heterogeneous_free_energy(lambda: f64, t: f64, nu: f64, n: u32, branch: u32) -> Result<f64> {
    let (lo, hi) = binodal(t, n, branch)?;
    let mix = lever_fractions(lambda, hi, lo)?;
    let base = ModelParams::new(n, nu, 0.0)?;
    let f1 = static_free_energy(t, &base.with_lambda(hi))?;
    let f2 = static_free_energy(t, &base.with_lambda(lo))?;
    if (f1 - f2).abs() > 1e-9 * (1.0 + f1.abs()) {
        return Err(Error::EvaluationFailed { x: lambda });
    }
    Ok(mix.n1 * f1 + mix.n2 * f2)
}

/// `∂p/∂λ` at fixed T by central differences.
pub fn pressure_slope(t: f64, nu: f64, n: u32, lambda: f64, cfg: &NumericsConfig) -> Result<f64> {
    let base = ModelParams::new(n, nu, 0.0)?;
    derivative_central(|lam| pressure(t, &base.with_lambda(lam)), lambda, cfg)
}

/// `∂p/∂λ · e^{ν/T}`: the sign of the slope, usable at any temperature.
pub fn pressure_slope_rescaled(t: f64, nu: f64, n: u32, lambda: f64, cfg: &NumericsConfig) -> Result<f64> {
    let base = ModelParams::new(n, nu, 0.0)?;
    derivative_central(|lam| pressure_rescaled(t, &base.with_lambda(lam)), lambda, cfg)
}

/// Inflection points of `F` inside the `branch`-th binodal.
///
/// The search runs on `p·e^{ν/T}` in `u = λ/|λ₀⁽¹⁾|`, which keeps the
/// binodal at `[−(2n+2)², −(2n)²]` for every T.
pub fn spinodal_interval(t: f64, nu: f64, n: u32, branch: u32, cfg: &NumericsConfig) -> Result<(f64, f64)> {
    let (lo, hi) = binodal(t, n, branch)?;
    let scale = -pressure_zero(1, t, n);
    let base = ModelParams::new(n, nu, 0.0)?;
    let slope_u = |u: f64| -> Result<f64> {
        derivative_central(|v| pressure_rescaled(t, &base.with_lambda(v * scale)), u, cfg)
    };
    let (ulo, uhi) = (lo / scale, hi / scale);
    let margin = 1e-6 * (uhi - ulo);
    let roots = scan_roots(slope_u, ulo + margin, uhi - margin, cfg.scan_grid, cfg)?;
    if roots.len() != 2 {
        return Err(Error::RootNotBracketed(format!(
            "expected two inflection points in [{lo}, {hi}] at T = {t}, found {}",
            roots.len()
        )));
    }
    Ok((roots[0] * scale, roots[1] * scale))
}

/// Binodal and spinodal widths at one temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthRow {
    #[serde(rename = "T")]
    pub t: f64,
    pub binodal_width: f64,
    pub spinodal_width: f64,
}

/// Widths of the `branch`-th binodal and spinodal for decreasing temperatures.
pub fn critical_temperature_scan(
    nu: f64,
    n: u32,
    temps: &[f64],
    branch: u32,
    cfg: &NumericsConfig,
) -> Result<Vec<WidthRow>> {
    if temps.iter().any(|t| !(*t > 0.0)) || temps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("temperatures must be positive and decreasing".into()));
    }
    temps
        .iter()
        .map(|&t| {
            let (a, b) = binodal(t, n, branch)?;
            let (c, d) = spinodal_interval(t, nu, n, branch, cfg)?;
            Ok(WidthRow { t, binodal_width: b - a, spinodal_width: d - c })
        })
        .collect()
}

/// Temperature at which binodal and spinodal would merge, from a least-squares
/// fit of `width_b − width_s = a·T² + c`. Zero when the fit has no positive
/// root or the intercept is below `10⁻⁶` of the largest width difference.
pub fn merge_temperature(rows: &[WidthRow]) -> f64 {
    let m = rows.len() as f64;
    if rows.len() < 2 {
        return 0.0;
    }
    let (mut sx, mut sy, mut sxx, mut sxy, mut ymax) = (0.0, 0.0, 0.0, 0.0, 0.0f64);
    for r in rows {
        let x = r.t * r.t;
        let y = r.binodal_width - r.spinodal_width;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ymax = ymax.max(y.abs());
    }
    let a = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let c = (sy - a * sx) / m;
    let t2 = -c / a;
    if c.abs() > 1e-6 * ymax && t2 > 0.0 && a.is_finite() {
        t2.sqrt()
    } else {
        0.0
    }
}

/// Entropy of the heterogeneous state. The pressure on the Maxwell line is
/// identically zero, so `∂S/∂λ = ∂p/∂T = 0`; the constant is taken as 0.
pub fn heterogeneous_entropy(t: f64) -> f64 {
    let _ = t;
    0.0
}

/// `(∂S/∂λ|_T, ∂p/∂T|_λ)` by central differences.
pub fn maxwell_relation(t: f64, lambda: f64, nu: f64, n: u32, cfg: &NumericsConfig) -> Result<(f64, f64)> {
    let p = ModelParams::new(n, nu, lambda)?;
    let ds = derivative_central(|lam| static_entropy(t, &p.with_lambda(lam)), lambda, cfg)?;
    let dp = derivative_central(|tt| pressure(tt, &p), t, cfg)?;
    Ok((ds, dp))
}

/// Phase structure of one isotherm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRegions {
    #[serde(rename = "T")]
    pub t: f64,
    pub branch: u32,
    pub zeros: Vec<f64>,
    pub binodal: (f64, f64),
    pub spinodal: (f64, f64),
    pub maxwell_pressure: f64,
    pub f_het: f64,
}

pub fn phase_regions(t: f64, nu: f64, n: u32, branch: u32, cfg: &NumericsConfig) -> Result<PhaseRegions> {
    check_branch(branch)?;
    let zeros = pressure_zeros(t, nu, n, 2 * branch + 2, cfg)?;
    let binodal = binodal(t, n, branch)?;
    let spinodal = spinodal_interval(t, nu, n, branch, cfg)?;
    let f_het = heterogeneous_free_energy(binodal.1, t, nu, n, branch)?;
    Ok(PhaseRegions { t, branch, zeros, binodal, spinodal, maxwell_pressure: 0.0, f_het })
}
