//! Canonical-ensemble thermodynamics of the decoupled oscillator pair.
//!
//! With `x = ν/T` and `y = gap/T` the partition function is
//!
//! ```text
//! Z = e^x / (2 [cosh x − C]),   C = cosh y (real gap) or cos y (imaginary gap)
//! ```
//!
//! which is real and positive in both PT regimes. All quantities are computed
//! through `ln Z` and subtraction-free rearrangements
//! (`cosh x − cosh y = 2 sinh((x+y)/2) sinh((x−y)/2)`,
//! `cosh x − cos y = 2 sinh²(x/2) + 2 sin²(y/2)`), so nothing overflows for
//! `T → 0` and nothing cancels for `T → ∞`. Units: `k_B = ħ = 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::numerics::{derivative_with_step, NumericsConfig};
use crate::spectrum::{static_split, GapKind, ModelParams, SpectralSplit};

/// A split together with a temperature, validated for evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalDomain {
    pub split: SpectralSplit,
    pub t: f64,
}

impl EvalDomain {
    pub fn new(split: SpectralSplit, t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidParameter(format!("temperature must be positive, got {t}")));
        }
        if !(split.nu.is_finite() && split.nu > 0.0 && split.gap.is_finite() && split.gap >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "split requires nu > 0 and finite gap >= 0 (nu = {}, gap = {})",
                split.nu, split.gap
            )));
        }
        if split.gap_kind == GapKind::RealGap && split.gap >= split.nu {
            return Err(Error::NonNormalizable { gap: split.gap, nu: split.nu });
        }
        Ok(EvalDomain { split, t })
    }

    /// Domain for the time-independent model at temperature `t`.
    pub fn static_at(t: f64, p: &ModelParams) -> Result<Self> {
        p.validate()?;
        Self::new(static_split(p), t)
    }

    fn x(&self) -> f64 {
        self.split.nu / self.t
    }

    fn y(&self) -> f64 {
        self.split.gap / self.t
    }
}

/// `ln sinh(a)` for `a > 0`, without overflow.
pub(crate) fn ln_sinh(a: f64) -> f64 {
    a - LN_2 + (-(-2.0 * a).exp_m1()).ln()
}

/// `ln(2 [cosh x − C])`.
fn ln_denominator(d: &EvalDomain) -> f64 {
    let (x, y) = (d.x(), d.y());
    let ln4 = 2.0 * LN_2;
    match d.split.gap_kind {
        GapKind::RealGap => ln4 + ln_sinh(0.5 * (x + y)) + ln_sinh(0.5 * (x - y)),
        GapKind::ImaginaryGap => {
            let ls = ln_sinh(0.5 * x);
            let s = (0.5 * y).sin();
            ln4 + 2.0 * ls + (s * s * (-2.0 * ls).exp()).ln_1p()
        }
    }
}

pub fn ln_partition_function(d: &EvalDomain) -> f64 {
    d.x() - ln_denominator(d)
}

pub fn partition_function(d: &EvalDomain) -> f64 {
    ln_partition_function(d).exp()
}

pub fn free_energy(d: &EvalDomain) -> f64 {
    -d.t * ln_partition_function(d)
}

/// `U = T² d(ln Z)/dT`, i.e. `½[W₋ coth(W₋/2T) + W₊ coth(W₊/2T)] − ν`.
pub fn internal_energy(d: &EvalDomain) -> f64 {
    let nu = d.split.nu;
    let g = d.split.gap;
    let t = d.t;
    match d.split.gap_kind {
        GapKind::RealGap => {
            let half = |w: f64| 0.5 * w / (w / (2.0 * t)).tanh();
            half(nu + g) + half(nu - g) - nu
        }
        GapKind::ImaginaryGap => {
            // (ν sinh x + g sin y)/(cosh x − cos y), divided through by 2 sinh²(x/2)
            let a = 0.5 * nu / t;
            let b = 0.5 * g / t;
            let inv_sinh2 = (-2.0 * ln_sinh(a)).exp();
            let num = nu / a.tanh() + 0.5 * g * (g / t).sin() * inv_sinh2;
            let den = 1.0 + b.sin().powi(2) * inv_sinh2;
            num / den - nu
        }
    }
}

pub fn entropy(d: &EvalDomain) -> f64 {
    ln_partition_function(d) + internal_energy(d) / d.t
}

/// `z² / sinh² z` for `Re z > 0`.
fn einstein(z: Complex64) -> Complex64 {
    if z.re < 20.0 {
        let s = z.sinh();
        if s.norm() == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        (z / s).powi(2)
    } else {
        let q = (-2.0 * z).exp();
        4.0 * z * z * q / (1.0 - q).powi(2)
    }
}

/// Closed-form `∂U/∂T` at fixed split: `Σ± (W±/2T)² / sinh²(W±/2T)`.
pub fn heat_capacity_exact(d: &EvalDomain) -> f64 {
    let t2 = 2.0 * d.t;
    match d.split.gap_kind {
        GapKind::RealGap => {
            einstein(Complex64::new((d.split.nu + d.split.gap) / t2, 0.0)).re
                + einstein(Complex64::new((d.split.nu - d.split.gap) / t2, 0.0)).re
        }
        GapKind::ImaginaryGap => 2.0 * einstein(d.split.w_plus() / t2).re,
    }
}

/// `∂U/∂T` at fixed split by Richardson central differences with step
/// `fd_step_scale · T`.
pub fn heat_capacity(d: &EvalDomain, cfg: &NumericsConfig) -> Result<f64> {
    let h = cfg.fd_step_scale * d.t;
    if h >= d.t {
        return Err(Error::InvalidParameter(format!("step {h} not below T = {}", d.t)));
    }
    derivative_with_step(
        |t| Ok(internal_energy(&EvalDomain::new(d.split, t)?)),
        d.t,
        h,
    )
}

/// `∂S/∂T = C/T` at fixed split.
pub fn entropy_slope(d: &EvalDomain) -> f64 {
    heat_capacity_exact(d) / d.t
}

fn sinhc(y: f64) -> f64 {
    if y < 1e-4 {
        1.0 + y * y / 6.0
    } else {
        (ln_sinh(y) - y.ln()).exp()
    }
}

fn sinc(y: f64) -> f64 {
    if y < 1e-4 {
        1.0 - y * y / 6.0
    } else {
        y.sin() / y
    }
}

/// `p = −∂F/∂λ|_T` of the static model.
///
/// Written as `(N/T) s(y) / (2[cosh x − C])` with `s = sinh y / y` for `λ > 0`
/// and `sin y / y` for `λ < 0`, which is even in the branch of `√λ` and
/// continuous through `λ = 0`.
pub fn pressure(t: f64, p: &ModelParams) -> Result<f64> {
    let d = EvalDomain::static_at(t, p)?;
    let y = d.y();
    let shape = match d.split.gap_kind {
        GapKind::RealGap => sinhc(y),
        GapKind::ImaginaryGap => sinc(y),
    };
    Ok(p.n as f64 / t * shape * (-ln_denominator(&d)).exp())
}

/// `p·e^{ν/T}`. The factor is positive and independent of λ, so zeros and
/// λ-extrema coincide with those of `p`, but nothing underflows when
/// `ν/T ≫ 1`.
pub fn pressure_rescaled(t: f64, p: &ModelParams) -> Result<f64> {
    let d = EvalDomain::static_at(t, p)?;
    let y = d.y();
    let shape = match d.split.gap_kind {
        GapKind::RealGap => sinhc(y),
        GapKind::ImaginaryGap => sinc(y),
    };
    Ok(p.n as f64 / t * shape * (p.nu / t - ln_denominator(&d)).exp())
}

/// Every ensemble quantity at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoPoint {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "S")]
    pub s: f64,
    /// Only defined for the static model.
    pub p: Option<f64>,
}

pub fn evaluate(d: &EvalDomain) -> ThermoPoint {
    let ln_z = ln_partition_function(d);
    let u = internal_energy(d);
    ThermoPoint {
        t: d.t,
        z: ln_z.exp(),
        f: -d.t * ln_z,
        u,
        s: ln_z + u / d.t,
        p: None,
    }
}

pub fn evaluate_static(t: f64, p: &ModelParams) -> Result<ThermoPoint> {
    let d = EvalDomain::static_at(t, p)?;
    Ok(ThermoPoint { p: Some(pressure(t, p)?), ..evaluate(&d) })
}

/// `S(T, ν, λ)` for the static model.
pub fn static_entropy(t: f64, p: &ModelParams) -> Result<f64> {
    Ok(entropy(&EvalDomain::static_at(t, p)?))
}

/// `U(T, ν, λ)` for the static model.
pub fn static_internal_energy(t: f64, p: &ModelParams) -> Result<f64> {
    Ok(internal_energy(&EvalDomain::static_at(t, p)?))
}

/// `F(T, ν, λ)` for the static model.
pub fn static_free_energy(t: f64, p: &ModelParams) -> Result<f64> {
    Ok(free_energy(&EvalDomain::static_at(t, p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::derivative_central;

    fn model(n: u32, nu: f64, lambda: f64) -> ModelParams {
        ModelParams::new(n, nu, lambda).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn domain_rejects_bad_points() {
        assert!(matches!(
            EvalDomain::static_at(1.0, &model(160, 12.0, 1.0)),
            Err(Error::NonNormalizable { .. })
        ));
        assert!(EvalDomain::new(SpectralSplit::real(2.0, 1.0), 0.0).is_err());
        assert!(EvalDomain::new(SpectralSplit::real(2.0, 1.0), -1.0).is_err());
        assert!(EvalDomain::new(SpectralSplit::imaginary(2.0, 50.0), 1.0).is_ok());
        assert!(pressure(2.0, &model(10, 1.0, 0.2)).is_err());
    }

    #[test]
    fn exceptional_point_closed_forms() {
        for &(t, nu) in &[(0.5, 1.0), (5.0, 12.0), (40.0, 3.0)] {
            let d = EvalDomain::static_at(t, &model(160, nu, 0.0)).unwrap();
            let x: f64 = nu / (2.0 * t);
            let z = (nu / t).exp() / (4.0 * x.sinh().powi(2));
            assert!(rel(partition_function(&d), z) < 1e-13);
            let f = -nu + 2.0 * t * (2.0 * x.sinh()).ln();
            assert!((free_energy(&d) - f).abs() < 1e-12 * (1.0 + f.abs()));
            let u = nu / x.tanh() - nu;
            assert!((internal_energy(&d) - u).abs() < 1e-12 * (1.0 + u.abs()));
            let p = 160.0 / (t * (2.0 * (nu / t).cosh() - 2.0));
            assert!(rel(pressure(t, &model(160, nu, 0.0)).unwrap(), p) < 1e-13);
        }
    }

    #[test]
    fn identities_hold_by_construction() {
        for lam in [-24.0, -3.0, 0.0, 0.4] {
            let d = EvalDomain::static_at(5.0, &model(160, 12.0, lam)).unwrap();
            let tp = evaluate(&d);
            assert!(tp.z > 0.0);
            assert!((tp.f + tp.t * tp.z.ln()).abs() < 1e-12 * (1.0 + tp.f.abs()));
            assert!((tp.s - (tp.z.ln() + tp.u / tp.t)).abs() < 1e-12 * (1.0 + tp.s.abs()));
        }
    }

    #[test]
    fn broken_regime_z_is_positive() {
        for t in [0.01, 0.3, 1.0, 5.0, 77.0] {
            for lam in [-0.1, -24.0, -1e4] {
                let z = partition_function(&EvalDomain::static_at(t, &model(160, 12.0, lam)).unwrap());
                assert!(z > 0.0 && z.is_finite());
            }
        }
    }

    #[test]
    fn caption_entropies() {
        let p = model(160, 12.0, -24.0);
        for t in [5.53240, 5.91528] {
            assert!((static_entropy(t, &p).unwrap() + 2.51338).abs() < 5e-4);
        }
        assert!((static_internal_energy(5.91528, &p).unwrap() + 14.0513).abs() < 5e-4);
    }

    #[test]
    fn internal_energy_matches_log_derivative() {
        let cfg = NumericsConfig::default();
        for lam in [-24.0, -10.0, 0.3] {
            let p = model(160, 12.0, lam);
            for t in [0.7, 3.0, 5.0, 11.0] {
                let u = static_internal_energy(t, &p).unwrap();
                let dlnz = derivative_with_step(
                    |tt| Ok(ln_partition_function(&EvalDomain::static_at(tt, &p)?)),
                    t,
                    t * 1e-5,
                )
                .unwrap();
                assert!((u - t * t * dlnz).abs() <= 1e-6 * (1.0 + u.abs()), "lam {lam} T {t}");
                let c = heat_capacity(&EvalDomain::static_at(t, &p).unwrap(), &cfg).unwrap();
                let ce = heat_capacity_exact(&EvalDomain::static_at(t, &p).unwrap());
                assert!((c - ce).abs() <= 1e-5 * (1.0 + ce.abs()), "lam {lam} T {t}: {c} vs {ce}");
            }
        }
    }

    #[test]
    fn heat_capacity_equipartition() {
        let d = EvalDomain::static_at(1e4, &model(10, 1.0, 0.0)).unwrap();
        assert!((heat_capacity_exact(&d) - 2.0).abs() < 1e-6);
        let c = heat_capacity(&d, &NumericsConfig::default()).unwrap();
        assert!((c - 2.0).abs() < 1e-4);
    }

    #[test]
    fn heat_capacity_goes_negative_in_broken_regime() {
        let p = model(160, 12.0, -24.0);
        let negative = (1..=600)
            .map(|i| i as f64 * 0.01)
            .any(|t| heat_capacity_exact(&EvalDomain::static_at(t, &p).unwrap()) < 0.0);
        assert!(negative);
    }

    #[test]
    fn pressure_matches_free_energy_slope() {
        let cfg = NumericsConfig::default();
        for lam in [-10.0, -24.0, -0.5, 0.3] {
            let p = model(160, 12.0, lam);
            let pr = pressure(5.0, &p).unwrap();
            let slope =
                derivative_central(|l| static_free_energy(5.0, &p.with_lambda(l)), lam, &cfg).unwrap();
            assert!((pr + slope).abs() <= 1e-6 * (1.0 + pr.abs()), "lam {lam}");
        }
    }

    #[test]
    fn pressure_vanishes_at_first_zero() {
        let lam = -std::f64::consts::PI.powi(2) * 25.0 / 160.0;
        let pr = pressure(5.0, &model(160, 12.0, lam)).unwrap();
        assert!(pr.abs() < 1e-12);
    }

    #[test]
    fn low_temperature_limit_is_finite() {
        let p = model(160, 12.0, 0.5);
        let t = 1e-3;
        let tp = evaluate_static(t, &p).unwrap();
        assert!(tp.s.abs() < 1e-12);
        assert!(tp.u.abs() < 1e-12);
        assert!((tp.z - 1.0).abs() < 1e-12);
        let broken = evaluate_static(1e-3, &model(160, 12.0, -24.0)).unwrap();
        assert!(broken.s.is_finite() && broken.u.is_finite());
    }
}
