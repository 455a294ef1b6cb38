use ptcycle_core::cycles::{tlambda_cycle, CycleSpec};
use ptcycle_core::numerics::{derivative_central, integrate_adaptive};
use ptcycle_core::thermo::{self, EvalDomain};
use ptcycle_core::{ModelParams, NumericsConfig};

// Z as an explicit double sum over the two oscillator ladders.
fn brute_force_z(t: f64, n: u32, nu: f64, lambda: f64) -> f64 {
    let g = (n as f64 * lambda).sqrt();
    let (wp, wm) = (nu + g, nu - g);
    let mut z = 0.0;
    for a in 0..4000 {
        for b in 0..4000 {
            let e = a as f64 * wp + b as f64 * wm;
            let term = (-e / t).exp();
            if term < 1e-20 {
                break;
            }
            z += term;
        }
    }
    z
}

#[test]
fn partition_function_matches_double_sum() {
    for (t, nu, lam) in [(1.0, 12.0, 0.3), (7.0, 25.0, 4.5), (20.0, 25.0, 1.0), (3.0, 10.0, 0.0)] {
        let p = ModelParams::new(120, nu, lam).unwrap();
        let z = thermo::partition_function(&EvalDomain::static_at(t, &p).unwrap());
        let brute = brute_force_z(t, 120, nu, lam);
        assert!((z - brute).abs() <= 1e-8 * brute, "T={t}: {z} vs {brute}");
    }
}

// In the broken regime the two levels form a complex-conjugate pair and the
// same double sum, summed in complex arithmetic, is still real.
#[test]
fn partition_function_broken_regime_complex_sum() {
    let (t, n, nu, lam) = (5.5324, 160u32, 12.0, -24.0);
    let g = (n as f64 * -lam).sqrt();
    let q = |sign: f64| num_complex::Complex64::new(-nu / t, -sign * g / t).exp();
    let z_pair = 1.0 / ((1.0 - q(1.0)) * (1.0 - q(-1.0)));
    let z = thermo::partition_function(&EvalDomain::static_at(t, &ModelParams::new(n, nu, lam).unwrap()).unwrap());
    assert!(z_pair.im.abs() < 1e-12 * z_pair.re.abs());
    assert!((z - z_pair.re).abs() < 1e-10 * z);
}

#[test]
fn caption_entropies() {
    let p = ModelParams::new(160, 12.0, -24.0).unwrap();
    for t in [5.53240, 5.91528] {
        assert!((thermo::static_entropy(t, &p).unwrap() + 2.51338).abs() < 5e-4);
    }
}

#[test]
fn iso_lambda_heat_matches_energy_change() {
    let p = ModelParams::new(160, 12.0, -38.0).unwrap();
    let cfg = NumericsConfig::default();
    let q = integrate_adaptive(
        |t| {
            let d = EvalDomain::static_at(t, &p)?;
            thermo::heat_capacity(&d, &cfg)
        },
        5.91528,
        5.53240,
        &cfg,
    )
    .unwrap();
    let du = thermo::static_internal_energy(5.53240, &p).unwrap() - thermo::static_internal_energy(5.91528, &p).unwrap();
    assert!((q - du).abs() < 1e-6);
}

#[test]
fn pressure_from_free_energy() {
    let cfg = NumericsConfig::default();
    for lam in [-38.0, -24.0, -3.0, 0.2] {
        let p = ModelParams::new(160, 12.0, lam).unwrap();
        let fd = -derivative_central(|l| thermo::static_free_energy(5.0, &p.with_lambda(l)), lam, &cfg).unwrap();
        let exact = thermo::pressure(5.0, &p).unwrap();
        assert!((fd - exact).abs() <= 1e-7 * exact.abs().max(1.0));
    }
}

#[test]
fn table_one_rows() {
    let r = tlambda_cycle(5.53240, 5.91528, 12.0, 160, -24.0, -38.000061232, &NumericsConfig::default()).unwrap();
    let expected = [
        [2.1172, 33.6174, 31.5002],
        [0.0, 0.1054, 0.1054],
        [0.2065, -31.4415, -31.6480],
        [0.0, 0.0424, 0.0424],
    ];
    for (s, row) in r.steps.iter().zip(expected) {
        assert!((s.dw - row[0]).abs() < 1e-3);
        assert!((s.dq - row[1]).abs() < 1e-3);
        assert!((s.du - row[2]).abs() < 1e-3);
    }
    assert!((r.loop_w - 2.3238).abs() < 1e-3);
    assert!((r.efficiency - 0.0688).abs() < 5e-4);
}

#[test]
fn cycle_spec_round_trips_through_json() {
    let json = r#"{"TLambda":{"t_cold":5.5324,"t_hot":5.91528,"nu":12.0,"N":160,
        "lambda1":{"window":[-24.5,-23.5]},"lambda2":{"window":[-80.0,-30.0],"entropy":3.16977}}}"#;
    let spec: CycleSpec = serde_json::from_str(json).unwrap();
    let back: CycleSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
    assert_eq!(spec, back);
}
