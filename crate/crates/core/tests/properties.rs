use proptest::prelude::*;

use ptcycle_core::cycles::{step_integrals, CyclePoint, StepKind};
use ptcycle_core::numerics::derivative_central;
use ptcycle_core::phase::{lever_fractions, maxwell_relation, pressure_zero};
use ptcycle_core::spectrum::{mu, mu_period, split_at_time};
use ptcycle_core::thermo::{self, EvalDomain};
use ptcycle_core::{ModelParams, NumericsConfig, TimeDependence};

fn cfg() -> NumericsConfig {
    NumericsConfig::default()
}

// λ spanning both regimes while keeping the real gap below ν.
fn params() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.5f64..50.0, 5.0f64..30.0, -60.0f64..1.0)
        .prop_filter("real gap below nu", |(_, nu, lam)| *lam <= 0.0 || (160.0 * lam).sqrt() < 0.9 * nu)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_energy_identity((t, nu, lam) in params()) {
        let d = EvalDomain::static_at(t, &ModelParams::new(160, nu, lam).unwrap()).unwrap();
        let f = thermo::free_energy(&d);
        let rhs = thermo::internal_energy(&d) - t * thermo::entropy(&d);
        prop_assert!((f - rhs).abs() <= 1e-10 * f.abs().max(1.0));
        prop_assert!(thermo::partition_function(&d) > 0.0);
    }

    #[test]
    fn energy_and_entropy_from_ln_z((t, nu, lam) in params()) {
        let p = ModelParams::new(160, nu, lam).unwrap();
        let d = EvalDomain::static_at(t, &p).unwrap();
        let dlnz = derivative_central(|tt| Ok(thermo::ln_partition_function(&EvalDomain::static_at(tt, &p)?)), t, &cfg()).unwrap();
        let u = thermo::internal_energy(&d);
        prop_assert!((t * t * dlnz - u).abs() <= 1e-6 * u.abs().max(1.0));
        let ds = -derivative_central(|tt| thermo::static_free_energy(tt, &p), t, &cfg()).unwrap();
        let s = thermo::entropy(&d);
        prop_assert!((ds - s).abs() <= 1e-6 * s.abs().max(1.0));
    }

    #[test]
    fn heat_capacity_exact_matches_fd((t, nu, lam) in params()) {
        let d = EvalDomain::static_at(t, &ModelParams::new(160, nu, lam).unwrap()).unwrap();
        let exact = thermo::heat_capacity_exact(&d);
        let fd = thermo::heat_capacity(&d, &cfg()).unwrap();
        prop_assert!((exact - fd).abs() <= 1e-6 * exact.abs().max(1.0));
    }

    #[test]
    fn maxwell_relation_holds((t, nu, lam) in params()) {
        let (ds, dp) = maxwell_relation(t, lam, nu, 160, &cfg()).unwrap();
        prop_assert!((ds - dp).abs() <= 1e-6 * ds.abs().max(1.0));
    }

    #[test]
    fn exceptional_point_is_continuous(t in 0.5f64..50.0, nu in 5.0f64..30.0) {
        let at = |lam: f64| thermo::evaluate_static(t, &ModelParams::new(160, nu, lam).unwrap()).unwrap();
        let (lo, mid, hi) = (at(-1e-12), at(0.0), at(1e-12));
        for (a, b, c) in [(lo.z, mid.z, hi.z), (lo.u, mid.u, hi.u), (lo.s, mid.s, hi.s)] {
            prop_assert!((a - b).abs() <= 1e-8 * b.abs().max(1.0));
            prop_assert!((c - b).abs() <= 1e-8 * b.abs().max(1.0));
        }
    }

    #[test]
    fn pressure_vanishes_at_zeros(t in 0.5f64..10.0, nu in 5.0f64..30.0, k in 1u32..8) {
        let lam = pressure_zero(k, t, 160);
        let p = thermo::pressure(t, &ModelParams::new(160, nu, lam).unwrap()).unwrap();
        let scale = thermo::pressure(t, &ModelParams::new(160, nu, 0.5 * lam).unwrap()).unwrap().abs();
        prop_assert!(p.abs() <= 1e-10 * scale.max(1e-300));
        prop_assert!((pressure_zero(k, 2.0 * t, 160) / lam - 4.0).abs() < 1e-12);
    }

    #[test]
    fn lever_fractions_sum_to_one(a in -100.0f64..-1.0, w in 0.1f64..50.0, f in 0.0f64..=1.0) {
        let b = a + w;
        let m = lever_fractions(a + f * w, a, b).unwrap();
        prop_assert!(m.n1 + m.n2 == 1.0);
        prop_assert!((0.0..=1.0).contains(&m.n1) && (0.0..=1.0).contains(&m.n2));
    }

    #[test]
    fn isothermal_first_law(t in 2.0f64..20.0, l1 in -60.0f64..-1.0, dl in 0.5f64..10.0) {
        let a = CyclePoint::evaluate(1, t, 12.0, l1, 160).unwrap();
        let b = CyclePoint::evaluate(2, t, 12.0, l1 - dl, 160).unwrap();
        let s = step_integrals(StepKind::Isothermal, &a, &b, 160, &cfg()).unwrap();
        prop_assert!((s.dw - (s.dq - s.du)).abs() <= 1e-9 * s.du.abs().max(1.0));
    }

    #[test]
    fn mu_is_periodic(lam in prop_oneof![-40.0f64..-25.0, 0.5f64..10.0], time in 0.0f64..0.01) {
        let p = ModelParams::new(160, 12.0, lam).unwrap();
        let td = TimeDependence::new(4.75);
        let period = mu_period(&p).unwrap();
        let (a, b) = (mu(time, &p, &td).unwrap().value, mu(time + period, &p, &td).unwrap().value);
        prop_assert!((a - b).norm() <= 1e-7 * a.norm().max(1.0));
    }

    #[test]
    fn time_split_has_classified_gap(lam in 0.5f64..10.0, time in 0.0f64..0.01) {
        let p = ModelParams::new(120, 25.0, lam).unwrap();
        match split_at_time(time, &p, &TimeDependence::new(6.0)) {
            Ok(s) => prop_assert!(s.gap >= 0.0),
            Err(e) => prop_assert_eq!(e.code(), "real_gap_unbounded"),
        }
    }
}
