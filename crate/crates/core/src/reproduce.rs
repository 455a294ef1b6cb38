//! Reference values and the checks that compare the library against them.
//!
//! Every criterion returns a [`CriterionReport`] whose checks carry the
//! computed value, the expected value and the tolerance, so a front end can
//! print them without knowing what each criterion does. Numerical failures
//! inside a criterion become failing checks rather than errors.

use serde::{Deserialize, Serialize};

use crate::cycles::{
    build_cycle, entropy_match_lambda, select_by_entropy, stirling_matching_cv, stirling_reference_efficiency,
    time_entropy, time_isentrope_solve, trace_isentrope_lambda, BrokenCycleSpec, CycleKind, CyclePoint, CycleReport,
    CycleSpec, LambdaCorner,
};
use crate::error::{Error, Result};
use crate::numerics::{derivative_central, find_root_bracketed, NumericsConfig};
use crate::phase;
use crate::spectrum::{ModelParams, TimeDependence};
use crate::thermo::{self, EvalDomain};

/// Published values the library is checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PaperConstants {
    pub n_broken: u32,
    pub nu_broken: f64,
    pub t_cold: f64,
    pub t_hot: f64,
    pub lambda1: f64,
    pub lambda2_window: (f64, f64),
    pub s1: f64,
    pub s2: f64,
    pub u_corners: [f64; 4],
    pub cv_ideal: f64,
    pub eta_stirling: f64,
    pub cv_matching: f64,
    /// Rows `1→2 … 4→1` as `(ΔW, ΔQ, ΔU)`.
    pub table_tlambda: [[f64; 3]; 4],
    pub w_tlambda: f64,
    pub eta_tlambda: f64,
    pub table_carnot: [[f64; 3]; 4],
    pub w_carnot: f64,
    pub eta_carnot: f64,
    pub c1_broken: f64,
    /// `(T, t)` points on the `S₁` contour in the broken regime.
    pub broken_times: [(f64, f64); 4],
    pub broken_time_gap: f64,
    pub n_sym: u32,
    pub nu_sym: f64,
    pub lambda_sym: f64,
    pub c1_sym: f64,
    pub t_sym_cold: f64,
    pub t_sym_hot: f64,
    pub s_sym_low: f64,
    pub s_sym_high: f64,
    pub sym_times: [f64; 2],
    pub t_phase: f64,
}

impl Default for PaperConstants {
    fn default() -> Self {
        PaperConstants {
            n_broken: 160,
            nu_broken: 12.0,
            t_cold: 5.53240,
            t_hot: 5.91528,
            lambda1: -24.0,
            lambda2_window: (-80.0, -30.0),
            s1: -2.51338,
            s2: 3.16977,
            u_corners: [-14.0513, 17.4488, 17.5543, -14.0937],
            cv_ideal: 1.25,
            eta_stirling: 0.05503,
            cv_matching: -0.4516,
            table_tlambda: [
                [2.1172, 33.6174, 31.5002],
                [0.0, 0.1054, 0.1054],
                [0.2065, -31.4415, -31.6480],
                [0.0, 0.0424, 0.0424],
            ],
            w_tlambda: 2.3238,
            eta_tlambda: 0.0688,
            table_carnot: [
                [2.1172, 33.6174, 31.5002],
                [-0.1054, 0.0, 0.1054],
                [0.2065, -31.4415, -31.6480],
                [-0.0424, 0.0, 0.0424],
            ],
            w_carnot: 2.1760,
            eta_carnot: 0.06473,
            c1_broken: 4.75,
            broken_times: [(5.53240, 0.0023241), (5.91528, 0.0023532), (5.91528, 0.0028210), (5.53240, 0.0028501)],
            broken_time_gap: 2.91e-5,
            n_sym: 120,
            nu_sym: 25.0,
            lambda_sym: 4.5,
            c1_sym: 6.0,
            t_sym_cold: 35.5489,
            t_sym_hot: 88.4576,
            s_sym_low: 4.7726,
            s_sym_high: 6.0,
            sym_times: [0.0025630, 0.0053601],
            t_phase: 5.0,
        }
    }
}

/// One comparison inside a criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub computed: f64,
    pub expected: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    /// `|computed − expected| ≤ tol`.
    pub fn abs(label: impl Into<String>, computed: f64, expected: f64, tol: f64) -> Self {
        let pass = (computed - expected).abs() <= tol;
        Check { label: label.into(), computed, expected, tol, pass }
    }

    /// `|computed − expected| ≤ tol·max(|expected|, 1)`.
    pub fn rel(label: impl Into<String>, computed: f64, expected: f64, tol: f64) -> Self {
        let pass = (computed - expected).abs() <= tol * expected.abs().max(1.0);
        Check { label: label.into(), computed, expected, tol, pass }
    }

    /// `|computed − expected| ≤ tol·|expected|`, no floor.
    pub fn rel_strict(label: impl Into<String>, computed: f64, expected: f64, tol: f64) -> Self {
        let pass = (computed - expected).abs() <= tol * expected.abs();
        Check { label: label.into(), computed, expected, tol, pass }
    }

    pub fn truth(label: impl Into<String>, ok: bool) -> Self {
        Check { label: label.into(), computed: ok as u8 as f64, expected: 1.0, tol: 0.0, pass: ok }
    }

    fn failed(label: impl Into<String>, err: &Error) -> Self {
        Check { label: format!("{}: {}", label.into(), err), computed: f64::NAN, expected: f64::NAN, tol: 0.0, pass: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    /// `PASS`/`FAIL` line followed by the failing checks.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "criterion {:>2} {}: {} ({}/{} checks)",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len()
        );
        for c in self.checks.iter().filter(|c| !c.pass) {
            s.push_str(&format!(
                "\n    {}: computed {:.9} expected {:.9} tol {:e}",
                c.label, c.computed, c.expected, c.tol
            ));
        }
        s
    }
}

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "entropy at the two cycle temperatures"),
    (2, "corner internal energies"),
    (3, "lambda2 derivation and Stirling comparison"),
    (4, "T-lambda cycle table"),
    (5, "Carnot cycle table"),
    (6, "first law and loop closure"),
    (7, "time-plane entropy points"),
    (8, "PT-symmetric regime structure"),
    (9, "oracle equivalences"),
    (10, "Maxwell construction and spinodal"),
    (11, "asymptotics and thermodynamic laws"),
];

/// Runs one criterion; unknown ids are an error.
pub fn run_criterion(id: u8, pc: &PaperConstants, cfg: &NumericsConfig) -> Result<CriterionReport> {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| n.to_string())
        .ok_or_else(|| Error::InvalidParameter(format!("no criterion {id}")))?;
    let mut checks = Vec::new();
    let out = match id {
        1 => entropy_caption(pc, &mut checks),
        2 => corner_energies(pc, cfg, &mut checks),
        3 => lambda2_derivation(pc, cfg, &mut checks),
        4 => tlambda_table(pc, cfg, &mut checks),
        5 => carnot_table(pc, cfg, &mut checks),
        6 => first_law(pc, cfg, &mut checks),
        7 => time_plane(pc, cfg, &mut checks),
        8 => symmetric_structure(pc, cfg, &mut checks),
        9 => oracles(cfg, &mut checks),
        10 => maxwell_construction(pc, cfg, &mut checks),
        _ => asymptotics(pc, cfg, &mut checks),
    };
    if let Err(e) = out {
        checks.push(Check::failed("evaluation", &e));
    }
    Ok(CriterionReport { id, name, checks })
}

pub fn run_all(pc: &PaperConstants, cfg: &NumericsConfig) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|(id, _)| run_criterion(*id, pc, cfg).expect("known criterion id")).collect()
}

fn broken_model(pc: &PaperConstants, lambda: f64) -> Result<ModelParams> {
    ModelParams::new(pc.n_broken, pc.nu_broken, lambda)
}

fn broken_spec(pc: &PaperConstants) -> BrokenCycleSpec {
    BrokenCycleSpec {
        t_cold: pc.t_cold,
        t_hot: pc.t_hot,
        nu: pc.nu_broken,
        n: pc.n_broken,
        lambda1: LambdaCorner { window: (pc.lambda1 - 0.5, pc.lambda1 + 0.5), entropy: None },
        lambda2: LambdaCorner { window: pc.lambda2_window, entropy: Some(pc.s2) },
        trace_steps: 200,
    }
}

/// The `λ₂` corner: the entropy-matching root closest to the target `S₂`.
pub fn derive_lambda2(pc: &PaperConstants, cfg: &NumericsConfig) -> Result<(f64, f64)> {
    let m = entropy_match_lambda(pc.t_cold, pc.t_hot, pc.nu_broken, pc.n_broken, pc.lambda2_window, cfg)?;
    let pick = select_by_entropy(&m, pc.s2)
        .ok_or(Error::NoRootInBracket { a: pc.lambda2_window.0, b: pc.lambda2_window.1 })?;
    Ok((pick.lambda, pick.s_common))
}

pub fn tlambda_report(pc: &PaperConstants, cfg: &NumericsConfig) -> Result<CycleReport> {
    build_cycle(&CycleSpec::TLambda(broken_spec(pc)), cfg)
}

pub fn carnot_report(pc: &PaperConstants, cfg: &NumericsConfig) -> Result<CycleReport> {
    build_cycle(&CycleSpec::CarnotBroken(broken_spec(pc)), cfg)
}

fn entropy_caption(pc: &PaperConstants, checks: &mut Vec<Check>) -> Result<()> {
    let p = broken_model(pc, pc.lambda1)?;
    checks.push(Check::abs("S(T1)", thermo::static_entropy(pc.t_cold, &p)?, pc.s1, 5e-4));
    checks.push(Check::abs("S(T2)", thermo::static_entropy(pc.t_hot, &p)?, pc.s1, 5e-4));
    Ok(())
}

fn corner_energies(pc: &PaperConstants, cfg: &NumericsConfig, checks: &mut Vec<Check>) -> Result<()> {
    let (l2, _) = derive_lambda2(pc, cfg)?;
    let corners = [(pc.t_hot, pc.lambda1), (pc.t_hot, l2), (pc.t_cold, l2), (pc.t_cold, pc.lambda1)];
    for (i, (t, lam)) in corners.iter().enumerate() {
        let u = CyclePoint::evaluate(i as u8 + 1, *t, pc.nu_broken, *lam, pc.n_broken)?.u;
        checks.push(Check::abs(format!("U{}", i + 1), u, pc.u_corners[i], 5e-4));
    }
    Ok(())
}

fn lambda2_derivation(pc: &PaperConstants, cfg: &NumericsConfig, checks: &mut Vec<Check>) -> Result<()> {
    let (l2, s_common) = derive_lambda2(pc, cfg)?;
    checks.push(Check::abs("common entropy at lambda2", s_common, pc.s2, 1e-3));
    let eta = stirling_reference_efficiency(pc.t_cold, pc.t_hot, pc.lambda1, l2, pc.cv_ideal)?;
    checks.push(Check::abs("Stirling efficiency, ideal c_v", eta, pc.eta_stirling, 5e-5));
    let cycle = tlambda_report(pc, cfg)?;
    let cv = stirling_matching_cv(pc.t_cold, pc.t_hot, pc.lambda1, l2, cycle.efficiency)?;
    checks.push(Check::abs("c_v matching the T-lambda efficiency", cv, pc.cv_matching, 5e-4));
    Ok(())
}

fn table_checks(report: &CycleReport, table: &[[f64; 3]; 4], checks: &mut Vec<Check>) {
    for (step, row) in report.steps.iter().zip(table) {
        let tag = format!("{}->{}", step.from, step.to);
        checks.push(Check::abs(format!("dW {tag}"), step.dw, row[0], 1e-3));
        checks.push(Check::abs(format!("dQ {tag}"), step.dq, row[1], 1e-3));
        checks.push(Check::abs(format!("dU {tag}"), step.du, row[2], 1e-3));
    }
}

fn tlambda_table(pc: &PaperConstants, cfg: &NumericsConfig, checks: &mut Vec<Check>) -> Result<()> {
    let r = tlambda_report(pc, cfg)?;
    table_checks(&r, &pc.table_tlambda, checks);
    checks.push(Check::abs("loop work", r.loop_w, pc.w_tlambda, 1e-3));
    checks.push(Check::abs("efficiency", r.efficiency, pc.eta_tlambda, 5e-4));
    Ok(())
}

fn carnot_table(pc: &PaperConstants, cfg: &NumericsConfig, checks: &mut Vec<Check>) -> Result<()> {
    let r = carnot_report(pc, cfg)?;
    table_checks(&r, &pc.table_carnot, checks);
    checks.push(Check::abs("loop work", r.loop_w, pc.w_carnot, 1e-3));
    checks.push(Check::abs("efficiency", r.efficiency, pc.eta_carnot, 5e-5));
    checks.push(Check::abs("efficiency vs 1 - T1/T2", r.efficiency, 1.0 - pc.t_cold / pc.t_hot, 1e-9));
    Ok(())
}

fn first_law(pc: &PaperConstants, cfg: &NumericsConfig, checks: &mut Vec<Check>) -> Result<()> {
    for r in [tlambda_report(pc, cfg)?, carnot_report(pc, cfg)?] {
        let tag = match r.kind {
            CycleKind::TLambda => "T-lambda",
            _ => "Carnot",
        };
        for s in &r.steps {
            checks.push(Check::abs(format!("{tag} dW = dQ - dU, {}->{}", s.from, s.to), s.dw, s.dq - s.du, 1e-9));
        }
        checks.push(Check::abs(format!("{tag} loop dU"), r.loop_u, 0.0, 1e-9 * r.max_abs_du()));
    }
    Ok(())
}

fn time_plane(pc: &PaperConstants, cfg: &NumericsConfig, checks: &mut Vec<Check>) -> Result<()> {
    let p = broken_model(pc, pc.lambda1)?;
    let td = TimeDependence::new(pc.c1_broken);
    for (i, &(t_temp, time)) in pc.broken_times[..2].iter().enumerate() {
        let s = time_entropy(t_temp, time, &p, &td)?;
        checks.push(Check::abs(format!("S at caption point {}", i + 1), s, pc.s1, 1e-3));
    }
    let mut solved = Vec::new();
    for (i, &(t_temp, time)) in pc.broken_times.iter().enumerate() {
        let root = time_isentrope_solve(pc.s1, t_temp, &p, &td, (time - 1e-5, time + 1e-5), cfg)?;
        checks.push(Check::abs(format!("solved time {}", i + 1), root, time, 5e-7));
        solved.push(root);
    }
    checks.push(Check::abs("t2 - t1", solved[1] - solved[0], pc.broken_time_gap, 1e-7));

    let ps = ModelParams::new(pc.n_sym, pc.nu_sym, pc.lambda_sym)?;
    let tds = TimeDependence::new(pc.c1_sym);
    let s = time_entropy(pc.t_sym_cold, pc.sym_times[0], &ps, &tds)?;
    checks.push(Check::abs("symmetric S at caption point", s, pc.s_sym_low, 1e-3));
    for (t_temp, time) in [(pc.t_sym_cold, pc.sym_times[0]), (pc.t_sym_hot, pc.sym_times[1])] {
        let root = time_isentrope_solve(pc.s_sym_low, t_temp, &ps, &tds, (time - 1e-5, time + 1e-5), cfg)?;
        checks.push(Check::abs(format!("symmetric solved time at T = {t_temp}"), root, time, 5e-7));
    }
    Ok(())
}

fn symmetric_structure(pc: &PaperConstants, cfg: &NumericsConfig, checks: &mut Vec<Check>) -> Result<()> {
    let window = (1e-9, pc.nu_sym * pc.nu_sym / pc.n_sym as f64);
    for s in [pc.s_sym_high, pc.s_sym_low] {
        let path = trace_isentrope_lambda(s, pc.nu_sym, pc.n_sym, pc.t_sym_cold, pc.t_sym_hot, 100, window, cfg);
        checks.push(Check::truth(format!("single-valued isentrope at S = {s}"), path.is_ok()));
    }
    let none = entropy_match_lambda(pc.t_sym_cold, pc.t_sym_hot, pc.nu_sym, pc.n_sym, window, cfg);
    checks.push(Check::truth(
        "no entropy match in the symmetric window",
        matches!(none, Err(Error::NoRootInBracket { .. })),
    ));
    // temperature on the S1 contour at the two caption times
    let ps = ModelParams::new(pc.n_sym, pc.nu_sym, pc.lambda_sym)?;
    let tds = TimeDependence::new(pc.c1_sym);
    let contour_t = |time: f64| {
        find_root_bracketed(
            |tt| time_entropy(tt, time, &ps, &tds).map(|s| s - pc.s_sym_low),
            0.5 * pc.t_sym_cold,
            1.5 * pc.t_sym_hot,
            cfg,
        )
    };
    let (ta, tb) = (contour_t(pc.sym_times[0])?, contour_t(pc.sym_times[1])?);
    checks.push(Check::truth("T(t2) > T(t1) on the S1 contour", tb > ta));
    checks.push(Check::abs("T(t1) on the S1 contour", ta, pc.t_sym_cold, 1e-2));
    checks.push(Check::abs("T(t2) on the S1 contour", tb, pc.t_sym_hot, 1e-2));
    Ok(())
}

/// `Z` as the double geometric sum over `(n₊, n₋)`, truncated where the
/// remaining terms fall below double precision.
pub fn spectral_sum_z(t: f64, p: &ModelParams) -> Result<f64> {
    if p.lambda < 0.0 {
        return Err(Error::InvalidParameter("spectral sum needs a real spectrum".into()));
    }
    let gap = (p.n as f64 * p.lambda).sqrt();
    let (wp, wm) = (p.nu + gap, p.nu - gap);
    if !(wm > 0.0) {
        return Err(Error::NonNormalizable { gap, nu: p.nu });
    }
    let terms = |w: f64| (40.0 * t / w).ceil() as usize + 1;
    let row = |w: f64| -> f64 { (0..terms(w)).map(|k| (-(k as f64) * w / t).exp()).rev().sum() };
    Ok(row(wp) * row(wm))
}

fn oracles(cfg: &NumericsConfig, checks: &mut Vec<Check>) -> Result<()> {
    for (t, nu, lam) in [(1.0, 12.0, 0.3), (5.0, 25.0, 4.5), (35.5489, 25.0, 4.5), (2.0, 8.0, 0.1)] {
        let p = ModelParams::new(120, nu, lam)?;
        let z = thermo::partition_function(&EvalDomain::static_at(t, &p)?);
        checks.push(Check::rel_strict(format!("Z vs spectral sum at T={t}, nu={nu}, lambda={lam}"), z, spectral_sum_z(t, &p)?, 1e-8));
    }
    for t in [1.0, 2.0, 4.0, 8.0, 16.0] {
        for lam in [-30.0, -10.0, -1.0, 0.1, 0.3] {
            for nu in [8.0, 12.0, 20.0] {
                let p = ModelParams::new(160, nu, lam)?;
                let point = thermo::evaluate_static(t, &p)?;
                let ln_z = |tt: f64| Ok(thermo::ln_partition_function(&EvalDomain::static_at(tt, &p)?));
                let f_t = |tt: f64| thermo::static_free_energy(tt, &p);
                let f_l = |l: f64| thermo::static_free_energy(t, &p.with_lambda(l));
                let u_fd = t * t * derivative_central(ln_z, t, cfg)?;
                let s_fd = -derivative_central(f_t, t, cfg)?;
                let p_fd = -derivative_central(f_l, lam, cfg)?;
                let tag = format!("T={t}, lambda={lam}, nu={nu}");
                let pr = point.p.unwrap_or(f64::NAN);
                for (name, exact, fd) in [("U", point.u, u_fd), ("S", point.s, s_fd), ("p", pr, p_fd)] {
                    let c = Check::rel(format!("{name} vs finite differences at {tag}"), exact, fd, 1e-6);
                    if !c.pass {
                        checks.push(c);
                    }
                }
            }
        }
    }
    checks.push(Check::truth("5x5x3 finite-difference grid", checks.iter().all(|c| c.pass)));
    for (t, nu) in [(1.0, 12.0), (5.0, 12.0), (35.0, 25.0)] {
        let at = |lam: f64| thermo::evaluate_static(t, &ModelParams::new(160, nu, lam)?);
        let (lo, mid, hi) = (at(-1e-12)?, at(0.0)?, at(1e-12)?);
        for (name, a, b, c) in [
            ("Z", lo.z, mid.z, hi.z),
            ("U", lo.u, mid.u, hi.u),
            ("S", lo.s, mid.s, hi.s),
            ("p", lo.p.unwrap_or(f64::NAN), mid.p.unwrap_or(f64::NAN), hi.p.unwrap_or(f64::NAN)),
        ] {
            checks.push(Check::rel(format!("{name} left limit at exceptional point, T={t}"), a, b, 1e-8));
            checks.push(Check::rel(format!("{name} right limit at exceptional point, T={t}"), c, b, 1e-8));
        }
    }
    Ok(())
}

fn maxwell_construction(pc: &PaperConstants, cfg: &NumericsConfig, checks: &mut Vec<Check>) -> Result<()> {
    let (t, nu, n) = (pc.t_phase, pc.nu_broken, pc.n_broken);
    for k in 1..=6 {
        let root = phase::refine_pressure_zero(k, t, nu, n, cfg)?;
        checks.push(Check::rel_strict(format!("pressure zero {k}"), root, phase::pressure_zero(k, t, n), 1e-10));
    }
    for k in 1..=5 {
        let sum = phase::isotherm_area(k, t, nu)? + phase::isotherm_area(k + 1, t, nu)?;
        checks.push(Check::abs(format!("I({k}) + I({})", k + 1), sum, 0.0, 1e-9));
        let quad = phase::isotherm_area_quadrature(k, t, nu, n, cfg)?;
        checks.push(Check::rel_strict(format!("I({k}) quadrature"), quad, phase::isotherm_area(k, t, nu)?, 1e-6));
    }
    let (lo, hi) = phase::binodal(t, n, 1)?;
    let base = broken_model(pc, 0.0)?;
    let f1 = thermo::static_free_energy(t, &base.with_lambda(hi))?;
    let f2 = thermo::static_free_energy(t, &base.with_lambda(lo))?;
    checks.push(Check::abs("F(lambda1) - F(lambda2)", f1 - f2, 0.0, 1e-9));
    let mut below = true;
    for i in 0..=100 {
        let lam = lo + (hi - lo) * i as f64 / 100.0;
        let fh = phase::heterogeneous_free_energy(lam, t, nu, n, 1)?;
        below &= fh <= thermo::static_free_energy(t, &base.with_lambda(lam))? + 1e-12;
    }
    checks.push(Check::truth("F_het <= F on 101 binodal samples", below));
    let (a, b) = phase::spinodal_interval(t, nu, n, 1, cfg)?;
    checks.push(Check::truth("spinodal strictly inside binodal", lo < a && a < b && b < hi));

    let temps = [0.5, 0.25, 0.125];
    let rows = phase::critical_temperature_scan(nu, n, &temps, 1, cfg)?;
    let b0 = rows[0].binodal_width / (temps[0] * temps[0]);
    let s0 = rows[0].spinodal_width / (temps[0] * temps[0]);
    for r in &rows[1..] {
        let tt = r.t * r.t;
        checks.push(Check::rel_strict(format!("binodal width / T^2 at T={}", r.t), r.binodal_width / tt, b0, 1e-6));
        checks.push(Check::rel_strict(format!("spinodal width / T^2 at T={}", r.t), r.spinodal_width / tt, s0, 1e-6));
    }
    checks.push(Check::abs("merge temperature", phase::merge_temperature(&rows), 0.0, 0.0));
    let (ds, dp) = phase::maxwell_relation(t, -10.0, nu, n, cfg)?;
    checks.push(Check::rel("dS/dlambda = dp/dT", ds, dp, 1e-6));
    Ok(())
}

fn asymptotics(pc: &PaperConstants, cfg: &NumericsConfig, checks: &mut Vec<Check>) -> Result<()> {
    for (n, nu, lam) in [(pc.n_broken, pc.nu_broken, pc.lambda1), (pc.n_sym, pc.nu_sym, pc.lambda_sym)] {
        let t = 1e4 * nu;
        let u = thermo::static_internal_energy(t, &ModelParams::new(n, nu, lam)?)?;
        checks.push(Check::abs(format!("U/(2T) at T = 1e4 nu, lambda = {lam}"), u / (2.0 * t), 1.0, 1e-2));
    }
    let ps = ModelParams::new(pc.n_sym, pc.nu_sym, pc.lambda_sym)?;
    let s_low = thermo::static_entropy(0.05, &ps)?;
    checks.push(Check::truth(format!("S(T = 0.05) = {s_low:e} <= 1e-8 in the symmetric regime"), s_low.abs() <= 1e-8));
    let pb = broken_model(pc, pc.lambda1)?;
    let mut steepest = (f64::NAN, f64::INFINITY);
    for i in 1..=600 {
        let t = 0.01 * i as f64;
        let slope = thermo::entropy_slope(&EvalDomain::static_at(t, &pb)?);
        if slope < steepest.1 {
            steepest = (t, slope);
        }
    }
    let (t, slope) = steepest;
    checks.push(Check::truth(format!("min dS/dT on (0, 6] = {slope:e} at T = {t} is negative"), slope < 0.0));
    let fd = derivative_central(|tt| thermo::static_entropy(tt, &pb), t, cfg)?;
    checks.push(Check::rel("finite-difference dS/dT at the steepest point", fd, slope, 1e-6));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perturbed_constant_fails() {
        let pc = PaperConstants { s1: -2.4, ..PaperConstants::default() };
        let r = run_criterion(1, &pc, &NumericsConfig::default()).unwrap();
        assert!(!r.passed());
        assert!(r.summary().contains("FAIL"));
    }

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(12, &PaperConstants::default(), &NumericsConfig::default()).is_err());
    }

    #[test]
    fn spectral_sum_rejects_broken_regime() {
        assert!(spectral_sum_z(1.0, &ModelParams::new(160, 12.0, -1.0).unwrap()).is_err());
    }
}
