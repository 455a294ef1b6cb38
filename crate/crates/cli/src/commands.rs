use rayon::prelude::*;
use serde::Serialize;

use ptcycle_core::cycles::{
    build_cycle, time_entropy, trace_isentrope_lambda, trace_isentrope_nu, BrokenCycleSpec, CycleKind, CyclePoint,
    CycleSpec, CycleStep, IsentropePath, IsentropeVariable, LambdaCorner, PathLabel, SymmetricCycleSpec,
};
use ptcycle_core::numerics::{link_scanlines, scanline_roots, Contour, Plane, ScanAxis, ScanLayout, Window};
use ptcycle_core::phase::phase_regions;
use ptcycle_core::reproduce::{derive_lambda2, run_all, PaperConstants};
use ptcycle_core::spectrum::mu_period;
use ptcycle_core::thermo::{evaluate_static, static_entropy, ThermoPoint};
use ptcycle_core::{Error, ModelParams};

use crate::config::{CycleKindArg, Format, RunConfig, Vary};
use crate::output::{fmt_g, to_csv, to_json};
use crate::CliError;

fn temperature_grid(tmin: f64, tmax: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![tmin];
    }
    (0..steps)
        .map(|i| if i + 1 == steps { tmax } else { tmin + (tmax - tmin) * i as f64 / (steps - 1) as f64 })
        .collect()
}

fn at_t(t: f64) -> impl Fn(Error) -> CliError {
    move |e| CliError::Core { err: e, context: Some(format!("at T = {t}")) }
}

pub fn thermo(cfg: &RunConfig) -> Result<String, CliError> {
    let p = cfg.model()?;
    let temps = temperature_grid(cfg.sweep.tmin, cfg.sweep.tmax, cfg.sweep.steps);
    let results: Vec<Result<ThermoPoint, Error>> = temps.par_iter().map(|&t| evaluate_static(t, &p)).collect();
    let mut rows = Vec::with_capacity(results.len());
    for (t, r) in temps.iter().zip(results) {
        rows.push(r.map_err(at_t(*t))?);
    }
    let prec = cfg.output.precision;
    match cfg.output.format {
        Format::Json => to_json(&rows, prec),
        Format::Csv => {
            let g = |x: f64| fmt_g(x, prec);
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![g(r.t), g(r.z), g(r.f), g(r.u), g(r.s), r.p.map(g).unwrap_or_default()])
                .collect();
            to_csv(&["T", "Z", "F", "U", "S", "p"], &body)
        }
    }
}

/// Default window for the second corner: the paper's `[−80, −30]` scaled with
/// λ in the broken regime, the whole normalizable range otherwise.
fn default_lambda2_window(p: &ModelParams) -> (f64, f64) {
    if p.lambda < 0.0 {
        (p.lambda * 10.0 / 3.0, p.lambda * 1.25)
    } else {
        symmetric_window(p)
    }
}

fn symmetric_window(p: &ModelParams) -> (f64, f64) {
    (1e-9, p.nu * p.nu / p.n as f64)
}

pub fn cycle_spec(cfg: &RunConfig) -> Result<CycleSpec, CliError> {
    let p = cfg.model()?;
    let c = &cfg.cycle;
    Ok(match c.kind {
        CycleKindArg::Tlambda | CycleKindArg::Carnot => {
            let spec = BrokenCycleSpec {
                t_cold: c.t_cold,
                t_hot: c.t_hot,
                nu: p.nu,
                n: p.n,
                lambda1: LambdaCorner {
                    window: c.lambda1_window.unwrap_or((p.lambda - 0.5, p.lambda + 0.5)),
                    entropy: None,
                },
                lambda2: LambdaCorner {
                    window: c.lambda2_window.unwrap_or_else(|| default_lambda2_window(&p)),
                    entropy: c.s2,
                },
                trace_steps: c.trace_steps,
            };
            if c.kind == CycleKindArg::Tlambda {
                CycleSpec::TLambda(spec)
            } else {
                CycleSpec::CarnotBroken(spec)
            }
        }
        CycleKindArg::CarnotSymmetric => CycleSpec::CarnotSymmetric(SymmetricCycleSpec {
            t_cold: c.t_cold,
            t_hot: c.t_hot,
            nu: p.nu,
            n: p.n,
            s_low: c.s_low,
            s_high: c.s_high,
            lambda_window: c.lambda_window.unwrap_or_else(|| symmetric_window(&p)),
            trace_steps: c.trace_steps,
        }),
    })
}

#[derive(Serialize)]
struct Totals {
    heat: f64,
    work: f64,
    energy: f64,
}

#[derive(Serialize)]
struct CycleOutput<'a> {
    kind: CycleKind,
    path_label: PathLabel,
    points: &'a [CyclePoint],
    steps: &'a [CycleStep],
    totals: Totals,
    efficiency: f64,
    #[serde(skip_serializing_if = "<[IsentropePath]>::is_empty")]
    isentropes: &'a [IsentropePath],
}

pub fn cycle(cfg: &RunConfig) -> Result<String, CliError> {
    let report = build_cycle(&cycle_spec(cfg)?, &cfg.numerics)?;
    let prec = cfg.output.precision;
    match cfg.output.format {
        Format::Json => to_json(
            &CycleOutput {
                kind: report.kind,
                path_label: report.path_label,
                points: &report.points,
                steps: &report.steps,
                totals: Totals { heat: report.loop_q, work: report.loop_w, energy: report.loop_u },
                efficiency: report.efficiency,
                isentropes: &report.isentropes,
            },
            prec,
        ),
        Format::Csv => {
            let g = |x: f64| fmt_g(x, prec);
            let mut rows: Vec<Vec<String>> = report
                .steps
                .iter()
                .map(|s| vec![format!("{}->{}", s.from, s.to), format!("{:?}", s.kind), g(s.dq), g(s.dw), g(s.du)])
                .collect();
            rows.push(vec!["loop".into(), String::new(), g(report.loop_q), g(report.loop_w), g(report.loop_u)]);
            rows.push(vec!["efficiency".into(), String::new(), String::new(), g(report.efficiency), String::new()]);
            to_csv(&["step", "kind", "dQ", "dW", "dU"], &rows)
        }
    }
}

fn default_contour_window(cfg: &RunConfig, plane: Plane, p: &ModelParams) -> Result<Window, CliError> {
    let y = (cfg.sweep.tmin, cfg.sweep.tmax);
    let x = match plane {
        Plane::TimeT => (0.0, mu_period(p).ok_or_else(|| CliError::Config("no time period at lambda = 0".into()))?),
        Plane::LambdaT => (-80.0, symmetric_window(p).1),
        Plane::NuT => ((p.n as f64 * p.lambda.max(0.0)).sqrt() + 0.1, 3.0 * p.nu),
    };
    Ok(Window { x, y })
}

pub fn contour_trace(cfg: &RunConfig) -> Result<Contour, CliError> {
    let p = cfg.model()?;
    let c = &cfg.contour;
    let plane: Plane = c.plane.into();
    let td = if plane == Plane::TimeT { Some(cfg.time_dependence()?) } else { None };
    let window = match c.window {
        Some(w) => w,
        None => default_contour_window(cfg, plane, &p)?,
    };
    let entropy = |x: f64, t: f64| -> f64 {
        let s = match plane {
            Plane::TimeT => time_entropy(t, x, &p, td.as_ref().expect("time dependence")),
            Plane::LambdaT => static_entropy(t, &p.with_lambda(x)),
            Plane::NuT => static_entropy(t, &p.with_nu(x)),
        };
        s.unwrap_or(f64::NAN)
    };
    let layout = ScanLayout::new(window, c.resolution, ScanAxis::X);
    let lines: Vec<(f64, Vec<f64>)> = layout
        .fixed_values()
        .into_par_iter()
        .map(|t| {
            let roots =
                scanline_roots(|x| entropy(x, t), c.level, layout.scan.0, layout.scan.1, layout.scan_cells, &cfg.numerics);
            (t, roots)
        })
        .collect();
    Ok(Contour { level: c.level, plane: Some(plane), polylines: link_scanlines(&lines, ScanAxis::X, layout.max_jump()) })
}

pub fn contour(cfg: &RunConfig) -> Result<String, CliError> {
    let contour = contour_trace(cfg)?;
    if contour.is_empty() {
        eprintln!("warning: no contour at level {} in the requested window", contour.level);
        return Ok(String::new());
    }
    let prec = cfg.output.precision;
    match cfg.output.format {
        Format::Json => to_json(&contour, prec),
        Format::Csv => {
            let rows: Vec<Vec<String>> = contour
                .polylines
                .iter()
                .enumerate()
                .flat_map(|(id, line)| line.iter().map(move |&(x, y)| vec![id.to_string(), fmt_g(x, prec), fmt_g(y, prec)]))
                .collect();
            to_csv(&["polyline_id", "x", "y"], &rows)
        }
    }
}

pub fn phase(cfg: &RunConfig) -> Result<String, CliError> {
    let p = cfg.model()?;
    if !(cfg.phase.t > 0.0) {
        return Err(CliError::Config(format!("phase temperature must be positive, got {}", cfg.phase.t)));
    }
    let r = phase_regions(cfg.phase.t, p.nu, p.n, cfg.phase.branch, &cfg.numerics)?;
    let prec = cfg.output.precision;
    match cfg.output.format {
        Format::Json => to_json(&r, prec),
        Format::Csv => {
            let g = |x: f64| fmt_g(x, prec);
            let row = vec![
                g(r.t),
                r.branch.to_string(),
                g(r.binodal.0),
                g(r.binodal.1),
                g(r.spinodal.0),
                g(r.spinodal.1),
                g(r.maxwell_pressure),
                g(r.f_het),
            ];
            to_csv(
                &["T", "branch", "binodal_lo", "binodal_hi", "spinodal_lo", "spinodal_hi", "maxwell_pressure", "F_het"],
                &[row],
            )
        }
    }
}

pub fn isentrope_trace(cfg: &RunConfig) -> Result<IsentropePath, CliError> {
    let p = cfg.model()?;
    let (tmin, tmax, steps) = (cfg.sweep.tmin, cfg.sweep.tmax, cfg.sweep.steps.saturating_sub(1));
    let num = &cfg.numerics;
    let level = match cfg.isentrope.level {
        Some(s) => s,
        None => static_entropy(tmin, &p).map_err(at_t(tmin))?,
    };
    Ok(match cfg.isentrope.vary {
        Vary::Nu => {
            let start = trace_isentrope_nu(level, p.lambda, p.n, tmin, tmin, 0, p.nu, num)?.samples[0].1;
            trace_isentrope_nu(level, p.lambda, p.n, tmin, tmax, steps, start, num)?
        }
        Vary::Lambda => {
            let window = cfg.isentrope.lambda_window.unwrap_or_else(|| {
                if p.lambda > 0.0 {
                    symmetric_window(&p)
                } else {
                    (p.lambda * 2.0 - 1.0, -1e-9)
                }
            });
            trace_isentrope_lambda(level, p.nu, p.n, tmin, tmax, steps, window, num)?
        }
    })
}

pub fn isentrope(cfg: &RunConfig) -> Result<String, CliError> {
    let path = isentrope_trace(cfg)?;
    let prec = cfg.output.precision;
    match cfg.output.format {
        Format::Json => to_json(&path, prec),
        Format::Csv => {
            let var = match path.constant {
                IsentropeVariable::NuVaries => "nu",
                IsentropeVariable::LambdaVaries => "lambda",
            };
            let rows: Vec<Vec<String>> =
                path.samples.iter().map(|&(t, v)| vec![fmt_g(t, prec), fmt_g(v, prec)]).collect();
            to_csv(&["T", var], &rows)
        }
    }
}

/// Report text (or JSON) and whether every criterion passed.
pub fn verify(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    let pc = cfg.verify.clone().unwrap_or_default();
    let reports = run_all(&pc, &cfg.numerics);
    let ok = reports.iter().all(|r| r.passed());
    let prec = cfg.output.precision;
    let text = match cfg.output.format {
        Format::Json => to_json(&reports, prec)?,
        Format::Csv => {
            let mut s = lambda2_note(&pc, cfg);
            for r in &reports {
                s.push_str(&format!("criterion {:>2} {}: {}\n", r.id, if r.passed() { "PASS" } else { "FAIL" }, r.name));
                for c in &r.checks {
                    s.push_str(&format!(
                        "  [{}] {}: computed {} expected {} tol {}\n",
                        if c.pass { "ok" } else { "FAIL" },
                        c.label,
                        fmt_g(c.computed, prec),
                        fmt_g(c.expected, prec),
                        fmt_g(c.tol, 3)
                    ));
                }
            }
            let passed = reports.iter().filter(|r| r.passed()).count();
            s.push_str(&format!("{passed}/{} criteria passed\n", reports.len()));
            s
        }
    };
    Ok((text, ok))
}

fn lambda2_note(pc: &PaperConstants, cfg: &RunConfig) -> String {
    let prec = cfg.output.precision;
    match derive_lambda2(pc, &cfg.numerics) {
        Ok((l2, s)) => {
            let eta = ptcycle_core::cycles::stirling_reference_efficiency(pc.t_cold, pc.t_hot, pc.lambda1, l2, pc.cv_ideal);
            format!(
                "derived lambda2 = {} (common entropy {}, ln(lambda2/lambda1) = {}, Stirling efficiency {})\n",
                fmt_g(l2, prec),
                fmt_g(s, prec),
                fmt_g((l2 / pc.lambda1).ln(), prec),
                eta.map(|e| fmt_g(e, prec)).unwrap_or_else(|e| e.to_string())
            )
        }
        Err(e) => format!("derived lambda2 unavailable: {e}\n"),
    }
}
