//! The five subcommands. Each consumes the resolved configuration, writes
//! its artifacts into the prepared output directory, and maps library
//! failures onto the exit-code contract in `main`.

use std::path::Path;

use gordon_core::evolution::{
    evolve_u_direct, evolve_v, EvolveConfig, StepDiagnostics, Trajectory,
};
use gordon_core::floquet::{discriminant_curve, isospectrality_drift, sg_to_kdv};
use gordon_core::geometry::{
    discrete_gaussian_curvature, export_obj, kink_angle, reconstruct_surface, FrameState,
    SolutionPatch,
};
use gordon_core::phase::{
    classify as classify_state, obstruction_k1, sing_family_w, SingFamilyParams,
};
use gordon_core::spectral::{PeriodicGrid, WindingFunction};
use serde::Serialize;

use crate::config::{EquationChoice, FormChoice, RunConfig};
use crate::initial::{self, SurfaceSource};
use crate::output::{announce, fmt_float, json_float, write_json, CsvFile};
use crate::CliError;

// ---------------------------------------------------------------------------
// classify

#[derive(Serialize)]
struct MomentReport {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct ClassifyReport {
    initial: String,
    n: usize,
    k: MomentReport,
    class: String,
    k1: f64,
    osc: f64,
    charge: i64,
    sin_integral: f64,
    margin: f64,
    eps: f64,
}

pub fn classify(cfg: &RunConfig, dir: &Path) -> Result<(), CliError> {
    let expr = initial::parse_state(&cfg.run.initial)?;
    let u = initial::build_u(&expr, cfg.run.n)?;
    let class = classify_state(&u, cfg.tolerances.classify_eps)?;
    let k1 = obstruction_k1(&u, cfg.tolerances.int_tol)?;
    let report = ClassifyReport {
        initial: cfg.run.initial.clone(),
        n: u.grid().len(),
        k: MomentReport {
            re: class.moment.re,
            im: class.moment.im,
        },
        class: class.tag.to_string(),
        k1,
        osc: u.oscillation(),
        charge: u.winding(),
        sin_integral: class.sin_integral,
        margin: class.margin,
        eps: class.eps,
    };
    write_json(&dir.join("classify.json"), &report)?;
    announce(dir, &["classify.json"]);
    Ok(())
}

// ---------------------------------------------------------------------------
// evolve

#[derive(Serialize)]
struct EvolveSummary {
    status: &'static str,
    equation: EquationChoice,
    form: FormChoice,
    initial: String,
    n: usize,
    dt: f64,
    steps: usize,
    t_end: f64,
    max_hamiltonian_drift: f64,
    max_constraint_abs: f64,
    max_mean_deviation: f64,
    final_tail_fraction: Option<f64>,
    recorded_states: usize,
}

#[derive(Serialize)]
struct AbortSummary {
    status: &'static str,
    equation: EquationChoice,
    form: FormChoice,
    initial: String,
    n: usize,
    dt: f64,
    /// Abort time; the flow never left it.
    t: Option<f64>,
    moment_abs: Option<f64>,
    eps: Option<f64>,
    /// Mean-drift estimate at abort; `null` when the moment vanished
    /// exactly and the drift is formally infinite.
    mu_estimate: Option<f64>,
    tail_fraction: Option<f64>,
    threshold: Option<f64>,
}

fn diagnostics_csv(dir: &Path, diagnostics: &[StepDiagnostics]) -> Result<(), CliError> {
    let mut csv = CsvFile::create(
        dir.join("diagnostics.csv"),
        &["t", "hamiltonian", "constraint", "mean", "tail", "mu"],
    );
    for d in diagnostics {
        csv.push_row([
            fmt_float(d.t),
            fmt_float(d.hamiltonian),
            fmt_float(d.constraint_integral),
            fmt_float(d.mean),
            fmt_float(d.tail_fraction),
            d.mu.map(fmt_float).unwrap_or_default(),
        ]);
    }
    csv.finish()?;
    Ok(())
}

fn states_csv(
    dir: &Path,
    grid: PeriodicGrid,
    times: &[f64],
    values: impl Fn(usize) -> Vec<f64>,
) -> Result<(), CliError> {
    let mut csv = CsvFile::create(dir.join("states.csv"), &["t", "x", "value"]);
    for (i, &t) in times.iter().enumerate() {
        let row = values(i);
        for (j, &v) in row.iter().enumerate() {
            csv.push_row([fmt_float(t), fmt_float(grid.node(j)), fmt_float(v)]);
        }
    }
    csv.finish()?;
    Ok(())
}

/// Write the abort summary for flow failures that *are* results (the
/// ramification face, resolution loss), then hand the error back so the
/// exit code still reflects it.
fn abort_summary(cfg: &RunConfig, n: usize, err: gordon_core::Error, dir: &Path) -> CliError {
    use gordon_core::Error::*;
    let base = AbortSummary {
        status: "aborted",
        equation: cfg.run.equation,
        form: cfg.run.form,
        initial: cfg.run.initial.clone(),
        n,
        dt: cfg.time.dt,
        t: None,
        moment_abs: None,
        eps: None,
        mu_estimate: None,
        tail_fraction: None,
        threshold: None,
    };
    let summary = match &err {
        OnRamificationLocus {
            moment_abs,
            eps,
            t,
            mu_estimate,
        } => Some(AbortSummary {
            status: "aborted_on_ramification_locus",
            t: t.or(Some(0.0)),
            moment_abs: json_float(*moment_abs),
            eps: Some(*eps),
            mu_estimate: mu_estimate.and_then(json_float),
            ..base
        }),
        ResolutionLoss {
            tail_fraction,
            threshold,
            t,
        } => Some(AbortSummary {
            status: "aborted_on_resolution_loss",
            t: Some(*t),
            tail_fraction: json_float(*tail_fraction),
            threshold: Some(*threshold),
            ..base
        }),
        _ => None,
    };
    if let Some(summary) = summary {
        if let Err(write_err) = write_json(&dir.join("summary.json"), &summary) {
            return write_err;
        }
    }
    CliError::Core(err)
}

fn evolve_config(cfg: &RunConfig) -> Result<EvolveConfig, CliError> {
    Ok(
        EvolveConfig::new(cfg.run.equation.into(), cfg.time.dt, cfg.time.t_end)?
            .with_record_stride(cfg.time.record_stride)
            .with_ramification_eps(cfg.tolerances.ramification_eps),
    )
}

fn write_completed<S>(
    cfg: &RunConfig,
    dir: &Path,
    n: usize,
    ecfg: &EvolveConfig,
    traj: &Trajectory<S>,
) -> Result<(), CliError> {
    diagnostics_csv(dir, &traj.diagnostics)?;
    let summary = EvolveSummary {
        status: "completed",
        equation: cfg.run.equation,
        form: cfg.run.form,
        initial: cfg.run.initial.clone(),
        n,
        dt: cfg.time.dt,
        steps: ecfg.n_steps(),
        t_end: traj.last_time(),
        max_hamiltonian_drift: traj.max_hamiltonian_drift(),
        max_constraint_abs: traj.max_constraint_abs(),
        max_mean_deviation: traj.max_mean_deviation(),
        final_tail_fraction: traj
            .diagnostics
            .last()
            .and_then(|d| json_float(d.tail_fraction)),
        recorded_states: traj.states.len(),
    };
    write_json(&dir.join("summary.json"), &summary)
}

pub fn evolve(cfg: &RunConfig, dir: &Path) -> Result<(), CliError> {
    let expr = initial::parse_state(&cfg.run.initial)?;
    let ecfg = evolve_config(cfg)?;
    let mut files = vec!["diagnostics.csv", "summary.json"];
    if cfg.time.snapshots {
        files.push("states.csv");
    }
    match cfg.run.form {
        FormChoice::VForm => {
            let v0 = initial::build_v(&expr, cfg.run.n)?;
            let n = v0.len();
            let traj = evolve_v(&v0, &ecfg).map_err(|e| abort_summary(cfg, n, e, dir))?;
            write_completed(cfg, dir, n, &ecfg, &traj)?;
            if cfg.time.snapshots {
                states_csv(dir, v0.grid(), &traj.times, |i| {
                    traj.states[i].values().to_vec()
                })?;
            }
        }
        FormChoice::UForm => {
            let u0 = initial::build_u(&expr, cfg.run.n)?;
            let n = u0.grid().len();
            let traj = evolve_u_direct(&u0, &ecfg).map_err(|e| abort_summary(cfg, n, e, dir))?;
            write_completed(cfg, dir, n, &ecfg, &traj)?;
            if cfg.time.snapshots {
                states_csv(dir, u0.grid(), &traj.times, |i| traj.states[i].sampled())?;
            }
        }
    }
    announce(dir, &files);
    Ok(())
}

// ---------------------------------------------------------------------------
// discriminant

#[derive(Serialize)]
struct DiscriminantSummary {
    initial: String,
    form: FormChoice,
    n: usize,
    dt: f64,
    t_end: f64,
    recorded_states: usize,
    lambda_min: f64,
    lambda_max: f64,
    lambda_count: usize,
    substeps: usize,
    max_drift: f64,
}

pub fn discriminant(cfg: &RunConfig, dir: &Path) -> Result<(), CliError> {
    if cfg.run.equation != EquationChoice::SineGordon {
        return Err(CliError::Parse(
            "the discriminant sweep is defined along sine-equation flows".into(),
        ));
    }
    let expr = initial::parse_state(&cfg.run.initial)?;
    let ecfg = evolve_config(cfg)?;
    let eps = cfg.tolerances.classify_eps;

    // Recorded states as angle fields, whichever form integrates.
    let (times, states, n) = match cfg.run.form {
        FormChoice::VForm => {
            let v0 = initial::build_v(&expr, cfg.run.n)?;
            let n = v0.len();
            let traj = evolve_v(&v0, &ecfg).map_err(|e| abort_summary(cfg, n, e, dir))?;
            let states = traj
                .states
                .iter()
                .map(|v| gordon_core::phase::psi_sg_plus(v, eps))
                .collect::<gordon_core::Result<Vec<WindingFunction>>>()?;
            (traj.times, states, n)
        }
        FormChoice::UForm => {
            let u0 = initial::build_u(&expr, cfg.run.n)?;
            let n = u0.grid().len();
            let traj = evolve_u_direct(&u0, &ecfg).map_err(|e| abort_summary(cfg, n, e, dir))?;
            (traj.times, traj.states, n)
        }
    };

    let lambdas = cfg.lambda_grid();
    let substeps = cfg.tolerances.substeps;
    let mut csv = CsvFile::create(dir.join("discriminant.csv"), &["t", "lambda", "delta"]);
    for (i, u) in states.iter().enumerate() {
        let curve = discriminant_curve(&sg_to_kdv(u), &lambdas, substeps, format!("state{i}"))?;
        for (l, d) in curve.lambdas.iter().zip(&curve.values) {
            csv.push_row([fmt_float(times[i]), fmt_float(*l), fmt_float(*d)]);
        }
    }
    csv.finish()?;

    let max_drift = isospectrality_drift(&states, &lambdas, substeps)?;
    let summary = DiscriminantSummary {
        initial: cfg.run.initial.clone(),
        form: cfg.run.form,
        n,
        dt: cfg.time.dt,
        t_end: *times.last().unwrap_or(&0.0),
        recorded_states: states.len(),
        lambda_min: cfg.lambda.min,
        lambda_max: cfg.lambda.max,
        lambda_count: cfg.lambda.count,
        substeps,
        max_drift,
    };
    write_json(&dir.join("summary.json"), &summary)?;
    announce(dir, &["discriminant.csv", "summary.json"]);
    Ok(())
}

// ---------------------------------------------------------------------------
// obstruction-scan

#[derive(Serialize)]
struct FamilyRoots {
    k: u32,
    /// Consecutive scan points with opposite obstruction signs.
    brackets: Vec<[f64; 2]>,
    /// Bisection-refined zero crossings, one per bracket (exact scan-point
    /// zeros included directly).
    roots: Vec<f64>,
}

#[derive(Serialize)]
struct ScanReport {
    n: usize,
    gate_tol: f64,
    r_min: f64,
    r_max: f64,
    r_count: usize,
    families: Vec<FamilyRoots>,
}

fn sign_of(x: f64) -> i32 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

pub fn obstruction_scan(cfg: &RunConfig, dir: &Path) -> Result<(), CliError> {
    let g = PeriodicGrid::new(cfg.scan.n)?;
    let gate = cfg.tolerances.int_tol;
    let k1_at = |k: u32, r: f64| -> Result<f64, CliError> {
        let w = sing_family_w(SingFamilyParams::new(k, r)?, g);
        Ok(obstruction_k1(&w, gate)?)
    };
    let rs: Vec<f64> = if cfg.scan.r_count == 1 {
        vec![cfg.scan.r_min]
    } else {
        (0..cfg.scan.r_count)
            .map(|i| {
                cfg.scan.r_min
                    + (cfg.scan.r_max - cfg.scan.r_min) * i as f64 / (cfg.scan.r_count - 1) as f64
            })
            .collect()
    };

    let mut csv = CsvFile::create(
        dir.join("obstruction.csv"),
        &["k", "r", "k1", "sign_change"],
    );
    let mut families = Vec::new();
    for k in 1..=cfg.scan.k_max {
        let values: Vec<f64> = rs.iter().map(|&r| k1_at(k, r)).collect::<Result<_, _>>()?;
        let mut brackets = Vec::new();
        let mut roots = Vec::new();
        for i in 0..rs.len() {
            let flips = i + 1 < rs.len() && sign_of(values[i]) * sign_of(values[i + 1]) < 0;
            csv.push_row([
                k.to_string(),
                fmt_float(rs[i]),
                fmt_float(values[i]),
                flips.to_string(),
            ]);
            if sign_of(values[i]) == 0 {
                roots.push(rs[i]);
            }
            if flips {
                let (mut lo, mut hi) = (rs[i], rs[i + 1]);
                let mut f_lo = values[i];
                // 50 halvings of a subinterval of (0,1): far below every
                // tolerance in play.
                for _ in 0..50 {
                    let mid = 0.5 * (lo + hi);
                    let f_mid = k1_at(k, mid)?;
                    if sign_of(f_mid) == sign_of(f_lo) {
                        lo = mid;
                        f_lo = f_mid;
                    } else {
                        hi = mid;
                    }
                }
                brackets.push([rs[i], rs[i + 1]]);
                roots.push(0.5 * (lo + hi));
            }
        }
        families.push(FamilyRoots { k, brackets, roots });
    }
    csv.finish()?;

    let report = ScanReport {
        n: cfg.scan.n,
        gate_tol: gate,
        r_min: cfg.scan.r_min,
        r_max: cfg.scan.r_max,
        r_count: cfg.scan.r_count,
        families,
    };
    write_json(&dir.join("roots.json"), &report)?;
    announce(dir, &["obstruction.csv", "roots.json"]);
    Ok(())
}

// ---------------------------------------------------------------------------
// surface

#[derive(Serialize)]
struct CurvatureReport {
    mean: f64,
    min: f64,
    max: f64,
    samples: usize,
}

#[derive(Serialize)]
struct SurfaceReport {
    source: String,
    nx: usize,
    nt: usize,
    vertex_count: usize,
    quad_count: usize,
    compatibility_residual: f64,
    pde_residual: f64,
    max_unit_defect: f64,
    max_angle_defect: f64,
    curvature: CurvatureReport,
}

pub fn surface(cfg: &RunConfig, dir: &Path) -> Result<(), CliError> {
    let s = &cfg.surface;
    let source = initial::parse_surface_source(&s.source)?;
    let step = |lo: f64, hi: f64, count: usize| (hi - lo) / (count - 1) as f64;

    let patch = match &source {
        SurfaceSource::Kink { shift } => {
            let shift = *shift;
            let x_step = if s.x_periodic {
                1.0 / s.nx as f64
            } else {
                step(s.x0, s.x1, s.nx)
            };
            SolutionPatch::from_fn(
                s.x0,
                x_step,
                s.nx,
                s.x_periodic,
                s.t0,
                step(s.t0, s.t1, s.nt),
                s.nt,
                |x, t| kink_angle(x, t, shift),
                s.source.clone(),
            )?
        }
        SurfaceSource::NonSolution => SolutionPatch::from_fn(
            s.x0,
            step(s.x0, s.x1, s.nx),
            s.nx,
            false,
            s.t0,
            step(s.t0, s.t1, s.nt),
            s.nt,
            // Smooth, inside the admissible angle range, not a solution.
            |x, t| 1.2 + 0.5 * (2.0 * x).sin() * (2.0 * t).cos(),
            s.source.clone(),
        )?,
        SurfaceSource::File { path } => {
            let (nx, nt, values) = initial::read_surface_rows(path)?;
            let x_step = if s.x_periodic {
                1.0 / nx as f64
            } else {
                step(s.x0, s.x1, nx)
            };
            SolutionPatch::new(
                s.x0,
                x_step,
                nx,
                s.x_periodic,
                s.t0,
                step(s.t0, s.t1, nt),
                nt,
                values,
                s.source.clone(),
            )?
        }
    };

    let frame = FrameState::chebyshev_default(patch.value(0, 0));
    let rec = reconstruct_surface(&patch, &frame, cfg.tolerances.compat_threshold)?;
    let curv = discrete_gaussian_curvature(&rec.mesh, patch.x_step(), patch.t_step())?;
    export_obj(&rec.mesh, &dir.join("surface.obj"))?;

    let report = SurfaceReport {
        source: s.source.clone(),
        nx: patch.nx(),
        nt: patch.nt(),
        vertex_count: rec.mesh.vertex_count(),
        quad_count: rec.mesh.quads().len(),
        compatibility_residual: rec.compatibility_residual,
        pde_residual: rec.pde_residual,
        max_unit_defect: rec.max_unit_defect,
        max_angle_defect: rec.max_angle_defect,
        curvature: CurvatureReport {
            mean: curv.mean,
            min: curv.min,
            max: curv.max,
            samples: curv.samples,
        },
    };
    write_json(&dir.join("surface.json"), &report)?;
    announce(dir, &["surface.obj", "surface.json"]);
    Ok(())
}
