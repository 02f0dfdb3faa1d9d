//! `gordon`: reproducible experiment runner for the periodic sine/sinh
//! equation toolkit.
//!
//! Configuration is layered (defaults, `--config` TOML, `GORDON_OUT_DIR`,
//! flags) and the resolved result is written next to the artifacts. Outputs
//! are byte-identical across reruns of the same configuration.
//!
//! Exit codes: 0 success; 1 I/O or internal numeric failure; 2 state off
//! the constraint manifold; 3 configuration or expression parse error;
//! 4 flow aborted on the ramification locus; 5 spectral resolution loss;
//! 6 Hill integrator failure; 7 degenerate or incompatible geometry.
//! Errors are reported as one JSON object on stderr.

mod commands;
mod config;
mod initial;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{EquationChoice, FormChoice, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Core(gordon_core::Error),
    Parse(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Parse(msg) => f.write_str(msg),
            CliError::Io(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CliError {}

impl From<gordon_core::Error> for CliError {
    fn from(e: gordon_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    /// `(exit code, kind, detail)` per the contract in the module docs.
    fn payload(&self) -> (u8, &'static str, serde_json::Value) {
        use gordon_core::Error as E;
        match self {
            CliError::Parse(_) => (3, "parse", json!({})),
            CliError::Io(_) => (1, "io", json!({})),
            CliError::Core(err) => match err {
                E::NotOnMsin { sin_integral, tol } => (
                    2,
                    "off_constraint_manifold",
                    json!({"sin_integral": output::json_float(*sin_integral), "tol": tol}),
                ),
                E::NotOnMsinh { sinh_integral, tol } => (
                    2,
                    "off_constraint_manifold",
                    json!({"sinh_integral": output::json_float(*sinh_integral), "tol": tol}),
                ),
                E::InvalidGrid { n, reason } => (3, "parse", json!({"n": n, "reason": reason})),
                E::InvalidConfig(msg) => (3, "parse", json!({"detail": msg})),
                E::OnRamificationLocus {
                    moment_abs,
                    eps,
                    t,
                    mu_estimate,
                } => (
                    4,
                    "on_ramification_locus",
                    json!({
                        "moment_abs": output::json_float(*moment_abs),
                        "eps": eps,
                        "t": t.or(Some(0.0)),
                        "mu_estimate": mu_estimate.and_then(output::json_float),
                    }),
                ),
                E::ResolutionLoss {
                    tail_fraction,
                    threshold,
                    t,
                } => (
                    5,
                    "resolution_loss",
                    json!({
                        "tail_fraction": output::json_float(*tail_fraction),
                        "threshold": threshold,
                        "t": t,
                    }),
                ),
                E::OdeStepFailure { lambda, detail } => (
                    6,
                    "ode_step_failure",
                    json!({"lambda": output::json_float(*lambda), "detail": detail}),
                ),
                E::DegenerateMetric { min_abs_sin, delta } => (
                    7,
                    "degenerate_geometry",
                    json!({"min_abs_sin": output::json_float(*min_abs_sin), "delta": delta}),
                ),
                E::CompatibilityFailure {
                    residual,
                    threshold,
                } => (
                    7,
                    "degenerate_geometry",
                    json!({"residual": output::json_float(*residual), "threshold": threshold}),
                ),
                E::IoFailure(_) => (1, "io", json!({})),
                _ => (1, "numeric", json!({})),
            },
        }
    }

    fn report_to_stderr(&self) -> u8 {
        let (code, kind, detail) = self.payload();
        let body = json!({
            "error": kind,
            "code": code,
            "message": self.to_string(),
            "detail": detail,
        });
        eprintln!("{body}");
        code
    }
}

#[derive(Parser)]
#[command(
    name = "gordon",
    version,
    about = "Periodic sine/sinh equation experiments: classification, flows, \
             spectra, obstruction scans, surface reconstruction",
    arg_required_else_help = true
)]
struct Cli {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output directory (overrides the config file and GORDON_OUT_DIR).
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a state against the fold structure and report its invariants.
    Classify(ClassifyArgs),
    /// Integrate a flow, recording per-step conserved-quantity diagnostics.
    Evolve(EvolveArgs),
    /// Sweep the Hill discriminant along a trajectory and measure its drift.
    Discriminant(DiscriminantArgs),
    /// Scan the obstruction integral over the corner family and locate its
    /// sign changes.
    ObstructionScan(ScanArgs),
    /// Reconstruct a unit-negative-curvature surface from an angle field.
    Surface(SurfaceArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// State expression, e.g. "const:0", "linear:k=1", "wfam:k=1,r=0.5".
    #[arg(long)]
    initial: Option<String>,
    /// Grid size (even, at least 8).
    #[arg(long)]
    n: Option<usize>,
    /// Fold-classification tolerance on the moment.
    #[arg(long)]
    classify_eps: Option<f64>,
    /// Constraint-manifold admission gate.
    #[arg(long)]
    int_tol: Option<f64>,
}

impl ClassifyArgs {
    fn apply(self, cfg: &mut RunConfig) {
        let Self {
            initial,
            n,
            classify_eps,
            int_tol,
        } = self;
        merge(&mut cfg.run.initial, initial);
        merge(&mut cfg.run.n, n);
        merge(&mut cfg.tolerances.classify_eps, classify_eps);
        merge(&mut cfg.tolerances.int_tol, int_tol);
    }
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    equation: Option<EquationChoice>,
    /// Integrate the potential form (v) or the angle form (u) directly.
    #[arg(long, value_enum)]
    form: Option<FormChoice>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Record a state every this many steps.
    #[arg(long)]
    record_stride: Option<usize>,
    /// Also write recorded states to states.csv.
    #[arg(long)]
    snapshots: bool,
    /// Abort threshold on the moment magnitude.
    #[arg(long)]
    ramification_eps: Option<f64>,
}

impl EvolveArgs {
    fn apply(self, cfg: &mut RunConfig) {
        let Self {
            initial,
            n,
            equation,
            form,
            dt,
            t_end,
            record_stride,
            snapshots,
            ramification_eps,
        } = self;
        merge(&mut cfg.run.initial, initial);
        merge(&mut cfg.run.n, n);
        merge(&mut cfg.run.equation, equation);
        merge(&mut cfg.run.form, form);
        merge(&mut cfg.time.dt, dt);
        merge(&mut cfg.time.t_end, t_end);
        merge(&mut cfg.time.record_stride, record_stride);
        if snapshots {
            cfg.time.snapshots = true;
        }
        merge(&mut cfg.tolerances.ramification_eps, ramification_eps);
    }
}

#[derive(Args)]
struct DiscriminantArgs {
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    form: Option<FormChoice>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    record_stride: Option<usize>,
    #[arg(long)]
    lambda_min: Option<f64>,
    #[arg(long)]
    lambda_max: Option<f64>,
    #[arg(long)]
    lambda_count: Option<usize>,
    /// Hill integrator substeps per grid cell.
    #[arg(long)]
    substeps: Option<usize>,
}

impl DiscriminantArgs {
    fn apply(self, cfg: &mut RunConfig) {
        let Self {
            initial,
            n,
            form,
            dt,
            t_end,
            record_stride,
            lambda_min,
            lambda_max,
            lambda_count,
            substeps,
        } = self;
        merge(&mut cfg.run.initial, initial);
        merge(&mut cfg.run.n, n);
        merge(&mut cfg.run.form, form);
        merge(&mut cfg.time.dt, dt);
        merge(&mut cfg.time.t_end, t_end);
        merge(&mut cfg.time.record_stride, record_stride);
        merge(&mut cfg.lambda.min, lambda_min);
        merge(&mut cfg.lambda.max, lambda_max);
        merge(&mut cfg.lambda.count, lambda_count);
        merge(&mut cfg.tolerances.substeps, substeps);
    }
}

#[derive(Args)]
struct ScanArgs {
    /// Quadrature grid size for the corner family.
    #[arg(long)]
    scan_n: Option<usize>,
    #[arg(long)]
    k_max: Option<u32>,
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    r_count: Option<usize>,
    #[arg(long)]
    int_tol: Option<f64>,
}

impl ScanArgs {
    fn apply(self, cfg: &mut RunConfig) {
        let Self {
            scan_n,
            k_max,
            r_min,
            r_max,
            r_count,
            int_tol,
        } = self;
        merge(&mut cfg.scan.n, scan_n);
        merge(&mut cfg.scan.k_max, k_max);
        merge(&mut cfg.scan.r_min, r_min);
        merge(&mut cfg.scan.r_max, r_max);
        merge(&mut cfg.scan.r_count, r_count);
        merge(&mut cfg.tolerances.int_tol, int_tol);
    }
}

#[derive(Args)]
struct SurfaceArgs {
    /// Field source: "kink:shift=S", "nonsolution:", or "file:PATH".
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long)]
    x1: Option<f64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    t1: Option<f64>,
    #[arg(long)]
    nt: Option<usize>,
    /// Frame cross-consistency threshold.
    #[arg(long)]
    compat_threshold: Option<f64>,
}

impl SurfaceArgs {
    fn apply(self, cfg: &mut RunConfig) {
        let Self {
            source,
            x0,
            x1,
            nx,
            t0,
            t1,
            nt,
            compat_threshold,
        } = self;
        merge(&mut cfg.surface.source, source);
        merge(&mut cfg.surface.x0, x0);
        merge(&mut cfg.surface.x1, x1);
        merge(&mut cfg.surface.nx, nx);
        merge(&mut cfg.surface.t0, t0);
        merge(&mut cfg.surface.t1, t1);
        merge(&mut cfg.surface.nt, nt);
        merge(&mut cfg.tolerances.compat_threshold, compat_threshold);
    }
}

fn merge<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(dir) = cli.out_dir {
        cfg.run.out_dir = dir;
    }
    match cli.cmd {
        Cmd::Classify(a) => {
            a.apply(&mut cfg);
            cfg.validate()?;
            let dir = output::prepare_out_dir(&cfg)?;
            commands::classify(&cfg, &dir)
        }
        Cmd::Evolve(a) => {
            a.apply(&mut cfg);
            cfg.validate()?;
            let dir = output::prepare_out_dir(&cfg)?;
            commands::evolve(&cfg, &dir)
        }
        Cmd::Discriminant(a) => {
            a.apply(&mut cfg);
            cfg.validate()?;
            let dir = output::prepare_out_dir(&cfg)?;
            commands::discriminant(&cfg, &dir)
        }
        Cmd::ObstructionScan(a) => {
            a.apply(&mut cfg);
            cfg.validate()?;
            let dir = output::prepare_out_dir(&cfg)?;
            commands::obstruction_scan(&cfg, &dir)
        }
        Cmd::Surface(a) => {
            a.apply(&mut cfg);
            cfg.validate()?;
            let dir = output::prepare_out_dir(&cfg)?;
            commands::surface(&cfg, &dir)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return ExitCode::from(CliError::Parse(e.to_string()).report_to_stderr());
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => ExitCode::from(e.report_to_stderr()),
    }
}
