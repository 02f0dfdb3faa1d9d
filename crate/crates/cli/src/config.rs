//! Run configuration: defaults, TOML file layer, environment, flag overrides.
//!
//! Precedence, lowest to highest: built-in defaults, `--config` file,
//! `GORDON_OUT_DIR` (output directory only), command-line flags. The fully
//! resolved configuration is written into the output directory as
//! `resolved_config.toml` before any command runs, so every artifact set
//! carries its own provenance.

use std::path::{Path, PathBuf};

use gordon_core::evolution::Equation;
use gordon_core::tolerances::{CLASSIFY_EPS, COMPAT_THRESHOLD, HILL_SUBSTEPS, RAMIFICATION_EPS};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable overriding `run.out_dir` (and nothing else).
pub const OUT_DIR_ENV: &str = "GORDON_OUT_DIR";

/// Strict order with NaN rejected (NaN compares false either way).
fn ordered(lo: f64, hi: f64) -> bool {
    hi > lo
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EquationChoice {
    SineGordon,
    SinhGordon,
}

impl From<EquationChoice> for Equation {
    fn from(c: EquationChoice) -> Equation {
        match c {
            EquationChoice::SineGordon => Equation::SineGordon,
            EquationChoice::SinhGordon => Equation::SinhGordon,
        }
    }
}

/// Which state variable a trajectory integrates: the normalized potential
/// `v` or the angle field `u` directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FormChoice {
    VForm,
    UForm,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    /// Periodic grid size (even, at least 8).
    pub n: usize,
    pub equation: EquationChoice,
    pub form: FormChoice,
    /// Initial-condition expression; see the `initial` module.
    pub initial: String,
    pub out_dir: PathBuf,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            n: 256,
            equation: EquationChoice::SineGordon,
            form: FormChoice::VForm,
            initial: "cosmode:a=0.1,n=1,k=0".into(),
            out_dir: PathBuf::from("gordon-out"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSection {
    pub dt: f64,
    pub t_end: f64,
    /// States are recorded every this many steps; diagnostics every step.
    pub record_stride: usize,
    /// Write recorded states to `states.csv`.
    pub snapshots: bool,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 1.0,
            record_stride: 100,
            snapshots: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LambdaSection {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Default for LambdaSection {
    fn default() -> Self {
        Self {
            min: -5.0,
            max: 40.0,
            count: 10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSection {
    /// Fold-classification tolerance on the moment.
    pub classify_eps: f64,
    /// Abort threshold on the moment magnitude along sine flows.
    pub ramification_eps: f64,
    /// Constraint-manifold admission gate on the discrete sine integral.
    /// Wider than the library's exact-quadrature default because sampled
    /// inputs (corner families, files) carry O(h^2) quadrature residue.
    pub int_tol: f64,
    /// Hill integrator substeps per grid cell.
    pub substeps: usize,
    /// Frame cross-consistency threshold for surface reconstruction.
    pub compat_threshold: f64,
}

impl Default for ToleranceSection {
    fn default() -> Self {
        Self {
            classify_eps: CLASSIFY_EPS,
            ramification_eps: RAMIFICATION_EPS,
            int_tol: 1e-6,
            substeps: HILL_SUBSTEPS,
            compat_threshold: COMPAT_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSection {
    /// Grid size for the corner-family quadrature. Finer than `run.n`
    /// because off-node corners leave O(h^2) constraint residue.
    pub n: usize,
    pub k_max: u32,
    pub r_min: f64,
    pub r_max: f64,
    pub r_count: usize,
}

impl Default for ScanSection {
    fn default() -> Self {
        Self {
            n: 16384,
            k_max: 3,
            r_min: 0.05,
            r_max: 0.95,
            r_count: 19,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurfaceSection {
    /// Angle-field source expression; see the `initial` module.
    pub source: String,
    pub x0: f64,
    pub x1: f64,
    pub nx: usize,
    pub t0: f64,
    pub t1: f64,
    pub nt: usize,
    pub x_periodic: bool,
}

impl Default for SurfaceSection {
    fn default() -> Self {
        Self {
            source: "kink:shift=0".into(),
            x0: -3.0,
            x1: -1.0,
            nx: 65,
            t0: 0.0,
            t1: 0.5,
            nt: 33,
            x_periodic: false,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub run: RunSection,
    pub time: TimeSection,
    pub lambda: LambdaSection,
    pub tolerances: ToleranceSection,
    pub scan: ScanSection,
    pub surface: SurfaceSection,
}

impl RunConfig {
    /// Defaults, then the TOML file (when given), then `GORDON_OUT_DIR`.
    /// Flag overrides are applied by the caller afterwards.
    pub fn load(file: Option<&Path>) -> Result<Self, CliError> {
        let mut cfg = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Parse(format!("cannot read config {}: {e}", path.display()))
                })?;
                toml::from_str(&text)
                    .map_err(|e| CliError::Parse(format!("config {}: {e}", path.display())))?
            }
            None => Self::default(),
        };
        if let Some(dir) = std::env::var_os(OUT_DIR_ENV) {
            cfg.run.out_dir = PathBuf::from(dir);
        }
        Ok(cfg)
    }

    /// Basic range validation shared by all subcommands.
    ///
    /// NaN fails every comparison here, so it can never validate.
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.time.dt > 0.0 && self.time.t_end > 0.0) {
            return Err(CliError::Parse(format!(
                "dt and t_end must be positive, got dt = {}, t_end = {}",
                self.time.dt, self.time.t_end
            )));
        }
        if self.time.record_stride == 0 {
            return Err(CliError::Parse("record_stride must be positive".into()));
        }
        if self.lambda.count == 0 {
            return Err(CliError::Parse("lambda.count must be positive".into()));
        }
        if self.lambda.count > 1 && !ordered(self.lambda.min, self.lambda.max) {
            return Err(CliError::Parse(format!(
                "lambda range is empty: [{}, {}]",
                self.lambda.min, self.lambda.max
            )));
        }
        if self.scan.r_count == 0 || self.scan.k_max == 0 {
            return Err(CliError::Parse(
                "scan.r_count and scan.k_max must be positive".into(),
            ));
        }
        if self.scan.r_count > 1 && !ordered(self.scan.r_min, self.scan.r_max) {
            return Err(CliError::Parse(format!(
                "scan r range is empty: [{}, {}]",
                self.scan.r_min, self.scan.r_max
            )));
        }
        if self.surface.nx < 5 || self.surface.nt < 5 {
            return Err(CliError::Parse(format!(
                "surface patch must be at least 5x5, got {}x{}",
                self.surface.nx, self.surface.nt
            )));
        }
        if !(self.surface.x1 > self.surface.x0 && self.surface.t1 > self.surface.t0) {
            return Err(CliError::Parse(
                "surface window must have positive extent".into(),
            ));
        }
        Ok(())
    }

    /// Inclusive lambda grid, `count` points from `min` to `max`.
    pub fn lambda_grid(&self) -> Vec<f64> {
        let (lo, hi, count) = (self.lambda.min, self.lambda.max, self.lambda.count);
        if count == 1 {
            return vec![lo];
        }
        (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect()
    }
}
