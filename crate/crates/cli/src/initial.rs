//! Initial-condition and surface-source expressions.
//!
//! Grammar: `name:key=value,key=value` with a fixed key set per name.
//!
//! State expressions (for `classify`, `evolve`, `discriminant`):
//!
//! * `const:C` — constant angle `u = C` (as potential: `v = C`).
//! * `linear:k=K` — pure winding `u = 2πKx` (as potential: `v = πK`).
//! * `cosmode:a=A,n=N,k=K` — single-mode potential `v = πK + A·cos(2πNx)`;
//!   the angle form is its doubled antiderivative `2πKx + A·sin(2πNx)/(πN)`.
//! * `wfam:k=K,r=R` — the piecewise-linear corner family member.
//! * `file:PATH` — one sample per line; the line count fixes the grid size.
//!
//! Surface sources (for `surface`):
//!
//! * `kink:shift=S` — the closed-form traveling kink `4·atan(exp(x+t+S))`.
//! * `nonsolution:` — a smooth in-range field that solves nothing; negative
//!   control for the compatibility certificate.
//! * `file:PATH` — comma-separated rows, one time level per line.

use std::path::{Path, PathBuf};

use gordon_core::phase::{sing_family_w, SingFamilyParams};
use gordon_core::spectral::{GridFunction, PeriodicGrid, WindingFunction};

use crate::CliError;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub enum StateExpr {
    Const { c: f64 },
    Linear { k: i64 },
    CosMode { a: f64, n: u32, k: i64 },
    WFamily { k: u32, r: f64 },
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceSource {
    Kink { shift: f64 },
    NonSolution,
    File { path: PathBuf },
}

/// `key=value` pairs after the expression name. Every key must be consumed
/// exactly once; leftovers are spelling mistakes, not extensions.
struct Params<'a> {
    expr: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(expr: &'a str, rest: &'a str) -> Result<Self, CliError> {
        let mut pairs = Vec::new();
        for item in rest.split(',').filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                CliError::Parse(format!("{expr}: expected key=value, got {item:?}"))
            })?;
            pairs.push((key.trim(), value.trim()));
        }
        Ok(Self { expr, pairs })
    }

    fn take<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        let Some(i) = self.pairs.iter().position(|(k, _)| *k == key) else {
            return Ok(None);
        };
        let (_, raw) = self.pairs.remove(i);
        raw.parse()
            .map(Some)
            .map_err(|_| CliError::Parse(format!("{}: cannot parse {key}={raw:?}", self.expr)))
    }

    fn require<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, CliError> {
        self.take(key)?
            .ok_or_else(|| CliError::Parse(format!("{}: missing required key {key}", self.expr)))
    }

    fn finish(self) -> Result<(), CliError> {
        if let Some((key, _)) = self.pairs.first() {
            return Err(CliError::Parse(format!(
                "{}: unknown key {key:?}",
                self.expr
            )));
        }
        Ok(())
    }
}

pub fn parse_state(expr: &str) -> Result<StateExpr, CliError> {
    let (name, rest) = expr.split_once(':').unwrap_or((expr, ""));
    match name {
        "const" => {
            let c = rest
                .trim()
                .parse()
                .map_err(|_| CliError::Parse(format!("const: cannot parse value {rest:?}")))?;
            Ok(StateExpr::Const { c })
        }
        "linear" => {
            let mut p = Params::parse(expr, rest)?;
            let k = p.require("k")?;
            p.finish()?;
            Ok(StateExpr::Linear { k })
        }
        "cosmode" => {
            let mut p = Params::parse(expr, rest)?;
            let a = p.require("a")?;
            let n: u32 = p.require("n")?;
            let k = p.take("k")?.unwrap_or(0);
            p.finish()?;
            if n == 0 {
                return Err(CliError::Parse("cosmode: n must be positive".into()));
            }
            Ok(StateExpr::CosMode { a, n, k })
        }
        "wfam" => {
            let mut p = Params::parse(expr, rest)?;
            let k = p.require("k")?;
            let r = p.require("r")?;
            p.finish()?;
            Ok(StateExpr::WFamily { k, r })
        }
        "file" => Ok(StateExpr::File {
            path: PathBuf::from(rest),
        }),
        other => Err(CliError::Parse(format!(
            "unknown initial-condition form {other:?} in {expr:?}"
        ))),
    }
}

pub fn parse_surface_source(expr: &str) -> Result<SurfaceSource, CliError> {
    let (name, rest) = expr.split_once(':').unwrap_or((expr, ""));
    match name {
        "kink" => {
            let mut p = Params::parse(expr, rest)?;
            let shift = p.take("shift")?.unwrap_or(0.0);
            p.finish()?;
            Ok(SurfaceSource::Kink { shift })
        }
        "nonsolution" => {
            Params::parse(expr, rest)?.finish()?;
            Ok(SurfaceSource::NonSolution)
        }
        "file" => Ok(SurfaceSource::File {
            path: PathBuf::from(rest),
        }),
        other => Err(CliError::Parse(format!(
            "unknown surface source {other:?} in {expr:?}"
        ))),
    }
}

fn read_samples(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read samples {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        values.push(line.parse().map_err(|_| {
            CliError::Parse(format!(
                "{}:{}: not a number: {line:?}",
                path.display(),
                lineno + 1
            ))
        })?);
    }
    Ok(values)
}

/// Grid for the expression: files carry their own size, everything else
/// samples on `n` nodes.
fn expr_grid(
    expr: &StateExpr,
    n: usize,
    samples: Option<&[f64]>,
) -> Result<PeriodicGrid, CliError> {
    let n = match (expr, samples) {
        (StateExpr::File { .. }, Some(v)) => v.len(),
        _ => n,
    };
    PeriodicGrid::new(n).map_err(CliError::Core)
}

/// The angle-form state `u` for the expression.
pub fn build_u(expr: &StateExpr, n: usize) -> Result<WindingFunction, CliError> {
    match expr {
        StateExpr::Const { c } => {
            let g = expr_grid(expr, n, None)?;
            Ok(WindingFunction::new(0, GridFunction::constant(g, *c)))
        }
        StateExpr::Linear { k } => {
            let g = expr_grid(expr, n, None)?;
            Ok(WindingFunction::new(*k, GridFunction::zeros(g)))
        }
        StateExpr::CosMode { a, n: mode, k } => {
            let g = expr_grid(expr, n, None)?;
            let m = f64::from(*mode);
            let periodic = GridFunction::from_fn(g, |x| {
                a * (TWO_PI * m * x).sin() / (std::f64::consts::PI * m)
            });
            Ok(WindingFunction::new(*k, periodic))
        }
        StateExpr::WFamily { k, r } => {
            let g = expr_grid(expr, n, None)?;
            let params = SingFamilyParams::new(*k, *r).map_err(CliError::Core)?;
            Ok(sing_family_w(params, g))
        }
        StateExpr::File { path } => {
            let values = read_samples(path)?;
            let g = expr_grid(expr, n, Some(&values))?;
            Ok(WindingFunction::from_periodic(GridFunction::from_values(
                g, values,
            )))
        }
    }
}

/// The potential-form state `v` for the expression.
pub fn build_v(expr: &StateExpr, n: usize) -> Result<GridFunction, CliError> {
    match expr {
        StateExpr::Const { c } => {
            let g = expr_grid(expr, n, None)?;
            Ok(GridFunction::constant(g, *c))
        }
        StateExpr::Linear { k } => {
            let g = expr_grid(expr, n, None)?;
            Ok(GridFunction::constant(g, std::f64::consts::PI * *k as f64))
        }
        StateExpr::CosMode { a, n: mode, k } => {
            let g = expr_grid(expr, n, None)?;
            let m = f64::from(*mode);
            let mean = std::f64::consts::PI * *k as f64;
            Ok(GridFunction::from_fn(g, |x| {
                mean + a * (TWO_PI * m * x).cos()
            }))
        }
        StateExpr::WFamily { .. } => {
            // Half the spectral derivative of the sampled corner function.
            // Legitimate but rough: Gibbs ringing at the corners.
            let w = build_u(expr, n)?;
            Ok(w.derivative().scaled(0.5))
        }
        StateExpr::File { path } => {
            let values = read_samples(path)?;
            let g = expr_grid(expr, n, Some(&values))?;
            Ok(GridFunction::from_values(g, values))
        }
    }
}

/// Comma-separated rows, one time level per line; all rows equal length.
/// Returns `(nx, nt, values)` in the patch's row-major time-level order.
pub fn read_surface_rows(path: &Path) -> Result<(usize, usize, Vec<f64>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read field {}: {e}", path.display())))?;
    let mut nx = 0usize;
    let mut nt = 0usize;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| {
                CliError::Parse(format!(
                    "{}:{}: row is not comma-separated numbers",
                    path.display(),
                    lineno + 1
                ))
            })?;
        if nt == 0 {
            nx = row.len();
        } else if row.len() != nx {
            return Err(CliError::Parse(format!(
                "{}:{}: row length {} differs from {}",
                path.display(),
                lineno + 1,
                row.len(),
                nx
            )));
        }
        nt += 1;
        values.extend_from_slice(&row);
    }
    if nt == 0 {
        return Err(CliError::Parse(format!("{}: no data rows", path.display())));
    }
    Ok((nx, nt, values))
}
