//! Deterministic artifact writers.
//!
//! Every float in a CSV cell goes through [`fmt_float`], so an identical
//! configuration yields byte-identical files. JSON values are serialized by
//! `serde_json` (shortest round-trip form, equally deterministic); nothing
//! here reads clocks or randomness.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// Fixed scientific format, 12 fractional digits; `-0` normalized so the
/// same value never prints two ways.
pub fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.12e}")
}

/// RFC-4180-style CSV: header row, comma separator, `\n` line ends, fields
/// quoted only when they contain a comma, quote, or newline.
pub struct CsvFile {
    path: PathBuf,
    buf: String,
    columns: usize,
}

impl CsvFile {
    pub fn create(path: PathBuf, header: &[&str]) -> Self {
        let mut file = Self {
            path,
            buf: String::new(),
            columns: header.len(),
        };
        file.push_row(header.iter().map(|s| s.to_string()));
        file
    }

    pub fn push_row(&mut self, fields: impl IntoIterator<Item = String>) {
        let mut count = 0;
        for (i, field) in fields.into_iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            if field.contains([',', '"', '\n']) {
                let escaped = field.replace('"', "\"\"");
                let _ = write!(self.buf, "\"{escaped}\"");
            } else {
                self.buf.push_str(&field);
            }
            count += 1;
        }
        assert_eq!(count, self.columns, "row width mismatch in {:?}", self.path);
        self.buf.push('\n');
    }

    pub fn finish(self) -> Result<PathBuf, CliError> {
        fs::write(&self.path, self.buf.as_bytes()).map_err(CliError::Io)?;
        Ok(self.path)
    }
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Parse(format!("report serialization: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(CliError::Io)
}

/// Create the output directory and record the resolved configuration in it.
pub fn prepare_out_dir(cfg: &crate::config::RunConfig) -> Result<PathBuf, CliError> {
    let dir = cfg.run.out_dir.clone();
    fs::create_dir_all(&dir).map_err(CliError::Io)?;
    let text = toml::to_string_pretty(cfg)
        .map_err(|e| CliError::Parse(format!("config serialization: {e}")))?;
    fs::write(dir.join("resolved_config.toml"), text).map_err(CliError::Io)?;
    Ok(dir)
}

/// JSON-safe float: non-finite values become `null` rather than poisoning
/// the report.
pub fn json_float(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// One line to stdout so interactive runs show where the artifacts went.
pub fn announce(dir: &Path, files: &[&str]) {
    let mut line = format!("wrote {}", dir.display());
    for (i, f) in files.iter().enumerate() {
        line.push_str(if i == 0 { ": " } else { ", " });
        line.push_str(f);
    }
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{line}");
}
