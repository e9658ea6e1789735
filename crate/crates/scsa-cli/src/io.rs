//! CSV interchange: every signal (input, output, noise record) is a two
//! column `t,y` file, full precision decimal.

use std::env;
use std::path::{Path, PathBuf};

use scsa_core::Signal;

use crate::error::{CliError, CliResult};

/// Environment variable naming the default output directory. Relative
/// output paths are resolved against it when set.
pub const OUT_DIR_ENV: &str = "SCSA_OUT_DIR";

/// Resolves an output path against [`OUT_DIR_ENV`] when relative.
pub fn resolve_out(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = env::var_os(OUT_DIR_ENV) {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

/// A signal together with the time axis it was read or generated with.
pub struct TimedSignal {
    pub times: Vec<f64>,
    pub signal: Signal<f64>,
}

impl TimedSignal {
    pub fn from_grid(t_start: f64, signal: Signal<f64>) -> Self {
        let delta = signal.delta();
        let times = (0..signal.len())
            .map(|i| t_start + i as f64 * delta)
            .collect();
        Self { times, signal }
    }

    /// Same time axis, new sample values.
    pub fn with_values(&self, signal: Signal<f64>) -> Self {
        Self {
            times: self.times.clone(),
            signal,
        }
    }
}

/// Reads a `t,y` CSV into a signal, deriving the sampling interval from the
/// time column and requiring it to be uniform.
pub fn read_signal_csv(path: &Path) -> CliResult<TimedSignal> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| map_csv_open(path, e))?;

    let headers = reader
        .headers()
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "y" {
        return Err(CliError::data(format!(
            "{}: expected header `t,y`, got `{}`",
            path.display(),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut times = Vec::new();
    let mut values = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        if record.len() != 2 {
            return Err(CliError::data(format!(
                "{}: row {}: expected 2 fields, got {}",
                path.display(),
                row + 2,
                record.len()
            )));
        }
        let parse = |field: &str, name: &str| {
            field.trim().parse::<f64>().map_err(|_| {
                CliError::data(format!(
                    "{}: row {}: bad {name} value `{field}`",
                    path.display(),
                    row + 2
                ))
            })
        };
        times.push(parse(&record[0], "t")?);
        values.push(parse(&record[1], "y")?);
    }

    if times.len() < 2 {
        return Err(CliError::data(format!(
            "{}: need at least 2 data rows",
            path.display()
        )));
    }
    let delta = times[1] - times[0];
    if !(delta.is_finite() && delta > 0.0) {
        return Err(CliError::data(format!(
            "{}: time column must be strictly increasing",
            path.display()
        )));
    }
    let span = times[times.len() - 1] - times[0];
    for w in times.windows(2) {
        if ((w[1] - w[0]) - delta).abs() > 1e-6 * span.abs().max(delta) {
            return Err(CliError::data(format!(
                "{}: time column is not uniformly spaced",
                path.display()
            )));
        }
    }

    let signal = Signal::new(values, delta)?;
    Ok(TimedSignal { times, signal })
}

/// Writes `t,y` rows at full precision (shortest round-trip decimal).
pub fn write_signal_csv(path: &Path, times: &[f64], values: &[f64]) -> CliResult<()> {
    debug_assert_eq!(times.len(), values.len());
    let path = resolve_out(path);
    let mut writer = csv::Writer::from_path(&path).map_err(|e| map_csv_open(&path, e))?;
    write_rows(&mut writer, &path, times, values)
}

fn write_rows(
    writer: &mut csv::Writer<std::fs::File>,
    path: &Path,
    times: &[f64],
    values: &[f64],
) -> CliResult<()> {
    let io_err = |e: csv::Error| CliError::io(format!("{}: {e}", path.display()));
    writer.write_record(["t", "y"]).map_err(io_err)?;
    for (t, y) in times.iter().zip(values) {
        writer
            .write_record([t.to_string(), y.to_string()])
            .map_err(io_err)?;
    }
    writer
        .flush()
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn map_csv_open(path: &Path, e: csv::Error) -> CliError {
    // Distinguish filesystem failures from malformed content.
    if e.is_io_error() {
        CliError::io(format!("{}: {e}", path.display()))
    } else {
        CliError::data(format!("{}: {e}", path.display()))
    }
}
