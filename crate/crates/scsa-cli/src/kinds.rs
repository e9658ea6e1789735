//! Named signal kinds shared by `gen` and `bench`.

use scsa_core::{
    gaussian_peaks, standard_test_signal, GaussianPeak, GaussianPeakSpec, Signal, TestSignalKind,
};

use crate::error::{CliError, CliResult};
use crate::io::TimedSignal;

/// All kinds accepted on the command line. `sing` is an alias for
/// `heavisine`.
pub const KNOWN_KINDS: &[&str] = &[
    "gaussian",
    "five-peak",
    "blocks",
    "bumps",
    "doppler",
    "heavisine",
    "piecewise-regular",
    "sing",
];

/// Builds the clean signal for a kind.
///
/// Gaussian kinds sample an explicit grid: `gaussian` defaults to the
/// single pulse (amplitude 2 at t = 5, width 15) on `t ∈ [-70, 90)`, and
/// `five-peak` to the built-in five-peak demo on `t ∈ [0, 128)`; `t_start`,
/// `delta` and `peaks` override those defaults. The benchmark waveforms
/// ignore the grid arguments and use `t_i = (i+1)/n`.
pub fn build_clean(
    kind: &str,
    n: usize,
    t_start: Option<f64>,
    delta: Option<f64>,
    peaks: Option<&str>,
) -> CliResult<TimedSignal> {
    match kind {
        "gaussian" => {
            let spec = match peaks {
                Some(text) => parse_peaks(text)?,
                None => GaussianPeakSpec::single_pulse(),
            };
            let t0 = t_start.unwrap_or(-70.0);
            let dt = delta.unwrap_or(160.0 / n as f64);
            let signal = gaussian_peaks(&spec, n, t0, dt)?;
            Ok(TimedSignal::from_grid(t0, signal))
        }
        "five-peak" => {
            let spec = match peaks {
                Some(text) => parse_peaks(text)?,
                None => GaussianPeakSpec::five_peaks(),
            };
            let t0 = t_start.unwrap_or(0.0);
            let dt = delta.unwrap_or(128.0 / n as f64);
            let signal = gaussian_peaks(&spec, n, t0, dt)?;
            Ok(TimedSignal::from_grid(t0, signal))
        }
        other => {
            let kind = match other {
                "blocks" => TestSignalKind::Blocks,
                "bumps" => TestSignalKind::Bumps,
                "doppler" => TestSignalKind::Doppler,
                "piecewise-regular" => TestSignalKind::PiecewiseRegular,
                "heavisine" | "sing" => TestSignalKind::HeaviSine,
                unknown => {
                    return Err(CliError::usage(format!(
                        "unknown signal kind `{unknown}` (expected one of {})",
                        KNOWN_KINDS.join(", ")
                    )))
                }
            };
            let signal: Signal<f64> = standard_test_signal(kind, n)?;
            let delta = signal.delta();
            Ok(TimedSignal::from_grid(delta, signal))
        }
    }
}

/// Parses a peak list `A:u:sigma[,A:u:sigma...]`.
pub fn parse_peaks(text: &str) -> CliResult<GaussianPeakSpec<f64>> {
    let mut peaks = Vec::new();
    for part in text.split(',') {
        let fields: Vec<&str> = part.split(':').collect();
        if fields.len() != 3 {
            return Err(CliError::usage(format!(
                "bad peak `{part}`: expected A:position:width"
            )));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("bad peak number `{s}`")))
        };
        peaks.push(GaussianPeak {
            amplitude: parse(fields[0])?,
            position: parse(fields[1])?,
            width: parse(fields[2])?,
        });
    }
    Ok(GaussianPeakSpec::new(peaks)?)
}
