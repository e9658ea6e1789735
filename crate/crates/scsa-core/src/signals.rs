//! Synthetic test signals and noise injection.
//!
//! Gaussian multi-peak signals cover the pulse-shaped case; the classic
//! wavelet-benchmark waveforms (blocks, bumps, doppler, heavisine, and a
//! piecewise-regular composite) cover regular and irregular shapes. Noise
//! enters either as percent-of-amplitude white Gaussian noise or as a
//! two-record mixture scaled to hit a target input SNR.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::signal::Signal;

/// One Gaussian bump: `A · exp(-(t-u)² / (2σ²))`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianPeak<T> {
    pub amplitude: T,
    pub position: T,
    pub width: T,
}

/// A sum of Gaussian bumps.
#[derive(Debug, Clone)]
pub struct GaussianPeakSpec<T> {
    peaks: Vec<GaussianPeak<T>>,
}

impl<T: Scalar> GaussianPeakSpec<T> {
    pub fn new(peaks: Vec<GaussianPeak<T>>) -> Result<Self> {
        if peaks.is_empty() {
            return Err(Error::InvalidParams("need at least one peak".into()));
        }
        for (i, p) in peaks.iter().enumerate() {
            if !(p.width.is_finite() && p.width > T::zero()) {
                return Err(Error::InvalidParams(format!(
                    "peak {i}: width must be positive, got {}",
                    p.width
                )));
            }
            if !(p.amplitude.is_finite() && p.amplitude > T::zero()) {
                return Err(Error::InvalidParams(format!(
                    "peak {i}: amplitude must be positive, got {}",
                    p.amplitude
                )));
            }
            if !p.position.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "peak {i}: non-finite position"
                )));
            }
        }
        Ok(Self { peaks })
    }

    pub fn peaks(&self) -> &[GaussianPeak<T>] {
        &self.peaks
    }

    /// The single pulse used throughout the peak-preservation experiments:
    /// amplitude 2, position 5, width 15.
    pub fn single_pulse() -> Self {
        Self {
            peaks: vec![GaussianPeak {
                amplitude: T::from_config(2.0),
                position: T::from_config(5.0),
                width: T::from_config(15.0),
            }],
        }
    }

    /// Built-in five-peak demo signal: varied heights and widths, with the
    /// second/third and fourth/fifth pairs overlapping. Intended for the
    /// grid `t ∈ [0, 128)`.
    pub fn five_peaks() -> Self {
        let raw = [
            (1.0, 32.0, 4.0),
            (2.0, 50.0, 7.0),
            (1.5, 58.0, 3.0),
            (0.8, 76.0, 2.5),
            (1.2, 86.0, 6.0),
        ];
        Self {
            peaks: raw
                .iter()
                .map(|&(a, u, s)| GaussianPeak {
                    amplitude: T::from_config(a),
                    position: T::from_config(u),
                    width: T::from_config(s),
                })
                .collect(),
        }
    }
}

/// Samples a sum of Gaussian bumps on the uniform grid
/// `t_i = t_start + i·delta`, `i = 0..n`.
pub fn gaussian_peaks<T: Scalar>(
    spec: &GaussianPeakSpec<T>,
    n: usize,
    t_start: T,
    delta: T,
) -> Result<Signal<T>> {
    if !(delta.is_finite() && delta > T::zero()) {
        return Err(Error::InvalidParams(format!(
            "delta must be positive, got {delta}"
        )));
    }
    if !t_start.is_finite() {
        return Err(Error::InvalidParams("t_start must be finite".into()));
    }
    let two = T::from_config(2.0);
    let samples = (0..n)
        .map(|i| {
            let t = t_start + T::from_count(i) * delta;
            spec.peaks
                .iter()
                .map(|p| {
                    let z = (t - p.position) / p.width;
                    p.amplitude * (-z * z / two).exp()
                })
                .fold(T::zero(), |a, v| a + v)
        })
        .collect();
    Signal::new(samples, delta)
}

/// Canonical benchmark waveform families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestSignalKind {
    Doppler,
    Blocks,
    Bumps,
    PiecewiseRegular,
    HeaviSine,
}

/// Generates a benchmark waveform with `n` samples on `t_i = (i+1)/n`,
/// scaled to unit maximum absolute amplitude, with `delta = 1/n`.
///
/// Blocks, bumps, doppler and heavisine follow the usual closed forms from
/// the wavelet-shrinkage literature. The piecewise-regular signal is a
/// deterministic composite of smooth polynomial and sinusoid segments
/// separated by jump discontinuities.
pub fn standard_test_signal<T: Scalar>(kind: TestSignalKind, n: usize) -> Result<Signal<T>> {
    if n < 8 {
        return Err(Error::InvalidParams(format!(
            "need at least 8 samples, got {n}"
        )));
    }
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let t = (i + 1) as f64 / n as f64;
            match kind {
                TestSignalKind::Doppler => doppler(t),
                TestSignalKind::Blocks => blocks(t),
                TestSignalKind::Bumps => bumps(t),
                TestSignalKind::PiecewiseRegular => piecewise_regular(t),
                TestSignalKind::HeaviSine => heavisine(t),
            }
        })
        .collect();
    let max_abs = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if max_abs == 0.0 {
        return Err(Error::NumericalFailure(
            "waveform is identically zero".into(),
        ));
    }
    let samples = values
        .iter()
        .map(|&v| T::from_config(v / max_abs))
        .collect();
    Signal::new(samples, T::one() / T::from_count(n))
}

const JUMP_POSITIONS: [f64; 11] = [
    0.1, 0.13, 0.15, 0.23, 0.25, 0.4, 0.44, 0.65, 0.76, 0.78, 0.81,
];

fn blocks(t: f64) -> f64 {
    const H: [f64; 11] = [4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2];
    JUMP_POSITIONS
        .iter()
        .zip(H)
        .map(|(&tj, h)| h * (1.0 + (t - tj).signum()) / 2.0)
        .sum()
}

fn bumps(t: f64) -> f64 {
    const H: [f64; 11] = [4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2];
    const W: [f64; 11] = [
        0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005,
    ];
    JUMP_POSITIONS
        .iter()
        .zip(H.iter().zip(W))
        .map(|(&tj, (&h, w))| h * (1.0 + ((t - tj) / w).abs()).powi(-4))
        .sum()
}

fn heavisine(t: f64) -> f64 {
    4.0 * (4.0 * std::f64::consts::PI * t).sin() - (t - 0.3).signum() - (0.72 - t).signum()
}

fn doppler(t: f64) -> f64 {
    let eps = 0.05;
    (t * (1.0 - t)).max(0.0).sqrt() * (2.0 * std::f64::consts::PI * (1.0 + eps) / (t + eps)).sin()
}

fn piecewise_regular(t: f64) -> f64 {
    // Smooth segments with jumps at 0.18, 0.42, 0.6, 0.85.
    if t < 0.18 {
        let u = t / 0.18;
        3.0 * u * u * (3.0 - 2.0 * u)
    } else if t < 0.42 {
        let u = (t - 0.18) / 0.24;
        -1.5 + 2.0 * (2.5 * std::f64::consts::PI * u).sin() * (1.0 - 0.5 * u)
    } else if t < 0.6 {
        let u = (t - 0.42) / 0.18;
        2.8 - 3.5 * u * u
    } else if t < 0.85 {
        let u = (t - 0.6) / 0.25;
        -2.2 + 1.2 * (2.0 * std::f64::consts::PI * u).cos() + 2.4 * u
    } else {
        let u = (t - 0.85) / 0.15;
        2.0 * (1.0 - u) * (1.0 - u) - 0.5
    }
}

/// A noise model to corrupt a clean signal with.
#[derive(Debug, Clone)]
pub enum NoiseSpec<T> {
    /// Seeded white Gaussian noise with `σ = level/100 · max|y|`.
    WhitePercent { level: T, seed: u64 },
    /// Weighted sum of two recorded noise processes.
    Mixture {
        record_a: Signal<T>,
        record_b: Signal<T>,
        weights: MixtureWeights<T>,
    },
}

/// How the two mixture records are weighted.
#[derive(Debug, Clone, Copy)]
pub enum MixtureWeights<T> {
    /// Equal weights on the power-normalized records, scaled so the input
    /// SNR hits this target exactly (deterministic, seed-free).
    TargetSnrDb(T),
    /// Explicit weights on the raw records.
    Explicit { k1: T, k2: T },
}

impl<T: Scalar> NoiseSpec<T> {
    /// Corrupts `y` according to this model.
    pub fn apply(&self, y: &Signal<T>) -> Result<Signal<T>> {
        match self {
            NoiseSpec::WhitePercent { level, seed } => add_white_noise(y, *level, *seed),
            NoiseSpec::Mixture {
                record_a,
                record_b,
                weights,
            } => match *weights {
                MixtureWeights::TargetSnrDb(target) => {
                    Ok(mix_noise(y, record_a, record_b, target)?.0)
                }
                MixtureWeights::Explicit { k1, k2 } => {
                    mix_noise_with_weights(y, record_a, record_b, k1, k2)
                }
            },
        }
    }
}

/// Adds seeded white Gaussian noise with standard deviation
/// `level_percent/100 · max|y|`.
pub fn add_white_noise<T: Scalar>(y: &Signal<T>, level_percent: T, seed: u64) -> Result<Signal<T>> {
    if !(level_percent.is_finite()
        && level_percent > T::zero()
        && level_percent <= T::from_config(100.0))
    {
        return Err(Error::InvalidParams(format!(
            "noise level must lie in (0, 100] percent, got {level_percent}"
        )));
    }
    let sigma = level_percent / T::from_config(100.0) * y.max_abs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = y
        .samples()
        .iter()
        .map(|&v| {
            let z: f64 = rng.sample(StandardNormal);
            v + sigma * T::from_config(z)
        })
        .collect();
    y.with_samples(samples)
}

/// Corrupts `y` with the mixture `n = k·(a' + b')` of two power-normalized
/// noise records, with `k` chosen so the input SNR
/// `10·log₁₀(Σy² / Σn²)` equals `target_snr_db` exactly.
///
/// Returns the corrupted signal and the weights applied to the normalized
/// records (equal by construction; see [`mix_noise_with_weights`] to set
/// them explicitly).
pub fn mix_noise<T: Scalar>(
    y: &Signal<T>,
    a: &Signal<T>,
    b: &Signal<T>,
    target_snr_db: T,
) -> Result<(Signal<T>, T, T)> {
    if !target_snr_db.is_finite() {
        return Err(Error::InvalidParams(format!(
            "target SNR must be finite, got {target_snr_db} dB"
        )));
    }
    let n = y.len();
    let a_norm = normalized_record(a, n, "record a")?;
    let b_norm = normalized_record(b, n, "record b")?;

    let signal_power = sum_sq(y.samples());
    if signal_power <= T::zero() {
        return Err(Error::DegenerateInput("clean signal has zero power".into()));
    }
    let mixed: Vec<T> = a_norm.iter().zip(&b_norm).map(|(&x, &z)| x + z).collect();
    let mix_power = sum_sq(&mixed);
    if mix_power <= T::zero() {
        return Err(Error::DegenerateInput(
            "noise records cancel to zero power".into(),
        ));
    }
    let ratio = T::from_config(10.0).powf(target_snr_db / T::from_config(10.0));
    let k = (signal_power / (ratio * mix_power)).sqrt();

    let samples = y
        .samples()
        .iter()
        .zip(&mixed)
        .map(|(&v, &m)| v + k * m)
        .collect();
    Ok((y.with_samples(samples)?, k, k))
}

/// Mixture corruption with explicit weights on the raw (un-normalized)
/// records: `n = k1·a + k2·b`.
pub fn mix_noise_with_weights<T: Scalar>(
    y: &Signal<T>,
    a: &Signal<T>,
    b: &Signal<T>,
    k1: T,
    k2: T,
) -> Result<Signal<T>> {
    if !(k1.is_finite() && k2.is_finite()) {
        return Err(Error::InvalidParams("weights must be finite".into()));
    }
    let n = y.len();
    if a.len() < n || b.len() < n {
        return Err(Error::InvalidParams(
            "noise records must cover the signal length".into(),
        ));
    }
    let samples = (0..n)
        .map(|i| y.samples()[i] + k1 * a.samples()[i] + k2 * b.samples()[i])
        .collect();
    y.with_samples(samples)
}

/// Truncates a record to `n` samples and scales it to unit mean-square power.
fn normalized_record<T: Scalar>(r: &Signal<T>, n: usize, label: &str) -> Result<Vec<T>> {
    if r.len() < n {
        return Err(Error::InvalidParams(format!(
            "{label} has {} samples, need {n}",
            r.len()
        )));
    }
    let head = &r.samples()[..n];
    let power = sum_sq(head) / T::from_count(n);
    if power <= T::zero() {
        return Err(Error::DegenerateInput(format!("{label} has zero power")));
    }
    let inv = T::one() / power.sqrt();
    Ok(head.iter().map(|&v| v * inv).collect())
}

fn sum_sq<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).fold(T::zero(), |a, x| a + x)
}
