//! Selection of the semi-classical parameter `h`.
//!
//! Two cost functions are available for scoring a reconstruction `y_h` of a
//! noisy input `y_δ`:
//!
//! - curvature cost: `J̄ = Σᵢ (y_δ(tᵢ) - y_h(tᵢ))² + μ·Σᵢ k(tᵢ)` with `k`
//!   the discrete curvature of the reconstruction, and `μ` either given or
//!   auto-scaled from the noisy input so both terms share an order of
//!   magnitude;
//! - peak/SNR cost: `J = Σᵢ ||y_δ - y_h||²_{peak i} + α/SNR` with the
//!   residual restricted to known peak regions and the SNR estimated from a
//!   known noise-dominant interval.
//!
//! [`scan_h`] evaluates the configured cost on a geometric grid of `h`
//! values and returns the minimizer together with the full cost trace.

use std::ops::Range;

use num_traits::Float;
use rayon::prelude::*;

use crate::curvature::total_curvature;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, SpectralScalar};
use crate::signal::Signal;
use crate::spectral::scsa_transform;

/// Default number of grid points for an h scan.
pub const DEFAULT_H_GRID_COUNT: usize = 50;

/// Relative cost window within which grid points count as tied.
const TIE_REL_TOL: f64 = 1e-9;

/// Smoothing weight for the curvature cost: fixed, or derived from the
/// noisy input as `max|y_δ| / Σ k(y_δ) · 10^ν`.
#[derive(Debug, Clone, Copy)]
pub enum CScsaMu<T> {
    Direct(T),
    Auto { nu: i32 },
}

/// Peak/SNR cost parameters. Index ranges are half-open and must lie
/// within the signal.
#[derive(Debug, Clone)]
pub struct AlphaScsaConfig<T> {
    pub alpha: T,
    pub peak_regions: Vec<Range<usize>>,
    pub noise_interval: Range<usize>,
}

/// Which selection objective a scan minimizes.
#[derive(Debug, Clone)]
pub enum CostConfig<T> {
    CScsa { mu: CScsaMu<T> },
    AlphaScsa(AlphaScsaConfig<T>),
}

impl<T: Scalar> AlphaScsaConfig<T> {
    fn validate(&self, n: usize) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > T::zero()) {
            return Err(Error::InvalidParams(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if self.peak_regions.is_empty() {
            return Err(Error::InvalidParams("need at least one peak region".into()));
        }
        for r in &self.peak_regions {
            if r.start >= r.end || r.end > n {
                return Err(Error::InvalidParams(format!(
                    "peak region {}..{} invalid for {n} samples",
                    r.start, r.end
                )));
            }
        }
        let ni = &self.noise_interval;
        if ni.start >= ni.end || ni.end > n || ni.end - ni.start < 2 {
            return Err(Error::InvalidParams(format!(
                "noise interval {}..{} invalid for {n} samples",
                ni.start, ni.end
            )));
        }
        Ok(())
    }
}

/// Curvature cost `J̄` of a reconstruction against the noisy input.
pub fn cost_cscsa<T: Scalar>(y_noisy: &Signal<T>, y_h: &Signal<T>, mu: T) -> Result<T> {
    Ok(cscsa_parts(y_noisy, y_h, mu)?.2)
}

/// Returns (fidelity, penalty, cost) for the curvature objective.
fn cscsa_parts<T: Scalar>(y_noisy: &Signal<T>, y_h: &Signal<T>, mu: T) -> Result<(T, T, T)> {
    if !(mu.is_finite() && mu > T::zero()) {
        return Err(Error::InvalidParams(format!(
            "mu must be positive, got {mu}"
        )));
    }
    if !y_noisy.same_grid(y_h) {
        return Err(Error::InvalidInput(
            "noisy input and reconstruction must share the grid".into(),
        ));
    }
    let fidelity = squared_residual(y_noisy.samples(), y_h.samples());
    let penalty = total_curvature(y_h)?;
    Ok((fidelity, penalty, fidelity + mu * penalty))
}

/// Smoothing weight that puts the fidelity and penalty terms of the
/// curvature cost on a similar order of magnitude:
/// `μ = max|y_δ| / Σ k(y_δ) · 10^ν`, computed once from the noisy input.
pub fn auto_mu<T: Scalar>(y_noisy: &Signal<T>, nu: i32) -> Result<T> {
    let k = total_curvature(y_noisy)?;
    if k <= T::zero() {
        return Err(Error::DegenerateInput(
            "input has zero total curvature; supply mu directly".into(),
        ));
    }
    Ok(y_noisy.max_abs() / k * Float::powi(T::from_config(10.0), nu))
}

/// SNR of a reconstruction: peak amplitude over the standard deviation on a
/// noise-dominant interval, `max|y_h| / std(y_h|[t1,t2])` (population
/// standard deviation).
pub fn snr_estimate<T: Scalar>(y_h: &Signal<T>, noise_interval: Range<usize>) -> Result<T> {
    let n = y_h.len();
    if noise_interval.start >= noise_interval.end
        || noise_interval.end > n
        || noise_interval.end - noise_interval.start < 2
    {
        return Err(Error::InvalidParams(format!(
            "noise interval {}..{} invalid for {n} samples",
            noise_interval.start, noise_interval.end
        )));
    }
    let window = &y_h.samples()[noise_interval];
    let count = T::from_count(window.len());
    let mean = window.iter().copied().fold(T::zero(), |a, v| a + v) / count;
    let var = window
        .iter()
        .map(|&v| (v - mean) * (v - mean))
        .fold(T::zero(), |a, v| a + v)
        / count;
    let std = var.sqrt();
    if std == T::zero() {
        return Err(Error::DegenerateInput(
            "reconstruction is constant on the noise interval".into(),
        ));
    }
    Ok(y_h.max_abs() / std)
}

/// Peak/SNR cost `J` of a reconstruction against the noisy input.
pub fn cost_alpha_scsa<T: Scalar>(
    y_noisy: &Signal<T>,
    y_h: &Signal<T>,
    cfg: &AlphaScsaConfig<T>,
) -> Result<T> {
    Ok(alpha_parts(y_noisy, y_h, cfg)?.2)
}

/// Returns (peak fidelity, α/SNR, cost) for the peak/SNR objective.
fn alpha_parts<T: Scalar>(
    y_noisy: &Signal<T>,
    y_h: &Signal<T>,
    cfg: &AlphaScsaConfig<T>,
) -> Result<(T, T, T)> {
    if !y_noisy.same_grid(y_h) {
        return Err(Error::InvalidInput(
            "noisy input and reconstruction must share the grid".into(),
        ));
    }
    cfg.validate(y_noisy.len())?;
    let fidelity = cfg
        .peak_regions
        .iter()
        .map(|r| squared_residual(&y_noisy.samples()[r.clone()], &y_h.samples()[r.clone()]))
        .fold(T::zero(), |a, v| a + v);
    let snr = snr_estimate(y_h, cfg.noise_interval.clone())?;
    let penalty = cfg.alpha / snr.abs();
    Ok((fidelity, penalty, fidelity + penalty))
}

fn squared_residual<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .fold(T::zero(), |acc, v| acc + v)
}

/// Geometric grid of candidate `h` values.
///
/// Spacing is always geometric: successive points differ by the constant
/// ratio `(h_max/h_min)^{1/(count-1)}`.
#[derive(Debug, Clone, Copy)]
pub struct HGrid<T> {
    h_min: T,
    h_max: T,
    count: usize,
}

impl<T: Scalar> HGrid<T> {
    pub fn new(h_min: T, h_max: T, count: usize) -> Result<Self> {
        if !(h_min.is_finite() && h_max.is_finite() && T::zero() < h_min && h_min < h_max) {
            return Err(Error::InvalidParams(format!(
                "need 0 < h_min < h_max, got {h_min}..{h_max}"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidParams(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        Ok(Self {
            h_min,
            h_max,
            count,
        })
    }

    pub fn h_min(&self) -> T {
        self.h_min
    }

    pub fn h_max(&self) -> T {
        self.h_max
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// The grid points, strictly increasing from `h_min` to `h_max`.
    pub fn values(&self) -> Vec<T> {
        let ratio = Float::powf(
            self.h_max / self.h_min,
            T::one() / T::from_count(self.count - 1),
        );
        (0..self.count)
            .map(|i| {
                if i == self.count - 1 {
                    self.h_max
                } else {
                    self.h_min * Float::powi(ratio, i as i32)
                }
            })
            .collect()
    }
}

/// Default scan grid for a signal: `h_max = (L/π)·√(max y_shifted)` with
/// `L = N·Δ` (the scale at which roughly one eigenvalue survives) and
/// `h_min = h_max / 200`.
pub fn default_h_grid<T: Scalar>(y: &Signal<T>, count: usize) -> Result<HGrid<T>> {
    let min = y.min_value();
    let shift = if min < T::zero() { -min } else { T::zero() };
    let top = y.max_value() + shift;
    if top <= T::zero() {
        return Err(Error::DegenerateInput(
            "shifted signal has zero amplitude; supply grid bounds directly".into(),
        ));
    }
    let length = T::from_count(y.len()) * y.delta();
    let h_max = length / T::PI() * top.sqrt();
    HGrid::new(h_max / T::from_config(200.0), h_max, count)
}

/// One evaluated grid point of a scan.
#[derive(Debug, Clone, Copy)]
pub struct TracePoint<T> {
    pub h: T,
    pub cost: T,
    pub n_h: usize,
    pub fidelity: T,
    pub penalty: T,
}

/// Outcome of an h scan: the selected `h*`, its reconstruction, the number
/// of retained eigenpairs, and the full cost trace.
#[derive(Debug, Clone)]
pub struct DenoiseResult<T> {
    pub h_star: T,
    pub y_h: Signal<T>,
    pub n_h: usize,
    pub trace: Vec<TracePoint<T>>,
}

impl<T: Scalar> DenoiseResult<T> {
    /// The trace point the scan selected.
    pub fn best(&self) -> &TracePoint<T> {
        self.trace
            .iter()
            .find(|p| p.h == self.h_star)
            .expect("h_star always appears in the trace")
    }
}

/// Scans the grid, evaluating the configured cost at every `h`, and returns
/// the minimizer. Ties within relative `1e-9` resolve to the largest `h`
/// (the smoother reconstruction).
///
/// Grid points run in parallel; each point is an independent eigenproblem,
/// so the outcome is identical to a sequential evaluation. Points whose
/// evaluation fails are dropped from the trace; if every point fails the
/// scan reports a numerical failure listing the per-point errors.
pub fn scan_h<T: SpectralScalar>(
    y_noisy: &Signal<T>,
    grid: &HGrid<T>,
    cfg: &CostConfig<T>,
) -> Result<DenoiseResult<T>> {
    // Resolve the weight once, from the noisy input, so costs stay
    // comparable across the grid.
    enum Objective<'a, T> {
        Curvature { mu: T },
        PeakSnr(&'a AlphaScsaConfig<T>),
    }
    let objective = match cfg {
        CostConfig::CScsa { mu } => Objective::Curvature {
            mu: match *mu {
                CScsaMu::Direct(m) => {
                    if !(Float::is_finite(m) && m > T::zero()) {
                        return Err(Error::InvalidParams(format!(
                            "mu must be positive, got {m}"
                        )));
                    }
                    m
                }
                CScsaMu::Auto { nu } => auto_mu(y_noisy, nu)?,
            },
        },
        CostConfig::AlphaScsa(alpha_cfg) => {
            alpha_cfg.validate(y_noisy.len())?;
            Objective::PeakSnr(alpha_cfg)
        }
    };

    type Evaluated<T> = (T, Result<(TracePoint<T>, Signal<T>)>);
    let hs = grid.values();
    let evaluated: Vec<Evaluated<T>> = hs
        .par_iter()
        .map(|&h| {
            let outcome = scsa_transform(y_noisy, h).and_then(|(spectrum, y_h)| {
                let (fidelity, penalty, cost) = match &objective {
                    Objective::Curvature { mu } => cscsa_parts(y_noisy, &y_h, *mu)?,
                    Objective::PeakSnr(cfg) => alpha_parts(y_noisy, &y_h, cfg)?,
                };
                Ok((
                    TracePoint {
                        h,
                        cost,
                        n_h: spectrum.n_h(),
                        fidelity,
                        penalty,
                    },
                    y_h,
                ))
            });
            (h, outcome)
        })
        .collect();

    let mut trace = Vec::with_capacity(hs.len());
    let mut reconstructions = Vec::with_capacity(hs.len());
    let mut failures = Vec::new();
    for (h, outcome) in evaluated {
        match outcome {
            Ok((point, y_h)) => {
                trace.push(point);
                reconstructions.push(y_h);
            }
            Err(e) => failures.push(format!("h={h}: {e}")),
        }
    }
    if trace.is_empty() {
        return Err(Error::NumericalFailure(format!(
            "every grid point failed: [{}]",
            failures.join("; ")
        )));
    }

    let chosen = select_h_star(&trace);
    let point = trace[chosen];
    Ok(DenoiseResult {
        h_star: point.h,
        y_h: reconstructions.swap_remove(chosen),
        n_h: point.n_h,
        trace,
    })
}

/// Index of the winning trace point: minimal cost, with ties within
/// relative [`TIE_REL_TOL`] broken toward the largest `h`.
fn select_h_star<T: Scalar>(trace: &[TracePoint<T>]) -> usize {
    let min_cost = trace.iter().map(|p| p.cost).fold(T::infinity(), T::min);
    let rel = T::from_config(TIE_REL_TOL);
    let mut chosen = 0usize;
    for (i, p) in trace.iter().enumerate() {
        let tol = rel * Float::max(Float::abs(min_cost), Float::abs(p.cost));
        if p.cost - min_cost <= tol
            && (trace[chosen].cost - min_cost > tol || p.h > trace[chosen].h)
        {
            chosen = i;
        }
    }
    chosen
}
