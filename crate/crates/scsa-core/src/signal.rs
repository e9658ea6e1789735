//! Uniformly sampled real signal.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Minimum number of samples a [`Signal`] may hold. The differentiation
/// matrix and the curvature stencils both need this much context.
pub const MIN_SAMPLES: usize = 8;

/// A uniformly sampled real series with sampling interval `delta`.
///
/// Invariants, enforced at construction:
/// - all samples are finite,
/// - `delta > 0` and finite,
/// - at least [`MIN_SAMPLES`] samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal<T> {
    samples: Vec<T>,
    delta: T,
}

impl<T: Scalar> Signal<T> {
    /// Builds a signal after validating the invariants above.
    pub fn new(samples: Vec<T>, delta: T) -> Result<Self> {
        if samples.len() < MIN_SAMPLES {
            return Err(Error::InvalidSignal(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                samples.len()
            )));
        }
        if !(delta.is_finite() && delta > T::zero()) {
            return Err(Error::InvalidSignal(format!(
                "sampling interval must be positive and finite, got {delta}"
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal(format!(
                "non-finite sample at index {i}"
            )));
        }
        Ok(Self { samples, delta })
    }

    /// Replaces the sample values, keeping the grid. Lengths must match.
    pub fn with_samples(&self, samples: Vec<T>) -> Result<Self> {
        if samples.len() != self.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} samples, got {}",
                self.len(),
                samples.len()
            )));
        }
        Self::new(samples, self.delta)
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Smallest sample value.
    pub fn min_value(&self) -> T {
        self.samples.iter().copied().fold(T::infinity(), T::min)
    }

    /// Largest sample value.
    pub fn max_value(&self) -> T {
        self.samples.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// Largest absolute sample value.
    pub fn max_abs(&self) -> T {
        self.samples.iter().map(|v| v.abs()).fold(T::zero(), T::max)
    }

    /// True when both signals share length and sampling interval.
    pub fn same_grid(&self, other: &Self) -> bool {
        self.len() == other.len() && self.delta == other.delta
    }
}
