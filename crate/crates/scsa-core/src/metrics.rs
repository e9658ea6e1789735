//! Evaluation metrics: MSE, output SNR, and peak shape preservation.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::signal::Signal;

/// Mean squared error `(1/N)·Σ (a_i - b_i)²`.
pub fn mse<T: Scalar>(a: &Signal<T>, b: &Signal<T>) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(mean_squared_diff(a.samples(), b.samples()))
}

fn mean_squared_diff<T: Scalar>(a: &[T], b: &[T]) -> T {
    let sum = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .fold(T::zero(), |acc, v| acc + v);
    sum / T::from_count(a.len())
}

/// Which power goes in the SNR numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnrConvention {
    /// `10·log₁₀(Σ y_h² / Σ (y - y_h)²)` — denoised power on top. This is
    /// the convention every reported number in this crate uses.
    DenoisedPower,
    /// `10·log₁₀(Σ y² / Σ (y - y_h)²)` — clean power on top, for
    /// comparisons against results quoted under the more common convention.
    CleanPower,
}

/// Output SNR in dB of `y_h` against the reference `y_clean`, under the
/// [`SnrConvention::DenoisedPower`] convention.
///
/// Returns [`Error::InfiniteSnr`] when the signals are bitwise equal; a
/// zero-power `y_h` yields negative infinity.
pub fn snr_out<T: Scalar>(y_clean: &Signal<T>, y_h: &Signal<T>) -> Result<T> {
    snr_out_with(y_clean, y_h, SnrConvention::DenoisedPower)
}

/// Output SNR under an explicit numerator convention.
pub fn snr_out_with<T: Scalar>(
    y_clean: &Signal<T>,
    y_h: &Signal<T>,
    convention: SnrConvention,
) -> Result<T> {
    if y_clean.len() != y_h.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: {} vs {}",
            y_clean.len(),
            y_h.len()
        )));
    }
    let noise_power = y_clean
        .samples()
        .iter()
        .zip(y_h.samples())
        .map(|(&c, &d)| (c - d) * (c - d))
        .fold(T::zero(), |a, v| a + v);
    if noise_power == T::zero() {
        return Err(Error::InfiniteSnr);
    }
    let num = match convention {
        SnrConvention::DenoisedPower => y_h,
        SnrConvention::CleanPower => y_clean,
    };
    let signal_power = num
        .samples()
        .iter()
        .map(|&v| v * v)
        .fold(T::zero(), |a, v| a + v);
    if signal_power == T::zero() {
        return Ok(T::neg_infinity());
    }
    Ok(T::from_config(10.0) * (signal_power / noise_power).log10())
}

/// Height, argmax position, and full width at half maximum of a peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakInfo<T> {
    pub height: T,
    pub index: usize,
    pub fwhm: T,
}

/// Locates the global maximum and measures its full width at half maximum
/// by linear interpolation of the first half-height crossing on each side.
///
/// Fails with [`Error::PeakNotFound`] when the maximum sits on the boundary
/// or a half-height crossing is missing on either side.
pub fn detect_peak<T: Scalar>(y: &Signal<T>) -> Result<PeakInfo<T>> {
    let s = y.samples();
    let n = s.len();
    let mut index = 0usize;
    for (i, &v) in s.iter().enumerate() {
        if v > s[index] {
            index = i;
        }
    }
    if index == 0 || index == n - 1 {
        return Err(Error::PeakNotFound(
            "global maximum sits on the signal boundary".into(),
        ));
    }
    let height = s[index];
    let half = height / T::from_config(2.0);

    let left = crossing(s, index, half, y.delta(), Direction::Left)?;
    let right = crossing(s, index, half, y.delta(), Direction::Right)?;
    let fwhm = right - left;
    if !fwhm.is_finite() || fwhm <= T::zero() {
        return Err(Error::PeakNotFound("degenerate half-height width".into()));
    }
    Ok(PeakInfo {
        height,
        index,
        fwhm,
    })
}

enum Direction {
    Left,
    Right,
}

/// Time coordinate (in units of `delta`, measured from sample 0) of the
/// first half-height crossing outward from the peak.
fn crossing<T: Scalar>(s: &[T], peak: usize, half: T, delta: T, dir: Direction) -> Result<T> {
    let indices: Box<dyn Iterator<Item = usize>> = match dir {
        Direction::Left => Box::new((0..peak).rev()),
        Direction::Right => Box::new(peak + 1..s.len()),
    };
    for i in indices {
        if s[i] <= half {
            // Crossing lies between i and its peak-side neighbor.
            let (inner, outer) = match dir {
                Direction::Left => (i + 1, i),
                Direction::Right => (i - 1, i),
            };
            let frac = (s[inner] - half) / (s[inner] - s[outer]);
            let t_inner = T::from_count(inner) * delta;
            let t_outer = T::from_count(outer) * delta;
            return Ok(t_inner + frac * (t_outer - t_inner));
        }
    }
    Err(Error::PeakNotFound(
        "no half-height crossing before the signal boundary".into(),
    ))
}

/// Peak height relative error in percent: `|M_h - M_c| / M_c · 100`.
pub fn peak_height_error<T: Scalar>(denoised: &PeakInfo<T>, clean: &PeakInfo<T>) -> Result<T> {
    if clean.height == T::zero() {
        return Err(Error::DegenerateInput("clean peak height is zero".into()));
    }
    Ok((denoised.height - clean.height).abs() / clean.height * T::from_config(100.0))
}

/// Peak width relative error in percent: `|W_h - W_c| / W_c · 100`.
pub fn peak_width_error<T: Scalar>(denoised: &PeakInfo<T>, clean: &PeakInfo<T>) -> Result<T> {
    if clean.fwhm == T::zero() {
        return Err(Error::DegenerateInput("clean peak width is zero".into()));
    }
    Ok((denoised.fwhm - clean.fwhm).abs() / clean.fwhm * T::from_config(100.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{gaussian_peaks, GaussianPeak, GaussianPeakSpec};
    use approx::assert_relative_eq;

    fn sig(values: Vec<f64>) -> Signal<f64> {
        Signal::new(values, 1.0).unwrap()
    }

    #[test]
    fn mse_basics() {
        let a = sig(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        assert_eq!(mse(&a, &a).unwrap(), 0.0);
        let b = a
            .with_samples(a.samples().iter().map(|v| v + 0.5).collect())
            .unwrap();
        assert_relative_eq!(mse(&a, &b).unwrap(), 0.25, max_relative = 1e-15);
        let c = Signal::new(vec![0.0; 9], 1.0).unwrap();
        assert!(mse(&a, &c).is_err());
    }

    #[test]
    fn mse_of_short_vectors_by_definition() {
        // (0,3) vs (4,3): (16 + 0)/2 = 8.
        assert_eq!(mean_squared_diff(&[0.0, 3.0], &[4.0, 3.0]), 8.0);
        assert_eq!(
            mean_squared_diff(&[0.0, 3.0], &[4.0, 3.0]),
            mean_squared_diff(&[4.0, 3.0], &[0.0, 3.0])
        );
    }

    #[test]
    fn snr_single_sample_perturbation() {
        let y = sig(vec![1.0, 2.0, 1.0, 0.5, 0.25, 1.0, 2.0, 1.5]);
        let eps = 1e-3;
        let mut v = y.samples().to_vec();
        v[3] += eps;
        let yh = y.with_samples(v).unwrap();
        let power: f64 = yh.samples().iter().map(|v| v * v).sum();
        let expected = 10.0 * (power / (eps * eps)).log10();
        assert_relative_eq!(snr_out(&y, &yh).unwrap(), expected, max_relative = 1e-12);
    }

    #[test]
    fn snr_edge_cases() {
        let y = sig(vec![1.0, 2.0, 1.0, 0.5, 0.25, 1.0, 2.0, 1.5]);
        assert!(matches!(snr_out(&y, &y), Err(Error::InfiniteSnr)));
        let zero = y.with_samples(vec![0.0; 8]).unwrap();
        assert_eq!(snr_out(&y, &zero).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn snr_is_scale_invariant() {
        let y = sig(vec![1.0, 2.0, 1.0, 0.5, 0.25, 1.0, 2.0, 1.5]);
        let yh = sig(vec![1.1, 1.9, 1.0, 0.6, 0.20, 1.0, 2.1, 1.4]);
        let base = snr_out(&y, &yh).unwrap();
        let scale = |s: &Signal<f64>, c: f64| {
            s.with_samples(s.samples().iter().map(|v| c * v).collect())
                .unwrap()
        };
        let scaled = snr_out(&scale(&y, 2.0), &scale(&yh, 2.0)).unwrap();
        assert_relative_eq!(base, scaled, max_relative = 1e-12);
    }

    #[test]
    fn snr_convention_flag() {
        let y = sig(vec![1.0, 2.0, 1.0, 0.5, 0.25, 1.0, 2.0, 1.5]);
        let yh = scaleless_copy(&y, 0.9);
        let denoised = snr_out_with(&y, &yh, SnrConvention::DenoisedPower).unwrap();
        let clean = snr_out_with(&y, &yh, SnrConvention::CleanPower).unwrap();
        // Scaling by 0.9 shrinks the numerator under the denoised convention.
        assert!(denoised < clean);
        assert_relative_eq!(
            clean - denoised,
            -20.0 * 0.9f64.log10(),
            max_relative = 1e-12
        );
    }

    fn scaleless_copy(y: &Signal<f64>, c: f64) -> Signal<f64> {
        y.with_samples(y.samples().iter().map(|v| c * v).collect())
            .unwrap()
    }

    #[test]
    fn gaussian_fwhm_matches_analytic() {
        let spec = GaussianPeakSpec::new(vec![GaussianPeak {
            amplitude: 2.0f64,
            position: 5.0,
            width: 15.0,
        }])
        .unwrap();
        let delta = 0.3125;
        let y = gaussian_peaks(&spec, 512, -70.0, delta).unwrap();
        let peak = detect_peak(&y).unwrap();
        assert_eq!(peak.height, 2.0);
        let analytic = 2.0 * (2.0 * 2.0f64.ln()).sqrt() * 15.0;
        assert!(
            (peak.fwhm - analytic).abs() <= delta,
            "fwhm {} vs analytic {analytic}",
            peak.fwhm
        );
    }

    #[test]
    fn triangle_peak_width() {
        // Height 1 over [0, 2]: half-height crossings at 0.5 and 1.5.
        let delta = 0.25;
        let y = Signal::new(
            (0..9)
                .map(|i| {
                    let t = i as f64 * delta;
                    1.0 - (t - 1.0).abs()
                })
                .collect(),
            delta,
        )
        .unwrap();
        let peak = detect_peak(&y).unwrap();
        assert_eq!(peak.index, 4);
        assert_relative_eq!(peak.fwhm, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn ramp_has_no_peak() {
        let y = sig((0..12).map(|i| i as f64).collect());
        assert!(matches!(detect_peak(&y), Err(Error::PeakNotFound(_))));
    }

    #[test]
    fn relative_errors() {
        let clean = PeakInfo {
            height: 2.0f64,
            index: 10,
            fwhm: 30.0,
        };
        let low = PeakInfo {
            height: 1.9,
            index: 11,
            fwhm: 36.0,
        };
        let high = PeakInfo {
            height: 2.1,
            index: 9,
            fwhm: 24.0,
        };
        assert_relative_eq!(
            peak_height_error(&low, &clean).unwrap(),
            5.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            peak_height_error(&high, &clean).unwrap(),
            5.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            peak_width_error(&low, &clean).unwrap(),
            20.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            peak_width_error(&high, &clean).unwrap(),
            20.0,
            max_relative = 1e-12
        );
        assert_eq!(peak_height_error(&clean, &clean).unwrap(), 0.0);
        assert_eq!(peak_width_error(&clean, &clean).unwrap(), 0.0);
    }
}
