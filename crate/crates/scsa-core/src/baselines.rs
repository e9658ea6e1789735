//! Reference smoothing filters: Savitzky-Golay and moving average.
//!
//! Both keep the output length equal to the input length. Near the
//! boundaries the Savitzky-Golay fit runs on the truncated one-sided window
//! (with the polynomial degree clamped to the number of available points)
//! and the moving average shrinks its window, so neither filter shifts peak
//! positions at the edges.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::signal::Signal;

/// Savitzky-Golay parameters: odd window length and polynomial order below
/// the window length.
#[derive(Debug, Clone, Copy)]
pub struct SgParams {
    pub window: usize,
    pub order: usize,
}

impl SgParams {
    pub fn new(window: usize, order: usize) -> Result<Self> {
        if window < 3 || window.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "window must be odd and at least 3, got {window}"
            )));
        }
        if order >= window {
            return Err(Error::InvalidParams(format!(
                "polynomial order {order} must be below the window length {window}"
            )));
        }
        Ok(Self { window, order })
    }

    fn half(&self) -> usize {
        self.window / 2
    }
}

/// Interior Savitzky-Golay convolution coefficients for the given window
/// and order, ordered from the leftmost window sample to the rightmost.
pub fn sg_coefficients<T: Scalar>(window: usize, order: usize) -> Result<Vec<T>> {
    let p = SgParams::new(window, order)?;
    let half = p.half() as i64;
    let offsets: Vec<i64> = (-half..=half).collect();
    smoothing_stencil(&offsets, order)
}

/// Least-squares polynomial smoothing of `y`.
pub fn savitzky_golay<T: Scalar>(y: &Signal<T>, p: SgParams) -> Result<Signal<T>> {
    let n = y.len();
    if n < p.window {
        return Err(Error::InvalidParams(format!(
            "signal of {n} samples is shorter than the window {}",
            p.window
        )));
    }
    let half = p.half();
    let s = y.samples();
    let interior = sg_coefficients::<T>(p.window, p.order)?;

    let mut out = vec![T::zero(); n];
    for i in half..n - half {
        out[i] = dot(&interior, &s[i - half..=i + half]);
    }
    // One-sided truncated windows at the boundaries; degree capped by the
    // available point count.
    for i in 0..half.min(n) {
        let offsets: Vec<i64> = (-(i as i64)..=half as i64).collect();
        let degree = p.order.min(offsets.len() - 1);
        let stencil = smoothing_stencil::<T>(&offsets, degree)?;
        out[i] = dot(&stencil, &s[0..=i + half]);

        let j = n - 1 - i;
        let offsets: Vec<i64> = (-(half as i64)..=i as i64).collect();
        let stencil = smoothing_stencil::<T>(&offsets, degree)?;
        out[j] = dot(&stencil, &s[j - half..n]);
    }
    y.with_samples(out)
}

/// Centered moving average with shrinking one-sided windows at the edges.
pub fn moving_average<T: Scalar>(y: &Signal<T>, window: usize) -> Result<Signal<T>> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "window must be odd, got {window}"
        )));
    }
    let n = y.len();
    if n < window {
        return Err(Error::InvalidParams(format!(
            "signal of {n} samples is shorter than the window {window}"
        )));
    }
    let half = window / 2;
    let s = y.samples();
    let out = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            let sum = s[lo..hi].iter().copied().fold(T::zero(), |a, v| a + v);
            sum / T::from_count(hi - lo)
        })
        .collect();
    y.with_samples(out)
}

fn dot<T: Scalar>(c: &[T], v: &[T]) -> T {
    debug_assert_eq!(c.len(), v.len());
    c.iter()
        .zip(v)
        .map(|(&a, &b)| a * b)
        .fold(T::zero(), |acc, x| acc + x)
}

/// Weights of the least-squares degree-`degree` polynomial fit over the
/// given sample offsets, evaluated at offset 0.
///
/// Offsets are rescaled to [-1, 1] before the normal equations are formed;
/// the fitted value is invariant to that scaling and the moment matrix
/// stays well conditioned.
fn smoothing_stencil<T: Scalar>(offsets: &[i64], degree: usize) -> Result<Vec<T>> {
    let dim = degree + 1;
    if offsets.len() < dim {
        return Err(Error::InvalidParams(format!(
            "{} points cannot determine a degree-{degree} fit",
            offsets.len()
        )));
    }
    let scale = offsets
        .iter()
        .map(|&j| j.unsigned_abs())
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let xs: Vec<T> = offsets
        .iter()
        .map(|&j| T::from_config(j as f64 / scale))
        .collect();

    // Normal equations G m = e0 with G[p][q] = Σ_j x_j^{p+q}.
    let mut moments = vec![T::zero(); 2 * degree + 1];
    for &x in &xs {
        let mut pw = T::one();
        for m in moments.iter_mut() {
            *m += pw;
            pw *= x;
        }
    }
    let mut g = vec![T::zero(); dim * dim];
    for p in 0..dim {
        for q in 0..dim {
            g[p * dim + q] = moments[p + q];
        }
    }
    let mut rhs = vec![T::zero(); dim];
    rhs[0] = T::one();
    let beta = solve_dense(&mut g, &mut rhs, dim)?;

    Ok(xs
        .iter()
        .map(|&x| {
            let mut pw = T::one();
            let mut acc = T::zero();
            for &b in &beta {
                acc += b * pw;
                pw *= x;
            }
            acc
        })
        .collect())
}

/// In-place Gaussian elimination with partial pivoting for the small
/// normal-equation systems above.
fn solve_dense<T: Scalar>(a: &mut [T], b: &mut [T], n: usize) -> Result<Vec<T>> {
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[pivot * n + col].abs() {
                pivot = row;
            }
        }
        if a[pivot * n + col].abs() <= T::epsilon() {
            return Err(Error::NumericalFailure(
                "singular normal equations in polynomial fit".into(),
            ));
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let inv = T::one() / a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] * inv;
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                let upd = a[col * n + k] * factor;
                a[row * n + k] -= upd;
            }
            b[row] -= b[col] * factor;
        }
    }
    let mut x = vec![T::zero(); n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col * n + k] * x[k];
        }
        x[col] = acc / a[col * n + col];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sig(values: Vec<f64>) -> Signal<f64> {
        Signal::new(values, 1.0).unwrap()
    }

    #[test]
    fn window5_order2_coefficients() {
        let c = sg_coefficients::<f64>(5, 2).unwrap();
        let expected = [-3.0, 12.0, 17.0, 12.0, -3.0].map(|v| v / 35.0);
        for (&got, want) in c.iter().zip(expected) {
            assert_relative_eq!(got, want, epsilon = 1e-13);
        }
    }

    #[test]
    fn reproduces_low_degree_polynomials_on_interior() {
        let y = sig((0..40)
            .map(|i| {
                let t = i as f64 * 0.3 - 4.0;
                1.5 - 0.7 * t + 0.2 * t * t
            })
            .collect());
        let out = savitzky_golay(&y, SgParams::new(5, 2).unwrap()).unwrap();
        for i in 2..38 {
            assert_relative_eq!(out.samples()[i], y.samples()[i], epsilon = 1e-10);
        }

        let cubic = sig((0..40)
            .map(|i| {
                let t = i as f64 * 0.1;
                t * t * t - 2.0 * t
            })
            .collect());
        let out = savitzky_golay(&cubic, SgParams::new(7, 3).unwrap()).unwrap();
        for i in 3..37 {
            assert_relative_eq!(out.samples()[i], cubic.samples()[i], epsilon = 1e-10);
        }
    }

    #[test]
    fn constants_are_preserved_exactly() {
        let y = sig(vec![2.5; 16]);
        let sg = savitzky_golay(&y, SgParams::new(5, 2).unwrap()).unwrap();
        let ma = moving_average(&y, 5).unwrap();
        for i in 0..16 {
            assert_relative_eq!(sg.samples()[i], 2.5, epsilon = 1e-12);
            assert_eq!(ma.samples()[i], 2.5);
        }
    }

    #[test]
    fn impulse_response_of_moving_average() {
        let mut v = vec![0.0; 11];
        v[5] = 1.0;
        let out = moving_average(&sig(v), 3).unwrap();
        assert_relative_eq!(out.samples()[4], 1.0 / 3.0);
        assert_relative_eq!(out.samples()[5], 1.0 / 3.0);
        assert_relative_eq!(out.samples()[6], 1.0 / 3.0);
        assert_eq!(out.samples()[3], 0.0);
        assert_eq!(out.samples()[7], 0.0);
    }

    #[test]
    fn moving_average_keeps_interior_of_ramp() {
        let y = sig((0..20).map(|i| 2.0 * i as f64 + 1.0).collect());
        let out = moving_average(&y, 5).unwrap();
        for i in 2..18 {
            assert_relative_eq!(out.samples()[i], y.samples()[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn sg_order_zero_equals_moving_average() {
        let y = sig((0..32).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect());
        let sg = savitzky_golay(&y, SgParams::new(9, 0).unwrap()).unwrap();
        let ma = moving_average(&y, 9).unwrap();
        for i in 0..32 {
            assert_relative_eq!(sg.samples()[i], ma.samples()[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(SgParams::new(4, 2).is_err());
        assert!(SgParams::new(5, 5).is_err());
        assert!(SgParams::new(1, 0).is_err());
        let y = sig(vec![0.0; 8]);
        assert!(savitzky_golay(&y, SgParams::new(9, 2).unwrap()).is_err());
        assert!(moving_average(&y, 4).is_err());
        assert!(moving_average(&y, 9).is_err());
    }

    #[test]
    fn filters_are_linear_on_interior() {
        let a = sig((0..24).map(|i| (i as f64 * 0.7).sin()).collect());
        let b = sig((0..24).map(|i| (i as f64 * 0.3).cos() * 2.0).collect());
        let combo = sig(a
            .samples()
            .iter()
            .zip(b.samples())
            .map(|(&x, &y)| 2.0 * x - 0.5 * y)
            .collect());
        let p = SgParams::new(5, 2).unwrap();
        let fa = savitzky_golay(&a, p).unwrap();
        let fb = savitzky_golay(&b, p).unwrap();
        let fc = savitzky_golay(&combo, p).unwrap();
        for i in 2..22 {
            assert_relative_eq!(
                fc.samples()[i],
                2.0 * fa.samples()[i] - 0.5 * fb.samples()[i],
                epsilon = 1e-10
            );
        }
    }
}
