//! Schrödinger-operator spectral decomposition of a signal.
//!
//! A positive signal `y` is taken as the potential of the operator
//! `-h² d²/dt² - y(t)`. The signal is represented through the negative part
//! of the operator's spectrum: with `λ_n = -κ_n²` the negative eigenvalues
//! and `ψ_n` the corresponding discretely L²-normalized eigenfunctions,
//!
//! ```text
//! y_h(t) = 4h · Σ_n κ_n ψ_n²(t)
//! ```
//!
//! Smaller `h` admits more negative eigenvalues and reconstructs finer
//! detail; larger `h` keeps only the dominant structures.
//!
//! The second-derivative matrix is the periodic Fourier pseudo-spectral
//! collocation matrix, so signals are implicitly treated as periodic on
//! their sampling window. No windowing is applied to aperiodic inputs; the
//! wrap-around is a known edge artifact.

use dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self, ComputeEigenvectors};
use faer::mat::MatRef;
use nalgebra::DMatrix;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, SpectralScalar};
use crate::signal::Signal;

/// Dense symmetric operator matrix `-h²D - Y`.
#[derive(Debug, Clone)]
pub struct OperatorMatrix<T> {
    entries: DMatrix<T>,
}

impl<T: Scalar> OperatorMatrix<T> {
    /// Wraps a matrix, checking squareness and symmetry
    /// (`max|A - Aᵀ| ≤ tol · max|A|`).
    pub fn try_new(entries: DMatrix<T>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidInput(format!(
                "operator matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let max_abs = matrix_max_abs(&entries);
        let tol = symmetry_tol::<T>() * max_abs;
        for i in 0..entries.nrows() {
            for j in (i + 1)..entries.ncols() {
                if Float::abs(entries[(i, j)] - entries[(j, i)]) > tol {
                    return Err(Error::InvalidInput(format!(
                        "operator matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &DMatrix<T> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        matrix_max_abs(&self.entries)
    }
}

fn matrix_max_abs<T: Scalar>(m: &DMatrix<T>) -> T {
    m.iter().map(|v| Float::abs(*v)).fold(T::zero(), T::max)
}

/// Relative symmetry tolerance: 1e-10 with an epsilon floor so the check
/// stays meaningful in f32.
fn symmetry_tol<T: Scalar>() -> T {
    Float::max(T::from_config(1e-10), T::epsilon() * T::from_config(64.0))
}

/// Periodic Fourier pseudo-spectral second-derivative matrix on a uniform
/// grid of `n` points spaced `delta` apart (period `L = n·delta`).
///
/// The entries are the standard trigonometric collocation stencil for even
/// `n`; the diagonal is formed as the negated off-diagonal row sum so that
/// constants are annihilated exactly. The matrix is symmetric negative
/// semidefinite with eigenvalues `-(2πk/L)²`, `k = 0, …, n/2`.
pub fn fourier_diff2_matrix<T: Scalar>(n: usize, delta: T) -> Result<OperatorMatrix<T>> {
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!(
            "differentiation matrix needs an even grid of at least 8 points, got {n}"
        )));
    }
    if !(delta.is_finite() && delta > T::zero()) {
        return Err(Error::InvalidGrid(format!(
            "grid spacing must be positive and finite, got {delta}"
        )));
    }

    let pi = T::PI();
    let two = T::from_config(2.0);
    let length = T::from_count(n) * delta;
    let scale = (two * pi / length) * (two * pi / length);

    // Circulant kernel: entry (j,k) depends only on (j-k) mod n.
    let mut kernel = vec![T::zero(); n];
    for (m, slot) in kernel.iter_mut().enumerate().skip(1) {
        let sign = if m % 2 == 0 { T::one() } else { -T::one() };
        let s = Float::sin(T::from_count(m) * pi / T::from_count(n));
        *slot = -sign / (two * s * s) * scale;
    }
    let diag = -kernel.iter().copied().fold(T::zero(), |a, v| a + v);

    let entries = DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            diag
        } else {
            kernel[(j + n - k) % n]
        }
    });
    OperatorMatrix::try_new(entries)
}

/// Assembles `A = -h²D - diag(y_shifted)` where `y_shifted = y + shift` and
/// `shift = -min(y)` when the signal dips below zero (the operator wants a
/// positive potential). Returns the matrix and the shift that was applied.
pub fn assemble_operator<T: Scalar>(y: &Signal<T>, h: T) -> Result<(OperatorMatrix<T>, T)> {
    if !(h.is_finite() && h > T::zero()) {
        return Err(Error::InvalidParams(format!(
            "semi-classical parameter h must be positive and finite, got {h}"
        )));
    }
    let d = fourier_diff2_matrix(y.len(), y.delta())?;
    let min = y.min_value();
    let shift = if min < T::zero() { -min } else { T::zero() };

    let h2 = h * h;
    let mut entries = d.entries.map(|v| -h2 * v);
    for (i, &v) in y.samples().iter().enumerate() {
        entries[(i, i)] -= v + shift;
    }
    Ok((OperatorMatrix { entries }, shift))
}

/// Negative part of a Schrödinger spectrum for one value of `h`.
///
/// `kappas` holds `κ_n = √(-λ_n)` sorted strictly descending; column `n` of
/// `eigenfunctions` holds `ψ_n` on the grid, normalized so `Σ_i ψ²(t_i)·Δ = 1`
/// and sign-fixed so the largest-magnitude entry is positive.
#[derive(Debug, Clone)]
pub struct SchrodingerSpectrum<T> {
    h: T,
    kappas: Vec<T>,
    eigenfunctions: DMatrix<T>,
    shift: T,
    delta: T,
}

impl<T: Scalar> SchrodingerSpectrum<T> {
    /// Builds a spectrum from parts, validating the structural invariants:
    /// strictly descending positive `kappas`, one eigenfunction column per
    /// κ, and unit discrete L² norm per column.
    pub fn new(
        h: T,
        kappas: Vec<T>,
        eigenfunctions: DMatrix<T>,
        shift: T,
        delta: T,
    ) -> Result<Self> {
        if !(h.is_finite() && h > T::zero()) {
            return Err(Error::InvalidParams(format!("h must be positive, got {h}")));
        }
        if !(delta.is_finite() && delta > T::zero()) {
            return Err(Error::InvalidParams(format!(
                "delta must be positive, got {delta}"
            )));
        }
        if eigenfunctions.ncols() != kappas.len() {
            return Err(Error::InvalidInput(format!(
                "{} eigenfunction columns for {} kappas",
                eigenfunctions.ncols(),
                kappas.len()
            )));
        }
        for (i, &k) in kappas.iter().enumerate() {
            if !(k.is_finite() && k > T::zero()) {
                return Err(Error::InvalidInput(format!(
                    "kappa[{i}] = {k} not positive"
                )));
            }
            if i > 0 && kappas[i - 1] <= k {
                return Err(Error::InvalidInput(format!(
                    "kappas not strictly descending at index {i}"
                )));
            }
        }
        let norm_tol = Float::max(T::from_config(1e-9), T::epsilon() * T::from_config(64.0));
        for c in 0..eigenfunctions.ncols() {
            let norm2: T = eigenfunctions
                .column(c)
                .iter()
                .map(|v| *v * *v)
                .fold(T::zero(), |a, v| a + v)
                * delta;
            if Float::abs(norm2 - T::one()) > norm_tol {
                return Err(Error::InvalidInput(format!(
                    "eigenfunction {c} has discrete L2 norm² {norm2}, expected 1"
                )));
            }
        }
        Ok(Self {
            h,
            kappas,
            eigenfunctions,
            shift,
            delta,
        })
    }

    /// Number of retained eigenpairs (`N_h`).
    pub fn n_h(&self) -> usize {
        self.kappas.len()
    }

    /// Grid length of the eigenfunctions.
    pub fn n_samples(&self) -> usize {
        self.eigenfunctions.nrows()
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn kappas(&self) -> &[T] {
        &self.kappas
    }

    pub fn eigenfunctions(&self) -> &DMatrix<T> {
        &self.eigenfunctions
    }

    pub fn shift(&self) -> T {
        self.shift
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    /// Stamps the `h` and potential shift this spectrum was computed under.
    pub fn with_context(mut self, h: T, shift: T) -> Result<Self> {
        if !(h.is_finite() && h > T::zero()) {
            return Err(Error::InvalidParams(format!("h must be positive, got {h}")));
        }
        self.h = h;
        self.shift = shift;
        Ok(self)
    }
}

/// Extracts all eigenpairs of `a` with `λ < -tol`, converted to
/// `κ = √(-λ)` sorted descending, with eigenfunctions normalized to unit
/// discrete L² norm and deterministic sign.
///
/// `tol` defaults to `1e-12 · max|A|`, excluding numerically-zero modes.
/// The returned spectrum carries `h = 1` and `shift = 0`; callers that know
/// the assembly context stamp it via [`SchrodingerSpectrum::with_context`].
pub fn negative_eigenpairs<T: SpectralScalar>(
    a: &OperatorMatrix<T>,
    delta: T,
    tol: Option<T>,
) -> Result<SchrodingerSpectrum<T>> {
    if !(Float::is_finite(delta) && delta > T::zero()) {
        return Err(Error::InvalidParams(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let tol = match tol {
        Some(t) if Float::is_finite(t) && t > T::zero() => t,
        Some(t) => {
            return Err(Error::InvalidParams(format!(
                "eigenvalue threshold must be positive, got {t}"
            )))
        }
        None => T::from_config(1e-12) * a.max_abs(),
    };

    let n = a.n();
    let (eigenvalues, eigenvectors) = symmetric_eigen(&a.entries)?;

    // Eigenvalues come back nondecreasing, so the negative ones form a
    // prefix that is already ordered most-negative-first (κ descending).
    let n_h = eigenvalues.iter().take_while(|&&ev| ev < -tol).count();

    let mut kappas = Vec::with_capacity(n_h);
    let mut eigenfunctions = DMatrix::<T>::zeros(n, n_h);
    for c in 0..n_h {
        kappas.push(Float::sqrt(-eigenvalues[c]));

        let col = eigenvectors.column(c);
        let norm2 = col.iter().map(|v| *v * *v).fold(T::zero(), |a, v| a + v) * delta;
        if !Float::is_finite(norm2) || norm2 <= T::zero() {
            return Err(Error::NumericalFailure(format!(
                "eigenvector {c} has zero norm"
            )));
        }
        let inv_norm = T::one() / Float::sqrt(norm2);

        // Sign convention: largest-magnitude entry positive.
        let mut peak = 0usize;
        for (r, v) in col.iter().enumerate() {
            if Float::abs(*v) > Float::abs(col[peak]) {
                peak = r;
            }
        }
        let sign = if col[peak] < T::zero() {
            -T::one()
        } else {
            T::one()
        };

        for r in 0..n {
            eigenfunctions[(r, c)] = col[r] * inv_norm * sign;
        }
    }

    // The constructor re-validates ordering and norms; a failure here means
    // the decomposition itself produced garbage.
    SchrodingerSpectrum::new(T::one(), kappas, eigenfunctions, T::zero(), delta)
        .map_err(|e| Error::NumericalFailure(format!("eigendecomposition invalid: {e}")))
}

/// Dense symmetric eigendecomposition, eigenvalues nondecreasing.
///
/// Runs the solver strictly sequentially: results are bit-reproducible no
/// matter how callers parallelize around it, and at the matrix sizes this
/// crate targets the sequential kernel is the fastest configuration anyway.
fn symmetric_eigen<T: SpectralScalar>(m: &DMatrix<T>) -> Result<(Vec<T>, DMatrix<T>)> {
    let n = m.nrows();
    let par = faer::Par::Seq;
    let params = faer::Spec::default();
    // nalgebra stores column-major, so faer can view the buffer directly.
    let a = MatRef::from_column_major_slice(m.as_slice(), n, n);

    let mut s = faer::diag::Diag::<T>::zeros(n);
    let mut u = faer::Mat::<T>::zeros(n, n);
    let mut mem = MemBuffer::new(evd::self_adjoint_evd_scratch::<T>(
        n,
        ComputeEigenvectors::Yes,
        par,
        params,
    ));
    evd::self_adjoint_evd(
        a,
        s.as_mut(),
        Some(u.as_mut()),
        par,
        MemStack::new(&mut mem),
        params,
    )
    .map_err(|e| Error::NumericalFailure(format!("symmetric eigendecomposition failed: {e:?}")))?;

    let eigenvalues: Vec<T> = (0..n).map(|i| s.column_vector()[i]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, j| u[(i, j)]);
    Ok((eigenvalues, eigenvectors))
}

/// Reconstructs the signal from the spectrum:
/// `y_h(t_i) = 4h · Σ_n κ_n ψ_n²(t_i) - shift`.
///
/// An empty spectrum yields the constant `-shift` signal (the sum is empty).
pub fn reconstruct<T: Scalar>(spectrum: &SchrodingerSpectrum<T>) -> Result<Signal<T>> {
    let n = spectrum.n_samples();
    let four_h = T::from_config(4.0) * spectrum.h();
    let mut samples = vec![T::zero(); n];
    for (c, &kappa) in spectrum.kappas().iter().enumerate() {
        let col = spectrum.eigenfunctions().column(c);
        for (r, acc) in samples.iter_mut().enumerate() {
            *acc += kappa * col[r] * col[r];
        }
    }
    for v in samples.iter_mut() {
        *v = four_h * *v - spectrum.shift();
    }
    Signal::new(samples, spectrum.delta())
}

/// Full transform for one `h`: assemble the operator, keep the negative
/// eigenpairs, reconstruct. Returns the spectrum and the reconstruction.
pub fn scsa_transform<T: SpectralScalar>(
    y: &Signal<T>,
    h: T,
) -> Result<(SchrodingerSpectrum<T>, Signal<T>)> {
    let (a, shift) = assemble_operator(y, h)?;
    let spectrum = negative_eigenpairs(&a, y.delta(), None)?.with_context(h, shift)?;
    let reconstruction = reconstruct(&spectrum)?;
    Ok((spectrum, reconstruction))
}
