//! Semi-classical signal analysis (SCSA).
//!
//! A real positive signal is used as the potential of a Schrödinger
//! operator `-h² d²/dt² - y(t)`; the signal is reconstructed from the
//! squared eigenfunctions attached to the operator's negative eigenvalues.
//! Choosing the semi-classical parameter `h` trades reconstruction detail
//! against smoothness, which turns the transform into a peak-preserving
//! denoiser: scan `h`, score each reconstruction, keep the best.
//!
//! Modules:
//!
//! - [`spectral`] — operator assembly, negative eigenpairs, reconstruction;
//! - [`curvature`] — discrete curvature, its total, and the expected
//!   curvature of Gaussian differences (quadrature + Monte-Carlo oracle);
//! - [`select`] — curvature and peak/SNR selection costs and the h-grid
//!   scan;
//! - [`baselines`] — Savitzky-Golay and moving-average reference filters;
//! - [`signals`] — synthetic test signals and noise injection;
//! - [`metrics`] — MSE, output SNR, and peak-shape error measures.
//!
//! Everything is generic over the scalar type through [`Scalar`]; the
//! aliases below fix the common concrete choices.

pub mod baselines;
pub mod curvature;
pub mod error;
pub mod metrics;
pub mod scalar;
pub mod select;
pub mod signal;
pub mod signals;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::{Scalar, SpectralScalar};
pub use signal::Signal;

pub use curvature::{
    discrete_curvature, expected_curvature, mc_expected_curvature, total_curvature,
    CurvatureProfile, NoiseModelParams,
};
pub use metrics::{
    detect_peak, mse, peak_height_error, peak_width_error, snr_out, snr_out_with, PeakInfo,
    SnrConvention,
};
pub use select::{
    auto_mu, cost_alpha_scsa, cost_cscsa, default_h_grid, scan_h, snr_estimate, AlphaScsaConfig,
    CScsaMu, CostConfig, DenoiseResult, HGrid, TracePoint, DEFAULT_H_GRID_COUNT,
};
pub use signals::{
    add_white_noise, gaussian_peaks, mix_noise, mix_noise_with_weights, standard_test_signal,
    GaussianPeak, GaussianPeakSpec, MixtureWeights, NoiseSpec, TestSignalKind,
};
pub use spectral::{
    assemble_operator, fourier_diff2_matrix, negative_eigenpairs, reconstruct, scsa_transform,
    OperatorMatrix, SchrodingerSpectrum,
};

pub use baselines::{moving_average, savitzky_golay, sg_coefficients, SgParams};

/// Single-precision signal.
pub type Signal32 = Signal<f32>;
/// Double-precision signal.
pub type Signal64 = Signal<f64>;
/// Double-precision spectrum.
pub type SchrodingerSpectrum64 = SchrodingerSpectrum<f64>;
/// Double-precision scan outcome.
pub type DenoiseResult64 = DenoiseResult<f64>;
