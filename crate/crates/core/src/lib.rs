//! Kriging with a polynomial trend under white noise, and its analytic
//! continuation to complex evaluation points.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: small dense matrices, Cholesky solves and the complex
//!   scalar types shared by everything else.
//! - [`kriging`]: design matrices, generalized least squares, kriging weights
//!   and Lagrange multipliers, and the kriging variance.
//! - [`complex_moments`]: index moments, the conjugate zero-variance points
//!   `m ± iσ` and the complex-valued mean and variance estimators.
//! - [`validation`]: an independent bordered KKT solver and a reproducible
//!   Monte-Carlo harness for the variance claims.
//! - [`cli`]: CSV ingestion and the `ckrige` command-line front end.
//!
//! All quadratic forms over complex vectors are bilinear (plain transpose,
//! no conjugation). Under that convention the kriging variance of the linear
//! trend vanishes at `m ± iσ`.

pub mod cli;
pub mod complex_moments;
pub mod error;
pub mod example;
pub mod kriging;
pub mod numerics;
pub mod validation;

pub use complex_moments::{
    complex_mean, complex_variance, constant_mean_variance, imaginary_standard_error,
    index_moments, real_standard_error, zero_variance_points, ComplexMoments, IndexMoments,
};
pub use error::{Error, Result};
pub use kriging::{
    build_design, feature_vector, gls_beta, kriging_weights, predict, prediction_error_variance,
    trend_variance, CorrelationMatrix, DesignMatrix, FeatureVector, KrigingSolution, Sample,
    TrendBasis,
};
pub use numerics::{solve_spd, Branch, ComplexScalar, ConjugatePair, Matrix};
pub use validation::{
    kkt_solve, monte_carlo_mse, simulate_process, KktSolution, MonteCarloReport, NoiseKind,
    SimulationConfig,
};
