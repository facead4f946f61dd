//! The 11-point test sample used throughout the documentation and tests.

/// Covariates `x_i`.
pub const COVARIATES: [f64; 11] = [1.7, 2.1, 3.9, 7.2, 8.6, 8.5, 7.3, 5.1, 2.8, 1.8, 1.6];

/// Observations `y_i`, paired with [`COVARIATES`] by position.
pub const OBSERVATIONS: [f64; 11] = [3.2, 3.9, 4.9, 5.3, 5.5, 6.2, 6.5, 6.9, 7.5, 8.3, 9.4];

/// The table as a [`Sample`](crate::Sample).
pub fn sample() -> crate::Sample {
    crate::Sample::new(COVARIATES.to_vec(), OBSERVATIONS.to_vec()).expect("example data is valid")
}
