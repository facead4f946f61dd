//! Complex-valued mean and variance from the linear trend.
//!
//! With `f(j) = (1, j)` and identity correlation the kriging variance factor
//! is `(j² − 2mₙj + m_sn) / (nσₙ²)`, whose roots are `j = mₙ ± iσₙ`. Kriging
//! at those points gives
//!
//! ```text
//! m̂   = v̄ ± i σₙ⁻¹ (mean(x·v) − mₙ v̄)
//! ωᵀv² = mean(v²) ± i σₙ⁻¹ (mean(x·v²) − mₙ mean(v²))
//! σ̂²  = ωᵀv² − m̂²
//! ```
//!
//! The "plus" branch always carries `+σₙ` in `j`; both branches are returned.
//! Centered sums are used for the moment formulas, which is algebraically the
//! same thing and keeps shifts of the covariates exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kriging::{
    build_design, feature_vector, kriging_weights, CorrelationMatrix, Sample, TrendBasis,
};
use crate::numerics::{dot_real, Branch, ComplexScalar, ConjugatePair};

/// Sample moments of the covariates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexMoments {
    pub n: usize,
    /// Mean of the covariates.
    pub m_n: f64,
    /// Mean of the squared covariates.
    pub m_sn: f64,
    /// `√(m_sn − m_n²)`, computed from centered squares.
    pub sigma_n: f64,
}

impl IndexMoments {
    /// The zero-variance spread check shared by every operation below.
    fn require_spread(&self) -> Result<()> {
        if self.n < 2 || self.sigma_n <= 1e-14 * self.m_n.abs().max(1.0) {
            return Err(Error::DegenerateCovariates {
                sigma_n: self.sigma_n,
            });
        }
        Ok(())
    }

    /// `j² − 2mₙj + m_sn`, the numerator of the linear-trend variance factor.
    pub fn variance_quadratic(&self, j: ComplexScalar) -> ComplexScalar {
        j * j - j * (2.0 * self.m_n) + self.m_sn
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// `mean((a − ā)(b − b̄))`.
fn centered_cross(a: &[f64], a_mean: f64, b: &[f64], b_mean: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - a_mean) * (y - b_mean))
        .sum::<f64>()
        / a.len() as f64
}

pub fn index_moments(covariates: &[f64]) -> Result<IndexMoments> {
    if covariates.is_empty() {
        return Err(Error::EmptySample);
    }
    if covariates.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("covariates"));
    }
    let m_n = mean(covariates);
    let m_sn = covariates.iter().map(|x| x * x).sum::<f64>() / covariates.len() as f64;
    let sigma_n = centered_cross(covariates, m_n, covariates, m_n).sqrt();
    Ok(IndexMoments {
        n: covariates.len(),
        m_n,
        m_sn,
        sigma_n,
    })
}

/// The conjugate roots `mₙ ± iσₙ` of the linear-trend variance factor.
pub fn zero_variance_points(covariates: &[f64]) -> Result<ConjugatePair> {
    let m = index_moments(covariates)?;
    m.require_spread()?;
    Ok(ConjugatePair::new(
        ComplexScalar::new(m.m_n, m.sigma_n),
        ComplexScalar::new(m.m_n, -m.sigma_n),
    ))
}

/// `u ± i σₙ⁻¹ mean((x − mₙ)(w − w̄))`, the shape shared by `m̂` and `ωᵀv²`.
fn moment_pair(moments: &IndexMoments, covariates: &[f64], values: &[f64]) -> ConjugatePair {
    let w_mean = mean(values);
    let im = centered_cross(covariates, moments.m_n, values, w_mean) / moments.sigma_n;
    ConjugatePair::new(
        ComplexScalar::new(w_mean, im),
        ComplexScalar::new(w_mean, -im),
    )
}

/// Complex mean `m̂ = v̄ ± i σₙ⁻¹(mean(x·v) − mₙv̄)`.
pub fn complex_mean(sample: &Sample) -> Result<ConjugatePair> {
    let m = index_moments(sample.covariates())?;
    m.require_spread()?;
    Ok(moment_pair(&m, sample.covariates(), sample.observations()))
}

/// Linear-trend kriging weights at each zero-variance point.
fn zero_point_weights(sample: &Sample) -> Result<[Vec<ComplexScalar>; 2]> {
    let points = zero_variance_points(sample.covariates())?;
    let design = build_design(TrendBasis::Linear, sample.covariates())?;
    let corr = CorrelationMatrix::Identity;
    let weights = |branch| -> Result<Vec<ComplexScalar>> {
        let f = feature_vector(&TrendBasis::Linear, points.get(branch))?;
        Ok(kriging_weights(&design, &corr, &f)?.weights)
    };
    Ok([weights(Branch::Plus)?, weights(Branch::Minus)?])
}

/// `m̂` computed as the kriging predictor `ωᵀv` at `mₙ ± iσₙ`.
pub fn complex_mean_by_kriging(sample: &Sample) -> Result<ConjugatePair> {
    let [plus, minus] = zero_point_weights(sample)?;
    let v = sample.observations();
    Ok(ConjugatePair::new(dot_real(&plus, v), dot_real(&minus, v)))
}

/// `ωᵀv²` from the closed moment formula.
pub fn weighted_square_by_moments(sample: &Sample) -> Result<ConjugatePair> {
    let m = index_moments(sample.covariates())?;
    m.require_spread()?;
    let squares: Vec<f64> = sample.observations().iter().map(|v| v * v).collect();
    Ok(moment_pair(&m, sample.covariates(), &squares))
}

/// Complex mean, variance and the two standard errors of one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexMoments {
    pub mean: ConjugatePair,
    pub variance: ConjugatePair,
    /// `ωᵀv²`, the kriging weights applied to squared observations.
    pub weighted_square: ConjugatePair,
    pub real_se: f64,
    /// `|â|σₙ`, equal to `|Im(m̂)|`.
    pub imag_se: f64,
    /// Least-squares slope `â`; its sign fixes which branch has negative `Im(m̂)`.
    pub slope: f64,
    pub zero_points: ConjugatePair,
    pub index: IndexMoments,
}

/// Complex variance `σ̂² = ωᵀv² − m̂²`, each branch paired with the same `j`.
pub fn complex_variance(sample: &Sample) -> Result<ComplexMoments> {
    let index = index_moments(sample.covariates())?;
    index.require_spread()?;
    let mean = moment_pair(&index, sample.covariates(), sample.observations());
    let squares: Vec<f64> = sample.observations().iter().map(|v| v * v).collect();
    let [w_plus, w_minus] = zero_point_weights(sample)?;
    let weighted_square =
        ConjugatePair::new(dot_real(&w_plus, &squares), dot_real(&w_minus, &squares));
    let variance = ConjugatePair::new(
        weighted_square.plus - mean.plus * mean.plus,
        weighted_square.minus - mean.minus * mean.minus,
    );
    Ok(ComplexMoments {
        mean,
        variance,
        weighted_square,
        real_se: real_standard_error(sample)?,
        imag_se: mean.plus.im.abs(),
        slope: mean.plus.im / index.sigma_n,
        zero_points: ConjugatePair::new(
            ComplexScalar::new(index.m_n, index.sigma_n),
            ComplexScalar::new(index.m_n, -index.sigma_n),
        ),
        index,
    })
}

/// `√((mean(v²) − v̄²)/n)`, divide-by-n convention.
pub fn real_standard_error(sample: &Sample) -> Result<f64> {
    let v = sample.observations();
    if v.is_empty() {
        return Err(Error::EmptySample);
    }
    let v_mean = mean(v);
    Ok((centered_cross(v, v_mean, v, v_mean) / v.len() as f64).sqrt())
}

/// `|â|σₙ`, the magnitude of `Im(m̂)`. The sign of `â` is in
/// [`ComplexMoments::slope`].
pub fn imaginary_standard_error(sample: &Sample) -> Result<f64> {
    Ok(complex_mean(sample)?.plus.im.abs())
}

/// `σ²/n`, the trend variance of the constant-mean model. Requires `n ≥ 1`.
pub fn constant_mean_variance(n: usize, sigma2: f64) -> f64 {
    debug_assert!(n >= 1);
    sigma2 / n as f64
}
