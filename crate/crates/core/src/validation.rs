//! Independent checks of the kriging closed forms.
//!
//! [`kkt_solve`] solves the stationarity and unbiasedness conditions as one
//! bordered linear system,
//!
//! ```text
//! [ Λ   F ] [ω]   [0]
//! [ Fᵀ  0 ] [μ] = [f]
//! ```
//!
//! by LU with partial pivoting, without touching the Gram matrix. The
//! Monte-Carlo harness simulates `v = Fβ + ε` with white noise and measures
//! the empirical error of the kriging predictor at a (possibly complex) point.
//!
//! Replicate `r` draws from ChaCha stream `r` under the configured seed, so a
//! replicate's noise does not depend on how replicates are scheduled, and the
//! moments are reduced sequentially in replicate order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kriging::{
    build_design, feature_vector, kriging_weights, predict, CorrelationMatrix, DesignMatrix,
    FeatureVector, Sample, TrendBasis,
};
use crate::numerics::{ComplexScalar, Matrix};

/// Relative pivot threshold of the bordered LU.
const LU_PIVOT_TOLERANCE: f64 = 1e-12;

/// Weights and multipliers from the bordered system, with its residual.
#[derive(Debug, Clone, PartialEq)]
pub struct KktSolution {
    pub weights: Vec<ComplexScalar>,
    pub multipliers: Vec<ComplexScalar>,
    /// Max-norm residual over both block equations.
    pub residual: f64,
}

/// Row-pivoted LU factors of a square matrix, stored in place.
struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(mut a: Matrix) -> Result<Self> {
        let n = a.rows();
        let threshold = LU_PIVOT_TOLERANCE * a.norm_max();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let (p, best) =
                (col..n)
                    .map(|r| (r, a[(r, col)].abs()))
                    .fold(
                        (col, -1.0),
                        |acc, cur| if cur.1 > acc.1 { cur } else { acc },
                    );
            if best.is_nan() || best <= threshold {
                return Err(Error::SingularSystem(col));
            }
            if p != col {
                for j in 0..n {
                    let tmp = a[(p, j)];
                    a[(p, j)] = a[(col, j)];
                    a[(col, j)] = tmp;
                }
                perm.swap(p, col);
            }
            let pivot = a[(col, col)];
            for r in col + 1..n {
                let factor = a[(r, col)] / pivot;
                a[(r, col)] = factor;
                if factor != 0.0 {
                    for j in col + 1..n {
                        let u = a[(col, j)];
                        a[(r, j)] -= factor * u;
                    }
                }
            }
        }
        Ok(Self { lu: a, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

fn correlation_entries(corr: &CorrelationMatrix, n: usize) -> Result<Matrix> {
    match corr {
        CorrelationMatrix::Identity => Ok(Matrix::identity(n)),
        CorrelationMatrix::Dense { matrix, .. } if matrix.rows() == n => Ok(matrix.clone()),
        CorrelationMatrix::Dense { matrix, .. } => Err(Error::DimensionMismatch(format!(
            "correlation matrix is {0}x{0}, sample has {n} points",
            matrix.rows()
        ))),
    }
}

/// Solves the bordered KKT system for the kriging weights and multipliers.
pub fn kkt_solve(
    design: &DesignMatrix,
    corr: &CorrelationMatrix,
    feature: &FeatureVector,
) -> Result<KktSolution> {
    let (n, k) = (design.n(), design.k());
    if feature.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            found: feature.len(),
        });
    }
    let lambda = correlation_entries(corr, n)?;
    let f = design.matrix();
    let size = n + k;
    let mut m = Matrix::zeros(size, size);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = lambda[(i, j)];
        }
        for c in 0..k {
            m[(i, n + c)] = f[(i, c)];
            m[(n + c, i)] = f[(i, c)];
        }
    }
    let lu = Lu::factor(m.clone())?;

    let mut rhs_re = vec![0.0; size];
    let mut rhs_im = vec![0.0; size];
    for (c, z) in feature.values().iter().enumerate() {
        rhs_re[n + c] = z.re;
        rhs_im[n + c] = z.im;
    }
    let re = lu.solve(&rhs_re);
    let im = lu.solve(&rhs_im);

    let residual = {
        let r_re = m.mul_vec(&re)?;
        let r_im = m.mul_vec(&im)?;
        r_re.iter()
            .zip(&rhs_re)
            .chain(r_im.iter().zip(&rhs_im))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let mut x = re
        .into_iter()
        .zip(im)
        .map(|(r, i)| ComplexScalar::new(r, i));
    let weights = x.by_ref().take(n).collect();
    let multipliers = x.collect();
    Ok(KktSolution {
        weights,
        multipliers,
        residual,
    })
}

/// Distribution of the white noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    #[default]
    Gaussian,
    /// Uniform on `[−√3σ, √3σ]`, i.e. mean zero and variance `σ²`.
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub covariates: Vec<f64>,
    /// True trend coefficients; one entry selects the constant trend, two the
    /// linear trend `β¹ + β²x`.
    pub beta: Vec<f64>,
    /// Noise standard deviation.
    pub sigma: f64,
    pub replicates: usize,
    pub seed: u64,
    pub noise_kind: NoiseKind,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.covariates.is_empty() {
            return Err(Error::EmptySample);
        }
        if self
            .covariates
            .iter()
            .chain(&self.beta)
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite("simulation config"));
        }
        if !matches!(self.beta.len(), 1 | 2) {
            return Err(Error::InvalidConfig(format!(
                "beta must have 1 (constant) or 2 (linear) entries, got {}",
                self.beta.len()
            )));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sigma must be finite and non-negative, got {}",
                self.sigma
            )));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be at least 1".into()));
        }
        Ok(())
    }

    pub fn basis(&self) -> TrendBasis {
        if self.beta.len() == 1 {
            TrendBasis::Constant
        } else {
            TrendBasis::Linear
        }
    }

    /// True trend `Σ βₖ fₖ(j)` at a possibly complex point.
    pub fn trend_at(&self, j: ComplexScalar) -> ComplexScalar {
        match self.beta.as_slice() {
            [b0] => ComplexScalar::new(*b0, 0.0),
            [b0, b1, ..] => j * *b1 + *b0,
            [] => ComplexScalar::new(0.0, 0.0),
        }
    }

    fn rng(&self, replicate: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(replicate as u64);
        rng
    }
}

/// Draws replicate `replicate` of the process.
pub fn simulate_replicate(config: &SimulationConfig, replicate: usize) -> Result<Sample> {
    config.validate()?;
    let mut rng = config.rng(replicate);
    let mut noise: Box<dyn FnMut() -> f64> = match (config.noise_kind, config.sigma) {
        (_, 0.0) => Box::new(|| 0.0),
        (NoiseKind::Gaussian, s) => Box::new(move || {
            let z: f64 = StandardNormal.sample(&mut rng);
            s * z
        }),
        (NoiseKind::Uniform, s) => {
            let half = 3f64.sqrt() * s;
            let dist = Uniform::new_inclusive(-half, half)
                .map_err(|e| Error::InvalidConfig(e.to_string()))?;
            Box::new(move || dist.sample(&mut rng))
        }
    };
    let obs = config
        .covariates
        .iter()
        .map(|&x| config.trend_at(ComplexScalar::new(x, 0.0)).re + noise())
        .collect();
    Sample::new(config.covariates.clone(), obs)
}

/// One realization of the process (replicate 0 of `config.seed`).
pub fn simulate_process(config: &SimulationConfig) -> Result<Sample> {
    simulate_replicate(config, 0)
}

/// Empirical moments of the prediction error `v̂(j) − f(j)ᵀβ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub mean_error_re: f64,
    pub mean_error_im: f64,
    pub var_re: f64,
    pub var_im: f64,
    pub cov_re_im: f64,
    /// Mean of the bilinear square `err²`.
    pub bilinear_mse: ComplexScalar,
    pub replicates_used: usize,
}

/// Simulates `config.replicates` samples and predicts each at
/// `evaluation_point`. Moments use the divide-by-R convention.
pub fn monte_carlo_mse(
    config: &SimulationConfig,
    evaluation_point: ComplexScalar,
) -> Result<MonteCarloReport> {
    config.validate()?;
    let basis = config.basis();
    let design = build_design(basis.clone(), &config.covariates)?;
    let feature = feature_vector(&basis, evaluation_point)?;
    let solution = kriging_weights(&design, &CorrelationMatrix::Identity, &feature)?;
    let truth = config.trend_at(evaluation_point);

    let errors = (0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let sample = simulate_replicate(config, r)?;
            Ok(predict(&solution, sample.observations())? - truth)
        })
        .collect::<Result<Vec<ComplexScalar>>>()?;

    let count = errors.len() as f64;
    let mean = errors.iter().sum::<ComplexScalar>() / count;
    let (mut var_re, mut var_im, mut cov) = (0.0, 0.0, 0.0);
    let mut bilinear = ComplexScalar::new(0.0, 0.0);
    for e in &errors {
        let (dr, di) = (e.re - mean.re, e.im - mean.im);
        var_re += dr * dr;
        var_im += di * di;
        cov += dr * di;
        bilinear += e * e;
    }
    Ok(MonteCarloReport {
        mean_error_re: mean.re,
        mean_error_im: mean.im,
        var_re: var_re / count,
        var_im: var_im / count,
        cov_re_im: cov / count,
        bilinear_mse: bilinear / count,
        replicates_used: errors.len(),
    })
}
