//! Kriging under white noise with a trend `f(x)ᵀβ`.
//!
//! For observations `v` at covariates `x₁..xₙ`, design matrix `F` (n×k) and
//! correlation matrix `Λ`, the unbiased predictor at a point with features
//! `f` minimising `σ² + σ²ωᵀΛω` subject to `Fᵀω = f` has
//!
//! ```text
//! G = FᵀΛ⁻¹F
//! μ = −G⁻¹f
//! ω = Λ⁻¹F G⁻¹f
//! ωᵀΛω = −fᵀμ = fᵀG⁻¹f
//! ```
//!
//! and `ωᵀv = fᵀβ̂` with the generalized least-squares estimate
//! `β̂ = G⁻¹FᵀΛ⁻¹v`.
//!
//! Features may be complex. Every quadratic form is bilinear (`zᵀAz`, never
//! `z*Az`), so the results are the analytic continuation of the real formulas.

use std::borrow::Cow;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{
    bilinear_dot, dot_real, Cholesky, ComplexScalar, Matrix, SYMMETRY_TOLERANCE,
};

/// Gram condition number above which a warning is emitted.
pub const CONDITION_WARNING: f64 = 1e8;

/// Paired covariates and observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    covariates: Vec<f64>,
    observations: Vec<f64>,
}

impl Sample {
    pub fn new(covariates: Vec<f64>, observations: Vec<f64>) -> Result<Self> {
        if covariates.is_empty() {
            return Err(Error::EmptySample);
        }
        if covariates.len() != observations.len() {
            return Err(Error::LengthMismatch {
                expected: covariates.len(),
                found: observations.len(),
            });
        }
        if covariates.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("covariates"));
        }
        if observations.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("observations"));
        }
        Ok(Self {
            covariates,
            observations,
        })
    }

    pub fn len(&self) -> usize {
        self.covariates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covariates.is_empty()
    }

    pub fn covariates(&self) -> &[f64] {
        &self.covariates
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }
}

/// A user-supplied regression function.
pub type BasisFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The regression functions making up the trend.
#[derive(Clone)]
pub enum TrendBasis {
    /// `f(x) = (1)`.
    Constant,
    /// `f(x) = (1, x)`.
    Linear,
    /// Arbitrary real functions, evaluated per covariate.
    Columns(Vec<BasisFn>),
}

impl TrendBasis {
    pub fn columns<F>(fns: impl IntoIterator<Item = F>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        TrendBasis::Columns(fns.into_iter().map(|f| Arc::new(f) as BasisFn).collect())
    }

    /// Number of regression functions.
    pub fn k(&self) -> usize {
        match self {
            TrendBasis::Constant => 1,
            TrendBasis::Linear => 2,
            TrendBasis::Columns(c) => c.len(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TrendBasis::Constant => "constant",
            TrendBasis::Linear => "linear",
            TrendBasis::Columns(_) => "columns",
        }
    }

    fn eval_into(&self, x: f64, out: &mut [f64]) {
        match self {
            TrendBasis::Constant => out[0] = 1.0,
            TrendBasis::Linear => {
                out[0] = 1.0;
                out[1] = x;
            }
            TrendBasis::Columns(c) => {
                for (o, f) in out.iter_mut().zip(c) {
                    *o = f(x);
                }
            }
        }
    }
}

impl fmt::Debug for TrendBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrendBasis::Columns(c) => write!(f, "Columns(k={})", c.len()),
            other => f.write_str(match other {
                TrendBasis::Constant => "Constant",
                _ => "Linear",
            }),
        }
    }
}

/// The n×k matrix of basis values, row `i` being `f(xᵢ)`.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    f: Matrix,
    basis: TrendBasis,
}

impl DesignMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.f
    }

    pub fn basis(&self) -> &TrendBasis {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.f.rows()
    }

    pub fn k(&self) -> usize {
        self.f.cols()
    }
}

/// Evaluates `basis` at every covariate.
pub fn build_design(basis: TrendBasis, covariates: &[f64]) -> Result<DesignMatrix> {
    if covariates.is_empty() {
        return Err(Error::EmptySample);
    }
    if covariates.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("covariates"));
    }
    let k = basis.k();
    if k == 0 {
        return Err(Error::DegenerateDesign("trend basis has no columns".into()));
    }
    let mut data = vec![0.0; covariates.len() * k];
    for (row, &x) in data.chunks_exact_mut(k).zip(covariates) {
        basis.eval_into(x, row);
    }
    let f = Matrix::new(covariates.len(), k, data)?;
    Ok(DesignMatrix { f, basis })
}

/// Basis values `f(j)` at one evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    f: Vec<ComplexScalar>,
}

impl FeatureVector {
    pub fn new(f: Vec<ComplexScalar>) -> Self {
        Self { f }
    }

    pub fn from_real(f: &[f64]) -> Self {
        Self {
            f: f.iter().map(|&v| ComplexScalar::new(v, 0.0)).collect(),
        }
    }

    pub fn values(&self) -> &[ComplexScalar] {
        &self.f
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.f.iter().all(|z| z.im == 0.0)
    }

    pub fn conj(&self) -> Self {
        Self {
            f: self.f.iter().map(|z| z.conj()).collect(),
        }
    }
}

/// Features of `basis` at a possibly complex point.
pub fn feature_vector(basis: &TrendBasis, point: ComplexScalar) -> Result<FeatureVector> {
    if !point.re.is_finite() || !point.im.is_finite() {
        return Err(Error::NonFinite("evaluation point"));
    }
    let f = match basis {
        TrendBasis::Constant => vec![ComplexScalar::new(1.0, 0.0)],
        TrendBasis::Linear => vec![ComplexScalar::new(1.0, 0.0), point],
        TrendBasis::Columns(cols) => {
            if point.im != 0.0 {
                return Err(Error::UnsupportedComplexBasis {
                    re: point.re,
                    im: point.im,
                });
            }
            cols.iter()
                .map(|c| ComplexScalar::new(c(point.re), 0.0))
                .collect()
        }
    };
    Ok(FeatureVector { f })
}

/// Symmetric positive-definite correlation matrix of the noise.
#[derive(Debug, Clone, Default)]
pub enum CorrelationMatrix {
    /// White noise. Valid for any sample size.
    #[default]
    Identity,
    Dense {
        matrix: Matrix,
        chol: Cholesky,
    },
}

impl CorrelationMatrix {
    /// Validates symmetry, unit diagonal and positive definiteness.
    pub fn dense(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::InvalidCorrelation(format!(
                "expected a non-empty square matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_symmetric(SYMMETRY_TOLERANCE) {
            return Err(Error::InvalidCorrelation("matrix is not symmetric".into()));
        }
        if let Some(i) = (0..matrix.rows()).find(|&i| (matrix[(i, i)] - 1.0).abs() > 1e-12) {
            return Err(Error::InvalidCorrelation(format!(
                "diagonal entry {i} is {}, expected 1",
                matrix[(i, i)]
            )));
        }
        let chol = Cholesky::factor(&matrix)?;
        Ok(CorrelationMatrix::Dense { matrix, chol })
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, CorrelationMatrix::Identity)
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        match self {
            CorrelationMatrix::Identity => Ok(()),
            CorrelationMatrix::Dense { matrix, .. } if matrix.rows() == n => Ok(()),
            CorrelationMatrix::Dense { matrix, .. } => Err(Error::DimensionMismatch(format!(
                "correlation matrix is {0}x{0}, sample has {n} points",
                matrix.rows()
            ))),
        }
    }

    /// `Λ⁻¹F`.
    fn solve_design<'a>(&self, f: &'a Matrix) -> Result<Cow<'a, Matrix>> {
        match self {
            CorrelationMatrix::Identity => Ok(Cow::Borrowed(f)),
            CorrelationMatrix::Dense { chol, .. } => Ok(Cow::Owned(chol.solve(f)?)),
        }
    }

    /// Bilinear `wᵀΛw`.
    pub fn quadratic_form(&self, w: &[ComplexScalar]) -> Result<ComplexScalar> {
        self.check_dim(w.len())?;
        match self {
            CorrelationMatrix::Identity => Ok(bilinear_dot(w, w)),
            CorrelationMatrix::Dense { matrix, .. } => {
                let re = matrix.mul_vec(&w.iter().map(|z| z.re).collect::<Vec<_>>())?;
                let im = matrix.mul_vec(&w.iter().map(|z| z.im).collect::<Vec<_>>())?;
                Ok(w.iter()
                    .zip(re.iter().zip(&im))
                    .map(|(z, (&r, &i))| z * ComplexScalar::new(r, i))
                    .sum())
            }
        }
    }
}

/// `Λ⁻¹F` with the factored Gram matrix `FᵀΛ⁻¹F`.
struct GlsSystem<'a> {
    lambda_inv_f: Cow<'a, Matrix>,
    gram: Matrix,
    chol: Cholesky,
}

impl<'a> GlsSystem<'a> {
    fn new(design: &'a DesignMatrix, corr: &CorrelationMatrix) -> Result<Self> {
        let (n, k) = (design.n(), design.k());
        corr.check_dim(n)?;
        if n < k {
            return Err(Error::DegenerateDesign(format!(
                "{n} observations cannot determine {k} trend coefficients"
            )));
        }
        let lambda_inv_f = corr.solve_design(&design.f)?;
        let gram = if corr.is_identity() {
            design.f.gram()
        } else {
            design.f.transpose().matmul(&lambda_inv_f)?
        };
        let chol = Cholesky::factor(&gram).map_err(|e| match e {
            Error::NotPositiveDefinite { row, pivot } => Error::DegenerateDesign(format!(
                "Gram matrix is singular (pivot {pivot:e} at row {row})"
            )),
            other => other,
        })?;
        Ok(Self {
            lambda_inv_f,
            gram,
            chol,
        })
    }

    fn condition(&self) -> f64 {
        self.chol.condition_1(&self.gram)
    }
}

/// 1-norm condition number of the Gram matrix `FᵀΛ⁻¹F`.
pub fn gram_condition(design: &DesignMatrix, corr: &CorrelationMatrix) -> Result<f64> {
    Ok(GlsSystem::new(design, corr)?.condition())
}

/// Generalized least-squares coefficients `β̂ = (FᵀΛ⁻¹F)⁻¹FᵀΛ⁻¹v`.
pub fn gls_beta(design: &DesignMatrix, corr: &CorrelationMatrix, obs: &[f64]) -> Result<Vec<f64>> {
    if obs.len() != design.n() {
        return Err(Error::LengthMismatch {
            expected: design.n(),
            found: obs.len(),
        });
    }
    let sys = GlsSystem::new(design, corr)?;
    let rhs = sys.lambda_inv_f.transpose().mul_vec(obs)?;
    sys.chol.solve_vec(&rhs)
}

/// Kriging weights, multipliers and variance factor at one evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct KrigingSolution {
    pub weights: Vec<ComplexScalar>,
    pub multipliers: Vec<ComplexScalar>,
    /// Bilinear `fᵀ(FᵀΛ⁻¹F)⁻¹f`.
    pub variance_factor: ComplexScalar,
    /// Filled in by [`krige`]; [`kriging_weights`] never sees observations.
    pub beta_hat: Option<Vec<f64>>,
    pub feature: FeatureVector,
    pub gram_condition: f64,
}

impl KrigingSolution {
    /// `fᵀβ̂`, available once `beta_hat` is known.
    pub fn trend_prediction(&self) -> Option<ComplexScalar> {
        self.beta_hat
            .as_ref()
            .map(|b| dot_real(self.feature.values(), b))
    }
}

/// Closed-form kriging weights `ω = Λ⁻¹F G⁻¹f` and multipliers `μ = −G⁻¹f`.
pub fn kriging_weights(
    design: &DesignMatrix,
    corr: &CorrelationMatrix,
    feature: &FeatureVector,
) -> Result<KrigingSolution> {
    let sys = GlsSystem::new(design, corr)?;
    solve_weights(&sys, design, feature)
}

fn solve_weights(
    sys: &GlsSystem<'_>,
    design: &DesignMatrix,
    feature: &FeatureVector,
) -> Result<KrigingSolution> {
    if feature.len() != design.k() {
        return Err(Error::LengthMismatch {
            expected: design.k(),
            found: feature.len(),
        });
    }
    let g_inv_f = sys.chol.solve_complex(feature.values())?;
    let variance_factor = bilinear_dot(feature.values(), &g_inv_f);
    let weights = (0..design.n())
        .map(|i| dot_real(&g_inv_f, sys.lambda_inv_f.row(i)))
        .collect();
    let gram_condition = sys.condition();
    if gram_condition > CONDITION_WARNING {
        log::warn!("Gram matrix is ill-conditioned (condition estimate {gram_condition:.3e})");
    }
    Ok(KrigingSolution {
        weights,
        multipliers: g_inv_f.into_iter().map(|z| -z).collect(),
        variance_factor,
        beta_hat: None,
        feature: feature.clone(),
        gram_condition,
    })
}

/// [`kriging_weights`] plus the least-squares coefficients for `obs`.
pub fn krige(
    design: &DesignMatrix,
    corr: &CorrelationMatrix,
    feature: &FeatureVector,
    obs: &[f64],
) -> Result<KrigingSolution> {
    if obs.len() != design.n() {
        return Err(Error::LengthMismatch {
            expected: design.n(),
            found: obs.len(),
        });
    }
    let sys = GlsSystem::new(design, corr)?;
    let mut sol = solve_weights(&sys, design, feature)?;
    let rhs = sys.lambda_inv_f.transpose().mul_vec(obs)?;
    sol.beta_hat = Some(sys.chol.solve_vec(&rhs)?);
    Ok(sol)
}

/// Kriging predictor `ωᵀv`.
pub fn predict(solution: &KrigingSolution, obs: &[f64]) -> Result<ComplexScalar> {
    if obs.len() != solution.weights.len() {
        return Err(Error::LengthMismatch {
            expected: solution.weights.len(),
            found: obs.len(),
        });
    }
    Ok(dot_real(&solution.weights, obs))
}

fn check_sigma2(sigma2: f64) -> Result<()> {
    if sigma2.is_finite() && sigma2 >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "noise variance must be finite and non-negative, got {sigma2}"
        )))
    }
}

/// Variance of the trend estimate, `σ² fᵀ(FᵀΛ⁻¹F)⁻¹f`.
pub fn trend_variance(solution: &KrigingSolution, sigma2: f64) -> Result<ComplexScalar> {
    check_sigma2(sigma2)?;
    Ok(solution.variance_factor * sigma2)
}

/// Prediction error variance `σ²(1 + ωᵀΛω)`.
pub fn prediction_error_variance(
    solution: &KrigingSolution,
    corr: &CorrelationMatrix,
    sigma2: f64,
) -> Result<ComplexScalar> {
    check_sigma2(sigma2)?;
    let q = corr.quadratic_form(&solution.weights)?;
    Ok((q + 1.0) * sigma2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example::{COVARIATES, OBSERVATIONS};

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    fn zero_point() -> ComplexScalar {
        // m = 4.6, σ = √(28.5 − 4.6²)
        c(4.6, (28.5_f64 - 4.6 * 4.6).sqrt())
    }

    #[test]
    fn linear_design_rows() {
        let d = build_design(TrendBasis::Linear, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(d.matrix().as_slice(), &[1.0, 1.0, 1.0, 2.0, 1.0, 3.0]);
    }

    #[test]
    fn constant_design_is_ones() {
        let d = build_design(TrendBasis::Constant, &COVARIATES).unwrap();
        assert_eq!((d.n(), d.k()), (11, 1));
        assert!(d.matrix().as_slice().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn linear_design_on_example() {
        let d = build_design(TrendBasis::Linear, &COVARIATES).unwrap();
        assert_eq!(d.matrix().col(1), COVARIATES.to_vec());
        assert_eq!(d.matrix().col(0), vec![1.0; 11]);
    }

    #[test]
    fn columns_design() {
        let basis = TrendBasis::columns([|_: f64| 1.0, |x: f64| x * x]);
        let d = build_design(basis, &[2.0, 3.0]).unwrap();
        assert_eq!(d.matrix().as_slice(), &[1.0, 4.0, 1.0, 9.0]);
    }

    #[test]
    fn empty_design() {
        assert_eq!(
            build_design(TrendBasis::Linear, &[]).unwrap_err(),
            Error::EmptySample
        );
    }

    #[test]
    fn features() {
        let f = feature_vector(&TrendBasis::Linear, c(5.0, 0.0)).unwrap();
        assert_eq!(f.values(), &[c(1.0, 0.0), c(5.0, 0.0)]);
        let f = feature_vector(&TrendBasis::Linear, c(4.6, 2.7092)).unwrap();
        assert_eq!(f.values(), &[c(1.0, 0.0), c(4.6, 2.7092)]);
        let f = feature_vector(&TrendBasis::Constant, c(-3.0, 7.0)).unwrap();
        assert_eq!(f.values(), &[c(1.0, 0.0)]);
    }

    #[test]
    fn columns_reject_complex_points() {
        let basis = TrendBasis::columns([|x: f64| x]);
        assert!(feature_vector(&basis, c(1.0, 0.0)).is_ok());
        assert!(matches!(
            feature_vector(&basis, c(1.0, 0.5)),
            Err(Error::UnsupportedComplexBasis { .. })
        ));
    }

    #[test]
    fn gls_constant_is_mean() {
        let d = build_design(TrendBasis::Constant, &COVARIATES).unwrap();
        let b = gls_beta(&d, &CorrelationMatrix::Identity, &OBSERVATIONS).unwrap();
        let mean = OBSERVATIONS.iter().sum::<f64>() / 11.0;
        assert!((b[0] - mean).abs() < 1e-14);
        assert!((b[0] - 6.145_454_545_454_545).abs() < 1e-13);
    }

    #[test]
    fn gls_exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let v: Vec<f64> = x.iter().map(|x| 2.0 + 3.0 * x).collect();
        let d = build_design(TrendBasis::Linear, &x).unwrap();
        let b = gls_beta(&d, &CorrelationMatrix::Identity, &v).unwrap();
        assert!((b[0] - 2.0).abs() < 1e-12 && (b[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn gls_example_linear() {
        // 40-digit normal-equations oracle over the table.
        let d = build_design(TrendBasis::Linear, &COVARIATES).unwrap();
        let b = gls_beta(&d, &CorrelationMatrix::Identity, &OBSERVATIONS).unwrap();
        assert!((b[0] - 6.512_360_663_859_301).abs() < 1e-12, "{b:?}");
        assert!((b[1] + 0.079_762_199_653_207_83).abs() < 1e-13, "{b:?}");
    }

    #[test]
    fn degenerate_linear_design() {
        let d = build_design(TrendBasis::Linear, &[2.0, 2.0, 2.0]).unwrap();
        assert!(matches!(
            gls_beta(&d, &CorrelationMatrix::Identity, &[1.0, 2.0, 3.0]),
            Err(Error::DegenerateDesign(_))
        ));
        let d = build_design(TrendBasis::Linear, &[2.0]).unwrap();
        assert!(matches!(
            gls_beta(&d, &CorrelationMatrix::Identity, &[1.0]),
            Err(Error::DegenerateDesign(_))
        ));
    }

    #[test]
    fn constant_weights_n4() {
        let d = build_design(TrendBasis::Constant, &[0.0, 1.0, 5.0, 9.0]).unwrap();
        let f = feature_vector(&TrendBasis::Constant, c(2.0, 0.0)).unwrap();
        let s = kriging_weights(&d, &CorrelationMatrix::Identity, &f).unwrap();
        assert!(s.weights.iter().all(|w| *w == c(0.25, 0.0)));
        assert_eq!(s.multipliers, vec![c(-0.25, 0.0)]);
    }

    #[test]
    fn linear_weights_at_center_are_uniform() {
        let d = build_design(TrendBasis::Linear, &COVARIATES).unwrap();
        let f = feature_vector(&TrendBasis::Linear, c(4.6, 0.0)).unwrap();
        let s = kriging_weights(&d, &CorrelationMatrix::Identity, &f).unwrap();
        for w in &s.weights {
            assert!((w - c(1.0 / 11.0, 0.0)).norm() < 1e-14);
            assert_eq!(w.im, 0.0);
        }
        assert!((trend_variance(&s, 1.0).unwrap() - c(1.0 / 11.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn predictions_on_example() {
        let d = build_design(TrendBasis::Linear, &COVARIATES).unwrap();
        let corr = CorrelationMatrix::Identity;
        let f = feature_vector(&TrendBasis::Linear, c(4.6, 0.0)).unwrap();
        let s = krige(&d, &corr, &f, &OBSERVATIONS).unwrap();
        let p = predict(&s, &OBSERVATIONS).unwrap();
        assert!((p - c(6.145_454_545_454_545, 0.0)).norm() < 1e-12);

        let f = feature_vector(&TrendBasis::Linear, zero_point()).unwrap();
        let s = krige(&d, &corr, &f, &OBSERVATIONS).unwrap();
        let p = predict(&s, &OBSERVATIONS).unwrap();
        assert!((p - c(6.145_454_545_454_545, -0.216_095_215_917_482_75)).norm() < 1e-12);
        assert!((p - s.trend_prediction().unwrap()).norm() < 1e-12);
    }

    #[test]
    fn predict_length_mismatch() {
        let d = build_design(TrendBasis::Constant, &[1.0, 2.0]).unwrap();
        let f = FeatureVector::from_real(&[1.0]);
        let s = kriging_weights(&d, &CorrelationMatrix::Identity, &f).unwrap();
        assert_eq!(
            predict(&s, &[1.0]).unwrap_err(),
            Error::LengthMismatch {
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn constant_variance_is_one_over_n() {
        let d = build_design(TrendBasis::Constant, &COVARIATES).unwrap();
        let f = FeatureVector::from_real(&[1.0]);
        let s = kriging_weights(&d, &CorrelationMatrix::Identity, &f).unwrap();
        assert!((trend_variance(&s, 1.0).unwrap().re - 1.0 / 11.0).abs() < 1e-16);
        let pev = prediction_error_variance(&s, &CorrelationMatrix::Identity, 1.0).unwrap();
        assert!((pev - c(12.0 / 11.0, 0.0)).norm() < 1e-15);
        let zero = prediction_error_variance(&s, &CorrelationMatrix::Identity, 0.0).unwrap();
        assert_eq!(zero, c(0.0, 0.0));
    }

    #[test]
    fn variance_vanishes_at_zero_points() {
        let d = build_design(TrendBasis::Linear, &COVARIATES).unwrap();
        for j in [zero_point(), zero_point().conj()] {
            let f = feature_vector(&TrendBasis::Linear, j).unwrap();
            let s = kriging_weights(&d, &CorrelationMatrix::Identity, &f).unwrap();
            assert!(trend_variance(&s, 1.0).unwrap().norm() < 1e-10);
            let pev = prediction_error_variance(&s, &CorrelationMatrix::Identity, 1.0).unwrap();
            assert!((pev - c(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_negative_sigma2() {
        let d = build_design(TrendBasis::Constant, &[1.0]).unwrap();
        let s = kriging_weights(
            &d,
            &CorrelationMatrix::Identity,
            &FeatureVector::from_real(&[1.0]),
        )
        .unwrap();
        assert!(trend_variance(&s, -1.0).is_err());
        assert!(trend_variance(&s, f64::NAN).is_err());
    }

    #[test]
    fn dense_correlation_validation() {
        let bad_diag = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(CorrelationMatrix::dense(bad_diag).is_err());
        let asym = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.2, 1.0]]).unwrap();
        assert!(CorrelationMatrix::dense(asym).is_err());
        let indefinite = Matrix::from_rows(&[vec![1.0, 1.5], vec![1.5, 1.0]]).unwrap();
        assert!(matches!(
            CorrelationMatrix::dense(indefinite),
            Err(Error::NotPositiveDefinite { .. })
        ));
        let ok = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let corr = CorrelationMatrix::dense(ok).unwrap();
        let d = build_design(TrendBasis::Constant, &[1.0, 2.0, 3.0]).unwrap();
        assert!(gls_beta(&d, &corr, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn dense_identity_matches_identity() {
        let corr = CorrelationMatrix::dense(Matrix::identity(11)).unwrap();
        let d = build_design(TrendBasis::Linear, &COVARIATES).unwrap();
        let f = feature_vector(&TrendBasis::Linear, zero_point()).unwrap();
        let a = kriging_weights(&d, &corr, &f).unwrap();
        let b = kriging_weights(&d, &CorrelationMatrix::Identity, &f).unwrap();
        for (x, y) in a.weights.iter().zip(&b.weights) {
            assert!((x - y).norm() < 1e-14);
        }
    }
}
