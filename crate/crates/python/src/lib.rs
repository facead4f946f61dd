//! Python bindings. Samples are passed as two float sequences, complex
//! results come back as Python `complex`.

use complex_kriging::kriging::{self as core_kriging, BasisFn};
use complex_kriging::{
    self as ck, ComplexScalar, CorrelationMatrix, Error, FeatureVector, Matrix, NoiseKind, Sample,
    SimulationConfig, TrendBasis,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(
    complex_kriging,
    DegenerateError,
    PyValueError,
    "Degenerate design or covariates."
);

fn to_py(err: Error) -> PyErr {
    if err.is_degenerate() {
        DegenerateError::new_err(err.to_string())
    } else {
        PyValueError::new_err(err.to_string())
    }
}

fn sample(covariates: Vec<f64>, observations: Vec<f64>) -> PyResult<Sample> {
    Sample::new(covariates, observations).map_err(to_py)
}

fn basis(name: &str) -> PyResult<TrendBasis> {
    match name {
        "constant" => Ok(TrendBasis::Constant),
        "linear" => Ok(TrendBasis::Linear),
        other => Err(PyValueError::new_err(format!(
            "basis must be 'constant' or 'linear', got {other:?}"
        ))),
    }
}

fn correlation(rows: Option<Vec<Vec<f64>>>) -> PyResult<CorrelationMatrix> {
    match rows {
        None => Ok(CorrelationMatrix::Identity),
        Some(rows) => {
            let m = Matrix::from_rows(&rows).map_err(to_py)?;
            CorrelationMatrix::dense(m).map_err(to_py)
        }
    }
}

#[pyclass(name = "IndexMoments", frozen, get_all)]
struct PyIndexMoments {
    n: usize,
    m_n: f64,
    m_sn: f64,
    sigma_n: f64,
}

#[pyclass(name = "KrigingSolution", frozen, get_all)]
struct PyKrigingSolution {
    weights: Vec<ComplexScalar>,
    multipliers: Vec<ComplexScalar>,
    variance_factor: ComplexScalar,
    beta_hat: Option<Vec<f64>>,
    gram_condition: f64,
}

#[pymethods]
impl PyKrigingSolution {
    /// Kriging predictor `ωᵀv`.
    fn predict(&self, observations: Vec<f64>) -> PyResult<ComplexScalar> {
        if observations.len() != self.weights.len() {
            return Err(to_py(Error::LengthMismatch {
                expected: self.weights.len(),
                found: observations.len(),
            }));
        }
        Ok(self
            .weights
            .iter()
            .zip(&observations)
            .map(|(w, v)| w * v)
            .sum())
    }

    fn trend_variance(&self, sigma2: f64) -> PyResult<ComplexScalar> {
        if !(sigma2.is_finite() && sigma2 >= 0.0) {
            return Err(PyValueError::new_err(
                "sigma2 must be finite and non-negative",
            ));
        }
        Ok(self.variance_factor * sigma2)
    }

    fn __repr__(&self) -> String {
        format!(
            "KrigingSolution(n={}, k={}, variance_factor={})",
            self.weights.len(),
            self.multipliers.len(),
            self.variance_factor
        )
    }
}

#[pyclass(name = "ComplexMoments", frozen, get_all)]
struct PyComplexMoments {
    mean: (ComplexScalar, ComplexScalar),
    variance: (ComplexScalar, ComplexScalar),
    weighted_square: (ComplexScalar, ComplexScalar),
    zero_points: (ComplexScalar, ComplexScalar),
    real_se: f64,
    imag_se: f64,
    slope: f64,
}

#[pymethods]
impl PyComplexMoments {
    fn __repr__(&self) -> String {
        format!(
            "ComplexMoments(mean={:?}, variance={:?}, real_se={}, imag_se={})",
            self.mean, self.variance, self.real_se, self.imag_se
        )
    }
}

#[pyclass(name = "MonteCarloReport", frozen, get_all)]
struct PyMonteCarloReport {
    mean_error_re: f64,
    mean_error_im: f64,
    var_re: f64,
    var_im: f64,
    cov_re_im: f64,
    bilinear_mse: ComplexScalar,
    replicates_used: usize,
}

fn pair(p: ck::ConjugatePair) -> (ComplexScalar, ComplexScalar) {
    (p.plus, p.minus)
}

#[pyfunction]
fn index_moments(covariates: Vec<f64>) -> PyResult<PyIndexMoments> {
    let m = ck::index_moments(&covariates).map_err(to_py)?;
    Ok(PyIndexMoments {
        n: m.n,
        m_n: m.m_n,
        m_sn: m.m_sn,
        sigma_n: m.sigma_n,
    })
}

/// `(m + iσ, m − iσ)`.
#[pyfunction]
fn zero_variance_points(covariates: Vec<f64>) -> PyResult<(ComplexScalar, ComplexScalar)> {
    ck::zero_variance_points(&covariates)
        .map(pair)
        .map_err(to_py)
}

#[pyfunction]
fn complex_mean(
    covariates: Vec<f64>,
    observations: Vec<f64>,
) -> PyResult<(ComplexScalar, ComplexScalar)> {
    ck::complex_mean(&sample(covariates, observations)?)
        .map(pair)
        .map_err(to_py)
}

#[pyfunction]
fn complex_variance(covariates: Vec<f64>, observations: Vec<f64>) -> PyResult<PyComplexMoments> {
    let cm = ck::complex_variance(&sample(covariates, observations)?).map_err(to_py)?;
    Ok(PyComplexMoments {
        mean: pair(cm.mean),
        variance: pair(cm.variance),
        weighted_square: pair(cm.weighted_square),
        zero_points: pair(cm.zero_points),
        real_se: cm.real_se,
        imag_se: cm.imag_se,
        slope: cm.slope,
    })
}

#[pyfunction]
fn real_standard_error(covariates: Vec<f64>, observations: Vec<f64>) -> PyResult<f64> {
    ck::real_standard_error(&sample(covariates, observations)?).map_err(to_py)
}

#[pyfunction]
fn imaginary_standard_error(covariates: Vec<f64>, observations: Vec<f64>) -> PyResult<f64> {
    ck::imaginary_standard_error(&sample(covariates, observations)?).map_err(to_py)
}

#[pyfunction]
fn constant_mean_variance(n: usize, sigma2: f64) -> PyResult<f64> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be at least 1"));
    }
    Ok(ck::constant_mean_variance(n, sigma2))
}

#[pyfunction]
#[pyo3(signature = (covariates, observations, basis="linear", correlation=None))]
fn gls_beta(
    covariates: Vec<f64>,
    observations: Vec<f64>,
    basis: &str,
    correlation: Option<Vec<Vec<f64>>>,
) -> PyResult<Vec<f64>> {
    let design = ck::build_design(self::basis(basis)?, &covariates).map_err(to_py)?;
    ck::gls_beta(&design, &self::correlation(correlation)?, &observations).map_err(to_py)
}

/// Closed-form weights at `point`; pass `observations` to also get `beta_hat`.
#[pyfunction]
#[pyo3(signature = (covariates, point, basis="linear", correlation=None, observations=None))]
fn kriging_weights(
    covariates: Vec<f64>,
    point: ComplexScalar,
    basis: &str,
    correlation: Option<Vec<Vec<f64>>>,
    observations: Option<Vec<f64>>,
) -> PyResult<PyKrigingSolution> {
    let basis = self::basis(basis)?;
    let design = ck::build_design(basis.clone(), &covariates).map_err(to_py)?;
    let corr = self::correlation(correlation)?;
    let feature = ck::feature_vector(&basis, point).map_err(to_py)?;
    let sol = match observations {
        Some(obs) => core_kriging::krige(&design, &corr, &feature, &obs),
        None => ck::kriging_weights(&design, &corr, &feature),
    }
    .map_err(to_py)?;
    Ok(PyKrigingSolution {
        weights: sol.weights,
        multipliers: sol.multipliers,
        variance_factor: sol.variance_factor,
        beta_hat: sol.beta_hat,
        gram_condition: sol.gram_condition,
    })
}

/// Bordered KKT solve with a polynomial feature `(1, j, j², …)` of length k.
#[pyfunction]
#[pyo3(signature = (covariates, point, k=2, correlation=None))]
fn kkt_solve(
    covariates: Vec<f64>,
    point: ComplexScalar,
    k: usize,
    correlation: Option<Vec<Vec<f64>>>,
) -> PyResult<(Vec<ComplexScalar>, Vec<ComplexScalar>)> {
    if k == 0 {
        return Err(PyValueError::new_err("k must be at least 1"));
    }
    let columns = (0..k)
        .map(|p| std::sync::Arc::new(move |x: f64| x.powi(p as i32)) as BasisFn)
        .collect();
    let design = ck::build_design(TrendBasis::Columns(columns), &covariates).map_err(to_py)?;
    let feature = FeatureVector::new((0..k).map(|p| point.powu(p as u32)).collect());
    let sol = ck::kkt_solve(&design, &self::correlation(correlation)?, &feature).map_err(to_py)?;
    Ok((sol.weights, sol.multipliers))
}

#[pyfunction]
#[pyo3(signature = (covariates, beta, sigma, replicates, seed, point, noise="gaussian"))]
fn monte_carlo_mse(
    covariates: Vec<f64>,
    beta: Vec<f64>,
    sigma: f64,
    replicates: usize,
    seed: u64,
    point: ComplexScalar,
    noise: &str,
) -> PyResult<PyMonteCarloReport> {
    let noise_kind = match noise {
        "gaussian" => NoiseKind::Gaussian,
        "uniform" => NoiseKind::Uniform,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown noise kind {other:?}"
            )))
        }
    };
    let config = SimulationConfig {
        covariates,
        beta,
        sigma,
        replicates,
        seed,
        noise_kind,
    };
    let r = ck::monte_carlo_mse(&config, point).map_err(to_py)?;
    Ok(PyMonteCarloReport {
        mean_error_re: r.mean_error_re,
        mean_error_im: r.mean_error_im,
        var_re: r.var_re,
        var_im: r.var_im,
        cov_re_im: r.cov_re_im,
        bilinear_mse: r.bilinear_mse,
        replicates_used: r.replicates_used,
    })
}

#[pymodule]
#[pyo3(name = "complex_kriging")]
fn python_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DegenerateError", m.py().get_type::<DegenerateError>())?;
    m.add_class::<PyIndexMoments>()?;
    m.add_class::<PyKrigingSolution>()?;
    m.add_class::<PyComplexMoments>()?;
    m.add_class::<PyMonteCarloReport>()?;
    m.add_function(wrap_pyfunction!(index_moments, m)?)?;
    m.add_function(wrap_pyfunction!(zero_variance_points, m)?)?;
    m.add_function(wrap_pyfunction!(complex_mean, m)?)?;
    m.add_function(wrap_pyfunction!(complex_variance, m)?)?;
    m.add_function(wrap_pyfunction!(real_standard_error, m)?)?;
    m.add_function(wrap_pyfunction!(imaginary_standard_error, m)?)?;
    m.add_function(wrap_pyfunction!(constant_mean_variance, m)?)?;
    m.add_function(wrap_pyfunction!(gls_beta, m)?)?;
    m.add_function(wrap_pyfunction!(kriging_weights, m)?)?;
    m.add_function(wrap_pyfunction!(kkt_solve, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo_mse, m)?)?;
    m.add("EXAMPLE_COVARIATES", ck::example::COVARIATES.to_vec())?;
    m.add("EXAMPLE_OBSERVATIONS", ck::example::OBSERVATIONS.to_vec())?;
    Ok(())
}
