#![allow(dead_code)]

use complex_kriging::kriging::BasisFn;
use complex_kriging::{
    build_design, ComplexScalar, CorrelationMatrix, DesignMatrix, FeatureVector, Matrix, TrendBasis,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `[1, x, x², …]` with `k` columns. Constant and linear for k ≤ 2.
pub fn polynomial_basis(k: usize) -> TrendBasis {
    match k {
        1 => TrendBasis::Constant,
        2 => TrendBasis::Linear,
        _ => TrendBasis::Columns(
            (0..k)
                .map(|p| Arc::new(move |x: f64| x.powi(p as i32)) as BasisFn)
                .collect(),
        ),
    }
}

/// `(1, j, j², …)` for a possibly complex point.
pub fn polynomial_feature(k: usize, j: ComplexScalar) -> FeatureVector {
    FeatureVector::new((0..k).map(|p| j.powu(p as u32)).collect())
}

pub fn random_covariates(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-3.0..3.0)).collect()
}

pub fn random_design(rng: &mut impl Rng, n: usize, k: usize) -> DesignMatrix {
    build_design(polynomial_basis(k), &random_covariates(rng, n)).unwrap()
}

/// Random correlation matrix: `MᵀM/n + I` rescaled to unit diagonal.
pub fn random_correlation(rng: &mut impl Rng, n: usize) -> CorrelationMatrix {
    let m: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let m = Matrix::new(n, n, m).unwrap();
    let mut a = m.transpose().matmul(&m).unwrap();
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] /= n as f64;
        }
        a[(i, i)] += 1.0;
    }
    let d: Vec<f64> = (0..n).map(|i| a[(i, i)].sqrt()).collect();
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] /= d[i] * d[j];
        }
        a[(i, i)] = 1.0;
    }
    CorrelationMatrix::dense(a).unwrap()
}

pub fn random_point(rng: &mut impl Rng, complex: bool) -> ComplexScalar {
    let re = rng.random_range(-4.0..4.0);
    let im = if complex {
        rng.random_range(-3.0..3.0)
    } else {
        0.0
    };
    c(re, im)
}

/// Max-norm distance between two complex vectors.
pub fn max_diff(a: &[ComplexScalar], b: &[ComplexScalar]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
