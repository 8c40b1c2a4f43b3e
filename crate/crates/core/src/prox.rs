//! Soft-thresholding, singular value thresholding and nonnegative projection.

use nalgebra::linalg::SVD;

use crate::{Error, Matrix, Result};

const SVD_EPS: f64 = f64::EPSILON;
const SVD_MAX_ITER: usize = 10_000;

/// Scalar soft-threshold.
#[inline]
pub fn shrink_scalar(g: f64, epsilon: f64) -> f64 {
    if g > epsilon {
        g - epsilon
    } else if g < -epsilon {
        g + epsilon
    } else {
        0.0
    }
}

/// Elementwise soft-threshold, the proximal map of `ε‖·‖₁`.
pub fn shrink(matrix: &Matrix, epsilon: f64) -> Result<Matrix> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::NegativeThreshold(epsilon));
    }
    Ok(matrix.map(|g| shrink_scalar(g, epsilon)))
}

fn decompose(matrix: &Matrix, vectors: bool) -> Result<SVD<f64, nalgebra::Dyn, nalgebra::Dyn>> {
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::SvdFailure);
    }
    SVD::try_new(matrix.clone(), vectors, vectors, SVD_EPS, SVD_MAX_ITER).ok_or(Error::SvdFailure)
}

/// Singular values, in no particular order.
pub fn singular_values(matrix: &Matrix) -> Result<nalgebra::DVector<f64>> {
    if matrix.is_empty() {
        return Ok(nalgebra::DVector::zeros(0));
    }
    Ok(decompose(matrix, false)?.singular_values)
}

pub fn nuclear_norm(matrix: &Matrix) -> Result<f64> {
    Ok(singular_values(matrix)?.sum())
}

/// Singular value thresholding `U S_ε[Σ] Vᵀ`, the proximal map of `ε‖·‖_*`.
pub fn svt(matrix: &Matrix, epsilon: f64) -> Result<Matrix> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::NegativeThreshold(epsilon));
    }
    if matrix.is_empty() {
        return Ok(matrix.clone());
    }
    let mut svd = decompose(matrix, true)?;
    svd.singular_values.apply(|s| *s = shrink_scalar(*s, epsilon));
    svd.recompose().map_err(|_| Error::SvdFailure)
}

/// Elementwise `max(·, 0)`.
pub fn project_nonneg(matrix: &Matrix) -> Matrix {
    matrix.map(|v| v.max(0.0))
}
