//! Synthetic Gaussian-blob datasets.

use hera_core::{Matrix, PartialLabelDataset};
use rand_distr::{Distribution, StandardNormal};

use crate::corrupt::seeded_rng;
use crate::error::{DataError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlobSpec {
    pub n: usize,
    pub d: usize,
    pub q: usize,
    /// Distance between any two class means, in units of the per-class standard deviation.
    pub separation: f64,
    pub seed: u64,
}

/// Fully labeled blobs with unit-variance isotropic noise. Class `c` is
/// centered at `(separation/√2)·e_c`, so every pair of means is
/// `separation` apart. Labels cycle `0, 1, …, q−1`.
pub fn gaussian_blobs(spec: &BlobSpec) -> Result<PartialLabelDataset> {
    let BlobSpec { n, d, q, separation, seed } = *spec;
    if q < 2 || d < q || n == 0 {
        return Err(DataError::Invalid(format!("blobs need q ≥ 2, d ≥ q, n ≥ 1 (got n={n}, d={d}, q={q})")));
    }
    let mut rng = seeded_rng(seed);
    let offset = separation / std::f64::consts::SQRT_2;
    let truth: Vec<usize> = (0..n).map(|j| j % q).collect();
    let mut features = Matrix::zeros(d, n);
    for (j, &y) in truth.iter().enumerate() {
        for i in 0..d {
            let noise: f64 = StandardNormal.sample(&mut rng);
            features[(i, j)] = noise + if i == y { offset } else { 0.0 };
        }
    }
    Ok(PartialLabelDataset::from_truth(features, truth, q)?)
}
