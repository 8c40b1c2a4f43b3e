//! Controlled candidate-label corruption of fully labeled data.
//!
//! All randomness comes from [`seeded_rng`]: ChaCha8 (`rand_chacha` 0.9)
//! seeded with `SeedableRng::seed_from_u64`. Outputs are reproducible for a
//! given seed as long as that generator is unchanged.

use hera_core::{Matrix, PartialLabelDataset};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{DataError, Result};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parameters of one corruption run.
///
/// Without `epsilon`, `round(p·n)` instances each receive `r` false labels.
/// With `epsilon`, every instance receives exactly one false label, which is
/// the coupling label of its class with probability `epsilon` (`p` and `r`
/// are then ignored).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorruptionSpec {
    pub p: f64,
    pub r: usize,
    pub epsilon: Option<f64>,
    pub seed: u64,
}

impl CorruptionSpec {
    pub fn validate(&self, num_labels: usize) -> Result<()> {
        if let Some(eps) = self.epsilon {
            if !(0.0..=1.0).contains(&eps) {
                return Err(DataError::Invalid(format!("epsilon = {eps} outside [0, 1]")));
            }
            return Ok(());
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(DataError::Invalid(format!("p = {} outside [0, 1]", self.p)));
        }
        if self.r == 0 {
            return Err(DataError::Invalid("r must be at least 1".into()));
        }
        if self.r + 1 > num_labels {
            return Err(DataError::RTooLarge { r: self.r, q: num_labels });
        }
        Ok(())
    }

    /// Number of instances that receive false labels, `round(p·n)` with ties to even.
    pub fn corrupted_count(&self, n: usize) -> usize {
        (self.p * n as f64).round_ties_even() as usize
    }
}

/// Label that co-occurs with class `y` in the ε protocol.
pub fn coupling_label(y: usize, num_labels: usize) -> usize {
    (y + 1) % num_labels
}

/// Rebuilds the candidate matrix from the ground truth and adds false
/// candidate labels according to `spec`. The true label always stays.
pub fn corrupt(ds: &PartialLabelDataset, spec: &CorruptionSpec) -> Result<PartialLabelDataset> {
    let truth = ds.ground_truth.as_ref().ok_or(DataError::MissingGroundTruth)?;
    let q = ds.num_labels();
    let n = ds.num_instances();
    spec.validate(q)?;
    let mut rng = seeded_rng(spec.seed);
    let mut candidates = Matrix::zeros(q, n);
    for (j, &y) in truth.iter().enumerate() {
        candidates[(y, j)] = 1.0;
    }

    match spec.epsilon {
        None => {
            let mut selected = sample(&mut rng, n, spec.corrupted_count(n)).into_vec();
            selected.sort_unstable();
            for j in selected {
                let y = truth[j];
                for other in sample(&mut rng, q - 1, spec.r) {
                    let label = if other >= y { other + 1 } else { other };
                    candidates[(label, j)] = 1.0;
                }
            }
        }
        Some(eps) => {
            for (j, &y) in truth.iter().enumerate() {
                let coupled = coupling_label(y, q);
                let label = if q == 2 || rng.random_bool(eps) {
                    coupled
                } else {
                    // Uniform over labels other than the truth and its coupling label.
                    let mut l = rng.random_range(0..q - 2);
                    for skip in sorted_pair(y, coupled) {
                        if l >= skip {
                            l += 1;
                        }
                    }
                    l
                };
                candidates[(label, j)] = 1.0;
            }
        }
    }

    Ok(PartialLabelDataset::new(ds.features.clone(), candidates, Some(truth.clone()))?)
}

fn sorted_pair(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}
