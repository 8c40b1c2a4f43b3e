//! Shared domain types and their validated constructors.

use alloc::vec::Vec;

use crate::{Error, Matrix, Result};

/// Training input: instance matrix `X` (`d × n`) and binary candidate matrix
/// `Y` (`q × n`), plus optional ground truth used for generation and scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialLabelDataset {
    pub features: Matrix,
    pub candidates: Matrix,
    pub ground_truth: Option<Vec<usize>>,
}

impl PartialLabelDataset {
    pub fn new(features: Matrix, candidates: Matrix, ground_truth: Option<Vec<usize>>) -> Result<Self> {
        let ds = Self { features, candidates, ground_truth };
        validate_dataset(&ds)?;
        Ok(ds)
    }

    /// Fully labeled dataset: every candidate set is the singleton `{truth[j]}`.
    pub fn from_truth(features: Matrix, truth: Vec<usize>, num_labels: usize) -> Result<Self> {
        let n = features.ncols();
        if truth.len() != n {
            return Err(Error::ShapeMismatch("ground truth length differs from instance count"));
        }
        let mut candidates = Matrix::zeros(num_labels, n);
        for (j, &y) in truth.iter().enumerate() {
            if y >= num_labels {
                return Err(Error::LabelOutOfRange { column: j, label: y });
            }
            candidates[(y, j)] = 1.0;
        }
        Self::new(features, candidates, Some(truth))
    }

    pub fn num_features(&self) -> usize {
        self.features.nrows()
    }

    pub fn num_instances(&self) -> usize {
        self.features.ncols()
    }

    pub fn num_labels(&self) -> usize {
        self.candidates.nrows()
    }

    /// Indices of the candidate labels of instance `column`, ascending.
    pub fn candidate_set(&self, column: usize) -> Vec<usize> {
        self.candidates.column(column).iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(i, _)| i).collect()
    }

    pub fn candidate_set_size(&self, column: usize) -> usize {
        self.candidates.column(column).iter().filter(|&&v| v != 0.0).count()
    }

    /// Dataset restricted to the given instance columns, in the given order.
    pub fn select(&self, columns: &[usize]) -> Self {
        Self {
            features: self.features.select_columns(columns),
            candidates: self.candidates.select_columns(columns),
            ground_truth: self.ground_truth.as_ref().map(|t| columns.iter().map(|&j| t[j]).collect()),
        }
    }

    pub fn without_truth(mut self) -> Self {
        self.ground_truth = None;
        self
    }
}

/// Checks every dataset invariant.
pub fn validate_dataset(ds: &PartialLabelDataset) -> Result<()> {
    let (d, n) = ds.features.shape();
    let (q, n_y) = ds.candidates.shape();
    if d == 0 || n == 0 {
        return Err(Error::ShapeMismatch("need at least one feature and one instance"));
    }
    if q < 2 {
        return Err(Error::ShapeMismatch("need at least two labels"));
    }
    if n_y != n {
        return Err(Error::ShapeMismatch("feature and candidate matrices disagree on instance count"));
    }
    if ds.features.iter().any(|v| !v.is_finite()) {
        return Err(Error::ShapeMismatch("features must be finite"));
    }
    for j in 0..n {
        let mut any = false;
        for i in 0..q {
            let v = ds.candidates[(i, j)];
            if v == 1.0 {
                any = true;
            } else if v != 0.0 {
                return Err(Error::NonBinaryCandidate { row: i, column: j });
            }
        }
        if !any {
            return Err(Error::EmptyCandidateSet { column: j });
        }
    }
    if let Some(truth) = &ds.ground_truth {
        if truth.len() != n {
            return Err(Error::ShapeMismatch("ground truth length differs from instance count"));
        }
        for (j, &y) in truth.iter().enumerate() {
            if y >= q {
                return Err(Error::LabelOutOfRange { column: j, label: y });
            }
            if ds.candidates[(y, j)] != 1.0 {
                return Err(Error::TruthNotInCandidates { column: j });
            }
        }
    }
    Ok(())
}

/// The learned linear model; column `j` of `weights` scores label `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelState {
    pub weights: Matrix,
}

impl ModelState {
    pub fn zeros(num_features: usize, num_labels: usize) -> Self {
        Self { weights: Matrix::zeros(num_features, num_labels) }
    }

    /// Model outputs `Wᵀ X`, one column per instance.
    pub fn scores(&self, features: &Matrix) -> Matrix {
        self.weights.tr_mul(features)
    }
}

/// Working set of the augmented-Lagrangian solver. All five matrices are `q × n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceState {
    /// Labeling confidence `P`.
    pub confidence: Matrix,
    /// Noisy-label component `E`.
    pub noise: Matrix,
    /// Split copy `J` of `P` carrying the ℓ1 term.
    pub auxiliary: Matrix,
    /// Multiplier for `Y = P + E`.
    pub multiplier_m: Matrix,
    /// Multiplier for `P = J`.
    pub multiplier_n: Matrix,
}

impl ConfidenceState {
    /// Frobenius norms of the two constraint residuals, `(‖Y − P − E‖, ‖P − J‖)`.
    pub fn residuals(&self, candidates: &Matrix) -> (f64, f64) {
        let r_y = (candidates - &self.confidence - &self.noise).norm();
        let r_p = (&self.confidence - &self.auxiliary).norm();
        (r_y, r_p)
    }

    /// Confidences clamped to `[0, 1]` for reporting.
    pub fn reported_confidence(&self) -> Matrix {
        self.confidence.map(|v| v.clamp(0.0, 1.0))
    }
}

/// Feasible starting point: `W = 0`, `P` uniform over each candidate set,
/// `E = Y − P`, `J = P`, zero multipliers.
pub fn init_state(ds: &PartialLabelDataset) -> Result<(ModelState, ConfidenceState)> {
    validate_dataset(ds)?;
    let (q, n) = ds.candidates.shape();
    let mut confidence = ds.candidates.clone();
    for mut col in confidence.column_iter_mut() {
        let size = col.sum();
        col /= size;
    }
    let noise = &ds.candidates - &confidence;
    let state = ConfidenceState {
        auxiliary: confidence.clone(),
        confidence,
        noise,
        multiplier_m: Matrix::zeros(q, n),
        multiplier_n: Matrix::zeros(q, n),
    };
    Ok((ModelState::zeros(ds.num_features(), q), state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ones_dataset() -> PartialLabelDataset {
        PartialLabelDataset {
            features: Matrix::from_element(2, 3, 0.5),
            candidates: Matrix::from_element(2, 3, 1.0),
            ground_truth: None,
        }
    }

    #[test]
    fn all_ones_candidates_are_valid() {
        assert_eq!(validate_dataset(&ones_dataset()), Ok(()));
    }

    #[test]
    fn empty_column_is_rejected() {
        let mut ds = ones_dataset();
        ds.candidates.column_mut(1).fill(0.0);
        assert_eq!(validate_dataset(&ds), Err(Error::EmptyCandidateSet { column: 1 }));
    }

    #[test]
    fn truth_outside_candidates_is_rejected() {
        let mut ds = ones_dataset();
        ds.candidates[(1, 0)] = 0.0;
        ds.ground_truth = Some(vec![1, 0, 0]);
        assert_eq!(validate_dataset(&ds), Err(Error::TruthNotInCandidates { column: 0 }));
    }

    #[test]
    fn shape_errors() {
        let mut ds = ones_dataset();
        ds.candidates = Matrix::from_element(2, 4, 1.0);
        assert!(matches!(validate_dataset(&ds), Err(Error::ShapeMismatch(_))));
        let mut ds = ones_dataset();
        ds.candidates = Matrix::from_element(1, 3, 1.0);
        assert!(matches!(validate_dataset(&ds), Err(Error::ShapeMismatch(_))));
        let mut ds = ones_dataset();
        ds.candidates[(0, 2)] = 0.5;
        assert_eq!(validate_dataset(&ds), Err(Error::NonBinaryCandidate { row: 0, column: 2 }));
    }

    #[test]
    fn init_splits_uniformly() {
        let features = Matrix::from_element(1, 2, 1.0);
        let candidates = Matrix::from_row_slice(3, 2, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let ds = PartialLabelDataset::new(features, candidates, None).unwrap();
        let (model, cs) = init_state(&ds).unwrap();
        assert!(model.weights.iter().all(|&v| v == 0.0));
        assert_eq!(cs.confidence.column(0).as_slice(), &[0.5, 0.5, 0.0]);
        assert_eq!(cs.noise.column(0).as_slice(), &[0.5, 0.5, 0.0]);
        assert_eq!(cs.confidence.column(1).as_slice(), &[0.0, 0.0, 1.0]);
        assert_eq!(cs.noise.column(1).as_slice(), &[0.0, 0.0, 0.0]);
        assert_eq!(cs.residuals(&ds.candidates), (0.0, 0.0));
    }

    #[test]
    fn select_keeps_truth_aligned() {
        let features = Matrix::from_row_slice(1, 3, &[0.0, 1.0, 2.0]);
        let ds = PartialLabelDataset::from_truth(features, vec![0, 1, 1], 2).unwrap();
        let sub = ds.select(&[2, 0]);
        assert_eq!(sub.features.as_slice(), &[2.0, 0.0]);
        assert_eq!(sub.ground_truth, Some(vec![1, 0]));
        assert_eq!(sub.candidate_set(0), vec![1]);
    }
}
