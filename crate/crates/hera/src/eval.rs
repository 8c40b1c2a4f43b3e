//! Cross-validated accuracy for HERA and the PL-KNN baseline.

use hera_core::{fit, plknn_predict, predict_batch, Hyperparams, Matrix, PartialLabelDataset};
use rayon::prelude::*;

use crate::error::{DataError, Result};
use crate::folds::kfold_split;

/// Values of `alpha` tried by inner cross-validation.
pub const ALPHA_GRID: [f64; 4] = [2e-3, 2e-2, 2e-1, 2e0];
const INNER_FOLDS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub per_fold_accuracy: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation over folds.
    pub std: f64,
}

impl EvalResult {
    pub fn from_folds(per_fold_accuracy: Vec<f64>) -> Self {
        let k = per_fold_accuracy.len() as f64;
        let mean = per_fold_accuracy.iter().sum::<f64>() / k;
        let var = per_fold_accuracy.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / k;
        Self { per_fold_accuracy, mean, std: var.sqrt() }
    }

    /// `mean±std` with three decimals.
    pub fn summary(&self) -> String {
        format!("{:.3}±{:.3}", self.mean, self.std)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Hera { hp: Hyperparams, grid_alpha: bool },
    PlKnn { k: usize },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Hera { .. } => "HERA",
            Method::PlKnn { .. } => "PL-KNN",
        }
    }

    /// Trains on `train` (ground truth is never consulted) and labels each column of `test`.
    pub fn fit_predict(&self, train: &PartialLabelDataset, test: &Matrix) -> Result<Vec<usize>> {
        let n = train.num_instances();
        match self {
            Method::Hera { hp, grid_alpha } => {
                let hp = if *grid_alpha { select_alpha(train, hp)? } else { hp.clone() };
                let fitted = fit(train, &hp)?;
                let k = hp.k_neighbors.min(n);
                Ok(predict_batch(test, train, &fitted.model, &fitted.state.confidence, k)?)
            }
            Method::PlKnn { k } => {
                let k = (*k).min(n);
                test.column_iter().map(|x| Ok(plknn_predict(train, x, k)?)).collect()
            }
        }
    }
}

/// Best `alpha` from [`ALPHA_GRID`] by inner cross-validation on `train`,
/// scored against the unique candidate where one exists. Ties keep the smaller value.
fn select_alpha(train: &PartialLabelDataset, hp: &Hyperparams) -> Result<Hyperparams> {
    let n = train.num_instances();
    let scored: Vec<usize> = (0..n).filter(|&j| train.candidate_set_size(j) == 1).collect();
    if scored.len() < INNER_FOLDS || n < INNER_FOLDS {
        return Ok(hp.clone());
    }
    let folds = kfold_split(n, INNER_FOLDS, 0)?;
    let mut best = (f64::NEG_INFINITY, hp.alpha);
    for alpha in ALPHA_GRID {
        let candidate = Hyperparams { alpha, ..hp.clone() };
        let method = Method::Hera { hp: candidate, grid_alpha: false };
        let mut hits = 0usize;
        let mut total = 0usize;
        for fold in &folds {
            let inner = train.select(&fold.train);
            let test: Vec<usize> = fold.test.iter().copied().filter(|j| scored.contains(j)).collect();
            if test.is_empty() {
                continue;
            }
            let predicted = method.fit_predict(&inner, &train.features.select_columns(&test))?;
            for (&j, &p) in test.iter().zip(&predicted) {
                total += 1;
                hits += usize::from(train.candidates[(p, j)] == 1.0);
            }
        }
        let acc = hits as f64 / total.max(1) as f64;
        if acc > best.0 {
            best = (acc, alpha);
        }
    }
    Ok(Hyperparams { alpha: best.1, ..hp.clone() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub folds: usize,
    pub seed: u64,
    /// Standardize each feature with statistics of the training fold.
    pub standardize: bool,
}

/// Per-feature affine map `(x − mean) / std`, fitted on one matrix and applied to others.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    mean: nalgebra::DVector<f64>,
    scale: nalgebra::DVector<f64>,
}

impl Standardizer {
    pub fn fit(features: &Matrix) -> Self {
        let mean = features.column_mean();
        let n = features.ncols() as f64;
        let scale = nalgebra::DVector::from_iterator(
            features.nrows(),
            features.row_iter().zip(mean.iter()).map(|(row, m)| {
                let sd = (row.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n).sqrt();
                if sd > 0.0 {
                    sd
                } else {
                    1.0
                }
            }),
        );
        Self { mean, scale }
    }

    pub fn apply(&self, features: &Matrix) -> Matrix {
        let mut out = features.clone();
        for mut col in out.column_iter_mut() {
            col -= &self.mean;
            col.component_div_assign(&self.scale);
        }
        out
    }
}

pub fn accuracy(predicted: &[usize], truth: &[usize]) -> f64 {
    let hits = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    hits as f64 / truth.len() as f64
}

pub fn cross_validate(ds: &PartialLabelDataset, method: &Method, opts: &EvalOptions) -> Result<EvalResult> {
    cross_validate_with(ds, opts, |train, test| method.fit_predict(train, test))
}

/// Runs `fit_predict` on every fold and scores predictions against the
/// ground truth. The training subset passed in has its ground truth removed.
/// Folds may run concurrently; results are kept in fold order.
pub fn cross_validate_with<F>(ds: &PartialLabelDataset, opts: &EvalOptions, fit_predict: F) -> Result<EvalResult>
where
    F: Fn(&PartialLabelDataset, &Matrix) -> Result<Vec<usize>> + Sync,
{
    let truth = ds.ground_truth.as_ref().ok_or(DataError::MissingGroundTruth)?;
    let folds = kfold_split(ds.num_instances(), opts.folds, opts.seed)?;
    let per_fold = folds
        .par_iter()
        .map(|fold| {
            let mut train = ds.select(&fold.train).without_truth();
            let mut test = ds.features.select_columns(&fold.test);
            if opts.standardize {
                let scaler = Standardizer::fit(&train.features);
                train.features = scaler.apply(&train.features);
                test = scaler.apply(&test);
            }
            let predicted = fit_predict(&train, &test)?;
            if predicted.len() != fold.test.len() {
                return Err(DataError::Invalid("prediction count differs from test fold size".into()));
            }
            let expected: Vec<usize> = fold.test.iter().map(|&j| truth[j]).collect();
            Ok(accuracy(&predicted, &expected))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(EvalResult::from_folds(per_fold))
}
