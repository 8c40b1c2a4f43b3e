//! k-nearest-neighbor label propagation for unseen instances, and the
//! PL-KNN candidate-vote baseline.

use alloc::vec::Vec;

use nalgebra::DVectorView;

use crate::dataset::{ModelState, PartialLabelDataset};
use crate::{Error, Matrix, Result};

/// The query's neighborhood: `k` training columns plus the query itself,
/// stored last.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborContext {
    /// Ascending by distance to the query; equal distances keep the lower index first.
    pub neighbor_indices: Vec<usize>,
    /// `(k+1) × (k+1)` Gaussian similarities.
    pub similarity: Matrix,
    /// `(k+1) × q`: neighbor confidences as rows, then the model output `(Wᵀx*)ᵀ`.
    pub stacked_labels: Matrix,
}

/// The `k` training columns closest to `query` in Euclidean distance.
pub fn nearest_neighbors(features: &Matrix, query: DVectorView<f64>, k: usize) -> Result<Vec<usize>> {
    let n = features.ncols();
    if k == 0 {
        return Err(Error::InvalidHyperparameter { name: "k", reason: "must be positive" });
    }
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }
    if query.len() != features.nrows() {
        return Err(Error::ShapeMismatch("query dimension differs from training features"));
    }
    let mut dist: Vec<(f64, usize)> =
        features.column_iter().enumerate().map(|(j, col)| ((col - query).norm_squared(), j)).collect();
    dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(dist.into_iter().take(k).map(|(_, j)| j).collect())
}

/// Gaussian similarity over a group of points (one per column):
/// `s_ij = exp(−‖x_i − x_j‖² / σ²)`, with `σ` the mean distance from each
/// point to its nearest other point in the group.
pub fn build_similarity(points: &Matrix) -> Result<Matrix> {
    let m = points.ncols();
    if m < 2 {
        return Err(Error::ShapeMismatch("similarity needs at least two points"));
    }
    let sq = Matrix::from_fn(m, m, |i, j| (points.column(i) - points.column(j)).norm_squared());
    let sigma = (0..m)
        .map(|i| (0..m).filter(|&j| j != i).map(|j| sq[(i, j)]).fold(f64::INFINITY, f64::min))
        .map(libm::sqrt)
        .sum::<f64>()
        / m as f64;
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::DegenerateNeighborhood);
    }
    let s2 = sigma * sigma;
    Ok(sq.map(|d| libm::exp(-d / s2)))
}

/// Builds the neighborhood of `query`; a degenerate group falls back to all-ones similarity.
pub fn neighbor_context(
    query: DVectorView<f64>,
    ds: &PartialLabelDataset,
    model: &ModelState,
    confidence: &Matrix,
    k: usize,
) -> Result<NeighborContext> {
    if confidence.shape() != ds.candidates.shape() {
        return Err(Error::ShapeMismatch("confidence must be q × n"));
    }
    if model.weights.shape() != (ds.num_features(), ds.num_labels()) {
        return Err(Error::ShapeMismatch("weights must be d × q"));
    }
    let neighbor_indices = nearest_neighbors(&ds.features, query, k)?;
    let q = ds.num_labels();
    let d = ds.num_features();

    let mut points = Matrix::zeros(d, k + 1);
    let mut stacked_labels = Matrix::zeros(k + 1, q);
    for (row, &j) in neighbor_indices.iter().enumerate() {
        points.set_column(row, &ds.features.column(j));
        stacked_labels.set_row(row, &confidence.column(j).transpose());
    }
    points.set_column(k, &query);
    stacked_labels.set_row(k, &(model.weights.tr_mul(&query)).transpose());

    let similarity = match build_similarity(&points) {
        Ok(s) => s,
        Err(Error::DegenerateNeighborhood) => Matrix::from_element(k + 1, k + 1, 1.0),
        Err(e) => return Err(e),
    };
    Ok(NeighborContext { neighbor_indices, similarity, stacked_labels })
}

/// Index of the largest value; ties resolve to the lowest index.
pub(crate) fn argmax_first(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, v) in values.into_iter().enumerate() {
        if v > best_val {
            best = i;
            best_val = v;
        }
    }
    best
}

/// Predicted label: argmax of the query's row of `S · [P_neighbors; (Wᵀx*)ᵀ]`.
pub fn predict_one(
    query: DVectorView<f64>,
    ds: &PartialLabelDataset,
    model: &ModelState,
    confidence: &Matrix,
    k: usize,
) -> Result<usize> {
    let ctx = neighbor_context(query, ds, model, confidence, k)?;
    let propagated = ctx.similarity.row(k) * &ctx.stacked_labels;
    Ok(argmax_first(propagated.iter().copied()))
}

/// [`predict_one`] over every column of `queries`, preserving order.
pub fn predict_batch(
    queries: &Matrix,
    ds: &PartialLabelDataset,
    model: &ModelState,
    confidence: &Matrix,
    k: usize,
) -> Result<Vec<usize>> {
    queries.column_iter().map(|q| predict_one(q, ds, model, confidence, k)).collect()
}

/// PL-KNN: the label found in the most candidate sets among the `k` nearest
/// training instances.
pub fn plknn_predict(ds: &PartialLabelDataset, query: DVectorView<f64>, k: usize) -> Result<usize> {
    let neighbors = nearest_neighbors(&ds.features, query, k)?;
    let mut votes = nalgebra::DVector::<f64>::zeros(ds.num_labels());
    for j in neighbors {
        votes += ds.candidates.column(j);
    }
    Ok(argmax_first(votes.iter().copied()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use nalgebra::DVector;

    #[test]
    fn two_points_give_exp_minus_one() {
        let pts = Matrix::from_row_slice(2, 2, &[0.0, 3.0, 0.0, 4.0]);
        let s = build_similarity(&pts).unwrap();
        assert_eq!(s[(0, 0)], 1.0);
        assert_eq!(s[(1, 1)], 1.0);
        assert!((s[(0, 1)] - libm::exp(-1.0)).abs() < 1e-15);
        assert_eq!(s[(0, 1)], s[(1, 0)]);
    }

    #[test]
    fn collinear_points() {
        // Nearest-neighbor distances (1, 1, 2), σ = 4/3.
        let pts = Matrix::from_row_slice(1, 3, &[0.0, 1.0, 3.0]);
        let s = build_similarity(&pts).unwrap();
        assert!((s[(0, 1)] - libm::exp(-9.0 / 16.0)).abs() < 1e-15);
        assert!((s[(0, 1)] - 0.569_782_824_730_923).abs() < 1e-12);
        assert!((s[(1, 2)] - libm::exp(-4.0 * 9.0 / 16.0)).abs() < 1e-15);
    }

    #[test]
    fn coincident_points_are_degenerate() {
        let pts = Matrix::from_element(2, 3, 1.5);
        assert_eq!(build_similarity(&pts), Err(Error::DegenerateNeighborhood));
        assert!(build_similarity(&Matrix::zeros(2, 1)).is_err());
    }

    fn line_dataset() -> PartialLabelDataset {
        let features = Matrix::from_row_slice(1, 5, &[0.0, 1.0, 2.0, 10.0, 11.0]);
        let candidates = Matrix::from_row_slice(
            3,
            5,
            &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0],
        );
        PartialLabelDataset::new(features, candidates, None).unwrap()
    }

    #[test]
    fn neighbors_break_ties_by_index() {
        let ds = line_dataset();
        let q = DVector::from_vec(vec![0.5]);
        assert_eq!(nearest_neighbors(&ds.features, q.as_view(), 2).unwrap(), vec![0, 1]);
        assert_eq!(nearest_neighbors(&ds.features, q.as_view(), 6), Err(Error::KTooLarge { k: 6, n: 5 }));
    }

    #[test]
    fn unanimous_one_hot_neighbors() {
        let ds = line_dataset();
        let mut p = Matrix::zeros(3, 5);
        p.row_mut(2).fill(1.0);
        let mut w = Matrix::zeros(1, 3);
        w[(0, 2)] = 0.1;
        let model = ModelState { weights: w };
        let q = DVector::from_vec(vec![10.0]);
        assert_eq!(predict_one(q.as_view(), &ds, &model, &p, 3).unwrap(), 2);
    }

    #[test]
    fn k_one_expands_two_by_two() {
        let ds = line_dataset();
        let p = Matrix::from_fn(3, 5, |i, j| ((i + 2 * j) % 3) as f64 * 0.4);
        let model = ModelState { weights: Matrix::from_row_slice(1, 3, &[0.3, -0.1, 0.05]) };
        let x = 1.4;
        let q = DVector::from_vec(vec![x]);
        let s = libm::exp(-1.0); // two points: σ equals their distance
        let scores: Vec<f64> = (0..3).map(|l| s * p[(l, 1)] + model.weights[(0, l)] * x).collect();
        let expected = argmax_first(scores);
        assert_eq!(predict_one(q.as_view(), &ds, &model, &p, 1).unwrap(), expected);
    }

    #[test]
    fn batch_matches_single() {
        let ds = line_dataset();
        let p = Matrix::from_fn(3, 5, |i, j| ((i * 7 + j * 3) % 5) as f64 / 5.0);
        let model = ModelState { weights: Matrix::from_row_slice(1, 3, &[0.2, 0.0, -0.1]) };
        let queries = Matrix::from_row_slice(1, 4, &[0.2, 5.0, 10.7, 1.9]);
        let batch = predict_batch(&queries, &ds, &model, &p, 2).unwrap();
        for (j, &label) in batch.iter().enumerate() {
            assert_eq!(label, predict_one(queries.column(j), &ds, &model, &p, 2).unwrap());
        }
        assert!(predict_batch(&Matrix::zeros(1, 0), &ds, &model, &p, 2).unwrap().is_empty());
    }

    #[test]
    fn plknn_votes() {
        let ds = line_dataset();
        let q = DVector::from_vec(vec![10.4]);
        assert_eq!(plknn_predict(&ds, q.as_view(), 2).unwrap(), 2);
        // k = 1: nearest is column 3 with candidates {1, 2}; lowest index wins.
        assert_eq!(plknn_predict(&ds, q.as_view(), 1).unwrap(), 1);
        let q = DVector::from_vec(vec![0.4]);
        assert_eq!(plknn_predict(&ds, q.as_view(), 1).unwrap(), 0);
    }
}
