//! Heterogeneous loss, the augmented-Lagrangian objective, and their
//! analytic gradients with respect to `W` and `P`.
//!
//! The ranking term is
//!
//! ```text
//! Σ_i Σ_{j,k} (1/q²) (P[j,i] − P[k,i])² · L((s_j(i) − s_k(i))²),   L(x) = ln(1 + e^{−x})
//! ```
//!
//! summed over all ordered label pairs, where `s = Wᵀ X`. Every ordered pair
//! and its reverse contribute identically, so the implementation visits
//! `j < k` once and doubles.

use crate::dataset::{ConfidenceState, ModelState, PartialLabelDataset};
use crate::params::{Hyperparams, Penalties};
use crate::prox::singular_values;
use crate::{Error, Matrix, Result};

/// `ln(1 + exp(−x))` without overflow for large negative `x`.
pub fn rank_loss_scalar(x: f64) -> f64 {
    if x >= 0.0 {
        libm::log1p(libm::exp(-x))
    } else {
        -x + libm::log1p(libm::exp(x))
    }
}

/// Logistic function `1 / (1 + e^{−z})`, saturating at both ends.
pub(crate) fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// Every term of the augmented-Lagrangian objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBreakdown {
    pub ranking: f64,
    pub reconstruction: f64,
    pub model_complexity: f64,
    pub sparsity: f64,
    pub nuclear: f64,
    /// Trace terms plus quadratic penalties of both constraints.
    pub lagrangian_extras: f64,
    pub total: f64,
}

fn check_model(ds: &PartialLabelDataset, model: &ModelState) -> Result<()> {
    if model.weights.shape() != (ds.num_features(), ds.num_labels()) {
        return Err(Error::ShapeMismatch("weights must be d × q"));
    }
    Ok(())
}

fn check_label_matrix(ds: &PartialLabelDataset, m: &Matrix) -> Result<()> {
    if m.shape() != ds.candidates.shape() {
        return Err(Error::ShapeMismatch("label-space matrices must be q × n"));
    }
    Ok(())
}

fn check_state(ds: &PartialLabelDataset, cs: &ConfidenceState) -> Result<()> {
    for m in [&cs.confidence, &cs.noise, &cs.auxiliary, &cs.multiplier_m, &cs.multiplier_n] {
        check_label_matrix(ds, m)?;
    }
    Ok(())
}

/// Ranking term given precomputed scores `Wᵀ X`.
pub(crate) fn ranking_term(p: &Matrix, scores: &Matrix) -> f64 {
    let (q, n) = p.shape();
    let gamma = (q * q) as f64;
    let mut total = 0.0;
    for i in 0..n {
        let mut col = 0.0;
        for j in 0..q {
            for k in (j + 1)..q {
                let gap = p[(j, i)] - p[(k, i)];
                if gap == 0.0 {
                    continue;
                }
                let m = scores[(j, i)] - scores[(k, i)];
                col += gap * gap * rank_loss_scalar(m * m);
            }
        }
        total += col;
    }
    2.0 * total / gamma
}

fn reconstruction_term(p: &Matrix, scores: &Matrix, alpha: f64) -> f64 {
    0.5 * alpha * (p - scores).norm_squared()
}

/// Ranking plus `(α/2)‖P − WᵀX‖²_F`.
pub fn heterogeneous_loss(ds: &PartialLabelDataset, model: &ModelState, p: &Matrix, alpha: f64) -> Result<f64> {
    check_model(ds, model)?;
    check_label_matrix(ds, p)?;
    let scores = model.scores(&ds.features);
    Ok(ranking_term(p, &scores) + reconstruction_term(p, &scores, alpha))
}

/// The `W` subproblem: heterogeneous loss plus `β‖W‖²_F`.
pub fn weight_objective(ds: &PartialLabelDataset, model: &ModelState, p: &Matrix, hp: &Hyperparams) -> Result<f64> {
    Ok(heterogeneous_loss(ds, model, p, hp.alpha)? + hp.beta * model.weights.norm_squared())
}

/// Sum of `tr(Mᵀ(Y−P−E)) + tr(Nᵀ(P−J)) + (λ/2)‖Y−P−E‖² + (ρ/2)‖P−J‖²`.
fn constraint_terms(y: &Matrix, p: &Matrix, cs: &ConfidenceState, pen: Penalties) -> f64 {
    let r_y = y - p - &cs.noise;
    let r_p = p - &cs.auxiliary;
    cs.multiplier_m.dot(&r_y) + cs.multiplier_n.dot(&r_p) + 0.5 * pen.lambda * r_y.norm_squared() + 0.5 * pen.rho * r_p.norm_squared()
}

/// The `P` subproblem with `W`, `J`, `E`, `M`, `N` frozen; `p` replaces `cs.confidence`.
pub fn confidence_objective(
    ds: &PartialLabelDataset,
    model: &ModelState,
    p: &Matrix,
    cs: &ConfidenceState,
    hp: &Hyperparams,
    pen: Penalties,
) -> Result<f64> {
    check_model(ds, model)?;
    check_label_matrix(ds, p)?;
    check_state(ds, cs)?;
    let scores = model.scores(&ds.features);
    Ok(confidence_objective_with_scores(&ds.candidates, &scores, p, cs, hp, pen))
}

pub(crate) fn confidence_objective_with_scores(
    y: &Matrix,
    scores: &Matrix,
    p: &Matrix,
    cs: &ConfidenceState,
    hp: &Hyperparams,
    pen: Penalties,
) -> f64 {
    ranking_term(p, scores) + reconstruction_term(p, scores, hp.alpha) + constraint_terms(y, p, cs, pen)
}

/// Full augmented-Lagrangian objective at the given state.
pub fn augmented_objective(
    ds: &PartialLabelDataset,
    model: &ModelState,
    cs: &ConfidenceState,
    hp: &Hyperparams,
    pen: Penalties,
) -> Result<LossBreakdown> {
    check_model(ds, model)?;
    check_state(ds, cs)?;
    let scores = model.scores(&ds.features);
    let p = &cs.confidence;
    let ranking = ranking_term(p, &scores);
    let reconstruction = reconstruction_term(p, &scores, hp.alpha);
    let model_complexity = hp.beta * model.weights.norm_squared();
    let sparsity = hp.mu * cs.auxiliary.lp_norm(1);
    let nuclear = if hp.nu == 0.0 { 0.0 } else { hp.nu * singular_values(&cs.noise)?.sum() };
    let lagrangian_extras = constraint_terms(&ds.candidates, p, cs, pen);
    Ok(LossBreakdown {
        ranking,
        reconstruction,
        model_complexity,
        sparsity,
        nuclear,
        lagrangian_extras,
        total: ranking + reconstruction + model_complexity + sparsity + nuclear + lagrangian_extras,
    })
}

/// Gradient of [`weight_objective`] with respect to `W`.
pub fn grad_w(ds: &PartialLabelDataset, model: &ModelState, p: &Matrix, hp: &Hyperparams) -> Result<Matrix> {
    check_model(ds, model)?;
    check_label_matrix(ds, p)?;
    let scores = model.scores(&ds.features);
    Ok(grad_w_with_scores(&ds.features, &model.weights, &scores, p, hp))
}

pub(crate) fn grad_w_with_scores(x: &Matrix, w: &Matrix, scores: &Matrix, p: &Matrix, hp: &Hyperparams) -> Matrix {
    let (q, n) = p.shape();
    let gamma = (q * q) as f64;
    // Per-instance, per-label coefficients G so that the ranking gradient is X Gᵀ.
    let mut coef = (scores - p) * hp.alpha;
    for i in 0..n {
        for j in 0..q {
            for k in (j + 1)..q {
                let gap = p[(j, i)] - p[(k, i)];
                if gap == 0.0 {
                    continue;
                }
                let m = scores[(j, i)] - scores[(k, i)];
                // d/dm of both ordered pairs: 2 · gap² · (−2m σ(−m²)) / γ
                let c = -4.0 * gap * gap * m * logistic(-m * m) / gamma;
                coef[(j, i)] += c;
                coef[(k, i)] -= c;
            }
        }
    }
    x * coef.transpose() + w * (2.0 * hp.beta)
}

/// Gradient of the augmented objective with respect to `P`, all other
/// variables frozen. Descent is `P ← P − η · grad_p`.
pub fn grad_p(
    ds: &PartialLabelDataset,
    model: &ModelState,
    cs: &ConfidenceState,
    hp: &Hyperparams,
    pen: Penalties,
) -> Result<Matrix> {
    check_model(ds, model)?;
    check_state(ds, cs)?;
    let scores = model.scores(&ds.features);
    Ok(grad_p_with_scores(&ds.candidates, &scores, &cs.confidence, cs, hp, pen))
}

pub(crate) fn grad_p_with_scores(
    y: &Matrix,
    scores: &Matrix,
    p: &Matrix,
    cs: &ConfidenceState,
    hp: &Hyperparams,
    pen: Penalties,
) -> Matrix {
    let (q, n) = p.shape();
    let gamma = (q * q) as f64;
    let mut grad = (p - scores) * hp.alpha - &cs.multiplier_m + &cs.multiplier_n - (y - p - &cs.noise) * pen.lambda
        + (p - &cs.auxiliary) * pen.rho;
    for i in 0..n {
        for j in 0..q {
            for k in (j + 1)..q {
                let gap = p[(j, i)] - p[(k, i)];
                if gap == 0.0 {
                    continue;
                }
                let m = scores[(j, i)] - scores[(k, i)];
                let c = 4.0 * gap * rank_loss_scalar(m * m) / gamma;
                grad[(j, i)] += c;
                grad[(k, i)] -= c;
            }
        }
    }
    grad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::init_state;

    #[test]
    fn rank_loss_values() {
        assert!((rank_loss_scalar(0.0) - core::f64::consts::LN_2).abs() < 1e-15);
        let v = rank_loss_scalar(50.0);
        assert!(v > 0.0 && (v - libm::exp(-50.0)).abs() < 1e-30);
        assert!((rank_loss_scalar(-100.0) - 100.0).abs() < 1e-12);
        assert!(rank_loss_scalar(-1e300).is_finite());
    }

    #[test]
    fn rank_loss_shape_on_grid() {
        let xs: alloc::vec::Vec<f64> = (0..400).map(|i| -20.0 + 0.1 * i as f64).collect();
        for w in xs.windows(3) {
            let (a, b, c) = (rank_loss_scalar(w[0]), rank_loss_scalar(w[1]), rank_loss_scalar(w[2]));
            assert!(a > 0.0 && b > 0.0 && c > 0.0);
            assert!(a > b && b > c);
            assert!(a + c - 2.0 * b >= -1e-12);
        }
    }

    fn two_label_instance() -> PartialLabelDataset {
        PartialLabelDataset::new(Matrix::from_element(1, 1, 0.7), Matrix::from_element(2, 1, 1.0), None).unwrap()
    }

    #[test]
    fn hand_evaluated_ranking_term() {
        let ds = two_label_instance();
        let model = ModelState::zeros(1, 2);
        let p = Matrix::from_column_slice(2, 1, &[1.0, 0.0]);
        let v = heterogeneous_loss(&ds, &model, &p, 0.0).unwrap();
        assert!((v - core::f64::consts::LN_2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_columns_leave_only_reconstruction() {
        let ds = PartialLabelDataset::new(
            Matrix::from_row_slice(2, 3, &[0.1, -0.4, 0.9, 1.2, 0.3, -0.8]),
            Matrix::from_element(3, 3, 1.0),
            None,
        )
        .unwrap();
        let model = ModelState { weights: Matrix::from_fn(2, 3, |i, j| 0.3 * i as f64 - 0.2 * j as f64 + 0.1) };
        let p = Matrix::from_fn(3, 3, |_, j| 0.2 + 0.1 * j as f64);
        let scores = model.scores(&ds.features);
        assert_eq!(ranking_term(&p, &scores), 0.0);
        let v = heterogeneous_loss(&ds, &model, &p, 0.4).unwrap();
        assert!((v - 0.2 * (&p - scores).norm_squared()).abs() < 1e-14);
    }

    #[test]
    fn feasible_state_has_no_lagrangian_extras() {
        let ds = PartialLabelDataset::new(
            Matrix::from_row_slice(1, 3, &[0.5, -1.0, 2.0]),
            Matrix::from_row_slice(3, 3, &[1.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0]),
            None,
        )
        .unwrap();
        let (model, mut cs) = init_state(&ds).unwrap();
        let hp = Hyperparams::default();
        let b = augmented_objective(&ds, &model, &cs, &hp, Penalties { lambda: 3.0, rho: 2.0 }).unwrap();
        assert_eq!(b.lagrangian_extras, 0.0);
        cs.noise.fill(0.0);
        let b = augmented_objective(&ds, &model, &cs, &hp, Penalties { lambda: 3.0, rho: 2.0 }).unwrap();
        assert_eq!(b.nuclear, 0.0);
        let sum = b.ranking + b.reconstruction + b.model_complexity + b.sparsity + b.nuclear + b.lagrangian_extras;
        assert!((b.total - sum).abs() <= 1e-12 * b.total.abs());
    }

    #[test]
    fn equal_weight_columns_zero_ranking_gradient() {
        let ds = PartialLabelDataset::new(
            Matrix::from_row_slice(2, 2, &[0.3, -1.0, 0.8, 0.5]),
            Matrix::from_row_slice(3, 2, &[1.0, 0.0, 1.0, 1.0, 0.0, 1.0]),
            None,
        )
        .unwrap();
        let model = ModelState { weights: Matrix::from_fn(2, 3, |i, _| 0.5 + i as f64) };
        let p = Matrix::from_row_slice(3, 2, &[0.9, 0.0, 0.1, 0.6, 0.0, 0.4]);
        let hp = Hyperparams { alpha: 0.0, beta: 0.25, ..Default::default() };
        let g = grad_w(&ds, &model, &p, &hp).unwrap();
        assert!((g - &model.weights * 0.5).norm() < 1e-15);
    }

    #[test]
    fn uniform_p_without_weights_has_zero_gradient() {
        let ds = PartialLabelDataset::new(
            Matrix::from_row_slice(2, 2, &[0.3, -1.0, 0.8, 0.5]),
            Matrix::from_element(3, 2, 1.0),
            None,
        )
        .unwrap();
        let model = ModelState { weights: Matrix::from_fn(2, 3, |i, j| i as f64 - j as f64) };
        let p = Matrix::from_element(3, 2, 1.0 / 3.0);
        let hp = Hyperparams { alpha: 0.0, beta: 0.0, ..Default::default() };
        assert_eq!(grad_w(&ds, &model, &p, &hp).unwrap().norm(), 0.0);
    }

    #[test]
    fn uniform_column_has_zero_ranking_gradient_in_p() {
        let ds = PartialLabelDataset::new(Matrix::from_element(1, 2, 1.0), Matrix::from_element(3, 2, 1.0), None).unwrap();
        let (model, cs) = init_state(&ds).unwrap();
        let hp = Hyperparams { alpha: 0.0, ..Default::default() };
        let g = grad_p(&ds, &model, &cs, &hp, hp.initial_penalties()).unwrap();
        assert_eq!(g.norm(), 0.0);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let ds = two_label_instance();
        let model = ModelState::zeros(2, 2);
        let p = Matrix::zeros(2, 1);
        assert!(matches!(heterogeneous_loss(&ds, &model, &p, 1.0), Err(Error::ShapeMismatch(_))));
        let model = ModelState::zeros(1, 2);
        let p = Matrix::zeros(3, 1);
        assert!(matches!(grad_w(&ds, &model, &p, &Hyperparams::default()), Err(Error::ShapeMismatch(_))));
    }
}
