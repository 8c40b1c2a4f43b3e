//! Alternating augmented-Lagrangian solver.
//!
//! Each outer iteration updates, in order: `W` (gradient descent), `P`
//! (gradient descent then projection onto `P ≥ 0`), `J` (soft-threshold),
//! `E` (singular value thresholding then projection onto `E ≥ 0`), and
//! finally the multipliers and penalties. Gradient steps use a backtracking
//! line search that starts from the configured step and halves until the
//! frozen-variable objective does not increase.

use alloc::vec::Vec;

use crate::dataset::{init_state, validate_dataset, ConfidenceState, ModelState, PartialLabelDataset};
use crate::loss::{
    augmented_objective, confidence_objective_with_scores, grad_p_with_scores, grad_w_with_scores, ranking_term,
};
use crate::params::{Hyperparams, Penalties};
use crate::prox::{project_nonneg, shrink_scalar, svt};
use crate::{Error, Matrix, Result};

const MAX_HALVINGS: usize = 30;

/// Snapshot emitted after every outer iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    /// 1-based outer iteration index.
    pub iteration: usize,
    pub objective: f64,
    /// `‖Y − P − E‖_F`
    pub residual_candidates: f64,
    /// `‖P − J‖_F`
    pub residual_split: f64,
    pub lambda: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    pub loss_trace: Vec<f64>,
    pub feasibility_trace: Vec<(f64, f64)>,
    /// The loss-change stopping rule fired before `iter_max`.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: ModelState,
    pub state: ConfidenceState,
    pub penalties: Penalties,
    pub report: SolveReport,
}

fn all_finite(m: &Matrix) -> bool {
    m.iter().all(|v| v.is_finite())
}

/// Runs up to `steps` backtracking gradient steps from `start`.
fn backtracking_descent(
    start: Matrix,
    steps: usize,
    eta0: f64,
    variable: &'static str,
    objective: impl Fn(&Matrix) -> f64,
    gradient: impl Fn(&Matrix) -> Matrix,
) -> Result<Matrix> {
    let mut x = start;
    for _ in 0..steps {
        let f0 = objective(&x);
        let g = gradient(&x);
        if !f0.is_finite() || !all_finite(&g) {
            return Err(Error::NonFiniteIterate(variable));
        }
        if g.iter().all(|&v| v == 0.0) {
            break;
        }
        let mut eta = eta0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let candidate = &x - &g * eta;
            let f = objective(&candidate);
            if f.is_finite() && f <= f0 {
                accepted = Some(candidate);
                break;
            }
            eta *= 0.5;
        }
        match accepted {
            Some(next) => x = next,
            None => break,
        }
    }
    Ok(x)
}

/// `hp.inner_steps` descent steps on the `W` subproblem with `P` frozen.
pub fn step_w(ds: &PartialLabelDataset, model: &ModelState, p: &Matrix, hp: &Hyperparams) -> Result<ModelState> {
    if model.weights.shape() != (ds.num_features(), ds.num_labels()) || p.shape() != ds.candidates.shape() {
        return Err(Error::ShapeMismatch("step_w operands"));
    }
    let x = &ds.features;
    let objective = |w: &Matrix| {
        let scores = w.tr_mul(x);
        ranking_term(p, &scores) + 0.5 * hp.alpha * (p - &scores).norm_squared() + hp.beta * w.norm_squared()
    };
    let gradient = |w: &Matrix| grad_w_with_scores(x, w, &w.tr_mul(x), p, hp);
    let weights = backtracking_descent(model.weights.clone(), hp.inner_steps, hp.eta_w, "W", objective, gradient)?;
    Ok(ModelState { weights })
}

/// `hp.inner_steps` descent steps on the `P` subproblem, then projection onto `P ≥ 0`.
pub fn step_p(
    ds: &PartialLabelDataset,
    model: &ModelState,
    cs: &ConfidenceState,
    hp: &Hyperparams,
    pen: Penalties,
) -> Result<Matrix> {
    if model.weights.shape() != (ds.num_features(), ds.num_labels()) || cs.confidence.shape() != ds.candidates.shape() {
        return Err(Error::ShapeMismatch("step_p operands"));
    }
    let y = &ds.candidates;
    let scores = model.scores(&ds.features);
    let objective = |p: &Matrix| confidence_objective_with_scores(y, &scores, p, cs, hp, pen);
    let gradient = |p: &Matrix| grad_p_with_scores(y, &scores, p, cs, hp, pen);
    let p = backtracking_descent(cs.confidence.clone(), hp.inner_steps, hp.eta_p, "P", objective, gradient)?;
    Ok(project_nonneg(&p))
}

/// Closed-form minimizer of `μ‖J‖₁ + tr(Nᵀ(P − J)) + (ρ/2)‖P − J‖²`,
/// which is `J = S_{μ/ρ}[P + N/ρ]`.
pub fn step_j(cs: &ConfidenceState, mu: f64, rho: f64) -> Matrix {
    debug_assert!(rho > 0.0 && mu >= 0.0);
    let threshold = mu / rho;
    cs.confidence.zip_map(&cs.multiplier_n, |p, n| shrink_scalar(p + n / rho, threshold))
}

/// `E = max(SVT_{ν/λ}[Y − P + M/λ], 0)`.
pub fn step_e(ds: &PartialLabelDataset, cs: &ConfidenceState, nu: f64, lambda: f64) -> Result<Matrix> {
    let target = &ds.candidates - &cs.confidence + &cs.multiplier_m / lambda;
    Ok(project_nonneg(&svt(&target, nu / lambda)?))
}

/// Multiplier ascent and geometric penalty growth; returns the new penalties.
pub fn update_duals(cs: &mut ConfidenceState, ds: &PartialLabelDataset, pen: Penalties, hp: &Hyperparams) -> Penalties {
    let r_y = &ds.candidates - &cs.confidence - &cs.noise;
    let r_p = &cs.confidence - &cs.auxiliary;
    cs.multiplier_m += r_y * pen.lambda;
    cs.multiplier_n += r_p * pen.rho;
    Penalties { lambda: (hp.tau * pen.lambda).min(hp.lambda_max), rho: (hp.tau * pen.rho).min(hp.rho_max) }
}

fn outer_iteration(
    ds: &PartialLabelDataset,
    model: &mut ModelState,
    cs: &mut ConfidenceState,
    pen: Penalties,
    hp: &Hyperparams,
) -> Result<Penalties> {
    *model = step_w(ds, model, &cs.confidence, hp)?;
    cs.confidence = step_p(ds, model, cs, hp, pen)?;
    cs.auxiliary = step_j(cs, hp.mu, pen.rho);
    cs.noise = step_e(ds, cs, hp.nu, pen.lambda)?;
    Ok(update_duals(cs, ds, pen, hp))
}

pub fn fit(ds: &PartialLabelDataset, hp: &Hyperparams) -> Result<FitResult> {
    fit_with_observer(ds, hp, &mut |_| {})
}

/// [`fit`], reporting every outer iteration to `observer`.
pub fn fit_with_observer(
    ds: &PartialLabelDataset,
    hp: &Hyperparams,
    observer: &mut dyn FnMut(&IterationRecord),
) -> Result<FitResult> {
    hp.validate()?;
    validate_dataset(ds)?;
    let (mut model, mut cs) = init_state(ds)?;
    let mut pen = hp.initial_penalties();
    let mut report = SolveReport::default();
    let mut previous = augmented_objective(ds, &model, &cs, hp, pen)?.total;

    for iteration in 1..=hp.iter_max {
        pen = outer_iteration(ds, &mut model, &mut cs, pen, hp).map_err(|e| e.at_iteration(iteration))?;
        let loss = augmented_objective(ds, &model, &cs, hp, pen).map_err(|e| e.at_iteration(iteration))?.total;
        if !loss.is_finite() {
            return Err(Error::NonFiniteIterate("objective").at_iteration(iteration));
        }
        debug_assert!(cs.confidence.iter().all(|&v| v >= 0.0) && cs.noise.iter().all(|&v| v >= 0.0));
        let (residual_candidates, residual_split) = cs.residuals(&ds.candidates);
        report.iterations = iteration;
        report.loss_trace.push(loss);
        report.feasibility_trace.push((residual_candidates, residual_split));
        observer(&IterationRecord {
            iteration,
            objective: loss,
            residual_candidates,
            residual_split,
            lambda: pen.lambda,
            rho: pen.rho,
        });
        if (loss - previous).abs() <= hp.loss_tol {
            report.converged = true;
            break;
        }
        previous = loss;
    }
    Ok(FitResult { model, state: cs, penalties: pen, report })
}
