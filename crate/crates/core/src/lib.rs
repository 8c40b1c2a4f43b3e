//! Partial label learning with a heterogeneous (pairwise ranking + pointwise
//! reconstruction) loss and a sparse/low-rank decomposition of the candidate
//! label matrix, trained by an augmented-Lagrangian alternating scheme.
//!
//! The crate is `no_std` and only needs an allocator. Matrices follow the
//! column-per-instance convention: features are `d × n`, candidate and
//! confidence matrices are `q × n`, and the weight matrix is `d × q`.
//!
//! ```
//! use hera_core::{fit, predict_one, Hyperparams, PartialLabelDataset};
//! use nalgebra::DMatrix;
//!
//! let features = DMatrix::from_row_slice(1, 4, &[-2.0, -1.5, 1.5, 2.0]);
//! let candidates = DMatrix::from_row_slice(2, 4, &[1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1.0]);
//! let ds = PartialLabelDataset::new(features, candidates, None).unwrap();
//! let hp = Hyperparams { iter_max: 20, k_neighbors: 2, ..Hyperparams::default() };
//! let fitted = fit(&ds, &hp).unwrap();
//! let query = nalgebra::DVector::from_vec(vec![-1.8]);
//! let label = predict_one(query.as_view(), &ds, &fitted.model, &fitted.state.confidence, 2).unwrap();
//! assert!(label < 2);
//! ```
#![no_std]

extern crate alloc;

pub mod dataset;
pub mod error;
pub mod loss;
pub mod params;
pub mod predict;
pub mod prox;
pub mod solver;

pub use dataset::{init_state, validate_dataset, ConfidenceState, ModelState, PartialLabelDataset};
pub use error::{Error, Result};
pub use loss::{augmented_objective, grad_p, grad_w, heterogeneous_loss, rank_loss_scalar, LossBreakdown};
pub use params::{Hyperparams, Penalties};
pub use predict::{build_similarity, plknn_predict, predict_batch, predict_one, NeighborContext};
pub use prox::{project_nonneg, shrink, svt};
pub use solver::{fit, fit_with_observer, FitResult, IterationRecord, SolveReport};

/// Dense matrix type used throughout the crate.
pub type Matrix = nalgebra::DMatrix<f64>;
