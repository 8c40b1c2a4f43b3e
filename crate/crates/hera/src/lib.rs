//! Dataset formats, the controlled corruption protocol, cross-validated
//! evaluation and the `hera` command-line harness built on [`hera_core`].

pub mod corrupt;
pub mod error;
pub mod eval;
pub mod folds;
pub mod format;
pub mod model;
pub mod report;
pub mod sweep;
pub mod synth;

pub use hera_core;

pub use corrupt::{corrupt, CorruptionSpec};
pub use error::{DataError, Result};
pub use eval::{cross_validate, cross_validate_with, EvalOptions, EvalResult, Method};
pub use folds::{kfold_split, Fold};
pub use format::{load_dataset, save_dataset};
pub use model::{load_model, save_model, SavedModel};
pub use report::{append_records, ResultRecord};
pub use sweep::{parse_grid, sweep, sweep_table, Protocol, SweepRow};
pub use synth::{gaussian_blobs, BlobSpec};
