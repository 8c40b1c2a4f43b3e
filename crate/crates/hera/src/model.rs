//! Text format for trained models.
//!
//! ```text
//! PLLMODEL 1
//! d q n
//! <d lines: q reals, the rows of W>
//! <q lines: n reals, the rows of P>
//! HYPERPARAMS
//! <one `name value` line per hyperparameter>
//! ```
//!
//! Prediction also needs the training features, which stay in the dataset file.

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::Path;

use hera_core::{Hyperparams, Matrix, ModelState};

use crate::error::{DataError, Result};
use crate::format::{parse_reals, parse_usizes, write_row, Lines};

pub const MODEL_MAGIC: &str = "PLLMODEL 1";

#[derive(Debug, Clone, PartialEq)]
pub struct SavedModel {
    /// `d × q`.
    pub weights: Matrix,
    /// `q × n` labeling confidence of the training instances.
    pub confidence: Matrix,
    pub hyperparams: Hyperparams,
}

impl SavedModel {
    pub fn model_state(&self) -> ModelState {
        ModelState { weights: self.weights.clone() }
    }
}

pub fn model_to_string(model: &SavedModel) -> String {
    let (d, q) = model.weights.shape();
    let n = model.confidence.ncols();
    let mut s = String::new();
    writeln!(s, "{MODEL_MAGIC}").unwrap();
    writeln!(s, "{d} {q} {n}").unwrap();
    for row in model.weights.row_iter() {
        write_row(&mut s, row.iter());
    }
    for row in model.confidence.row_iter() {
        write_row(&mut s, row.iter());
    }
    writeln!(s, "HYPERPARAMS").unwrap();
    for (name, value) in hyperparam_fields(&model.hyperparams) {
        writeln!(s, "{name} {value}").unwrap();
    }
    s
}

fn hyperparam_fields(hp: &Hyperparams) -> [(&'static str, String); 15] {
    [
        ("alpha", hp.alpha.to_string()),
        ("beta", hp.beta.to_string()),
        ("mu", hp.mu.to_string()),
        ("nu", hp.nu.to_string()),
        ("lambda0", hp.lambda0.to_string()),
        ("rho0", hp.rho0.to_string()),
        ("lambda_max", hp.lambda_max.to_string()),
        ("rho_max", hp.rho_max.to_string()),
        ("tau", hp.tau.to_string()),
        ("eta_w", hp.eta_w.to_string()),
        ("eta_p", hp.eta_p.to_string()),
        ("inner_steps", hp.inner_steps.to_string()),
        ("iter_max", hp.iter_max.to_string()),
        ("loss_tol", hp.loss_tol.to_string()),
        ("k", hp.k_neighbors.to_string()),
    ]
}

fn set_hyperparam(hp: &mut Hyperparams, name: &str, value: &str) -> std::result::Result<(), String> {
    let real = || value.parse::<f64>().map_err(|_| format!("`{value}` is not a real"));
    let count = || value.parse::<usize>().map_err(|_| format!("`{value}` is not a nonnegative integer"));
    match name {
        "alpha" => hp.alpha = real()?,
        "beta" => hp.beta = real()?,
        "mu" => hp.mu = real()?,
        "nu" => hp.nu = real()?,
        "lambda0" => hp.lambda0 = real()?,
        "rho0" => hp.rho0 = real()?,
        "lambda_max" => hp.lambda_max = real()?,
        "rho_max" => hp.rho_max = real()?,
        "tau" => hp.tau = real()?,
        "eta_w" => hp.eta_w = real()?,
        "eta_p" => hp.eta_p = real()?,
        "inner_steps" => hp.inner_steps = count()?,
        "iter_max" => hp.iter_max = count()?,
        "loss_tol" => hp.loss_tol = real()?,
        "k" => hp.k_neighbors = count()?,
        _ => return Err(format!("unknown hyperparameter `{name}`")),
    }
    Ok(())
}

pub fn read_model(reader: impl Read) -> Result<SavedModel> {
    let mut lines = Lines::new(reader);
    let (no, magic) = lines.expect_line("header")?;
    if magic != MODEL_MAGIC {
        return Err(DataError::parse(no, format!("expected `{MODEL_MAGIC}`")));
    }
    let (no, dims) = lines.expect_line("dimensions")?;
    let dims = parse_usizes(no, &dims, 3)?;
    let (d, q, n) = (dims[0], dims[1], dims[2]);

    let mut weights = Matrix::zeros(d, q);
    for r in 0..d {
        let (no, line) = lines.expect_line("weight row")?;
        weights.row_mut(r).copy_from_slice(&parse_reals(no, &line, q)?);
    }
    let mut confidence = Matrix::zeros(q, n);
    for r in 0..q {
        let (no, line) = lines.expect_line("confidence row")?;
        confidence.row_mut(r).copy_from_slice(&parse_reals(no, &line, n)?);
    }

    let (no, tag) = lines.expect_line("HYPERPARAMS")?;
    if tag != "HYPERPARAMS" {
        return Err(DataError::parse(no, "expected `HYPERPARAMS`"));
    }
    let mut hyperparams = Hyperparams::default();
    while let Some((no, line)) = lines.next_line()? {
        let mut tokens = line.split_whitespace();
        let (Some(name), Some(value), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(DataError::parse(no, "expected `name value`"));
        };
        set_hyperparam(&mut hyperparams, name, value).map_err(|reason| DataError::parse(no, reason))?;
    }
    Ok(SavedModel { weights, confidence, hyperparams })
}

pub fn load_model(path: impl AsRef<Path>) -> Result<SavedModel> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| DataError::io(path, e))?;
    read_model(file)
}

pub fn save_model(model: &SavedModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_string(model)).map_err(|e| DataError::io(path, e))
}
