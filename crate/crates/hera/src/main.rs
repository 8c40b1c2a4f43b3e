//! `hera` command-line harness.
//!
//! Exit status: 0 success, 2 usage error, 3 data error, 4 numerical failure.
//!
//! `train` writes the iteration log to `<model>.log`: a `#` header line, then
//! one tab-separated line per outer iteration with the columns
//! `iteration objective residual_candidates residual_split lambda rho`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hera::format::{dataset_from_csv, load_dataset, save_dataset};
use hera::hera_core::{fit_with_observer, predict_batch, Hyperparams};
use hera::{
    append_records, corrupt, cross_validate, gaussian_blobs, load_model, parse_grid, save_model, sweep, sweep_table,
    BlobSpec, CorruptionSpec, DataError, EvalOptions, Method, Protocol, ResultRecord, SavedModel,
};

#[derive(Parser)]
#[command(name = "hera", version, about = "Partial label learning with heterogeneous loss")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Add false candidate labels to a fully labeled dataset.
    Corrupt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Coupling probability; switches to the one-false-label-per-instance protocol.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fit a model and write it with its iteration log.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        hyper: HyperArgs,
    },
    /// Label the instances of a dataset file with a trained model.
    Predict {
        /// Training dataset the model was fitted on.
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Dataset whose features are labeled; its candidates are ignored.
        #[arg(long)]
        query: PathBuf,
    },
    /// Cross-validated accuracy.
    Eval {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Append a JSON-lines record here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Evaluate a baseline instead of HERA.
        #[arg(long, value_enum)]
        baseline: Option<Baseline>,
        #[arg(long)]
        standardize: bool,
        #[command(flatten)]
        hyper: HyperArgs,
    },
    /// Accuracy of HERA and PL-KNN over a grid of corruption settings.
    Sweep {
        /// Fully labeled dataset.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_parser = ["r1", "r2", "r3", "eps"])]
        protocol: String,
        /// `start:stop:step` or a comma-separated list.
        #[arg(long, default_value = "0.1:0.7:0.1")]
        grid: String,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Table output.
        #[arg(long)]
        out: PathBuf,
        /// Append JSON-lines records here.
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long)]
        standardize: bool,
        #[command(flatten)]
        hyper: HyperArgs,
    },
    /// Convert CSV features and candidate lists to the native format.
    Convert {
        #[arg(long, num_args = 2, value_names = ["FEATURES", "LABELS"])]
        csv: Vec<PathBuf>,
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Number of labels; defaults to the largest label seen.
        #[arg(long)]
        labels: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate fully labeled Gaussian blobs.
    Blobs {
        #[arg(long, default_value_t = 150)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        q: usize,
        /// Distance between class means in noise standard deviations.
        #[arg(long, default_value_t = 6.0)]
        separation: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Baseline {
    Plknn,
}

#[derive(Args, Clone)]
struct HyperArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    lambda0: Option<f64>,
    #[arg(long)]
    rho0: Option<f64>,
    #[arg(long)]
    lambda_max: Option<f64>,
    #[arg(long)]
    rho_max: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    eta_w: Option<f64>,
    #[arg(long)]
    eta_p: Option<f64>,
    #[arg(long)]
    iter_max: Option<usize>,
    #[arg(long)]
    loss_tol: Option<f64>,
    #[arg(long)]
    inner_steps: Option<usize>,
    /// Neighbors used for prediction and by PL-KNN.
    #[arg(long)]
    k: Option<usize>,
    /// Choose alpha by inner cross-validation on each training fold.
    #[arg(long)]
    grid_alpha: bool,
}

impl HyperArgs {
    fn hyperparams(&self) -> Hyperparams {
        let d = Hyperparams::default();
        Hyperparams {
            alpha: self.alpha.unwrap_or(d.alpha),
            beta: self.beta.unwrap_or(d.beta),
            mu: self.mu.unwrap_or(d.mu),
            nu: self.nu.unwrap_or(d.nu),
            lambda0: self.lambda0.unwrap_or(d.lambda0),
            rho0: self.rho0.unwrap_or(d.rho0),
            lambda_max: self.lambda_max.unwrap_or(d.lambda_max),
            rho_max: self.rho_max.unwrap_or(d.rho_max),
            tau: self.tau.unwrap_or(d.tau),
            eta_w: self.eta_w.unwrap_or(d.eta_w),
            eta_p: self.eta_p.unwrap_or(d.eta_p),
            inner_steps: self.inner_steps.unwrap_or(d.inner_steps),
            iter_max: self.iter_max.unwrap_or(d.iter_max),
            loss_tol: self.loss_tol.unwrap_or(d.loss_tol),
            k_neighbors: self.k.unwrap_or(d.k_neighbors),
        }
    }

    fn hera(&self) -> Method {
        Method::Hera { hp: self.hyperparams(), grid_alpha: self.grid_alpha }
    }

    fn plknn(&self) -> Method {
        Method::PlKnn { k: self.hyperparams().k_neighbors }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hera: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn write_file(path: &Path, contents: &str) -> hera::Result<()> {
    fs::write(path, contents).map_err(|e| DataError::Io { path: path.to_path_buf(), source: e })
}

fn run(command: Command) -> hera::Result<()> {
    match command {
        Command::Corrupt { input, out, p, r, eps, seed } => {
            let clean = load_dataset(&input)?;
            let ds = corrupt(&clean, &CorruptionSpec { p, r, epsilon: eps, seed })?;
            save_dataset(&ds, &out)?;
            let n = ds.num_instances();
            let sizes: Vec<usize> = (0..n).map(|j| ds.candidate_set_size(j)).collect();
            let corrupted = sizes.iter().filter(|&&s| s > 1).count();
            let mean = sizes.iter().sum::<usize>() as f64 / n as f64;
            println!("n={n} q={} corrupted={corrupted} mean_candidates={mean:.3}", ds.num_labels());
        }
        Command::Train { data, out, hyper } => {
            let ds = load_dataset(&data)?;
            let hp = hyper.hyperparams();
            let mut log = String::from("#iteration\tobjective\tresidual_candidates\tresidual_split\tlambda\trho\n");
            let fitted = fit_with_observer(&ds, &hp, &mut |r| {
                writeln!(
                    log,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    r.iteration, r.objective, r.residual_candidates, r.residual_split, r.lambda, r.rho
                )
                .unwrap();
            })?;
            let saved = SavedModel { weights: fitted.model.weights, confidence: fitted.state.confidence, hyperparams: hp };
            save_model(&saved, &out)?;
            let mut log_path = out.into_os_string();
            log_path.push(".log");
            write_file(Path::new(&log_path), &log)?;
            let report = &fitted.report;
            let (ry, rp) = report.feasibility_trace.last().copied().unwrap_or((0.0, 0.0));
            println!("iterations\t{}", report.iterations);
            println!("converged\t{}", report.converged);
            if let Some(loss) = report.loss_trace.last() {
                println!("objective\t{loss}");
            }
            println!("residual_candidates\t{ry}");
            println!("residual_split\t{rp}");
        }
        Command::Predict { data, model, query } => {
            let ds = load_dataset(&data)?;
            let saved = load_model(&model)?;
            let queries = load_dataset(&query)?;
            let k = saved.hyperparams.k_neighbors.min(ds.num_instances());
            let labels = predict_batch(&queries.features, &ds, &saved.model_state(), &saved.confidence, k)?;
            let mut text = String::new();
            for l in &labels {
                writeln!(text, "{}", l + 1).unwrap();
            }
            print!("{text}");
            if let Some(truth) = &queries.ground_truth {
                eprintln!("accuracy {:.3}", hera::eval::accuracy(&labels, truth));
            }
        }
        Command::Eval { data, folds, seed, out, baseline, standardize, hyper } => {
            let ds = load_dataset(&data)?;
            let method = match baseline {
                Some(Baseline::Plknn) => hyper.plknn(),
                None => hyper.hera(),
            };
            let result = cross_validate(&ds, &method, &EvalOptions { folds, seed, standardize })?;
            println!("{}\t{}", method.name(), result.summary());
            let per_fold: Vec<String> = result.per_fold_accuracy.iter().map(|a| a.to_string()).collect();
            println!("folds\t{}", per_fold.join(" "));
            if let Some(out) = out {
                let record = ResultRecord::new(&data.display().to_string(), "none", None, method.name(), &result, seed);
                append_records(out, &[record])?;
            }
        }
        Command::Sweep { data, protocol, grid, folds, seed, out, records, standardize, hyper } => {
            let clean = load_dataset(&data)?;
            let protocol: Protocol = protocol.parse()?;
            let grid = parse_grid(&grid)?;
            let opts = EvalOptions { folds, seed, standardize };
            let rows = sweep(&clean, protocol, &grid, &hyper.hera(), &hyper.plknn(), &opts)?;
            let table = sweep_table(protocol, &rows);
            write_file(&out, &table)?;
            print!("{table}");
            if let Some(path) = records {
                let name = data.display().to_string();
                let recs: Vec<ResultRecord> = rows
                    .iter()
                    .flat_map(|row| {
                        [("HERA", &row.hera), ("PL-KNN", &row.baseline)]
                            .map(|(m, r)| ResultRecord::new(&name, protocol.name(), Some(row.value), m, r, seed))
                    })
                    .collect();
                append_records(path, &recs)?;
            }
        }
        Command::Convert { csv, truth, labels, out } => {
            let ds = dataset_from_csv(&csv[0], &csv[1], truth.as_deref(), labels)?;
            save_dataset(&ds, &out)?;
            println!("n={} d={} q={}", ds.num_instances(), ds.num_features(), ds.num_labels());
        }
        Command::Blobs { n, d, q, separation, seed, out } => {
            let ds = gaussian_blobs(&BlobSpec { n, d, q, separation, seed })?;
            save_dataset(&ds, &out)?;
        }
    }
    Ok(())
}
