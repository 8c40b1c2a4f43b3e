//! Line-oriented text format for partial-label datasets.
//!
//! ```text
//! PLL 1
//! n d q
//! <n lines: d space-separated reals, one instance per line>
//! <n lines: space-separated 1-indexed candidate labels>
//! TRUTH                      (optional section)
//! <n lines: one 1-indexed true label>
//! ```
//!
//! Reals are written with Rust's shortest round-trip representation, so
//! `read(write(ds)) == ds` bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use hera_core::{Matrix, PartialLabelDataset};

use crate::error::{DataError, Result};

pub const MAGIC: &str = "PLL 1";

pub fn write_dataset(ds: &PartialLabelDataset, mut out: impl Write) -> std::io::Result<()> {
    out.write_all(dataset_to_string(ds).as_bytes())
}

pub fn dataset_to_string(ds: &PartialLabelDataset) -> String {
    let (d, n) = ds.features.shape();
    let q = ds.num_labels();
    let mut s = String::new();
    writeln!(s, "{MAGIC}").unwrap();
    writeln!(s, "{n} {d} {q}").unwrap();
    for j in 0..n {
        write_row(&mut s, ds.features.column(j).iter());
    }
    for j in 0..n {
        let labels: Vec<String> = ds.candidate_set(j).into_iter().map(|l| (l + 1).to_string()).collect();
        writeln!(s, "{}", labels.join(" ")).unwrap();
    }
    if let Some(truth) = &ds.ground_truth {
        writeln!(s, "TRUTH").unwrap();
        for y in truth {
            writeln!(s, "{}", y + 1).unwrap();
        }
    }
    s
}

pub(crate) fn write_row<'a>(s: &mut String, values: impl Iterator<Item = &'a f64>) {
    let mut first = true;
    for v in values {
        if !first {
            s.push(' ');
        }
        write!(s, "{v}").unwrap();
        first = false;
    }
    s.push('\n');
}

/// Numbered, non-empty lines of a text file.
pub(crate) struct Lines<R> {
    inner: std::io::Lines<BufReader<R>>,
    line_no: usize,
}

impl<R: Read> Lines<R> {
    pub(crate) fn new(reader: R) -> Self {
        Self { inner: BufReader::new(reader).lines(), line_no: 0 }
    }

    /// Next non-blank line, or `None` at end of input.
    pub(crate) fn next_line(&mut self) -> Result<Option<(usize, String)>> {
        for line in self.inner.by_ref() {
            self.line_no += 1;
            let line = line.map_err(|e| DataError::parse(self.line_no, e.to_string()))?;
            let trimmed = line.trim();
            if !trimmed.is_empty() {
                return Ok(Some((self.line_no, trimmed.to_string())));
            }
        }
        Ok(None)
    }

    pub(crate) fn expect_line(&mut self, what: &str) -> Result<(usize, String)> {
        self.next_line()?.ok_or_else(|| DataError::parse(self.line_no + 1, format!("unexpected end of file, expected {what}")))
    }
}

pub(crate) fn parse_reals(line_no: usize, line: &str, expected: usize) -> Result<Vec<f64>> {
    let values = line
        .split_whitespace()
        .map(|t| match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(DataError::parse(line_no, format!("`{t}` is not a finite real"))),
        })
        .collect::<Result<Vec<_>>>()?;
    if values.len() != expected {
        return Err(DataError::parse(line_no, format!("expected {expected} values, found {}", values.len())));
    }
    Ok(values)
}

pub(crate) fn parse_usizes(line_no: usize, line: &str, expected: usize) -> Result<Vec<usize>> {
    let values = line
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| DataError::parse(line_no, format!("`{t}` is not a nonnegative integer"))))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != expected {
        return Err(DataError::parse(line_no, format!("expected {expected} integers, found {}", values.len())));
    }
    Ok(values)
}

fn parse_label(line_no: usize, token: &str, q: usize) -> Result<usize> {
    match token.parse::<usize>() {
        Ok(l) if (1..=q).contains(&l) => Ok(l - 1),
        _ => Err(DataError::parse(line_no, format!("label `{token}` outside 1..={q}"))),
    }
}

pub fn read_dataset(reader: impl Read) -> Result<PartialLabelDataset> {
    let mut lines = Lines::new(reader);
    let (no, magic) = lines.expect_line("header")?;
    if magic != MAGIC {
        return Err(DataError::parse(no, format!("expected `{MAGIC}`")));
    }
    let (no, dims) = lines.expect_line("dimensions")?;
    let dims = parse_usizes(no, &dims, 3)?;
    let (n, d, q) = (dims[0], dims[1], dims[2]);
    if n == 0 || d == 0 || q < 2 {
        return Err(DataError::parse(no, "need n ≥ 1, d ≥ 1, q ≥ 2"));
    }

    let mut features = Matrix::zeros(d, n);
    for j in 0..n {
        let (no, line) = lines.expect_line("feature row")?;
        let row = parse_reals(no, &line, d)?;
        features.column_mut(j).copy_from_slice(&row);
    }

    let mut candidates = Matrix::zeros(q, n);
    for j in 0..n {
        let (no, line) = lines.expect_line("candidate list")?;
        for token in line.split_whitespace() {
            let l = parse_label(no, token, q)?;
            candidates[(l, j)] = 1.0;
        }
    }

    let ground_truth = match lines.next_line()? {
        None => None,
        Some((_, tag)) if tag == "TRUTH" => {
            let mut truth = Vec::with_capacity(n);
            for _ in 0..n {
                let (no, line) = lines.expect_line("true label")?;
                let mut tokens = line.split_whitespace();
                let label = parse_label(no, tokens.next().unwrap_or(""), q)?;
                if tokens.next().is_some() {
                    return Err(DataError::parse(no, "expected a single true label"));
                }
                if candidates[(label, truth.len())] != 1.0 {
                    return Err(DataError::parse(no, "true label is not among the candidates"));
                }
                truth.push(label);
            }
            if let Some((no, _)) = lines.next_line()? {
                return Err(DataError::parse(no, "trailing content after TRUTH section"));
            }
            Some(truth)
        }
        Some((no, _)) => return Err(DataError::parse(no, "expected `TRUTH` or end of file")),
    };

    Ok(PartialLabelDataset::new(features, candidates, ground_truth)?)
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<PartialLabelDataset> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| DataError::io(path, e))?;
    read_dataset(file)
}

pub fn save_dataset(ds: &PartialLabelDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, dataset_to_string(ds)).map_err(|e| DataError::io(path, e))
}

/// Builds a dataset from CSV files: one instance per row of `features`, one
/// candidate list per row of `labels` (1-indexed, comma- or space-separated),
/// and optionally one true label per row of `truth`.
pub fn dataset_from_csv(
    features: impl AsRef<Path>,
    labels: impl AsRef<Path>,
    truth: Option<&Path>,
    num_labels: Option<usize>,
) -> Result<PartialLabelDataset> {
    let rows = read_csv_rows(features.as_ref())?;
    let label_rows = read_csv_rows(labels.as_ref())?;
    if rows.is_empty() || rows.len() != label_rows.len() {
        return Err(DataError::Invalid(format!(
            "{} feature rows but {} label rows",
            rows.len(),
            label_rows.len()
        )));
    }
    let d = rows[0].1.len();
    let mut features = Matrix::zeros(d, rows.len());
    for (j, (no, fields)) in rows.iter().enumerate() {
        let values = parse_reals(*no, &fields.join(" "), d)?;
        features.column_mut(j).copy_from_slice(&values);
    }
    let mut lists = Vec::with_capacity(label_rows.len());
    for (no, fields) in &label_rows {
        let labels = fields
            .iter()
            .flat_map(|f| f.split_whitespace())
            .map(|t| match t.parse::<usize>() {
                Ok(l) if l >= 1 => Ok(l - 1),
                _ => Err(DataError::parse(*no, format!("`{t}` is not a 1-indexed label"))),
            })
            .collect::<Result<Vec<_>>>()?;
        lists.push(labels);
    }
    let truth = match truth {
        Some(path) => Some(
            read_csv_rows(path)?
                .iter()
                .map(|(no, f)| parse_usizes(*no, &f.join(" "), 1).and_then(|v| {
                    v[0].checked_sub(1).ok_or_else(|| DataError::parse(*no, "labels are 1-indexed"))
                }))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let observed = lists.iter().flatten().chain(truth.iter().flatten()).max().map_or(0, |m| m + 1);
    let q = num_labels.unwrap_or(observed);
    if observed > q {
        return Err(DataError::Invalid(format!("label {observed} exceeds q = {q}")));
    }
    let mut candidates = Matrix::zeros(q, lists.len());
    for (j, list) in lists.iter().enumerate() {
        for &l in list {
            candidates[(l, j)] = 1.0;
        }
    }
    Ok(PartialLabelDataset::new(features, candidates, truth)?)
}

fn read_csv_rows(path: &Path) -> Result<Vec<(usize, Vec<String>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| DataError::Invalid(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| DataError::parse(i + 1, e.to_string()))?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        let fields: Vec<String> = record.iter().filter(|f| !f.is_empty()).map(str::to_string).collect();
        if !fields.is_empty() {
            rows.push((line, fields));
        }
    }
    Ok(rows)
}
