//! Accuracy curves over a grid of corruption settings.

use std::fmt::Write as _;
use std::str::FromStr;

use hera_core::PartialLabelDataset;

use crate::corrupt::{corrupt, CorruptionSpec};
use crate::error::{DataError, Result};
use crate::eval::{cross_validate, EvalOptions, EvalResult, Method};

/// Which corruption parameter the grid varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Proportion `p` of corrupted instances with one false label each.
    R1,
    R2,
    R3,
    /// Coupling probability `ε`, every instance carrying one false label.
    Eps,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::R1 => "r1",
            Protocol::R2 => "r2",
            Protocol::R3 => "r3",
            Protocol::Eps => "eps",
        }
    }

    /// Name of the varied parameter.
    pub fn variable(self) -> &'static str {
        match self {
            Protocol::Eps => "eps",
            _ => "p",
        }
    }

    pub fn corruption(self, value: f64, seed: u64) -> CorruptionSpec {
        match self {
            Protocol::R1 => CorruptionSpec { p: value, r: 1, epsilon: None, seed },
            Protocol::R2 => CorruptionSpec { p: value, r: 2, epsilon: None, seed },
            Protocol::R3 => CorruptionSpec { p: value, r: 3, epsilon: None, seed },
            Protocol::Eps => CorruptionSpec { p: 1.0, r: 1, epsilon: Some(value), seed },
        }
    }
}

impl FromStr for Protocol {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r1" => Ok(Protocol::R1),
            "r2" => Ok(Protocol::R2),
            "r3" => Ok(Protocol::R3),
            "eps" => Ok(Protocol::Eps),
            _ => Err(DataError::Invalid(format!("unknown protocol `{s}` (expected r1, r2, r3 or eps)"))),
        }
    }
}

/// Parses `start:stop:step` (inclusive) or a comma-separated list.
/// Range values are rounded to 12 decimals so `0.1:0.7:0.1` yields `0.3`, not `0.30000000000000004`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || DataError::Invalid(format!("malformed grid `{spec}`"));
    let real = |t: &str| t.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    let parts: Vec<&str> = spec.split(':').collect();
    let values = match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (real(start)?, real(stop)?, real(step)?);
            if step <= 0.0 || stop < start {
                return Err(bad());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect()
        }
        [list] => list.split(',').map(real).collect::<Result<Vec<_>>>()?,
        _ => return Err(bad()),
    };
    if values.is_empty() {
        return Err(bad());
    }
    Ok(values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub hera: EvalResult,
    pub baseline: EvalResult,
}

/// Corrupts `clean` at every grid value (corruption seeded with `opts.seed`)
/// and cross-validates HERA and PL-KNN on the result.
pub fn sweep(
    clean: &PartialLabelDataset,
    protocol: Protocol,
    grid: &[f64],
    hera: &Method,
    baseline: &Method,
    opts: &EvalOptions,
) -> Result<Vec<SweepRow>> {
    grid.iter()
        .map(|&value| {
            let ds = corrupt(clean, &protocol.corruption(value, opts.seed))?;
            Ok(SweepRow { value, hera: cross_validate(&ds, hera, opts)?, baseline: cross_validate(&ds, baseline, opts)? })
        })
        .collect()
}

/// Tab-separated table, one header line starting with `#`, then one row per grid value.
pub fn sweep_table(protocol: Protocol, rows: &[SweepRow]) -> String {
    let mut s = String::new();
    writeln!(s, "#{}\tHERA\tPL-KNN", protocol.variable()).unwrap();
    for row in rows {
        writeln!(s, "{}\t{}\t{}", row.value, row.hera.summary(), row.baseline.summary()).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_grid() {
        assert_eq!(parse_grid("0.1:0.7:0.1").unwrap(), [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]);
        assert_eq!(parse_grid("0.5:0.5:0.1").unwrap(), [0.5]);
        assert_eq!(parse_grid("0.1, 0.4").unwrap(), [0.1, 0.4]);
        assert!(parse_grid("0.7:0.1:0.1").is_err());
        assert!(parse_grid("0.1:0.7:0").is_err());
        assert!(parse_grid("a").is_err());
    }

    #[test]
    fn protocols() {
        assert_eq!("eps".parse::<Protocol>().unwrap(), Protocol::Eps);
        assert!("r4".parse::<Protocol>().is_err());
        let spec = Protocol::Eps.corruption(0.3, 5);
        assert_eq!((spec.p, spec.r, spec.epsilon), (1.0, 1, Some(0.3)));
        assert_eq!(Protocol::R3.corruption(0.2, 5).r, 3);
    }

    #[test]
    fn table_layout() {
        let r = EvalResult::from_folds(vec![1.0, 0.5]);
        let rows = vec![SweepRow { value: 0.1, hera: r.clone(), baseline: r }];
        assert_eq!(sweep_table(Protocol::R1, &rows), "#p\tHERA\tPL-KNN\n0.1\t0.750±0.250\t0.750±0.250\n");
    }
}
