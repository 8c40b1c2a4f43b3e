use rand::seq::SliceRandom;

use crate::corrupt::seeded_rng;
use crate::error::{DataError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Seeded k-fold partition of `0..n`.
///
/// A seeded permutation is cut into `folds` contiguous blocks; the first
/// `n % folds` blocks are one longer. Index lists are returned sorted.
pub fn kfold_split(n: usize, folds: usize, seed: u64) -> Result<Vec<Fold>> {
    if folds < 2 || folds > n {
        return Err(DataError::BadFoldCount { folds, n });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut seeded_rng(seed));
    let base = n / folds;
    let extra = n % folds;
    let mut out = Vec::with_capacity(folds);
    let mut start = 0;
    for f in 0..folds {
        let len = base + usize::from(f < extra);
        let mut test = perm[start..start + len].to_vec();
        let mut train: Vec<usize> = perm[..start].iter().chain(&perm[start + len..]).copied().collect();
        test.sort_unstable();
        train.sort_unstable();
        out.push(Fold { train, test });
        start += len;
    }
    Ok(out)
}
