use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::Dataset;
use crate::error::{Error, Result};

/// Assigns each example a fold in `0..k`, stratified by class: per class the
/// shuffled examples are dealt round-robin, with the starting fold rotated by
/// the number of examples already dealt so remainders spread evenly. Within a
/// class, fold counts differ by at most one; the same holds overall.
///
/// Returns `fold[i]` = fold of example `i`. Errors if any class has fewer
/// than `k` examples (named in the message) or `k < 2`.
pub fn stratified_kfold(data: &Dataset, k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::invalid(format!("k must be at least 2, got {k}")));
    }
    let c = data.n_classes();
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); c];
    for (i, ex) in data.examples.iter().enumerate() {
        by_class[ex.label].push(i);
    }
    for (class, members) in by_class.iter().enumerate() {
        if members.len() < k {
            return Err(Error::invalid(format!(
                "class `{}` has only {} examples, need at least {} for {}-fold assignment",
                data.labels.name(class),
                members.len(),
                k,
                k
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold = vec![0usize; data.len()];
    let mut dealt = 0usize;
    for members in by_class.iter_mut() {
        members.shuffle(&mut rng);
        for (j, &idx) in members.iter().enumerate() {
            fold[idx] = (dealt + j) % k;
        }
        dealt += members.len();
    }
    Ok(fold)
}
