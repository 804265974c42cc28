use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::HarnessError;
use crate::Label;

/// Fold index per example. Each class is shuffled with the seeded RNG and
/// dealt round-robin, the negative class continuing where the positive
/// class stopped so fold sizes differ by at most one.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Result<Vec<usize>, HarnessError> {
    if k < 2 {
        return Err(HarnessError::TooFewFolds);
    }
    if labels.len() < k {
        return Err(HarnessError::TooFewExamples {
            examples: labels.len(),
            folds: k,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold = vec![0; labels.len()];
    let mut next = 0;
    for class in [Label::Positive, Label::Negative] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(&mut rng);
        for i in idx {
            fold[i] = next % k;
            next += 1;
        }
    }
    Ok(fold)
}
