use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SampleRecord;
use crate::compose::{ood_split, OodSplit};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum SplitPolicy {
    /// Seeded Bernoulli split.
    Random { test_frac: f64, seed: u64 },
    /// Records touching any held-out sub-category go to test.
    OodDistortion,
}

fn is_ood(record: &SampleRecord) -> bool {
    record
        .recipe_meta
        .iter()
        .flat_map(|r| &r.specs)
        .any(|s| ood_split(s.sub) == OodSplit::Validation)
}

/// Partition into `(train, test)`, preserving input order within each side.
pub fn split_dataset(
    records: Vec<SampleRecord>,
    policy: SplitPolicy,
) -> Result<(Vec<SampleRecord>, Vec<SampleRecord>)> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("cannot split an empty dataset".into()));
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    match policy {
        SplitPolicy::Random { test_frac, seed } => {
            if !(0.0..=1.0).contains(&test_frac) {
                return Err(Error::InvalidArgument(format!(
                    "test_frac must be in [0, 1], got {test_frac}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for r in records {
                if rng.random_bool(test_frac) {
                    test.push(r);
                } else {
                    train.push(r);
                }
            }
        }
        SplitPolicy::OodDistortion => {
            for r in records {
                if is_ood(&r) {
                    test.push(r);
                } else {
                    train.push(r);
                }
            }
        }
    }
    Ok((train, test))
}
