use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvaluationError;

/// Motion groups held out in one fold, and the groups trained on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldSpec {
    pub fold_id: usize,
    pub train_groups: Vec<String>,
    pub test_groups: Vec<String>,
}

/// Splits motion groups into folds of two test groups each.
///
/// The distinct groups are sorted, shuffled with a generator seeded by
/// `seed`, and consecutive pairs become the test sets. Exactly 10 groups
/// (5 folds) are required unless `allow_any_even` is set, in which case any
/// even count `2k >= 4` gives `k` folds.
pub fn kfold_split<S: AsRef<str>>(
    groups: &[S],
    seed: u64,
    allow_any_even: bool,
) -> Result<Vec<FoldSpec>, EvaluationError> {
    let distinct: BTreeSet<&str> = groups.iter().map(AsRef::as_ref).collect();
    let count = distinct.len();
    let valid = if allow_any_even {
        count >= 4 && count.is_multiple_of(2)
    } else {
        count == 10
    };
    if !valid {
        return Err(EvaluationError::GroupCount {
            found: count,
            expected: if allow_any_even {
                "an even number (at least 4) of".into()
            } else {
                "10".into()
            },
        });
    }

    let mut shuffled: Vec<&str> = distinct.into_iter().collect();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let folds = shuffled
        .chunks(2)
        .enumerate()
        .map(|(fold_id, pair)| {
            let mut test_groups: Vec<String> = pair.iter().map(|g| g.to_string()).collect();
            test_groups.sort();
            let mut train_groups: Vec<String> = shuffled
                .iter()
                .filter(|g| !pair.contains(g))
                .map(|g| g.to_string())
                .collect();
            train_groups.sort();
            FoldSpec {
                fold_id,
                train_groups,
                test_groups,
            }
        })
        .collect();
    Ok(folds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ten() -> Vec<String> {
        (0..10).map(|g| g.to_string()).collect()
    }

    #[test]
    fn five_folds_partition() {
        for seed in 0..20 {
            let folds = kfold_split(&ten(), seed, false).unwrap();
            assert_eq!(folds.len(), 5);
            let mut seen = BTreeSet::new();
            for f in &folds {
                assert_eq!(f.test_groups.len(), 2);
                assert_eq!(f.train_groups.len(), 8);
                for g in &f.test_groups {
                    assert!(!f.train_groups.contains(g));
                    assert!(seen.insert(g.clone()));
                }
            }
            assert_eq!(seen.len(), 10);
        }
    }

    #[test]
    fn seeded() {
        assert_eq!(
            kfold_split(&ten(), 7, false).unwrap(),
            kfold_split(&ten(), 7, false).unwrap()
        );
        let mut reversed = ten();
        reversed.reverse();
        assert_eq!(
            kfold_split(&ten(), 7, false).unwrap(),
            kfold_split(&reversed, 7, false).unwrap()
        );
    }

    #[test]
    fn group_count() {
        let six: Vec<String> = (0..6).map(|g| format!("m{g}")).collect();
        assert!(matches!(
            kfold_split(&six, 0, false),
            Err(EvaluationError::GroupCount { found: 6, .. })
        ));
        let folds = kfold_split(&six, 0, true).unwrap();
        assert_eq!(folds.len(), 3);
        assert!(folds
            .iter()
            .all(|f| f.test_groups.len() == 2 && f.train_groups.len() == 4));
        assert!(kfold_split(&six[..5], 0, true).is_err());
        // duplicates collapse
        let mut dup = ten();
        dup.extend(ten());
        assert_eq!(kfold_split(&dup, 1, false).unwrap().len(), 5);
    }
}
