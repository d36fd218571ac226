//! Budgets, statistics and the shared driver for bounded counterexample
//! searches.
//!
//! A search space is produced in its deterministic order. When it has at most
//! `samples` candidates it is checked exhaustively and the first
//! counterexample in that order is reported. Otherwise `samples` candidates
//! are drawn with a ChaCha8 generator seeded from the budget, and the least
//! counterexample among those drawn is reported. Either way the result only
//! depends on the inputs and the budget.

use std::fmt;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Bounds of a counterexample search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchBudget {
    pub max_vars: usize,
    pub max_depth: usize,
    pub max_set_size: usize,
    pub max_family_size: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_vars: 2,
            max_depth: 1,
            max_set_size: 2,
            max_family_size: 3,
            samples: 10_000,
            seed: 1,
        }
    }
}

impl SearchBudget {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("max_vars", self.max_vars),
            ("max_depth", self.max_depth),
            ("max_set_size", self.max_set_size),
            ("max_family_size", self.max_family_size),
            ("samples", self.samples),
        ];
        for (name, value) in fields {
            if value == 0 {
                return Err(Error::InvalidBudget(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// How much of a search space was looked at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchStats {
    pub candidates_examined: u64,
    /// Exact size when exhaustive, otherwise a lower bound.
    pub space_size: u128,
    pub exhaustive: bool,
}

impl SearchStats {
    pub fn empty() -> Self {
        SearchStats {
            candidates_examined: 0,
            space_size: 0,
            exhaustive: true,
        }
    }

    pub(crate) fn absorb(&mut self, other: &SearchStats) {
        self.candidates_examined += other.candidates_examined;
        self.space_size = self.space_size.saturating_add(other.space_size);
        self.exhaustive &= other.exhaustive;
    }
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exhaustive {
            write!(
                f,
                "{} of {} candidates (exhaustive)",
                self.candidates_examined, self.space_size
            )
        } else {
            write!(
                f,
                "{} sampled candidates from a space of more than {}",
                self.candidates_examined, self.space_size
            )
        }
    }
}

/// Runs a bounded search.
///
/// `enumerate` feeds candidates in the deterministic order and stops when the
/// sink breaks. `sample` draws one random candidate (or `None` for a rejected
/// draw). `is_counterexample` must be pure.
pub(crate) fn run_search<C, K>(
    budget: &SearchBudget,
    enumerate: impl FnOnce(&mut dyn FnMut(C) -> ControlFlow<()>),
    mut sample: impl FnMut(&mut ChaCha8Rng) -> Option<C>,
    key: impl Fn(&C) -> K,
    is_counterexample: impl Fn(&C) -> Result<bool> + Sync,
) -> Result<(Option<C>, SearchStats)>
where
    C: Send + Sync,
    K: Ord,
{
    let limit = budget.samples;
    let mut listed = Vec::new();
    enumerate(&mut |c| {
        listed.push(c);
        if listed.len() > limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });

    if listed.len() <= limit {
        let space_size = listed.len() as u128;
        let hit = listed
            .par_iter()
            .position_first(|c| !matches!(is_counterexample(c), Ok(false)));
        return match hit {
            None => Ok((
                None,
                SearchStats {
                    candidates_examined: listed.len() as u64,
                    space_size,
                    exhaustive: true,
                },
            )),
            Some(i) => {
                is_counterexample(&listed[i])?;
                let stats = SearchStats {
                    candidates_examined: i as u64 + 1,
                    space_size,
                    exhaustive: true,
                };
                Ok((Some(listed.swap_remove(i)), stats))
            }
        };
    }
    drop(listed);

    let mut rng = budget.rng();
    let mut drawn = Vec::with_capacity(limit);
    let mut attempts = 0usize;
    while drawn.len() < limit && attempts < limit.saturating_mul(20) {
        attempts += 1;
        if let Some(c) = sample(&mut rng) {
            drawn.push(c);
        }
    }
    let verdicts: Vec<Result<bool>> = drawn.par_iter().map(&is_counterexample).collect();
    let mut best: Option<usize> = None;
    for (i, v) in verdicts.into_iter().enumerate() {
        if v? && best.is_none_or(|b| key(&drawn[i]) < key(&drawn[b])) {
            best = Some(i);
        }
    }
    let stats = SearchStats {
        candidates_examined: drawn.len() as u64,
        space_size: limit as u128 + 1,
        exhaustive: false,
    };
    Ok((best.map(|i| drawn.swap_remove(i)), stats))
}

/// Calls `f` on each `k`-subset of `pool` (as positions into `pool`'s order)
/// in lexicographic order, until it breaks.
pub(crate) fn for_each_combination(
    pool: usize,
    k: usize,
    f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if k > pool {
        return ControlFlow::Continue(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        let mut i = k;
        loop {
            if i == 0 {
                return ControlFlow::Continue(());
            }
            i -= 1;
            if idx[i] < pool - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `k` distinct elements of `pool`, sorted.
pub(crate) fn random_subset(rng: &mut ChaCha8Rng, pool: &[usize], k: usize) -> Option<Vec<usize>> {
    if k > pool.len() {
        return None;
    }
    let mut picked = rand::seq::index::sample(rng, pool.len(), k).into_vec();
    picked.sort_unstable();
    Some(picked.into_iter().map(|i| pool[i]).collect())
}

/// Premise/conclusion pairs `(X, α)` over a listing of `n` formulas with
/// `|X| ≤ max_set`, ordered by `(|X|, X, α)`.
pub(crate) struct PairSpace {
    pub n: usize,
    pub max_set: usize,
}

/// Positions of premises and conclusion in a listing.
pub(crate) type Pair = (Vec<usize>, usize);

impl PairSpace {
    pub fn enumerate(&self, sink: &mut dyn FnMut(Pair) -> ControlFlow<()>) {
        for k in 0..=self.max_set.min(self.n) {
            let flow = for_each_combination(self.n, k, &mut |xs| {
                for a in 0..self.n {
                    sink((xs.to_vec(), a))?;
                }
                ControlFlow::Continue(())
            });
            if flow.is_break() {
                return;
            }
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Option<Pair> {
        if self.n == 0 {
            return None;
        }
        let k = rng.random_range(0..=self.max_set.min(self.n));
        let all: Vec<usize> = (0..self.n).collect();
        let xs = random_subset(rng, &all, k)?;
        Some((xs, rng.random_range(0..self.n)))
    }

    pub fn key(pair: &Pair) -> (usize, Vec<usize>, usize) {
        (pair.0.len(), pair.0.clone(), pair.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> u128 {
        if k > n {
            return 0;
        }
        let k = k.min(n - k);
        (0..k).fold(1u128, |acc, i| {
            acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
        })
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen = Vec::new();
        let _ = for_each_combination(4, 2, &mut |c| {
            seen.push(c.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(
            seen,
            [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]].map(|a| a.to_vec())
        );
        let mut empty = 0;
        let _ = for_each_combination(3, 0, &mut |c| {
            assert!(c.is_empty());
            empty += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(empty, 1);
        assert_eq!(binomial(16, 2), 120);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn pair_space_counts() {
        let space = PairSpace { n: 16, max_set: 2 };
        let mut count = 0;
        space.enumerate(&mut |_| {
            count += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(count, (1 + 16 + 120) * 16);
    }

    #[test]
    fn exhaustive_search_reports_first_hit() {
        let budget = SearchBudget {
            samples: 100,
            ..SearchBudget::default()
        };
        let (hit, stats) = run_search(
            &budget,
            |sink| {
                for i in 0..50u32 {
                    if sink(i).is_break() {
                        return;
                    }
                }
            },
            |_| None,
            |c| *c,
            |c| Ok(*c % 7 == 3),
        )
        .unwrap();
        assert_eq!(hit, Some(3));
        assert_eq!(stats.candidates_examined, 4);
        assert!(stats.exhaustive);
    }

    #[test]
    fn sampled_search_is_reproducible() {
        let budget = SearchBudget {
            samples: 200,
            seed: 42,
            ..SearchBudget::default()
        };
        let run = || {
            run_search(
                &budget,
                |sink| {
                    for i in 0..1_000_000u32 {
                        if sink(i).is_break() {
                            return;
                        }
                    }
                },
                |rng| Some(rng.random_range(0..1_000_000u32)),
                |c| *c,
                |c| Ok(*c % 97 == 5),
            )
            .unwrap()
        };
        let (a, sa) = run();
        let (b, sb) = run();
        assert_eq!(a, b);
        assert_eq!(sa, sb);
        assert!(!sa.exhaustive);
        assert_eq!(sa.candidates_examined, 200);
    }

    #[test]
    fn budgets_must_be_positive() {
        assert!(SearchBudget::default().validate().is_ok());
        let bad = SearchBudget {
            max_family_size: 0,
            ..SearchBudget::default()
        };
        assert!(bad.validate().is_err());
    }
}
