//! Testing `c(a) + c(b) >= c(a ^ b) + c(a v b)` on a value oracle.

use rand::Rng;

use crate::error::{Error, Result};
use crate::generators::rng;

use super::lattice::{crosses, join, lattice_size, meet, point_from_index, LatticePoint};
use super::oracle::CostOracle;

/// Default cap on the number of pairs the exhaustive check may compare.
pub const DEFAULT_PAIR_LIMIT: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Every crossing pair; refuses lattices with more than `max_pairs` pairs.
    Exhaustive { max_pairs: u128 },
    /// Random pairs; can only refute.
    Sampled { samples: usize, seed: u64 },
}

impl Default for CheckMode {
    fn default() -> Self {
        CheckMode::Exhaustive {
            max_pairs: DEFAULT_PAIR_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubmodularVerdict {
    Submodular,
    /// Sampling found nothing; not a proof.
    NoViolationFound { checked: usize },
    Violation { a: LatticePoint, b: LatticePoint },
}

impl SubmodularVerdict {
    pub fn is_violation(&self) -> bool {
        matches!(self, SubmodularVerdict::Violation { .. })
    }
}

fn violates(oracle: &dyn CostOracle, a: &[usize], b: &[usize]) -> Result<bool> {
    if !crosses(a, b) {
        return Ok(false);
    }
    let lhs = oracle.value(a) + oracle.value(b);
    let rhs = oracle.value(&meet(a, b)?) + oracle.value(&join(a, b)?);
    Ok(lhs < rhs)
}

pub fn is_submodular(oracle: &dyn CostOracle, mode: CheckMode) -> Result<SubmodularVerdict> {
    let (n, m) = (oracle.n(), oracle.m());
    match mode {
        CheckMode::Exhaustive { max_pairs } => {
            let size = lattice_size(n, m).unwrap_or(u128::MAX);
            let pairs = size.saturating_mul(size.saturating_sub(1)) / 2;
            if pairs > max_pairs {
                return Err(Error::BudgetExceeded {
                    states: pairs,
                    budget: u64::try_from(max_pairs).unwrap_or(u64::MAX),
                });
            }
            let points: Vec<LatticePoint> = (0..size as usize).map(|k| point_from_index(k, n, m)).collect();
            for (k, a) in points.iter().enumerate() {
                for b in &points[k + 1..] {
                    if violates(oracle, a, b)? {
                        return Ok(SubmodularVerdict::Violation {
                            a: a.clone(),
                            b: b.clone(),
                        });
                    }
                }
            }
            Ok(SubmodularVerdict::Submodular)
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = rng(seed);
            for _ in 0..samples {
                let a: LatticePoint = (0..n).map(|_| rng.gen_range(0..m)).collect();
                let b: LatticePoint = (0..n).map(|_| rng.gen_range(0..m)).collect();
                if violates(oracle, &a, &b)? {
                    return Ok(SubmodularVerdict::Violation { a, b });
                }
            }
            Ok(SubmodularVerdict::NoViolationFound { checked: samples })
        }
    }
}
