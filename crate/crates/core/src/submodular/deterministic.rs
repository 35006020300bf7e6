//! Cheapest deterministic truthful outcome vector under a combinatorial cost.

use crate::cost::CostValue;
use crate::error::{Error, Result};
use crate::instance::Skeleton;

use super::chain::interpret_marginals;
use super::convex::{check_dims, minimize, ConvexBackend, ConvexOptions, FeasibleSet, Objective};
use super::lattice::{in_truthful_lattice, lattice_size, LatticePoint};
use super::oracle::{default_penalty, CostOracle};

/// Default cap on the lattice size the brute backend will walk.
pub const BRUTE_LIMIT: u128 = 10_000_000;

/// Gap at which the level-set search stops.
pub const LOVASZ_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SubmodularBackend {
    /// Depth-first walk over the truthful lattice.
    Brute,
    /// Convex minimization over the dominance polytope, rounded to a level set.
    #[default]
    Lovasz,
}

impl SubmodularBackend {
    pub fn name(&self) -> &'static str {
        match self {
            SubmodularBackend::Brute => "brute",
            SubmodularBackend::Lovasz => "lovasz",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubmodularSolution {
    /// A finite-cost minimizer, if one exists.
    pub point: Option<LatticePoint>,
    /// Exact oracle value at `point`.
    pub cost: CostValue,
    /// Certified lower bound; only the convex backend produces one.
    pub lower_bound: Option<f64>,
    pub iterations: usize,
}

pub fn solve_deterministic_submodular(
    oracle: &dyn CostOracle,
    skeleton: &Skeleton,
    backend: SubmodularBackend,
) -> Result<SubmodularSolution> {
    check_dims(oracle, skeleton)?;
    match backend {
        SubmodularBackend::Brute => brute(oracle, skeleton, BRUTE_LIMIT),
        SubmodularBackend::Lovasz => lovasz(oracle, skeleton, &ConvexOptions {
            tolerance: LOVASZ_TOLERANCE,
            ..ConvexOptions::default()
        }),
    }
}

/// Walks the truthful lattice, pruning partial vectors that already break a pair.
pub fn brute(oracle: &dyn CostOracle, skeleton: &Skeleton, limit: u128) -> Result<SubmodularSolution> {
    let (n, m) = (skeleton.n(), skeleton.m());
    let size = lattice_size(n, m).unwrap_or(u128::MAX);
    if size > limit {
        return Err(Error::BudgetExceeded {
            states: size,
            budget: u64::try_from(limit).unwrap_or(u64::MAX),
        });
    }
    // pairs grouped by the later of the two types, checked once both are set
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (a, b) in skeleton.relation.off_diagonal() {
        checks[a.max(b)].push((a, b));
    }
    let mut best = SubmodularSolution {
        point: None,
        cost: CostValue::Infinite,
        lower_bound: None,
        iterations: 0,
    };
    let mut point = vec![0; n];
    let mut visited = 0;
    descend(0, &mut point, &checks, m, &mut |p| {
        visited += 1;
        let value = oracle.value(p);
        if value.is_finite() && value < best.cost {
            best.cost = value;
            best.point = Some(p.to_vec());
        }
    });
    best.iterations = visited;
    Ok(best)
}

fn descend(k: usize, point: &mut Vec<usize>, checks: &[Vec<(usize, usize)>], m: usize, leaf: &mut dyn FnMut(&[usize])) {
    if k == point.len() {
        leaf(point);
        return;
    }
    for j in 0..m {
        point[k] = j;
        if checks[k].iter().all(|&(a, b)| point[a] >= point[b]) {
            descend(k + 1, point, checks, m, leaf);
        }
    }
}

/// Minimizes the chain-greedy extension over profiles in which every reporting
/// pair is ordered by stochastic dominance. That polytope's vertices are the
/// truthful outcome vectors, so for a submodular cost the continuous minimum
/// equals the discrete one; every support point of every visited profile is a
/// candidate, and the best one is returned with its exact value.
pub fn lovasz(oracle: &dyn CostOracle, skeleton: &Skeleton, options: &ConvexOptions) -> Result<SubmodularSolution> {
    let (n, m) = (skeleton.n(), skeleton.m());
    let set = FeasibleSet::dominance_order(skeleton);
    let penalty = default_penalty(oracle);
    let objective = Objective { oracle, penalty, m };

    let mut best_point: LatticePoint = vec![0; n];
    let mut best_value = oracle.surrogate(&best_point, penalty);
    let top = vec![m - 1; n];
    let top_value = oracle.surrogate(&top, penalty);
    if top_value < best_value {
        best_point = top;
        best_value = top_value;
    }
    let mut offer = |p: &[f64], _value: f64| {
        if let Ok(profile) = set.to_profile(p) {
            for (candidate, _) in interpret_marginals(&profile).support {
                if !in_truthful_lattice(&candidate, &skeleton.relation) {
                    continue;
                }
                let v = oracle.surrogate(&candidate, penalty);
                if v < best_value {
                    best_value = v;
                    best_point = candidate;
                }
            }
        }
        best_value
    };
    let options = ConvexOptions {
        backend: ConvexBackend::Subgradient,
        ..options.clone()
    };
    let run = minimize(&set, &objective, &options, &mut offer)?;
    let cost = oracle.value(&best_point);
    Ok(SubmodularSolution {
        point: cost.is_finite().then_some(best_point),
        cost,
        lower_bound: Some(run.lower_bound),
        iterations: run.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::int;
    use crate::generators::{small_cut_instance, random_submodular_table};
    use crate::instance::{AdditiveCostMatrix, OutcomeSpace, ReportingRelation};
    use crate::submodular::oracle::{AdditiveOracle, OverheadOracle};

    #[test]
    fn small_cut_additive() {
        let inst = small_cut_instance();
        let oracle = AdditiveOracle::new(inst.costs().clone());
        for backend in [SubmodularBackend::Brute, SubmodularBackend::Lovasz] {
            let sol = solve_deterministic_submodular(&oracle, &inst.skeleton(), backend).unwrap();
            assert_eq!(sol.point, Some(vec![1, 2, 2]), "{backend:?}");
            assert_eq!(sol.cost, CostValue::from_int(3));
        }
    }

    #[test]
    fn huge_overhead_keeps_everyone_at_the_bottom() {
        let oracle = OverheadOracle::new(AdditiveCostMatrix::zeros(3, 3), int(1_000_000)).unwrap();
        let skeleton = Skeleton::new(OutcomeSpace::ladder(3), ReportingRelation::identity(3));
        let sol = solve_deterministic_submodular(&oracle, &skeleton, SubmodularBackend::Lovasz).unwrap();
        assert_eq!(sol.point, Some(vec![0, 0, 0]));
        assert_eq!(sol.cost, CostValue::zero());
    }

    #[test]
    fn backends_agree_on_small_tables() {
        let skeleton = Skeleton::new(OutcomeSpace::ladder(2), ReportingRelation::reflexive_with(3, [(1, 0)]));
        for seed in 0..20 {
            let oracle = random_submodular_table(seed, 3, 2, 10).unwrap();
            let a = solve_deterministic_submodular(&oracle, &skeleton, SubmodularBackend::Brute).unwrap();
            let b = solve_deterministic_submodular(&oracle, &skeleton, SubmodularBackend::Lovasz).unwrap();
            assert_eq!(a.cost, b.cost, "seed {seed}");
        }
    }

    #[test]
    fn brute_budget() {
        let oracle = AdditiveOracle::new(AdditiveCostMatrix::zeros(10, 5));
        let skeleton = Skeleton::new(OutcomeSpace::ladder(5), ReportingRelation::identity(10));
        assert!(matches!(brute(&oracle, &skeleton, 1000), Err(Error::BudgetExceeded { .. })));
    }
}
