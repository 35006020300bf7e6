//! Two outcomes: turning a truthful chain into a deterministic mechanism that is no costlier.

use crate::cost::CostValue;
use crate::error::{Error, Result};
use crate::instance::{DeterministicMechanism, ReportingRelation};

use super::chain::ChainDistribution;
use super::oracle::CostOracle;

/// Probabilities this close are treated as one threshold.
pub const CLUSTER_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct ThresholdMechanism {
    pub mechanism: DeterministicMechanism,
    /// Length of the threshold interval that selects this mechanism.
    pub weight: f64,
    pub cost: CostValue,
}

#[derive(Clone, Debug)]
pub struct BinaryRounding {
    pub mechanism: DeterministicMechanism,
    pub cost: CostValue,
    /// Every threshold mechanism in increasing threshold order.
    pub thresholds: Vec<ThresholdMechanism>,
    /// Weighted average of the threshold costs; equals the chain's cost.
    pub expected_cost: f64,
}

/// With `u_i` the probability that type `i` gets the high outcome, tries every
/// `M_r = {i : u_i >= r}` for `r` at the distinct positive `u_i` and at 1.
/// A uniform `r` reproduces the chain, so the cheapest `M_r` is no costlier.
pub fn determinize_binary(
    dist: &ChainDistribution,
    relation: &ReportingRelation,
    oracle: &dyn CostOracle,
) -> Result<BinaryRounding> {
    if oracle.m() != 2 {
        return Err(Error::InvalidParams(format!("needs 2 outcomes, oracle has {}", oracle.m())));
    }
    let n = oracle.n();
    if dist.support.iter().any(|(p, _)| p.len() != n || p.iter().any(|&j| j > 1)) {
        return Err(Error::Dimension("support point does not fit the oracle".into()));
    }
    let rows = dist.marginals(2);
    let total = dist.total();
    let high: Vec<f64> = rows.iter().map(|r| r[1] / total).collect();
    for (a, b) in relation.off_diagonal() {
        if high[a] < high[b] - CLUSTER_TOLERANCE {
            return Err(Error::NotTruthful(a, b));
        }
    }

    // cluster nearby probabilities and snap each type to its cluster's top
    let mut levels: Vec<f64> = high.iter().copied().filter(|u| *u > CLUSTER_TOLERANCE).collect();
    levels.push(1.0);
    levels.sort_by(f64::total_cmp);
    let mut clusters: Vec<f64> = Vec::new();
    for u in levels {
        match clusters.last_mut() {
            Some(last) if u - *last <= CLUSTER_TOLERANCE => *last = u,
            _ => clusters.push(u),
        }
    }
    let snap = |u: f64| -> f64 {
        if u <= CLUSTER_TOLERANCE {
            return 0.0;
        }
        clusters.iter().copied().find(|c| u <= c + CLUSTER_TOLERANCE).unwrap_or(1.0)
    };
    let snapped: Vec<f64> = high.iter().map(|&u| snap(u)).collect();

    let mut thresholds = Vec::with_capacity(clusters.len());
    let mut prev = 0.0;
    for &r in &clusters {
        let assignment: Vec<usize> = snapped.iter().map(|&u| usize::from(u >= r && u > 0.0)).collect();
        let cost = oracle.value(&assignment);
        thresholds.push(ThresholdMechanism {
            mechanism: DeterministicMechanism::new(assignment),
            weight: r.min(1.0) - prev,
            cost,
        });
        prev = r.min(1.0);
    }
    let expected_cost = thresholds
        .iter()
        .filter(|t| t.weight > 0.0)
        .map(|t| t.weight * t.cost.to_f64())
        .sum();
    let best = thresholds
        .iter()
        .min_by(|a, b| a.cost.cmp(&b.cost))
        .expect("threshold 1 is always present");
    Ok(BinaryRounding {
        mechanism: best.mechanism.clone(),
        cost: best.cost.clone(),
        expected_cost,
        thresholds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::int;
    use crate::instance::AdditiveCostMatrix;
    use crate::submodular::chain::chain_cost;
    use crate::submodular::oracle::{AdditiveOracle, OverheadOracle};

    #[test]
    fn point_mass_returns_its_point() {
        let oracle = AdditiveOracle::new(AdditiveCostMatrix::from_ints(&[&[1, 2], &[3, 4]]));
        let dist = ChainDistribution::point(vec![1, 0]);
        let out = determinize_binary(&dist, &ReportingRelation::identity(2), &oracle).unwrap();
        assert_eq!(out.mechanism.assignment, vec![1, 0]);
        assert_eq!(out.cost, CostValue::from_int(5));
    }

    #[test]
    fn two_point_prefix_chain() {
        let oracle = OverheadOracle::new(AdditiveCostMatrix::from_ints(&[&[0, 0], &[3, 0]]), int(2)).unwrap();
        let dist = ChainDistribution {
            support: vec![(vec![1, 1], 0.5), (vec![0, 0], 0.5)],
        };
        let out = determinize_binary(&dist, &ReportingRelation::full(2), &oracle).unwrap();
        assert_eq!(out.mechanism.assignment, vec![1, 1]);
        assert_eq!(out.cost, CostValue::from_int(2));
        assert!((out.expected_cost - chain_cost(&dist, &oracle)).abs() < 1e-12);
    }

    #[test]
    fn rejects_three_outcomes() {
        let oracle = AdditiveOracle::new(AdditiveCostMatrix::zeros(1, 3));
        let dist = ChainDistribution::point(vec![0]);
        assert!(determinize_binary(&dist, &ReportingRelation::identity(1), &oracle).is_err());
    }
}
