//! Deliberately naive brute-force ground truth.
//!
//! Nothing here shares code with the solvers beyond the data types: the
//! truthful lattice is enumerated with an odometer, envelopes are minima over
//! two-point lotteries, and best responses are recomputed from scratch.

use num::Zero;

use crate::cnf::CnfFormula;
use crate::cost::{CostValue, Rational};
use crate::error::{Error, Result};
use crate::instance::{AdditiveCostMatrix, Instance, OutcomeSpace, ReportingRelation, Skeleton};
use crate::submodular::lattice::{lattice_size, LatticePoint};
use crate::submodular::oracle::CostOracle;

/// Upper bound on the number of states an enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget(pub u64);

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self(10_000_000)
    }
}

impl EnumerationBudget {
    pub fn new(max_states: u64) -> Result<Self> {
        if max_states == 0 {
            return Err(Error::InvalidParams("budget must be positive".into()));
        }
        Ok(Self(max_states))
    }

    fn admit(&self, n: usize, m: usize) -> Result<()> {
        match lattice_size(n, m) {
            Some(states) if states <= self.0 as u128 => Ok(()),
            states => Err(Error::BudgetExceeded {
                states: states.unwrap_or(u128::MAX),
                budget: self.0,
            }),
        }
    }
}

/// Odometer over `[m]^n`, type 0 turning fastest.
struct Odometer {
    digits: Vec<usize>,
    m: usize,
    done: bool,
}

impl Odometer {
    fn new(n: usize, m: usize) -> Self {
        Self {
            digits: vec![0; n],
            m,
            done: m == 0,
        }
    }
}

impl Iterator for Odometer {
    type Item = LatticePoint;

    fn next(&mut self) -> Option<LatticePoint> {
        if self.done {
            return None;
        }
        let current = self.digits.clone();
        let mut k = 0;
        loop {
            if k == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[k] += 1;
            if self.digits[k] < self.m {
                break;
            }
            self.digits[k] = 0;
            k += 1;
        }
        Some(current)
    }
}

fn respects(point: &[usize], relation: &ReportingRelation) -> bool {
    relation.pairs().iter().all(|&(a, b)| point[a] >= point[b])
}

/// Every deterministic truthful outcome vector, each exactly once.
pub fn enumerate_truthful_deterministic(
    skeleton: &Skeleton,
    budget: EnumerationBudget,
) -> Result<impl Iterator<Item = LatticePoint> + '_> {
    budget.admit(skeleton.n(), skeleton.m())?;
    Ok(Odometer::new(skeleton.n(), skeleton.m()).filter(move |p| respects(p, &skeleton.relation)))
}

/// Counts the truthful lattice by depth-first search, pruning a partial vector
/// as soon as a pair between assigned types is violated.
pub fn count_truthful_recursive(skeleton: &Skeleton) -> u128 {
    let n = skeleton.n();
    let m = skeleton.m();
    let pairs = skeleton.relation.pairs();
    fn go(k: usize, n: usize, m: usize, pairs: &[(usize, usize)], point: &mut Vec<usize>) -> u128 {
        if k == n {
            return 1;
        }
        let mut total = 0;
        for j in 0..m {
            point.push(j);
            let ok = pairs
                .iter()
                .filter(|&&(a, b)| a.max(b) == k)
                .all(|&(a, b)| point[a] >= point[b]);
            if ok {
                total += go(k + 1, n, m, pairs, point);
            }
            point.pop();
        }
        total
    }
    go(0, n, m, pairs, &mut Vec::with_capacity(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteResult {
    pub cost: CostValue,
    /// A minimizer with finite cost, if any; ties go to the first in enumeration order.
    pub argmin: Option<LatticePoint>,
}

fn additive_cost(costs: &AdditiveCostMatrix, point: &[usize]) -> CostValue {
    let mut total = CostValue::zero();
    for (i, &j) in point.iter().enumerate() {
        total += costs.get(i, j);
        if total.is_infinite() {
            break;
        }
    }
    total
}

fn minimize(points: impl Iterator<Item = LatticePoint>, cost: impl Fn(&[usize]) -> CostValue) -> BruteResult {
    let mut best = BruteResult {
        cost: CostValue::Infinite,
        argmin: None,
    };
    for p in points {
        let c = cost(&p);
        if c.is_finite() && c < best.cost {
            best = BruteResult {
                cost: c,
                argmin: Some(p),
            };
        }
    }
    best
}

/// Exact minimum of `sum_i c_i(O^i)` over the truthful lattice.
pub fn brute_force_deterministic_opt(instance: &Instance, budget: EnumerationBudget) -> Result<BruteResult> {
    let skeleton = instance.skeleton();
    let points = enumerate_truthful_deterministic(&skeleton, budget)?;
    Ok(minimize(points, |p| additive_cost(instance.costs(), p)))
}

/// Exact minimum of a combinatorial cost over the truthful lattice.
pub fn brute_force_oracle_opt(
    skeleton: &Skeleton,
    oracle: &dyn CostOracle,
    budget: EnumerationBudget,
) -> Result<BruteResult> {
    let points = enumerate_truthful_deterministic(skeleton, budget)?;
    Ok(minimize(points, |p| oracle.value(p)))
}

/// Cheapest lottery over outcomes with mean utility `o_target`, by trying every pair
/// of finite outcomes that brackets it.
pub fn brute_envelope_value(row: &[CostValue], outcomes: &OutcomeSpace, target: usize) -> CostValue {
    let u = outcomes.utility(target);
    let mut best = CostValue::Infinite;
    for a in 0..=target {
        for b in target..row.len() {
            let (Some(ca), Some(cb)) = (row[a].finite(), row[b].finite()) else {
                continue;
            };
            let value = if a == b {
                ca.clone()
            } else {
                let (oa, ob) = (outcomes.utility(a), outcomes.utility(b));
                // weight on the lower outcome
                let w = (ob - u) / (ob - oa);
                &w * ca + (Rational::from_integer(1.into()) - &w) * cb
            };
            let value = CostValue::Finite(value);
            if value < best {
                best = value;
            }
        }
    }
    best
}

/// Exact minimum of `sum_i envelope_i(O^i)` over the truthful lattice.
pub fn brute_force_envelope_opt(instance: &Instance, budget: EnumerationBudget) -> Result<CostValue> {
    let envelope = AdditiveCostMatrix::new(
        instance
            .costs()
            .rows()
            .iter()
            .map(|row| {
                (0..instance.m())
                    .map(|j| brute_envelope_value(row, instance.outcomes(), j))
                    .collect()
            })
            .collect(),
    );
    let skeleton = instance.skeleton();
    let points = enumerate_truthful_deterministic(&skeleton, budget)?;
    Ok(minimize(points, |p| additive_cost(&envelope, p)).cost)
}

/// An instance where every type has its own utility over outcomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralInstance {
    /// `utilities[i][j]` is type `i`'s utility for outcome `j`.
    pub utilities: Vec<Vec<Rational>>,
    pub relation: ReportingRelation,
    pub costs: AdditiveCostMatrix,
}

impl GeneralInstance {
    pub fn new(utilities: Vec<Vec<Rational>>, relation: ReportingRelation, costs: AdditiveCostMatrix) -> Result<Self> {
        let n = relation.n();
        let m = utilities.first().map_or(0, Vec::len);
        if utilities.len() != n || costs.n_rows() != n {
            return Err(Error::Dimension(format!(
                "{} utility rows and {} cost rows for {n} types",
                utilities.len(),
                costs.n_rows()
            )));
        }
        if utilities.iter().any(|r| r.len() != m) || costs.rows().iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("ragged utility or cost rows".into()));
        }
        Ok(Self {
            utilities,
            relation,
            costs,
        })
    }

    /// Every type gets the instance's common utility.
    pub fn from_common(instance: &Instance) -> Self {
        Self {
            utilities: vec![instance.outcomes().utilities().to_vec(); instance.n()],
            relation: instance.relation().clone(),
            costs: instance.costs().clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.relation.n()
    }

    pub fn m(&self) -> usize {
        self.utilities.first().map_or(0, Vec::len)
    }

    /// Utility ranks per type; equal utilities share a rank.
    fn ranks(&self) -> Vec<Vec<usize>> {
        self.utilities
            .iter()
            .map(|row| row.iter().map(|u| row.iter().filter(|v| *v < u).count()).collect())
            .collect()
    }
}

fn reports(relation: &ReportingRelation) -> Vec<Vec<usize>> {
    (0..relation.n()).map(|i| relation.reports_of(i).collect()).collect()
}

/// Minimum best-response cost over every deterministic mechanism, truthful or not.
///
/// Each type reports a feasible type whose outcome it likes best, preferring
/// the truth and then the lowest index among ties.
pub fn brute_force_best_response_opt(instance: &GeneralInstance, budget: EnumerationBudget) -> Result<BruteResult> {
    let (n, m) = (instance.n(), instance.m());
    budget.admit(n, m)?;
    let ranks = instance.ranks();
    let options = reports(&instance.relation);
    let cost = |mech: &[usize]| {
        let mut total = CostValue::zero();
        for i in 0..n {
            let mut report = i;
            for &k in &options[i] {
                if ranks[i][mech[k]] > ranks[i][mech[report]] {
                    report = k;
                }
            }
            total += instance.costs.get(i, mech[report]);
            if total.is_infinite() {
                break;
            }
        }
        total
    };
    Ok(minimize(Odometer::new(n, m), cost))
}

/// Minimum of `sum_i c_i(M(i))` over mechanisms where no type gains from a feasible misreport
/// under its own utility.
pub fn brute_force_truthful_general_opt(
    instance: &GeneralInstance,
    budget: EnumerationBudget,
) -> Result<BruteResult> {
    let (n, m) = (instance.n(), instance.m());
    budget.admit(n, m)?;
    let ranks = instance.ranks();
    let pairs: Vec<(usize, usize)> = instance.relation.off_diagonal().collect();
    let truthful = |mech: &[usize]| pairs.iter().all(|&(a, b)| ranks[a][mech[a]] >= ranks[a][mech[b]]);
    let points = Odometer::new(n, m).filter(|p| truthful(p));
    Ok(minimize(points, |p| additive_cost(&instance.costs, p)))
}

/// Fewest clauses any assignment can satisfy.
pub fn minsat_brute(formula: &CnfFormula) -> Result<usize> {
    let vars = formula.var_count();
    if vars > 20 {
        return Err(Error::InvalidParams(format!(
            "{vars} variables; exhaustive search is limited to 20"
        )));
    }
    let mut best = usize::MAX;
    let mut assignment = vec![false; vars];
    for mask in 0u32..1 << vars {
        for (v, slot) in assignment.iter_mut().enumerate() {
            *slot = mask >> v & 1 == 1;
        }
        best = best.min(formula.satisfied_count(&assignment));
    }
    Ok(best)
}

/// Whether `value` is zero; for tests on zero-cost optima.
pub fn is_zero(value: &CostValue) -> bool {
    value.finite().is_some_and(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::int;
    use crate::generators::gap_instance;

    fn skeleton(m: usize, relation: ReportingRelation) -> Skeleton {
        Skeleton::new(OutcomeSpace::ladder(m), relation)
    }

    #[test]
    fn truthful_counts() {
        let budget = EnumerationBudget::default();
        let one_edge = skeleton(2, ReportingRelation::reflexive_with(2, [(1, 0)]));
        let members: Vec<_> = enumerate_truthful_deterministic(&one_edge, budget).unwrap().collect();
        assert_eq!(members, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);

        let ident = skeleton(3, ReportingRelation::identity(3));
        assert_eq!(enumerate_truthful_deterministic(&ident, budget).unwrap().count(), 27);
        let full = skeleton(4, ReportingRelation::full(3));
        assert_eq!(enumerate_truthful_deterministic(&full, budget).unwrap().count(), 4);
        assert_eq!(count_truthful_recursive(&full), 4);
        assert_eq!(count_truthful_recursive(&one_edge), 3);
    }

    #[test]
    fn budget_is_enforced() {
        let big = skeleton(3, ReportingRelation::identity(30));
        assert!(matches!(
            enumerate_truthful_deterministic(&big, EnumerationBudget::default()).map(|_| ()),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(EnumerationBudget::new(0).is_err());
    }

    #[test]
    fn deterministic_examples() {
        let budget = EnumerationBudget::default();
        assert_eq!(
            brute_force_deterministic_opt(&gap_instance(), budget).unwrap().cost,
            CostValue::Infinite
        );
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 1]),
            ReportingRelation::reflexive_with(2, [(1, 0)]),
            AdditiveCostMatrix::from_ints(&[&[0, 5], &[4, 0]]),
        )
        .unwrap();
        let res = brute_force_deterministic_opt(&inst, budget).unwrap();
        assert_eq!(res.cost, CostValue::zero());
        assert_eq!(res.argmin, Some(vec![0, 1]));
    }

    #[test]
    fn envelope_examples() {
        let budget = EnumerationBudget::default();
        assert!(is_zero(&brute_force_envelope_opt(&gap_instance(), budget).unwrap()));
        let o = OutcomeSpace::from_ints(&[0, 1, 2]);
        let row = AdditiveCostMatrix::from_ints(&[&[0, 5, 2]]);
        assert_eq!(brute_envelope_value(row.row(0), &o, 1), CostValue::from_int(1));
        let o = OutcomeSpace::from_ints(&[1, 2, 3]);
        let row = AdditiveCostMatrix::from_ints(&[&[0, -1, 0]]);
        assert_eq!(brute_envelope_value(row.row(0), &o, 1), CostValue::zero());
    }

    #[test]
    fn single_type_best_response() {
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 1, 2]),
            ReportingRelation::identity(1),
            AdditiveCostMatrix::from_ints(&[&[4, 2, 3]]),
        )
        .unwrap();
        let res = brute_force_best_response_opt(&GeneralInstance::from_common(&inst), EnumerationBudget::default())
            .unwrap();
        assert_eq!(res.cost, CostValue::from_int(2));
    }

    #[test]
    fn minsat_examples() {
        let f = CnfFormula::from_signed(1, &[&[1], &[-1]]).unwrap();
        assert_eq!(minsat_brute(&f).unwrap(), 1);
        let f = CnfFormula::from_signed(2, &[&[1, 2], &[-1], &[-2]]).unwrap();
        assert_eq!(minsat_brute(&f).unwrap(), 1);
        let f = CnfFormula::from_signed(1, &[&[1]]).unwrap();
        assert_eq!(minsat_brute(&f).unwrap(), 0);
        let f = CnfFormula::from_signed(21, &[&[1]]).unwrap();
        assert!(minsat_brute(&f).is_err());
    }

    #[test]
    fn general_instance_dimensions() {
        let bad = GeneralInstance::new(
            vec![vec![int(0), int(1)]],
            ReportingRelation::identity(2),
            AdditiveCostMatrix::zeros(2, 2),
        );
        assert!(bad.is_err());
    }
}
