//! Named instances, the two MinSAT reductions, and seeded random families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::CnfFormula;
use crate::cost::{int, CostValue, Rational};
use crate::error::{Error, Result};
use crate::instance::{
    transitive_closure, AdditiveCostMatrix, Instance, OutcomeSpace, ReportingRelation,
};
use crate::oracle::GeneralInstance;
use crate::submodular::lattice::{lattice_size, point_from_index};
use crate::submodular::oracle::{OverheadOracle, TableOracle};

/// Name recorded in instance metadata for the random generator.
pub const PRNG_NAME: &str = "chacha8-v1";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Two types, utilities (1,2,3), full relation, and costs `(inf,0,inf)` / `(0,inf,0)`:
/// every deterministic truthful mechanism is infinitely expensive while a lottery costs 0.
pub fn gap_instance() -> Instance {
    Instance::new(
        OutcomeSpace::from_ints(&[1, 2, 3]),
        ReportingRelation::full(2),
        AdditiveCostMatrix::from_ints(&[&[-1, 0, -1], &[0, -1, 0]]),
    )
    .expect("consistent dimensions")
}

/// Three types and three outcomes where type 1 may report type 0. The optimum
/// gives outcome indices (1, 2, 2).
pub fn small_cut_instance() -> Instance {
    Instance::new(
        OutcomeSpace::from_ints(&[0, 1, 2]),
        ReportingRelation::reflexive_with(3, [(1, 0)]),
        AdditiveCostMatrix::from_ints(&[&[5, 1, 5], &[5, 5, 1], &[5, 5, 1]]),
    )
    .expect("consistent dimensions")
}

/// Additive costs of `instance` plus `overhead` whenever any type leaves the lowest outcome.
pub fn overhead_cost_oracle(instance: &Instance, overhead: Rational) -> Result<OverheadOracle> {
    OverheadOracle::new(instance.costs().clone(), overhead)
}

/// Type indices used by both reductions: per variable `x_i, x_i+, x_i-`, then one type per clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionLayout {
    pub var_count: usize,
    pub clause_count: usize,
}

impl ReductionLayout {
    pub fn of(formula: &CnfFormula) -> Self {
        Self {
            var_count: formula.var_count(),
            clause_count: formula.clause_count(),
        }
    }

    pub fn type_count(&self) -> usize {
        3 * self.var_count + self.clause_count
    }

    pub fn variable(&self, v: usize) -> usize {
        3 * v
    }

    pub fn literal(&self, v: usize, positive: bool) -> usize {
        3 * v + if positive { 1 } else { 2 }
    }

    pub fn clause(&self, j: usize) -> usize {
        3 * self.var_count + j
    }
}

/// Outcome indices for the two-outcome reduction.
pub const LOW: usize = 0;
pub const HIGH: usize = 1;

/// Common-utility instance whose optimal best-response cost equals the MinSAT value.
/// Its relation is not transitive in general, so the min-cut solver does not apply.
pub fn minsat_reduction_nontransitive(formula: &CnfFormula) -> Instance {
    let layout = ReductionLayout::of(formula);
    let m = formula.clause_count() as i64;
    let mut costs = vec![Vec::new(); layout.type_count()];
    let mut pairs = Vec::new();
    for v in 0..layout.var_count {
        let x = layout.variable(v);
        costs[x] = vec![CostValue::from_int(m + 1), CostValue::zero()];
        for positive in [true, false] {
            let lit = layout.literal(v, positive);
            costs[lit] = vec![CostValue::zero(), CostValue::zero()];
            pairs.push((x, lit));
        }
    }
    for (j, clause) in formula.clauses().iter().enumerate() {
        let c = layout.clause(j);
        costs[c] = vec![CostValue::zero(), CostValue::from_int(1)];
        for v in 0..layout.var_count {
            pairs.push((c, layout.variable(v)));
        }
        for lit in clause {
            pairs.push((c, layout.literal(lit.var, lit.positive)));
        }
    }
    Instance::new(
        OutcomeSpace::from_ints(&[0, 1]),
        ReductionLayout::relation(layout.type_count(), pairs),
        AdditiveCostMatrix::new(costs),
    )
    .expect("consistent dimensions")
}

impl ReductionLayout {
    fn relation(n: usize, pairs: Vec<(usize, usize)>) -> ReportingRelation {
        ReportingRelation::reflexive_with(n, pairs)
    }
}

/// The two large constants of the three-outcome reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionParams {
    /// Prohibitive cost.
    pub big: Rational,
    /// Per-variable cost of the chosen literal.
    pub medium: Rational,
}

impl ReductionParams {
    /// `medium = clauses + 1`, `big = vars * medium * clauses + clauses + 1`.
    pub fn defaults(formula: &CnfFormula) -> Self {
        let clauses = formula.clause_count() as i64;
        let vars = formula.var_count() as i64;
        let medium = clauses + 1;
        Self {
            big: int(vars * medium * clauses + clauses + 1),
            medium: int(medium),
        }
    }

    /// Requires `medium > clauses` and `big > vars * medium + clauses`.
    pub fn check(&self, formula: &CnfFormula) -> Result<()> {
        let clauses = int(formula.clause_count() as i64);
        let vars = int(formula.var_count() as i64);
        if self.medium <= clauses {
            return Err(Error::InvalidParams(format!(
                "medium cost {} must exceed the clause count {clauses}",
                self.medium
            )));
        }
        if self.big <= &vars * &self.medium + &clauses {
            return Err(Error::InvalidParams(format!(
                "big cost {} must exceed vars * medium + clauses",
                self.big
            )));
        }
        Ok(())
    }
}

/// Outcome indices for the three-outcome reduction, in increasing common index order.
pub const MINUS: usize = 0;
pub const NEUTRAL: usize = 1;
pub const PLUS: usize = 2;

/// Per-type-utility instance whose optimal truthful deterministic cost is
/// `vars * medium + MinSAT value`.
pub fn minsat_reduction_single_peaked(formula: &CnfFormula, params: &ReductionParams) -> Result<GeneralInstance> {
    params.check(formula)?;
    let layout = ReductionLayout::of(formula);
    let n = layout.type_count();
    let fin = |v: &Rational| CostValue::Finite(v.clone());
    let zero = CostValue::zero();
    let utility = |row: [i64; 3]| row.iter().map(|&u| int(u)).collect::<Vec<_>>();
    let mut costs = vec![Vec::new(); n];
    let mut utilities = vec![Vec::new(); n];
    let mut pairs = Vec::new();
    for v in 0..layout.var_count {
        let x = layout.variable(v);
        costs[x] = vec![zero.clone(), fin(&params.big), zero.clone()];
        utilities[x] = utility([0, 0, 0]);
        let pos = layout.literal(v, true);
        costs[pos] = vec![fin(&params.big), zero.clone(), fin(&params.medium)];
        utilities[pos] = utility([0, 1, 2]);
        let neg = layout.literal(v, false);
        costs[neg] = vec![fin(&params.medium), zero.clone(), fin(&params.big)];
        utilities[neg] = utility([2, 1, 0]);
        pairs.push((pos, x));
        pairs.push((neg, x));
    }
    for (j, clause) in formula.clauses().iter().enumerate() {
        let c = layout.clause(j);
        costs[c] = vec![zero.clone(), CostValue::from_int(1), zero.clone()];
        utilities[c] = utility([0, 1, 0]);
        for lit in clause {
            pairs.push((c, layout.literal(lit.var, lit.positive)));
            pairs.push((c, layout.variable(lit.var)));
        }
    }
    GeneralInstance::new(
        utilities,
        ReductionLayout::relation(n, pairs),
        AdditiveCostMatrix::new(costs),
    )
}

/// Parameters of the random additive family.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub n: usize,
    pub m: usize,
    /// Probability of each off-diagonal pair.
    pub edge_density: f64,
    /// Costs are uniform integers in `0..=max_cost`.
    pub max_cost: u64,
    /// Probability that a cost entry is replaced by infinity.
    pub infinity_rate: f64,
    /// Replace the relation by its transitive closure.
    pub close: bool,
}

impl RandomParams {
    pub fn new(n: usize, m: usize) -> Self {
        Self {
            n,
            m,
            edge_density: 0.3,
            max_cost: 20,
            infinity_rate: 0.0,
            close: false,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::InvalidParams("n and m must be at least 1".into()));
        }
        for (name, p) in [("edge_density", self.edge_density), ("infinity_rate", self.infinity_rate)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

/// Strictly increasing integer utilities starting at 0 with gaps in 1..=3.
fn random_outcomes(rng: &mut ChaCha8Rng, m: usize) -> OutcomeSpace {
    let mut u = 0;
    let mut values = Vec::with_capacity(m);
    for _ in 0..m {
        values.push(u);
        u += rng.gen_range(1..=3);
    }
    OutcomeSpace::from_ints(&values)
}

fn random_relation(rng: &mut ChaCha8Rng, n: usize, density: f64, close: bool) -> ReportingRelation {
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(density) {
                pairs.push((a, b));
            }
        }
    }
    let relation = ReportingRelation::reflexive_with(n, pairs);
    if close {
        transitive_closure(&relation)
    } else {
        relation
    }
}

/// Sparse relation with about `degree` expected out-pairs per type; cheaper than
/// [`random_relation`] for large `n`.
fn sparse_relation(rng: &mut ChaCha8Rng, n: usize, degree: f64, close: bool) -> ReportingRelation {
    let count = (degree * n as f64).round() as usize;
    let pairs: Vec<_> = (0..count)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    let relation = ReportingRelation::reflexive_with(n, pairs);
    if close {
        transitive_closure(&relation)
    } else {
        relation
    }
}

/// Deterministic in `seed`.
pub fn random_instance(seed: u64, params: &RandomParams) -> Result<Instance> {
    params.check()?;
    let mut rng = rng(seed);
    let outcomes = random_outcomes(&mut rng, params.m);
    let relation = random_relation(&mut rng, params.n, params.edge_density, params.close);
    let costs = random_costs(&mut rng, params);
    Instance::new(outcomes, relation, costs)
}

fn random_costs(rng: &mut ChaCha8Rng, params: &RandomParams) -> AdditiveCostMatrix {
    AdditiveCostMatrix::new(
        (0..params.n)
            .map(|_| {
                (0..params.m)
                    .map(|_| {
                        let c = rng.gen_range(0..=params.max_cost);
                        if params.infinity_rate > 0.0 && rng.gen_bool(params.infinity_rate) {
                            CostValue::Infinite
                        } else {
                            CostValue::Finite(int(c as i64))
                        }
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Large sparse instances for benchmarking: about `degree` random pairs per type,
/// utilities `0..m`, finite costs.
pub fn random_sparse_instance(seed: u64, n: usize, m: usize, degree: f64, max_cost: u64) -> Result<Instance> {
    if n == 0 || m == 0 || degree < 0.0 {
        return Err(Error::InvalidParams("need n, m >= 1 and degree >= 0".into()));
    }
    let mut rng = rng(seed);
    let relation = sparse_relation(&mut rng, n, degree, false);
    let params = RandomParams {
        max_cost,
        ..RandomParams::new(n, m)
    };
    let costs = random_costs(&mut rng, &params);
    Instance::new(OutcomeSpace::ladder(m), relation, costs)
}

/// Random instance whose every cost row is convex: slopes are drawn, sorted, and integrated.
pub fn random_convex_instance(seed: u64, params: &RandomParams) -> Result<Instance> {
    params.check()?;
    let mut rng = rng(seed);
    let outcomes = random_outcomes(&mut rng, params.m);
    let relation = random_relation(&mut rng, params.n, params.edge_density, params.close);
    let max = params.max_cost as i64;
    let rows = (0..params.n)
        .map(|_| {
            let mut slopes: Vec<i64> = (1..params.m).map(|_| rng.gen_range(-max..=max)).collect();
            slopes.sort_unstable();
            let mut values = vec![int(0)];
            for (j, s) in slopes.iter().enumerate() {
                let step = outcomes.utility(j + 1) - outcomes.utility(j);
                let next = &values[j] + step * int(*s);
                values.push(next);
            }
            let low = values.iter().min().cloned().unwrap_or_else(|| int(0));
            let lift = int(rng.gen_range(0..=max));
            values
                .into_iter()
                .map(|v| CostValue::Finite(v - &low + &lift))
                .collect()
        })
        .collect();
    Instance::new(outcomes, relation, AdditiveCostMatrix::new(rows))
}

/// Random submodular table on `[m]^n`: additive terms, pairwise `w * |O^a - O^b|`
/// terms, and a concave function of the total height. Every value is a nonnegative integer.
pub fn random_submodular_table(seed: u64, n: usize, m: usize, max_cost: u64) -> Result<TableOracle> {
    let size = lattice_size(n, m)
        .filter(|&s| s <= 1 << 20)
        .ok_or_else(|| Error::InvalidParams(format!("table for n={n}, m={m} is too large")))?;
    let mut rng = rng(seed);
    let max = max_cost as i64;
    let additive: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..m).map(|_| rng.gen_range(0..=max)).collect())
        .collect();
    let mut pair_weights = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.5) {
                pair_weights.push((a, b, rng.gen_range(1..=max.max(1))));
            }
        }
    }
    let concave_weight = rng.gen_range(0..=max);
    let cap = rng.gen_range(1..=(n * (m - 1)).max(1));
    let values = (0..size as usize)
        .map(|idx| {
            let p = point_from_index(idx, n, m);
            let mut v: i64 = p.iter().enumerate().map(|(i, &j)| additive[i][j]).sum();
            for &(a, b, w) in &pair_weights {
                v += w * (p[a] as i64 - p[b] as i64).abs();
            }
            let h: usize = p.iter().sum();
            v += concave_weight * h.min(cap) as i64;
            CostValue::from_int(v)
        })
        .collect();
    TableOracle::new(n, m, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{is_transitive, validate};

    #[test]
    fn gap_instance_contents() {
        let g = gap_instance();
        assert_eq!(g.cost(0, 1), &CostValue::zero());
        assert!(is_transitive(g.relation()));
        assert!(validate(&g).is_empty());
    }

    #[test]
    fn reduction_type_counts() {
        let f = CnfFormula::from_signed(2, &[&[1, 2], &[-1], &[-2]]).unwrap();
        assert_eq!(minsat_reduction_nontransitive(&f).n(), 9);
        let g = minsat_reduction_single_peaked(&f, &ReductionParams::defaults(&f)).unwrap();
        assert_eq!(g.n(), 9);
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn nontransitive_reduction_is_not_transitive() {
        let f = CnfFormula::from_signed(1, &[&[1], &[-1]]).unwrap();
        let inst = minsat_reduction_nontransitive(&f);
        assert!(!is_transitive(inst.relation()));
        assert!(validate(&inst).is_empty());
    }

    #[test]
    fn reduction_params_checked() {
        let f = CnfFormula::from_signed(1, &[&[1], &[-1]]).unwrap();
        let bad = ReductionParams {
            big: int(1000),
            medium: int(2),
        };
        assert!(minsat_reduction_single_peaked(&f, &bad).is_err());
        let ok = ReductionParams {
            big: int(1000),
            medium: int(10),
        };
        assert!(minsat_reduction_single_peaked(&f, &ok).is_ok());
        let defaults = ReductionParams::defaults(&f);
        assert!(defaults.check(&f).is_ok());
    }

    #[test]
    fn random_is_deterministic() {
        let p = RandomParams {
            infinity_rate: 0.2,
            ..RandomParams::new(5, 4)
        };
        assert_eq!(random_instance(7, &p).unwrap(), random_instance(7, &p).unwrap());
        assert_ne!(random_instance(7, &p).unwrap(), random_instance(8, &p).unwrap());
    }

    #[test]
    fn random_without_infinities_is_finite() {
        let inst = random_instance(3, &RandomParams::new(6, 4)).unwrap();
        assert!(inst.costs().rows().iter().flatten().all(CostValue::is_finite));
    }

    #[test]
    fn dense_closed_relation_is_transitive() {
        let p = RandomParams {
            edge_density: 1.0,
            close: true,
            ..RandomParams::new(5, 2)
        };
        assert!(is_transitive(random_instance(1, &p).unwrap().relation()));
    }

    #[test]
    fn bad_random_params() {
        let p = RandomParams {
            edge_density: 1.5,
            ..RandomParams::new(2, 2)
        };
        assert!(random_instance(0, &p).is_err());
        assert!(random_instance(0, &RandomParams::new(0, 2)).is_err());
    }
}
