//! Instances, mechanisms, truthfulness and cost evaluation.

use std::fmt;

use num::{Signed, Zero};

use crate::cost::{ratio, CostValue, Rational};
use crate::error::{Error, Result};

/// Outcome utilities `o_1 < ... < o_m`, shared by every type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeSpace {
    utilities: Vec<Rational>,
}

impl OutcomeSpace {
    pub fn new(utilities: Vec<Rational>) -> Self {
        Self { utilities }
    }

    pub fn from_ints(utilities: &[i64]) -> Self {
        Self::new(utilities.iter().map(|&v| crate::cost::int(v)).collect())
    }

    /// `0, 1, ..., m-1`.
    pub fn ladder(m: usize) -> Self {
        Self::new((0..m as i64).map(crate::cost::int).collect())
    }

    pub fn len(&self) -> usize {
        self.utilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.utilities.is_empty()
    }

    pub fn utility(&self, j: usize) -> &Rational {
        &self.utilities[j]
    }

    pub fn utilities(&self) -> &[Rational] {
        &self.utilities
    }

    pub fn utilities_f64(&self) -> Vec<f64> {
        self.utilities.iter().map(crate::cost::to_f64).collect()
    }

    pub fn lowest(&self) -> &Rational {
        &self.utilities[0]
    }

    pub fn highest(&self) -> &Rational {
        &self.utilities[self.utilities.len() - 1]
    }
}

/// Which reports each type may make: `(i, i')` means type `i` can report `i'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReportingRelation {
    n: usize,
    // sorted, deduplicated
    pairs: Vec<(usize, usize)>,
}

impl ReportingRelation {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        pairs.sort_unstable();
        pairs.dedup();
        Self { n, pairs }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, i)))
    }

    pub fn full(n: usize) -> Self {
        Self::new(n, (0..n).flat_map(|i| (0..n).map(move |k| (i, k))))
    }

    /// Adds the given pairs to the identity relation.
    pub fn reflexive_with(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Self::new(n, (0..n).map(|i| (i, i)).chain(pairs))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, from: usize, to: usize) -> bool {
        self.pairs.binary_search(&(from, to)).is_ok()
    }

    /// Reports available to type `i`, in increasing order.
    pub fn reports_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.pairs.partition_point(|&(a, _)| a < i);
        self.pairs[start..]
            .iter()
            .take_while(move |&&(a, _)| a == i)
            .map(|&(_, b)| b)
    }

    /// Pairs `(i1, i2)` with `i1 != i2`.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied().filter(|&(a, b)| a != b)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.contains(i, i))
    }

    fn in_range(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| a < self.n && b < self.n)
    }

    fn bit_rows(&self) -> BitRows {
        let mut rows = BitRows::new(self.n);
        for &(a, b) in &self.pairs {
            rows.set(a, b);
        }
        rows
    }
}

struct BitRows {
    words: usize,
    bits: Vec<u64>,
}

impl BitRows {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self {
            words,
            bits: vec![0; words * n],
        }
    }

    fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.words + col / 64] |= 1 << (col % 64);
    }

    fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.words + col / 64] >> (col % 64) & 1 == 1
    }

    /// `row |= other`
    fn or_into(&mut self, row: usize, other: usize) {
        if row == other {
            return;
        }
        let w = self.words;
        let (dst, src) = if row < other {
            let (lo, hi) = self.bits.split_at_mut(other * w);
            (&mut lo[row * w..row * w + w], &hi[..w])
        } else {
            let (lo, hi) = self.bits.split_at_mut(row * w);
            (&mut hi[..w], &lo[other * w..other * w + w])
        };
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= *s;
        }
    }
}

/// True iff `(i1,i2), (i2,i3) in R` implies `(i1,i3) in R`.
pub fn is_transitive(relation: &ReportingRelation) -> bool {
    let rows = relation.bit_rows();
    relation.pairs.iter().all(|&(a, b)| {
        b >= relation.n || relation.reports_of(b).all(|c| c < relation.n && rows.get(a, c))
    })
}

/// Smallest transitive superset (Warshall over bit rows).
pub fn transitive_closure(relation: &ReportingRelation) -> ReportingRelation {
    let n = relation.n;
    let mut rows = relation.bit_rows();
    for k in 0..n {
        for i in 0..n {
            if rows.get(i, k) {
                rows.or_into(i, k);
            }
        }
    }
    let mut pairs = Vec::with_capacity(relation.len());
    for i in 0..n {
        for w in 0..rows.words {
            let mut word = rows.bits[i * rows.words + w];
            while word != 0 {
                let bit = word.trailing_zeros() as usize;
                pairs.push((i, w * 64 + bit));
                word &= word - 1;
            }
        }
    }
    // pairs are generated in sorted order
    ReportingRelation { n, pairs }
}

/// `entries[i][j] = c_i(o_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveCostMatrix {
    rows: Vec<Vec<CostValue>>,
}

impl AdditiveCostMatrix {
    pub fn new(rows: Vec<Vec<CostValue>>) -> Self {
        Self { rows }
    }

    /// Negative entries denote infinity.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::new(
            rows.iter()
                .map(|row| {
                    row.iter()
                        .map(|&v| {
                            if v < 0 {
                                CostValue::Infinite
                            } else {
                                CostValue::from_int(v)
                            }
                        })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Self::new(vec![vec![CostValue::zero(); m]; n])
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &CostValue {
        &self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[CostValue] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<CostValue>] {
        &self.rows
    }

    pub fn finite_entries(&self) -> impl Iterator<Item = &Rational> {
        self.rows.iter().flatten().filter_map(CostValue::finite)
    }
}

/// Outcomes and relation without costs; the domain of combinatorial solvers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub outcomes: OutcomeSpace,
    pub relation: ReportingRelation,
}

impl Skeleton {
    pub fn new(outcomes: OutcomeSpace, relation: ReportingRelation) -> Self {
        Self { outcomes, relation }
    }

    pub fn n(&self) -> usize {
        self.relation.n()
    }

    pub fn m(&self) -> usize {
        self.outcomes.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    outcomes: OutcomeSpace,
    relation: ReportingRelation,
    costs: AdditiveCostMatrix,
}

impl Instance {
    /// Checks only that the three parts agree on `n` and `m`; see [`validate`] for the rest.
    pub fn new(
        outcomes: OutcomeSpace,
        relation: ReportingRelation,
        costs: AdditiveCostMatrix,
    ) -> Result<Self> {
        let n = relation.n();
        let m = outcomes.len();
        if costs.n_rows() != n {
            return Err(Error::Dimension(format!(
                "{} cost rows for {n} types",
                costs.n_rows()
            )));
        }
        if let Some(i) = costs.rows().iter().position(|r| r.len() != m) {
            return Err(Error::Dimension(format!(
                "cost row {i} has {} entries for {m} outcomes",
                costs.row(i).len()
            )));
        }
        Ok(Self {
            outcomes,
            relation,
            costs,
        })
    }

    pub fn n(&self) -> usize {
        self.relation.n()
    }

    pub fn m(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcomes(&self) -> &OutcomeSpace {
        &self.outcomes
    }

    pub fn relation(&self) -> &ReportingRelation {
        &self.relation
    }

    pub fn costs(&self) -> &AdditiveCostMatrix {
        &self.costs
    }

    pub fn cost(&self, i: usize, j: usize) -> &CostValue {
        self.costs.get(i, j)
    }

    pub fn skeleton(&self) -> Skeleton {
        Skeleton::new(self.outcomes.clone(), self.relation.clone())
    }

    pub fn with_costs(&self, costs: AdditiveCostMatrix) -> Result<Self> {
        Self::new(self.outcomes.clone(), self.relation.clone(), costs)
    }

    pub fn with_relation(&self, relation: ReportingRelation) -> Result<Self> {
        Self::new(self.outcomes.clone(), relation, self.costs.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    NoOutcomes,
    NotStrictlyIncreasing,
    NegativeUtility,
    RelationOutOfRange,
    NotReflexive,
    NegativeCost,
    /// A type whose every cost entry is infinite; reported but not fatal.
    DegenerateRow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    /// Everything except degenerate rows prevents solving.
    pub fn is_fatal(&self) -> bool {
        self.violations
            .iter()
            .any(|v| v.kind != ViolationKind::DegenerateRow)
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, message: String) {
        self.violations.push(Violation { kind, message });
    }

    /// `Err` when fatal.
    pub fn into_result(self) -> Result<()> {
        if self.is_fatal() {
            Err(Error::Invalid(self))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<_> = self.violations.iter().map(|v| v.message.as_str()).collect();
        f.write_str(&msgs.join("; "))
    }
}

pub fn validate_skeleton(outcomes: &OutcomeSpace, relation: &ReportingRelation) -> ValidationReport {
    let mut report = ValidationReport::default();
    if outcomes.is_empty() {
        report.push(ViolationKind::NoOutcomes, "no outcomes".into());
    }
    if let Some(j) = outcomes
        .utilities()
        .windows(2)
        .position(|w| w[0] >= w[1])
    {
        report.push(
            ViolationKind::NotStrictlyIncreasing,
            format!("outcomes not strictly increasing at index {}", j + 1),
        );
    }
    if let Some(j) = outcomes.utilities().iter().position(|u| u.is_negative()) {
        report.push(
            ViolationKind::NegativeUtility,
            format!("outcome {j} has negative utility"),
        );
    }
    if !relation.in_range() {
        report.push(
            ViolationKind::RelationOutOfRange,
            format!("relation pair outside 0..{}", relation.n()),
        );
    }
    if let Some(i) = (0..relation.n()).find(|&i| !relation.contains(i, i)) {
        report.push(
            ViolationKind::NotReflexive,
            format!("relation not reflexive: ({i},{i}) missing"),
        );
    }
    report
}

pub fn validate(instance: &Instance) -> ValidationReport {
    let mut report = validate_skeleton(&instance.outcomes, &instance.relation);
    for (i, row) in instance.costs.rows().iter().enumerate() {
        if let Some(j) = row
            .iter()
            .position(|c| c.finite().is_some_and(|v| v.is_negative()))
        {
            report.push(
                ViolationKind::NegativeCost,
                format!("negative cost at ({i},{j})"),
            );
        }
        if row.iter().all(CostValue::is_infinite) {
            report.push(
                ViolationKind::DegenerateRow,
                format!("type {i} has no finite cost entry"),
            );
        }
    }
    report
}

/// `assignment[i]` is the outcome index given to reports of type `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeterministicMechanism {
    pub assignment: Vec<usize>,
}

impl DeterministicMechanism {
    pub fn new(assignment: Vec<usize>) -> Self {
        Self { assignment }
    }

    pub fn constant(n: usize, j: usize) -> Self {
        Self::new(vec![j; n])
    }

    pub fn outcome(&self, i: usize) -> usize {
        self.assignment[i]
    }

    pub fn check(&self, n: usize, m: usize) -> Result<()> {
        if self.assignment.len() != n {
            return Err(Error::Dimension(format!(
                "mechanism covers {} types, instance has {n}",
                self.assignment.len()
            )));
        }
        if let Some(i) = self.assignment.iter().position(|&j| j >= m) {
            return Err(Error::OutOfRange(format!("type {i} assigned outcome >= {m}")));
        }
        Ok(())
    }
}

/// Independent per-type lotteries over outcomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomizedMechanism {
    rows: Vec<Vec<Rational>>,
    // built from floats; comparisons use an absolute tolerance
    approximate: bool,
}

pub const FLOAT_TOLERANCE: f64 = 1e-12;

fn float_tolerance() -> Rational {
    ratio(1, 1_000_000_000_000)
}

impl RandomizedMechanism {
    pub fn new(rows: Vec<Vec<Rational>>) -> Self {
        Self {
            rows,
            approximate: false,
        }
    }

    pub fn from_f64_rows(rows: &[Vec<f64>]) -> Self {
        Self {
            rows: rows
                .iter()
                .map(|r| r.iter().map(|&p| crate::cost::from_f64(p)).collect())
                .collect(),
            approximate: true,
        }
    }

    pub fn point_mass(mech: &DeterministicMechanism, m: usize) -> Self {
        let rows = mech
            .assignment
            .iter()
            .map(|&j| {
                let mut row = vec![Rational::zero(); m];
                row[j] = crate::cost::int(1);
                row
            })
            .collect();
        Self::new(rows)
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.rows[i]
    }

    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    pub fn check(&self, n: usize, m: usize) -> Result<()> {
        if self.rows.len() != n {
            return Err(Error::Dimension(format!(
                "mechanism covers {} types, instance has {n}",
                self.rows.len()
            )));
        }
        let tol = float_tolerance();
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Dimension(format!("row {i} has {} entries", row.len())));
            }
            if row.iter().any(|p| p.is_negative()) {
                return Err(Error::OutOfRange(format!("row {i} has a negative probability")));
            }
            let total: Rational = row.iter().sum();
            if (total - crate::cost::int(1)).abs() > tol {
                return Err(Error::OutOfRange(format!("row {i} does not sum to 1")));
            }
        }
        Ok(())
    }

    /// Point-mass rows as a deterministic mechanism, if every row is one.
    pub fn as_deterministic(&self) -> Option<DeterministicMechanism> {
        let one = crate::cost::int(1);
        self.rows
            .iter()
            .map(|row| row.iter().position(|p| *p == one))
            .collect::<Option<Vec<_>>>()
            .map(DeterministicMechanism::new)
    }
}

/// `sum_j p_ij * o_j`.
pub fn expected_utility(mech: &RandomizedMechanism, outcomes: &OutcomeSpace, i: usize) -> Rational {
    mech.row(i)
        .iter()
        .zip(outcomes.utilities())
        .map(|(p, o)| p * o)
        .sum()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TruthReport {
    /// `(i1, i2)` pairs where type `i1` gains by reporting `i2`.
    pub violations: Vec<(usize, usize)>,
}

impl TruthReport {
    pub fn is_truthful(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn is_truthful(mech: &RandomizedMechanism, instance: &Instance) -> TruthReport {
    let utilities: Vec<Rational> = (0..instance.n())
        .map(|i| expected_utility(mech, instance.outcomes(), i))
        .collect();
    let slack = if mech.is_approximate() {
        float_tolerance()
    } else {
        Rational::zero()
    };
    let violations = instance
        .relation()
        .off_diagonal()
        .filter(|&(a, b)| &utilities[a] + &slack < utilities[b])
        .collect();
    TruthReport { violations }
}

/// With a common strictly increasing utility, truthfulness is `M(i1) >= M(i2)` on every pair.
pub fn is_truthful_deterministic(
    mech: &DeterministicMechanism,
    relation: &ReportingRelation,
) -> TruthReport {
    let violations = relation
        .off_diagonal()
        .filter(|&(a, b)| mech.outcome(a) < mech.outcome(b))
        .collect();
    TruthReport { violations }
}

/// Utility-maximizing feasible report; the truthful report wins ties, then the lowest index.
pub fn best_response(mech: &DeterministicMechanism, instance: &Instance, i: usize) -> usize {
    // utilities are strictly increasing, so outcome indices order them
    let best = instance
        .relation()
        .reports_of(i)
        .map(|k| mech.outcome(k))
        .max()
        .unwrap_or(mech.outcome(i));
    if mech.outcome(i) == best {
        return i;
    }
    instance
        .relation()
        .reports_of(i)
        .find(|&k| mech.outcome(k) == best)
        .unwrap_or(i)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostMode {
    /// `sum_i c_i(M(i))`
    Truthful,
    /// `sum_i c_i(M(r_i))` with `r_i` the best response
    BestResponse,
}

pub fn cost_deterministic(mech: &DeterministicMechanism, instance: &Instance, mode: CostMode) -> CostValue {
    let mut total = CostValue::zero();
    for i in 0..instance.n() {
        let report = match mode {
            CostMode::Truthful => i,
            CostMode::BestResponse => best_response(mech, instance, i),
        };
        total += instance.cost(i, mech.outcome(report));
        if total.is_infinite() {
            break;
        }
    }
    total
}

pub fn cost_randomized(mech: &RandomizedMechanism, instance: &Instance) -> CostValue {
    let mut total = CostValue::zero();
    for i in 0..instance.n() {
        for (j, p) in mech.row(i).iter().enumerate() {
            total += &instance.cost(i, j).scale(p);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::int;
    use crate::generators::gap_instance;

    fn chain3() -> ReportingRelation {
        ReportingRelation::reflexive_with(3, [(0, 1), (1, 2)])
    }

    #[test]
    fn gap_instance_validates() {
        assert!(validate(&gap_instance()).is_empty());
    }

    #[test]
    fn duplicate_utilities_rejected() {
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 0]),
            ReportingRelation::identity(1),
            AdditiveCostMatrix::from_ints(&[&[0, 0]]),
        )
        .unwrap();
        let report = validate(&inst);
        assert!(report.has(ViolationKind::NotStrictlyIncreasing));
        assert!(report.to_string().contains("outcomes not strictly increasing"));
    }

    #[test]
    fn missing_diagonal_rejected() {
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 1]),
            ReportingRelation::new(2, [(1, 1), (1, 0)]),
            AdditiveCostMatrix::zeros(2, 2),
        )
        .unwrap();
        let report = validate(&inst);
        assert!(report.has(ViolationKind::NotReflexive));
        assert!(report.to_string().contains("relation not reflexive"));
    }

    #[test]
    fn degenerate_rows_are_flagged_not_fatal() {
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 1]),
            ReportingRelation::identity(1),
            AdditiveCostMatrix::from_ints(&[&[-1, -1]]),
        )
        .unwrap();
        let report = validate(&inst);
        assert!(report.has(ViolationKind::DegenerateRow));
        assert!(!report.is_fatal());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = Instance::new(
            OutcomeSpace::from_ints(&[0, 1]),
            ReportingRelation::identity(2),
            AdditiveCostMatrix::zeros(2, 3),
        );
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn transitivity_examples() {
        assert!(is_transitive(&ReportingRelation::full(2)));
        assert!(!is_transitive(&chain3()));
        let closed = transitive_closure(&chain3());
        assert!(closed.contains(0, 2));
        assert_eq!(closed.len(), chain3().len() + 1);
        assert_eq!(transitive_closure(&closed), closed);
    }

    #[test]
    fn closure_handles_wide_relations() {
        // crosses a 64-bit word boundary
        let n = 130;
        let rel = ReportingRelation::reflexive_with(n, (0..n - 1).map(|i| (i, i + 1)));
        let closed = transitive_closure(&rel);
        assert_eq!(closed.len(), n * (n + 1) / 2);
        assert!(is_transitive(&closed));
    }

    #[test]
    fn expected_utility_examples() {
        let o = OutcomeSpace::from_ints(&[1, 2, 3]);
        let mech = RandomizedMechanism::new(vec![vec![ratio(1, 2), int(0), ratio(1, 2)]]);
        assert_eq!(expected_utility(&mech, &o, 0), int(2));

        let o = OutcomeSpace::from_ints(&[0, 1]);
        let mech = RandomizedMechanism::new(vec![vec![ratio(3, 10), ratio(7, 10)]]);
        assert_eq!(expected_utility(&mech, &o, 0), ratio(7, 10));

        let det = DeterministicMechanism::new(vec![2]);
        let o = OutcomeSpace::from_ints(&[1, 5, 9]);
        let pm = RandomizedMechanism::point_mass(&det, 3);
        assert_eq!(expected_utility(&pm, &o, 0), int(9));
    }

    #[test]
    fn truthfulness_examples() {
        let gap = gap_instance();
        let optimum = RandomizedMechanism::new(vec![
            vec![int(0), int(1), int(0)],
            vec![ratio(1, 2), int(0), ratio(1, 2)],
        ]);
        assert!(is_truthful(&optimum, &gap).is_truthful());

        let swapped = DeterministicMechanism::new(vec![1, 0]);
        let report = is_truthful(&RandomizedMechanism::point_mass(&swapped, 3), &gap);
        assert_eq!(report.violations, vec![(1, 0)]);
        assert_eq!(is_truthful_deterministic(&swapped, gap.relation()).violations, vec![(1, 0)]);

        let ident = gap.with_relation(ReportingRelation::identity(2)).unwrap();
        assert!(is_truthful(&RandomizedMechanism::point_mass(&swapped, 3), &ident).is_truthful());
    }

    #[test]
    fn approximate_mechanisms_compare_with_tolerance() {
        let gap = gap_instance();
        let rows = vec![vec![0.0, 1.0, 0.0], vec![0.5 + 1e-14, 0.0, 0.5 - 1e-14]];
        let mech = RandomizedMechanism::from_f64_rows(&rows);
        assert!(mech.check(2, 3).is_ok());
        assert!(is_truthful(&mech, &gap).is_truthful());
    }

    #[test]
    fn best_response_examples() {
        let gap = gap_instance();
        let swapped = DeterministicMechanism::new(vec![1, 0]);
        assert_eq!(best_response(&swapped, &gap, 1), 0);
        assert_eq!(best_response(&swapped, &gap, 0), 0);
        let flat = DeterministicMechanism::new(vec![2, 2]);
        assert_eq!(best_response(&flat, &gap, 1), 1);
    }

    #[test]
    fn best_response_ties_prefer_lowest_index() {
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 1]),
            ReportingRelation::reflexive_with(3, [(2, 0), (2, 1)]),
            AdditiveCostMatrix::zeros(3, 2),
        )
        .unwrap();
        let mech = DeterministicMechanism::new(vec![1, 1, 0]);
        assert_eq!(best_response(&mech, &inst, 2), 0);
    }

    #[test]
    fn cost_examples() {
        let gap = gap_instance();
        let m = DeterministicMechanism::new(vec![1, 1]);
        assert_eq!(cost_deterministic(&m, &gap, CostMode::Truthful), CostValue::Infinite);

        let zero = Instance::new(
            OutcomeSpace::from_ints(&[0, 1]),
            ReportingRelation::full(2),
            AdditiveCostMatrix::from_ints(&[&[0, 4], &[0, 9]]),
        )
        .unwrap();
        let bottom = DeterministicMechanism::constant(2, 0);
        assert_eq!(cost_deterministic(&bottom, &zero, CostMode::Truthful), CostValue::zero());

        let optimum = RandomizedMechanism::new(vec![
            vec![int(0), int(1), int(0)],
            vec![ratio(1, 2), int(0), ratio(1, 2)],
        ]);
        assert_eq!(cost_randomized(&optimum, &gap), CostValue::zero());

        let single = Instance::new(
            OutcomeSpace::from_ints(&[0, 1]),
            ReportingRelation::identity(1),
            AdditiveCostMatrix::from_ints(&[&[2, 4]]),
        )
        .unwrap();
        let half = RandomizedMechanism::new(vec![vec![ratio(1, 2), ratio(1, 2)]]);
        assert_eq!(cost_randomized(&half, &single), CostValue::from_int(3));
    }

    #[test]
    fn best_response_cost_matches_truthful_cost_for_truthful_mechanisms() {
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 1, 2]),
            transitive_closure(&chain3()),
            AdditiveCostMatrix::from_ints(&[&[1, 2, 3], &[4, 0, 6], &[7, 8, 0]]),
        )
        .unwrap();
        let mech = DeterministicMechanism::new(vec![2, 1, 0]);
        assert!(is_truthful_deterministic(&mech, inst.relation()).is_truthful());
        assert_eq!(
            cost_deterministic(&mech, &inst, CostMode::Truthful),
            cost_deterministic(&mech, &inst, CostMode::BestResponse)
        );
    }
}
