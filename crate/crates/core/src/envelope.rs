//! Optimal randomized mechanisms through convex envelopes of the cost rows.
//!
//! A lottery for type `i` matters only through its expected utility `u`, and
//! the cheapest lottery with mean `u` costs the lower convex envelope of the
//! points `(o_j, c_i(o_j))` at `u`. Solving the deterministic problem on the
//! envelope values and splitting each assigned outcome into the two bracketing
//! hull vertices gives an optimal randomized mechanism.

use num::{One, Signed, Zero};

use crate::cost::{CostValue, Rational};
use crate::error::{Error, Result};
use crate::instance::{
    validate, AdditiveCostMatrix, DeterministicMechanism, Instance, OutcomeSpace,
    RandomizedMechanism,
};
use crate::mincut::solve_deterministic;

/// Linear interpolation of a cost row between outcome utilities.
pub fn pl_extension_value(row: &[CostValue], outcomes: &OutcomeSpace, x: &Rational) -> Result<CostValue> {
    let u = outcomes.utilities();
    if u.is_empty() || x < outcomes.lowest() || x > outcomes.highest() {
        return Err(Error::OutOfRange(format!("utility {x} outside the outcome range")));
    }
    // largest j with o_j <= x
    let j = u.partition_point(|o| o <= x) - 1;
    if &u[j] == x {
        return Ok(row[j].clone());
    }
    let (lo, hi) = (&u[j], &u[j + 1]);
    let w_lo = (hi - x) / (hi - lo);
    let w_hi = Rational::one() - &w_lo;
    Ok(row[j].scale(&w_lo) + row[j + 1].scale(&w_hi))
}

/// Convex in the extended sense: finite entries form one contiguous block and
/// their slopes never decrease.
pub fn is_convex_row(row: &[CostValue], outcomes: &OutcomeSpace) -> bool {
    let finite: Vec<usize> = (0..row.len()).filter(|&j| row[j].is_finite()).collect();
    let Some((&first, &last)) = finite.first().zip(finite.last()) else {
        return true;
    };
    if last - first + 1 != finite.len() {
        return false;
    }
    let slope = |j: usize| {
        let (a, b) = (row[j].finite().unwrap(), row[j + 1].finite().unwrap());
        (b - a) / (outcomes.utility(j + 1) - outcomes.utility(j))
    };
    (first..last).collect::<Vec<_>>().windows(2).all(|w| slope(w[0]) <= slope(w[1]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityReport {
    pub per_type: Vec<bool>,
}

impl ConvexityReport {
    pub fn all(&self) -> bool {
        self.per_type.iter().all(|&b| b)
    }

    pub fn first_violation(&self) -> Option<usize> {
        self.per_type.iter().position(|&b| !b)
    }
}

pub fn is_convex_cost(instance: &Instance) -> ConvexityReport {
    ConvexityReport {
        per_type: instance
            .costs()
            .rows()
            .iter()
            .map(|row| is_convex_row(row, instance.outcomes()))
            .collect(),
    }
}

/// Lower convex hull of one cost row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeRow {
    /// Outcome indices of the hull vertices, increasing. Collinear points are not vertices.
    pub hull: Vec<usize>,
    /// Envelope value at every outcome; infinite outside the finite range.
    pub values: Vec<CostValue>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeTable {
    pub rows: Vec<EnvelopeRow>,
}

impl EnvelopeTable {
    pub fn costs(&self) -> AdditiveCostMatrix {
        AdditiveCostMatrix::new(self.rows.iter().map(|r| r.values.clone()).collect())
    }
}

/// `(b - a) x (c - a) <= 0`: `b` is not strictly below segment `a c`.
fn not_below(a: (&Rational, &Rational), b: (&Rational, &Rational), c: (&Rational, &Rational)) -> bool {
    let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
    !cross.is_positive()
}

/// Left-to-right monotone-chain scan over the finite points.
pub fn convex_envelope(row: &[CostValue], outcomes: &OutcomeSpace) -> Result<EnvelopeRow> {
    let points: Vec<(usize, &Rational)> = row
        .iter()
        .enumerate()
        .filter_map(|(j, c)| c.finite().map(|v| (j, v)))
        .collect();
    if points.is_empty() {
        return Err(Error::AllInfiniteRow(0));
    }
    let xy = |j: usize, v| (outcomes.utility(j), v);
    let mut hull: Vec<(usize, &Rational)> = Vec::with_capacity(points.len());
    for &(j, v) in &points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if not_below(xy(a.0, a.1), xy(b.0, b.1), xy(j, v)) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((j, v));
    }
    let first = hull[0].0;
    let last = hull[hull.len() - 1].0;
    let mut values = Vec::with_capacity(row.len());
    let mut seg = 0;
    for j in 0..row.len() {
        if j < first || j > last {
            values.push(CostValue::Infinite);
            continue;
        }
        while seg + 1 < hull.len() && hull[seg + 1].0 <= j {
            seg += 1;
        }
        let (lj, lv) = hull[seg];
        if lj == j {
            values.push(CostValue::Finite(lv.clone()));
            continue;
        }
        let (rj, rv) = hull[seg + 1];
        let (ol, or, o) = (outcomes.utility(lj), outcomes.utility(rj), outcomes.utility(j));
        let w = (or - o) / (or - ol);
        values.push(CostValue::Finite(&w * lv + (Rational::one() - &w) * rv));
    }
    Ok(EnvelopeRow {
        hull: hull.into_iter().map(|(j, _)| j).collect(),
        values,
    })
}

pub fn envelope_table(instance: &Instance) -> Result<EnvelopeTable> {
    let rows = instance
        .costs()
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            convex_envelope(row, instance.outcomes()).map_err(|e| match e {
                Error::AllInfiniteRow(_) => Error::AllInfiniteRow(i),
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    Ok(EnvelopeTable { rows })
}

/// A lottery on at most two outcomes: `alpha` on `lower`, the rest on `upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixturePair {
    pub lower: usize,
    pub upper: usize,
    pub alpha: Rational,
}

impl MixturePair {
    pub fn point(j: usize) -> Self {
        Self {
            lower: j,
            upper: j,
            alpha: Rational::one(),
        }
    }

    pub fn row(&self, m: usize) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); m];
        row[self.lower] += &self.alpha;
        row[self.upper] += Rational::one() - &self.alpha;
        row
    }
}

/// The hull vertices bracketing utility `u` and the weight on the lower one.
pub fn recover_mixture(envelope: &EnvelopeRow, outcomes: &OutcomeSpace, u: &Rational) -> Result<MixturePair> {
    let hull = &envelope.hull;
    let (lo, hi) = (outcomes.utility(hull[0]), outcomes.utility(hull[hull.len() - 1]));
    if u < lo || u > hi {
        return Err(Error::OutOfRange(format!(
            "utility {u} outside the envelope's finite range [{lo}, {hi}]"
        )));
    }
    let k = hull.partition_point(|&j| outcomes.utility(j) <= u) - 1;
    let lower = hull[k];
    if outcomes.utility(lower) == u {
        return Ok(MixturePair::point(lower));
    }
    let upper = hull[k + 1];
    let (ol, or) = (outcomes.utility(lower), outcomes.utility(upper));
    Ok(MixturePair {
        lower,
        upper,
        alpha: (or - u) / (or - ol),
    })
}

/// Expected cost of the mixture under a cost row.
pub fn mixture_cost(pair: &MixturePair, row: &[CostValue]) -> CostValue {
    row[pair.lower].scale(&pair.alpha) + row[pair.upper].scale(&(Rational::one() - &pair.alpha))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomizedSolution {
    /// `None` when no finite-cost truthful mechanism exists.
    pub mechanism: Option<RandomizedMechanism>,
    pub cost: CostValue,
    /// Per type, the two-outcome lottery used.
    pub support: Vec<MixturePair>,
    /// Empty when some row is entirely infinite.
    pub envelope: Option<EnvelopeTable>,
}

impl RandomizedSolution {
    fn infinite(envelope: Option<EnvelopeTable>) -> Self {
        Self {
            mechanism: None,
            cost: CostValue::Infinite,
            support: Vec::new(),
            envelope,
        }
    }
}

/// Cheapest truthful mechanism over all lotteries.
pub fn solve_randomized(instance: &Instance) -> Result<RandomizedSolution> {
    validate(instance).into_result()?;
    let m = instance.m();
    if m == 1 {
        let mech = DeterministicMechanism::constant(instance.n(), 0);
        let cost: CostValue = (0..instance.n()).map(|i| instance.cost(i, 0)).sum();
        if cost.is_infinite() {
            return Ok(RandomizedSolution::infinite(None));
        }
        return Ok(RandomizedSolution {
            mechanism: Some(RandomizedMechanism::point_mass(&mech, 1)),
            cost,
            support: vec![MixturePair::point(0); instance.n()],
            envelope: None,
        });
    }
    let table = match envelope_table(instance) {
        Ok(t) => t,
        Err(Error::AllInfiniteRow(_)) => return Ok(RandomizedSolution::infinite(None)),
        Err(e) => return Err(e),
    };
    let relaxed = instance.with_costs(table.costs())?;
    let det = solve_deterministic(&relaxed)?;
    let Some(assignment) = det.mechanism else {
        return Ok(RandomizedSolution::infinite(Some(table)));
    };
    let support = assignment
        .assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| recover_mixture(&table.rows[i], instance.outcomes(), instance.outcomes().utility(j)))
        .collect::<Result<Vec<_>>>()?;
    let mechanism = RandomizedMechanism::new(support.iter().map(|p| p.row(m)).collect());
    Ok(RandomizedSolution {
        mechanism: Some(mechanism),
        cost: det.cost,
        support,
        envelope: Some(table),
    })
}

fn support_bounds(row: &[Rational]) -> Option<(usize, usize)> {
    let first = row.iter().position(|p| !p.is_zero())?;
    let last = row.iter().rposition(|p| !p.is_zero())?;
    Some((first, last))
}

/// Shifts mass inward until every row lives on two consecutive outcomes, keeping
/// each row's expected utility and never raising a convex cost.
pub fn consolidate_two_consecutive(mech: &RandomizedMechanism, instance: &Instance) -> Result<RandomizedMechanism> {
    if let Some(i) = is_convex_cost(instance).first_violation() {
        return Err(Error::NonConvex(i));
    }
    mech.check(instance.n(), instance.m())?;
    let o = instance.outcomes();
    let rows = mech
        .rows()
        .iter()
        .map(|row| {
            let mut row = row.clone();
            while let Some((j1, j2)) = support_bounds(&row).filter(|(a, b)| b - a > 1) {
                let j3 = j1 + 1;
                // o_j3 = alpha * o_j1 + (1 - alpha) * o_j2
                let alpha = (o.utility(j2) - o.utility(j3)) / (o.utility(j2) - o.utility(j1));
                let beta = Rational::one() - &alpha;
                let (p1, p2) = (row[j1].clone(), row[j2].clone());
                if &p1 / &alpha <= &p2 / &beta {
                    let lifted = &p1 / &alpha;
                    row[j1] = Rational::zero();
                    row[j2] = &p2 - &beta * &lifted;
                    row[j3] += lifted;
                } else {
                    let lifted = &p2 / &beta;
                    row[j2] = Rational::zero();
                    row[j1] = &p1 - &alpha * &lifted;
                    row[j3] += lifted;
                }
            }
            row
        })
        .collect();
    Ok(RandomizedMechanism::new(rows))
}

/// Splits a mechanism with consecutive supports into the threshold mechanisms
/// `M_r(i) = upper_i if r <= alpha_i else lower_i` for `r` uniform on (0, 1],
/// returning each distinct mechanism with the length of its `r`-interval.
pub fn threshold_round(mech: &RandomizedMechanism, instance: &Instance) -> Result<Vec<(DeterministicMechanism, Rational)>> {
    mech.check(instance.n(), instance.m())?;
    let mut lower = Vec::with_capacity(instance.n());
    let mut upper_mass = Vec::with_capacity(instance.n());
    for (i, row) in mech.rows().iter().enumerate() {
        let (first, last) = support_bounds(row).ok_or(Error::NotConsecutive(i))?;
        if last - first > 1 {
            return Err(Error::NotConsecutive(i));
        }
        lower.push(first);
        upper_mass.push(if last > first { row[last].clone() } else { Rational::zero() });
    }
    let mut cuts: Vec<Rational> = upper_mass.iter().filter(|a| a.is_positive()).cloned().collect();
    cuts.push(Rational::one());
    cuts.sort();
    cuts.dedup();
    let mut out = Vec::with_capacity(cuts.len());
    let mut prev = Rational::zero();
    for r in cuts {
        let assignment = lower
            .iter()
            .zip(&upper_mass)
            .map(|(&j, a)| if *a >= r { j + 1 } else { j })
            .collect();
        let weight = &r - &prev;
        out.push((DeterministicMechanism::new(assignment), weight));
        prev = r;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{int, ratio};
    use crate::generators::gap_instance;
    use crate::instance::{cost_deterministic, cost_randomized, is_truthful, CostMode, ReportingRelation};

    fn row(values: &[i64]) -> Vec<CostValue> {
        AdditiveCostMatrix::from_ints(&[values]).row(0).to_vec()
    }

    #[test]
    fn interpolation() {
        let o = OutcomeSpace::from_ints(&[0, 2]);
        let c = row(&[0, 4]);
        assert_eq!(pl_extension_value(&c, &o, &int(1)).unwrap(), CostValue::from_int(2));
        assert_eq!(pl_extension_value(&c, &o, &int(2)).unwrap(), CostValue::from_int(4));
        assert_eq!(pl_extension_value(&c, &o, &int(0)).unwrap(), CostValue::zero());
        assert!(pl_extension_value(&c, &o, &int(3)).is_err());
        let inf = row(&[0, -1]);
        assert_eq!(pl_extension_value(&inf, &o, &int(1)).unwrap(), CostValue::Infinite);
    }

    #[test]
    fn convexity_examples() {
        let o = OutcomeSpace::from_ints(&[0, 1, 2]);
        assert!(is_convex_row(&row(&[0, 1, 4]), &o));
        assert!(!is_convex_row(&row(&[0, 5, 2]), &o));
        assert!(is_convex_row(&row(&[3, 3, 3]), &o));
        assert!(is_convex_row(&row(&[-1, 2, 3]), &o));
        assert!(!is_convex_row(&row(&[0, -1, 0]), &o));
    }

    #[test]
    fn envelope_examples() {
        let o = OutcomeSpace::from_ints(&[0, 1, 2]);
        let env = convex_envelope(&row(&[0, 5, 2]), &o).unwrap();
        assert_eq!(env.hull, vec![0, 2]);
        assert_eq!(env.values[1], CostValue::from_int(1));

        let convex = row(&[0, 1, 4]);
        let env = convex_envelope(&convex, &o).unwrap();
        assert_eq!(env.hull, vec![0, 1, 2]);
        assert_eq!(env.values, convex);

        let g = gap_instance();
        let env = convex_envelope(g.costs().row(1), g.outcomes()).unwrap();
        assert_eq!(env.hull, vec![0, 2]);
        assert_eq!(env.values[1], CostValue::zero());

        assert!(matches!(
            convex_envelope(&row(&[-1, -1]), &o),
            Err(Error::AllInfiniteRow(_))
        ));
    }

    #[test]
    fn collinear_points_are_not_vertices() {
        let o = OutcomeSpace::from_ints(&[0, 1, 2, 4]);
        let env = convex_envelope(&row(&[4, 3, 2, 0]), &o).unwrap();
        assert_eq!(env.hull, vec![0, 3]);
    }

    #[test]
    fn boundary_infinities_stay_infinite() {
        let o = OutcomeSpace::from_ints(&[0, 1, 2, 3]);
        let env = convex_envelope(&row(&[-1, 2, 0, -1]), &o).unwrap();
        assert_eq!(env.values[0], CostValue::Infinite);
        assert_eq!(env.values[3], CostValue::Infinite);
    }

    #[test]
    fn mixture_examples() {
        let g = gap_instance();
        let env = convex_envelope(g.costs().row(1), g.outcomes()).unwrap();
        let pair = recover_mixture(&env, g.outcomes(), &int(2)).unwrap();
        assert_eq!(pair, MixturePair { lower: 0, upper: 2, alpha: ratio(1, 2) });

        let o = OutcomeSpace::from_ints(&[0, 1, 2]);
        let c = row(&[0, 5, 2]);
        let env = convex_envelope(&c, &o).unwrap();
        assert_eq!(recover_mixture(&env, &o, &int(0)).unwrap(), MixturePair::point(0));
        let pair = recover_mixture(&env, &o, &int(1)).unwrap();
        assert_eq!(pair.alpha, ratio(1, 2));
        assert_eq!(mixture_cost(&pair, &c), CostValue::from_int(1));
        assert!(recover_mixture(&env, &o, &int(5)).is_err());
    }

    #[test]
    fn gap_optimum() {
        let g = gap_instance();
        let sol = solve_randomized(&g).unwrap();
        assert_eq!(sol.cost, CostValue::zero());
        let mech = sol.mechanism.unwrap();
        assert_eq!(mech.row(0), &[int(0), int(1), int(0)]);
        assert_eq!(mech.row(1), &[ratio(1, 2), int(0), ratio(1, 2)]);
        assert!(is_truthful(&mech, &g).is_truthful());
        assert_eq!(cost_randomized(&mech, &g), CostValue::zero());
    }

    #[test]
    fn identity_relation_is_per_type_minimum() {
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 1, 3]),
            ReportingRelation::identity(2),
            AdditiveCostMatrix::from_ints(&[&[4, 1, 6], &[2, -1, 9]]),
        )
        .unwrap();
        assert_eq!(solve_randomized(&inst).unwrap().cost, CostValue::from_int(3));
    }

    #[test]
    fn single_outcome_short_circuit() {
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[5]),
            ReportingRelation::full(2),
            AdditiveCostMatrix::from_ints(&[&[2], &[3]]),
        )
        .unwrap();
        let sol = solve_randomized(&inst).unwrap();
        assert_eq!(sol.cost, CostValue::from_int(5));
    }

    #[test]
    fn consolidation_step() {
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 1, 2]),
            ReportingRelation::identity(1),
            AdditiveCostMatrix::from_ints(&[&[0, 1, 2]]),
        )
        .unwrap();
        let mech = RandomizedMechanism::new(vec![vec![ratio(1, 2), int(0), ratio(1, 2)]]);
        let out = consolidate_two_consecutive(&mech, &inst).unwrap();
        assert_eq!(out.row(0), &[int(0), int(1), int(0)]);
        assert_eq!(cost_randomized(&out, &inst), CostValue::from_int(1));

        let fixed = RandomizedMechanism::new(vec![vec![ratio(1, 3), ratio(2, 3), int(0)]]);
        assert_eq!(consolidate_two_consecutive(&fixed, &inst).unwrap(), fixed);

        let bad = inst.with_costs(AdditiveCostMatrix::from_ints(&[&[0, 5, 2]])).unwrap();
        assert!(matches!(consolidate_two_consecutive(&mech, &bad), Err(Error::NonConvex(0))));
    }

    #[test]
    fn consolidation_mirrored_case() {
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 1, 2, 5]),
            ReportingRelation::identity(1),
            AdditiveCostMatrix::from_ints(&[&[0, 1, 3, 12]]),
        )
        .unwrap();
        let mech = RandomizedMechanism::new(vec![vec![ratio(3, 4), int(0), int(0), ratio(1, 4)]]);
        let before = crate::instance::expected_utility(&mech, inst.outcomes(), 0);
        let out = consolidate_two_consecutive(&mech, &inst).unwrap();
        assert_eq!(crate::instance::expected_utility(&out, inst.outcomes(), 0), before);
        assert!(cost_randomized(&out, &inst) <= cost_randomized(&mech, &inst));
        let (a, b) = support_bounds(out.row(0)).unwrap();
        assert!(b - a <= 1);
    }

    #[test]
    fn threshold_sweep() {
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 1]),
            ReportingRelation::identity(2),
            AdditiveCostMatrix::zeros(2, 2),
        )
        .unwrap();
        let mech = RandomizedMechanism::new(vec![
            vec![ratio(3, 5), ratio(2, 5)],
            vec![ratio(3, 10), ratio(7, 10)],
        ]);
        let out = threshold_round(&mech, &inst).unwrap();
        let weights: Vec<_> = out.iter().map(|(_, w)| w.clone()).collect();
        assert_eq!(weights, vec![ratio(2, 5), ratio(3, 10), ratio(3, 10)]);
        assert_eq!(out[0].0.assignment, vec![1, 1]);
        assert_eq!(out[1].0.assignment, vec![0, 1]);
        assert_eq!(out[2].0.assignment, vec![0, 0]);

        let flat = RandomizedMechanism::new(vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
        let out = threshold_round(&flat, &inst).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].1, int(1));
    }

    #[test]
    fn threshold_cost_identity_on_convex_instance() {
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 1, 2]),
            ReportingRelation::full(2),
            AdditiveCostMatrix::from_ints(&[&[4, 1, 0], &[0, 2, 6]]),
        )
        .unwrap();
        let mech = RandomizedMechanism::new(vec![
            vec![int(0), ratio(1, 2), ratio(1, 2)],
            vec![int(0), ratio(1, 2), ratio(1, 2)],
        ]);
        let pieces = threshold_round(&mech, &inst).unwrap();
        let total = pieces.iter().fold(CostValue::zero(), |acc, (m, w)| {
            acc + cost_deterministic(m, &inst, CostMode::Truthful).scale(w)
        });
        assert_eq!(total, cost_randomized(&mech, &inst));
        assert!(matches!(
            threshold_round(&RandomizedMechanism::new(vec![vec![ratio(1, 2), int(0), ratio(1, 2)]; 2]), &inst),
            Err(Error::NotConsecutive(0))
        ));
    }
}
