//! Marginal profiles, their non-crossing interpretation, and uncrossing.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::lattice::{crosses, height, join, leq, meet, LatticePoint};
use super::oracle::{default_penalty, CostOracle};

/// Entries at or below this are treated as zero.
pub const POSITIVE: f64 = 1e-12;

/// Row sums must be within this of 1.
pub const ROW_TOLERANCE: f64 = 1e-12;

/// `rows[i][j]` is the probability that type `i` receives outcome `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalProfile {
    rows: Vec<Vec<f64>>,
}

impl MarginalProfile {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m || m == 0 {
                return Err(Error::Dimension(format!("row {i} has {} entries", row.len())));
            }
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::OutOfRange(format!("row {i} has a negative or non-finite entry")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_TOLERANCE {
                return Err(Error::OutOfRange(format!("row {i} sums to {sum}")));
            }
        }
        Ok(Self { rows })
    }

    /// Clips negatives and rescales each row to sum to 1.
    pub fn normalized(mut rows: Vec<Vec<f64>>) -> Result<Self> {
        for row in &mut rows {
            for p in row.iter_mut() {
                if *p < 0.0 {
                    *p = 0.0;
                }
            }
            let sum: f64 = row.iter().sum();
            if sum > 0.0 {
                row.iter_mut().for_each(|p| *p /= sum);
            }
        }
        Self::new(rows)
    }

    pub fn point_mass(point: &[usize], m: usize) -> Self {
        let rows = point
            .iter()
            .map(|&j| {
                let mut row = vec![0.0; m];
                row[j] = 1.0;
                row
            })
            .collect();
        Self { rows }
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn expected_utility(&self, i: usize, utilities: &[f64]) -> f64 {
        self.rows[i].iter().zip(utilities).map(|(p, u)| p * u).sum()
    }

    pub fn into_rows(self) -> Vec<Vec<f64>> {
        self.rows
    }
}

/// A distribution over outcome vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainDistribution {
    /// `(point, probability)`, listed from the top of the chain down.
    pub support: Vec<(LatticePoint, f64)>,
}

impl ChainDistribution {
    pub fn point(point: LatticePoint) -> Self {
        Self {
            support: vec![(point, 1.0)],
        }
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.support.iter().map(|(_, p)| p).sum()
    }

    /// Per-type outcome probabilities.
    pub fn marginals(&self, m: usize) -> Vec<Vec<f64>> {
        let n = self.support.first().map_or(0, |(p, _)| p.len());
        let mut rows = vec![vec![0.0; m]; n];
        for (point, prob) in &self.support {
            for (i, &j) in point.iter().enumerate() {
                rows[i][j] += prob;
            }
        }
        rows
    }

    /// No two support points cross.
    pub fn is_chain(&self) -> bool {
        self.support
            .iter()
            .enumerate()
            .all(|(k, (a, _))| self.support[k + 1..].iter().all(|(b, _)| !crosses(a, b)))
    }

    /// `sum p * (sum_i O^i)^2`; uncrossing strictly increases it.
    pub fn potential(&self) -> f64 {
        self.support
            .iter()
            .map(|(point, p)| p * (height(point) as f64).powi(2))
            .sum()
    }
}

struct Trace {
    steps: Vec<(LatticePoint, f64)>,
    /// Type whose entry was exhausted at each step.
    argmin: Vec<usize>,
}

fn trace(rows: &[Vec<f64>]) -> Trace {
    let mut p: Vec<Vec<f64>> = rows.to_vec();
    let n = p.len();
    let mut steps = Vec::new();
    let mut argmin = Vec::new();
    loop {
        let mut top = Vec::with_capacity(n);
        for row in &p {
            match row.iter().rposition(|&x| x > POSITIVE) {
                Some(j) => top.push(j),
                None => break,
            }
        }
        if top.len() < n || n == 0 {
            break;
        }
        let mut arg = 0;
        for i in 1..n {
            if p[i][top[i]] < p[arg][top[arg]] {
                arg = i;
            }
        }
        let delta = p[arg][top[arg]];
        for i in 0..n {
            p[i][top[i]] -= delta;
        }
        p[arg][top[arg]] = 0.0;
        steps.push((top, delta));
        argmin.push(arg);
    }
    Trace { steps, argmin }
}

/// The unique non-crossing distribution with the given marginals: repeatedly take
/// every type's highest remaining outcome, with the smallest remaining mass among them.
pub fn interpret_marginals(profile: &MarginalProfile) -> ChainDistribution {
    let Trace { mut steps, .. } = trace(profile.rows());
    let total: f64 = steps.iter().map(|(_, p)| p).sum();
    if total > 0.0 {
        for (_, p) in &mut steps {
            *p /= total;
        }
    }
    ChainDistribution { support: steps }
}

/// Expected cost; infinite when a point with infinite cost has positive probability.
pub fn chain_cost(dist: &ChainDistribution, oracle: &dyn CostOracle) -> f64 {
    dist.support
        .iter()
        .map(|(point, p)| {
            let v = oracle.value(point).to_f64();
            if *p == 0.0 {
                0.0
            } else {
                p * v
            }
        })
        .sum()
}

/// Expected cost with infinite values replaced by `penalty`.
pub fn chain_surrogate_cost(dist: &ChainDistribution, oracle: &dyn CostOracle, penalty: f64) -> f64 {
    dist.support
        .iter()
        .map(|(point, p)| p * oracle.surrogate(point, penalty))
        .sum()
}

/// Remaining mass as `value + t * slope` for an infinitesimal `t > 0`.
#[derive(Clone, Copy, Debug)]
struct Perturbed {
    value: f64,
    slope: f64,
}

const TIE: f64 = 1e-14;

fn smaller(a: Perturbed, b: Perturbed) -> bool {
    if (a.value - b.value).abs() > TIE {
        a.value < b.value
    } else {
        a.slope < b.slope
    }
}

/// A fixed generic direction that keeps rows summing to 1 and makes every
/// zero entry slightly positive.
fn direction(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    let m = rows.first().map_or(0, Vec::len);
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let raw: Vec<f64> = (0..m)
                .map(|j| 0.5 + ((i * m + j + 1) as f64 * GOLDEN).fract())
                .collect();
            let total: f64 = raw.iter().sum();
            let positive = row.iter().filter(|&&p| p > POSITIVE).count().max(1);
            row.iter()
                .zip(&raw)
                .map(|(&p, &r)| if p > POSITIVE { r - total / positive as f64 } else { r })
                .collect()
        })
        .collect()
}

/// Algorithm trace at `profile + t * direction`: every entry stays in play until
/// it is the one exhausted, so the sequence matches a full-dimensional region
/// touching `profile`, and its linear piece gives a valid subgradient.
fn perturbed_trace(rows: &[Vec<f64>]) -> Trace {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    let dir = direction(rows);
    let mut rest: Vec<Vec<Perturbed>> = rows
        .iter()
        .zip(&dir)
        .map(|(row, d)| {
            row.iter()
                .zip(d)
                .map(|(&p, &slope)| Perturbed {
                    value: if p > POSITIVE { p } else { 0.0 },
                    slope,
                })
                .collect()
        })
        .collect();
    let mut alive = vec![m; n];
    let mut steps = Vec::new();
    let mut argmin = Vec::new();
    while n > 0 && alive.iter().all(|&a| a > 0) {
        let top: Vec<usize> = alive.iter().map(|&a| a - 1).collect();
        let mut arg = 0;
        for i in 1..n {
            if smaller(rest[i][top[i]], rest[arg][top[arg]]) {
                arg = i;
            }
        }
        let delta = rest[arg][top[arg]];
        for i in 0..n {
            let r = &mut rest[i][top[i]];
            r.value -= delta.value;
            r.slope -= delta.slope;
        }
        alive[arg] -= 1;
        steps.push((top, delta.value.max(0.0)));
        argmin.push(arg);
    }
    Trace { steps, argmin }
}

/// Value and a subgradient of `profile -> expected cost of its interpretation`.
///
/// Along a fixed sequence of exhausted entries every step mass is a linear
/// function of the profile, so the gradient is accumulated in reverse over that
/// sequence. It is defined up to adding a constant to each row.
pub fn value_and_subgradient(profile: &[Vec<f64>], oracle: &dyn CostOracle, penalty: f64) -> (f64, Vec<Vec<f64>>) {
    let n = profile.len();
    let m = profile.first().map_or(0, Vec::len);
    let Trace { steps, argmin } = perturbed_trace(profile);
    let values: Vec<f64> = steps.iter().map(|(pt, _)| oracle.surrogate(pt, penalty)).collect();
    let value = steps.iter().zip(&values).map(|((_, p), v)| p * v).sum();
    let mut acc = vec![vec![0.0; m]; n];
    for k in (0..steps.len()).rev() {
        let point = &steps[k].0;
        let later: f64 = point.iter().enumerate().map(|(i, &j)| acc[i][j]).sum();
        let adjoint = values[k] - later;
        let i = argmin[k];
        acc[i][point[i]] += adjoint;
    }
    (value, acc)
}

/// Subgradient with the oracle's default penalty for infinite values.
pub fn objective_subgradient(profile: &MarginalProfile, oracle: &dyn CostOracle) -> Vec<Vec<f64>> {
    value_and_subgradient(profile.rows(), oracle, default_penalty(oracle)).1
}

/// Summary of an uncrossing run.
#[derive(Clone, Debug)]
pub struct Uncrossed {
    pub chain: ChainDistribution,
    pub steps: usize,
    /// Potential after each step, starting with the input's.
    pub potentials: Vec<f64>,
}

/// Upper bound on uncrossing steps before giving up.
pub const MAX_UNCROSS_STEPS: usize = 1_000_000;

/// Repeatedly moves the smaller mass of a crossing pair onto its meet and join.
pub fn uncross(dist: &ChainDistribution) -> Result<Uncrossed> {
    let mut mass: BTreeMap<LatticePoint, f64> = BTreeMap::new();
    for (point, p) in &dist.support {
        if *p < 0.0 {
            return Err(Error::OutOfRange("negative probability".into()));
        }
        if *p > 0.0 {
            *mass.entry(point.clone()).or_insert(0.0) += p;
        }
    }
    let potential = |mass: &BTreeMap<LatticePoint, f64>| {
        mass.iter()
            .map(|(pt, p)| p * (height(pt) as f64).powi(2))
            .sum::<f64>()
    };
    let mut potentials = vec![potential(&mass)];
    let mut steps = 0;
    loop {
        let keys: Vec<&LatticePoint> = mass.keys().collect();
        let mut pair = None;
        'search: for (k, a) in keys.iter().enumerate() {
            for b in &keys[k + 1..] {
                if crosses(a, b) {
                    pair = Some(((*a).clone(), (*b).clone()));
                    break 'search;
                }
            }
        }
        let Some((a, b)) = pair else { break };
        if steps == MAX_UNCROSS_STEPS {
            return Err(Error::NonConvergence {
                iterations: steps,
                best: potentials.last().copied().unwrap_or(0.0),
                gap: None,
            });
        }
        let (pa, pb) = (mass[&a], mass[&b]);
        let q = pa.min(pb);
        for (point, p) in [(&a, pa), (&b, pb)] {
            if p - q <= 0.0 {
                mass.remove(point);
            } else {
                mass.insert(point.clone(), p - q);
            }
        }
        *mass.entry(meet(&a, &b)?).or_insert(0.0) += q;
        *mass.entry(join(&a, &b)?).or_insert(0.0) += q;
        steps += 1;
        potentials.push(potential(&mass));
    }
    let mut support: Vec<(LatticePoint, f64)> = mass.into_iter().collect();
    support.sort_by(|(a, _), (b, _)| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if leq(a, b) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Less
        }
    });
    Ok(Uncrossed {
        chain: ChainDistribution { support },
        steps,
        potentials,
    })
}

/// Same points and probabilities within `tol`, in the same order.
pub fn same_chain(a: &ChainDistribution, b: &ChainDistribution, tol: f64) -> bool {
    let strip = |d: &ChainDistribution| -> Vec<(LatticePoint, f64)> {
        d.support.iter().filter(|(_, p)| *p > tol).cloned().collect()
    };
    let (a, b) = (strip(a), strip(b));
    a.len() == b.len()
        && a.iter()
            .zip(&b)
            .all(|((pa, qa), (pb, qb))| pa == pb && (qa - qb).abs() <= tol)
}
