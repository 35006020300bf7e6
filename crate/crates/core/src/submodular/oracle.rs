//! Value-query cost functions over outcome vectors.

use num::Signed;

use crate::cost::{to_f64, CostValue, Rational};
use crate::error::{Error, Result};
use crate::instance::AdditiveCostMatrix;

use super::lattice::{lattice_size, point_from_index, point_index};

/// A combinatorial cost `c(O)` reachable only through value queries.
///
/// Implementations must be deterministic and safe to query from several threads.
pub trait CostOracle: Send + Sync {
    fn n(&self) -> usize;

    fn m(&self) -> usize;

    fn value(&self, point: &[usize]) -> CostValue;

    /// Largest finite value the oracle can return.
    fn bound(&self) -> f64;

    /// Float value with infinite pieces replaced by `penalty`.
    fn surrogate(&self, point: &[usize], penalty: f64) -> f64 {
        match self.value(point) {
            CostValue::Finite(v) => to_f64(&v),
            CostValue::Infinite => penalty,
        }
    }

    fn name(&self) -> &'static str;
}

fn max_finite_row_sum(costs: &AdditiveCostMatrix) -> f64 {
    costs
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .filter_map(CostValue::finite)
                .map(to_f64)
                .fold(0.0, f64::max)
        })
        .sum()
}

fn additive_surrogate(costs: &AdditiveCostMatrix, point: &[usize], penalty: f64) -> f64 {
    point
        .iter()
        .enumerate()
        .map(|(i, &j)| match costs.get(i, j) {
            CostValue::Finite(v) => to_f64(v),
            CostValue::Infinite => penalty,
        })
        .sum()
}

/// `sum_i c_i(O^i)`.
#[derive(Clone, Debug)]
pub struct AdditiveOracle {
    costs: AdditiveCostMatrix,
    m: usize,
    bound: f64,
}

impl AdditiveOracle {
    pub fn new(costs: AdditiveCostMatrix) -> Self {
        let m = costs.rows().first().map_or(0, Vec::len);
        let bound = max_finite_row_sum(&costs);
        Self { costs, m, bound }
    }

    pub fn costs(&self) -> &AdditiveCostMatrix {
        &self.costs
    }
}

impl CostOracle for AdditiveOracle {
    fn n(&self) -> usize {
        self.costs.n_rows()
    }

    fn m(&self) -> usize {
        self.m
    }

    fn value(&self, point: &[usize]) -> CostValue {
        point
            .iter()
            .enumerate()
            .map(|(i, &j)| self.costs.get(i, j))
            .sum()
    }

    fn bound(&self) -> f64 {
        self.bound
    }

    // per entry, so the surrogate stays additive
    fn surrogate(&self, point: &[usize], penalty: f64) -> f64 {
        additive_surrogate(&self.costs, point, penalty)
    }

    fn name(&self) -> &'static str {
        "additive"
    }
}

/// Additive costs plus a fixed charge `c0` whenever some type leaves the lowest outcome.
#[derive(Clone, Debug)]
pub struct OverheadOracle {
    costs: AdditiveCostMatrix,
    m: usize,
    overhead: Rational,
    bound: f64,
}

impl OverheadOracle {
    pub fn new(costs: AdditiveCostMatrix, overhead: Rational) -> Result<Self> {
        if !overhead.is_positive() {
            return Err(Error::InvalidParams(format!(
                "overhead must be positive, got {overhead}"
            )));
        }
        let m = costs.rows().first().map_or(0, Vec::len);
        let bound = max_finite_row_sum(&costs) + to_f64(&overhead);
        Ok(Self {
            costs,
            m,
            overhead,
            bound,
        })
    }

    pub fn overhead(&self) -> &Rational {
        &self.overhead
    }

    pub fn costs(&self) -> &AdditiveCostMatrix {
        &self.costs
    }

    fn charged(point: &[usize]) -> bool {
        point.iter().any(|&j| j != 0)
    }
}

impl CostOracle for OverheadOracle {
    fn n(&self) -> usize {
        self.costs.n_rows()
    }

    fn m(&self) -> usize {
        self.m
    }

    fn value(&self, point: &[usize]) -> CostValue {
        let base: CostValue = point
            .iter()
            .enumerate()
            .map(|(i, &j)| self.costs.get(i, j))
            .sum();
        if Self::charged(point) {
            base + CostValue::Finite(self.overhead.clone())
        } else {
            base
        }
    }

    fn bound(&self) -> f64 {
        self.bound
    }

    fn surrogate(&self, point: &[usize], penalty: f64) -> f64 {
        let base = additive_surrogate(&self.costs, point, penalty);
        if Self::charged(point) {
            base + to_f64(&self.overhead)
        } else {
            base
        }
    }

    fn name(&self) -> &'static str {
        "additive_plus_overhead"
    }
}

/// Explicit table of all `m^n` values, indexed by [`point_index`].
#[derive(Clone, Debug, PartialEq)]
pub struct TableOracle {
    n: usize,
    m: usize,
    values: Vec<CostValue>,
    bound: f64,
}

impl TableOracle {
    pub fn new(n: usize, m: usize, values: Vec<CostValue>) -> Result<Self> {
        let size = lattice_size(n, m)
            .filter(|&s| s <= usize::MAX as u128)
            .ok_or_else(|| Error::InvalidParams(format!("table for n={n}, m={m} is too large")))?;
        if values.len() as u128 != size {
            return Err(Error::Dimension(format!(
                "table has {} values, expected {m}^{n} = {size}",
                values.len()
            )));
        }
        if values
            .iter()
            .any(|v| v.finite().is_some_and(|x| x.is_negative()))
        {
            return Err(Error::OutOfRange("table contains a negative value".into()));
        }
        let bound = values
            .iter()
            .filter_map(CostValue::finite)
            .map(to_f64)
            .fold(0.0, f64::max);
        Ok(Self {
            n,
            m,
            values,
            bound,
        })
    }

    /// Tabulates another oracle.
    pub fn from_oracle(oracle: &dyn CostOracle) -> Result<Self> {
        let (n, m) = (oracle.n(), oracle.m());
        let size = lattice_size(n, m)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| Error::InvalidParams(format!("table for n={n}, m={m} is too large")))?;
        let values = (0..size as usize)
            .map(|idx| oracle.value(&point_from_index(idx, n, m)))
            .collect();
        Self::new(n, m, values)
    }

    pub fn values(&self) -> &[CostValue] {
        &self.values
    }
}

impl CostOracle for TableOracle {
    fn n(&self) -> usize {
        self.n
    }

    fn m(&self) -> usize {
        self.m
    }

    fn value(&self, point: &[usize]) -> CostValue {
        self.values[point_index(point, self.m)].clone()
    }

    fn bound(&self) -> f64 {
        self.bound
    }

    fn name(&self) -> &'static str {
        "table"
    }
}

/// Wraps a closure; handy for tests and ad-hoc cost functions.
pub struct FnOracle<F> {
    n: usize,
    m: usize,
    bound: f64,
    f: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&[usize]) -> CostValue + Send + Sync,
{
    pub fn new(n: usize, m: usize, bound: f64, f: F) -> Self {
        Self { n, m, bound, f }
    }
}

impl<F> CostOracle for FnOracle<F>
where
    F: Fn(&[usize]) -> CostValue + Send + Sync,
{
    fn n(&self) -> usize {
        self.n
    }

    fn m(&self) -> usize {
        self.m
    }

    fn value(&self, point: &[usize]) -> CostValue {
        (self.f)(point)
    }

    fn bound(&self) -> f64 {
        self.bound
    }

    fn name(&self) -> &'static str {
        "custom"
    }
}

/// The same value at every point.
pub fn constant_oracle(n: usize, m: usize, value: Rational) -> impl CostOracle {
    let bound = to_f64(&value);
    let value = CostValue::Finite(value);
    FnOracle::new(n, m, bound, move |_| value.clone())
}

/// A penalty that dominates every finite value the oracle can produce.
pub fn default_penalty(oracle: &dyn CostOracle) -> f64 {
    let scale = oracle.bound().max(1.0);
    scale * 1e3 * (oracle.n().max(1) as f64)
}
