//! Outcome vectors under the coordinatewise order.

use crate::error::{Error, Result};
use crate::instance::ReportingRelation;

/// Outcome index per type.
pub type LatticePoint = Vec<usize>;

fn same_len(a: &[usize], b: &[usize]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "lattice points of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Coordinatewise minimum.
pub fn meet(a: &[usize], b: &[usize]) -> Result<LatticePoint> {
    same_len(a, b)?;
    Ok(a.iter().zip(b).map(|(x, y)| *x.min(y)).collect())
}

/// Coordinatewise maximum.
pub fn join(a: &[usize], b: &[usize]) -> Result<LatticePoint> {
    same_len(a, b)?;
    Ok(a.iter().zip(b).map(|(x, y)| *x.max(y)).collect())
}

pub fn leq(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Neither point dominates the other.
pub fn crosses(a: &[usize], b: &[usize]) -> bool {
    !leq(a, b) && !leq(b, a)
}

/// `O^{i1} >= O^{i2}` for every `(i1, i2)` in the relation.
pub fn in_truthful_lattice(point: &[usize], relation: &ReportingRelation) -> bool {
    relation.pairs().iter().all(|&(a, b)| point[a] >= point[b])
}

/// Sum of coordinates; the rank of the point in the product of chains.
pub fn height(point: &[usize]) -> usize {
    point.iter().sum()
}

/// Row-major index `sum_i O^i * m^i` (type 0 is the least significant digit).
pub fn point_index(point: &[usize], m: usize) -> usize {
    point.iter().rev().fold(0, |acc, &j| acc * m + j)
}

pub fn point_from_index(mut index: usize, n: usize, m: usize) -> LatticePoint {
    (0..n)
        .map(|_| {
            let j = index % m;
            index /= m;
            j
        })
        .collect()
}

/// `m^n`, or `None` on overflow.
pub fn lattice_size(n: usize, m: usize) -> Option<u128> {
    (m as u128).checked_pow(u32::try_from(n).ok()?)
}
