//! Optimal deterministic truthful mechanisms via an s-t min-cut.
//!
//! Each type gets a vertical chain `s -> (i,0) -> ... -> (i,m-1) -> t` whose
//! arc leaving `(i,j)` costs `c_i(o_j)`. Cutting that arc means "type `i` gets
//! outcome `j`". Infinite horizontal arcs `(i2,j) -> (i1,j)` for every pair
//! `(i1,i2)` of the closed reporting relation forbid cuts in which `i2` ends
//! above `i1`.

pub mod flow;

use std::fmt::Write as _;

use num::bigint::BigInt;
use num::{Integer, One, ToPrimitive, Zero};

use crate::cost::{CostValue, Rational};
use crate::error::{Error, Result};
use crate::instance::{
    self, transitive_closure, validate, DeterministicMechanism, Instance, ReportingRelation,
};

use self::flow::FlowGraph;

pub const SOURCE: usize = 0;
pub const SINK: usize = 1;

/// Node id of `(type, outcome)`.
pub fn grid_node(m: usize, i: usize, j: usize) -> usize {
    2 + i * m + j
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcKind {
    /// `s -> (i, 0)`, structural
    Source { type_index: usize },
    /// `(i, j) -> (i, j+1)`, or `(i, m-1) -> t` when `level == m-1`
    Vertical { type_index: usize, level: usize },
    /// `(i2, j) -> (i1, j)`, structural
    Horizontal { from_type: usize, to_type: usize, level: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub kind: ArcKind,
    /// Structural arcs are `Infinite`; vertical arcs carry the cost entry.
    pub capacity: CostValue,
}

impl Arc {
    pub fn is_structural(&self) -> bool {
        !matches!(self.kind, ArcKind::Vertical { .. })
    }
}

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    pub n: usize,
    pub m: usize,
    pub arcs: Vec<Arc>,
    /// The relation the horizontal arcs were built from.
    pub relation: ReportingRelation,
}

impl FlowNetwork {
    pub fn node_count(&self) -> usize {
        self.n * self.m + 2
    }

    pub fn horizontal_count(&self) -> usize {
        self.arcs
            .iter()
            .filter(|a| matches!(a.kind, ArcKind::Horizontal { .. }))
            .count()
    }
}

/// The graph on the transitive closure of the instance's relation.
pub fn build_network(instance: &Instance) -> FlowNetwork {
    build_network_on(instance, transitive_closure(instance.relation()))
}

/// Same graph, but on the relation exactly as given.
pub fn build_network_unclosed(instance: &Instance) -> FlowNetwork {
    build_network_on(instance, instance.relation().clone())
}

fn build_network_on(instance: &Instance, relation: ReportingRelation) -> FlowNetwork {
    let (n, m) = (instance.n(), instance.m());
    let mut arcs = Vec::with_capacity(n * (m + 1) + relation.len() * m);
    for i in 0..n {
        arcs.push(Arc {
            from: SOURCE,
            to: grid_node(m, i, 0),
            kind: ArcKind::Source { type_index: i },
            capacity: CostValue::Infinite,
        });
        for j in 0..m {
            let to = if j + 1 < m { grid_node(m, i, j + 1) } else { SINK };
            arcs.push(Arc {
                from: grid_node(m, i, j),
                to,
                kind: ArcKind::Vertical {
                    type_index: i,
                    level: j,
                },
                capacity: instance.cost(i, j).clone(),
            });
        }
    }
    for (i1, i2) in relation.off_diagonal() {
        for j in 0..m {
            arcs.push(Arc {
                from: grid_node(m, i2, j),
                to: grid_node(m, i1, j),
                kind: ArcKind::Horizontal {
                    from_type: i2,
                    to_type: i1,
                    level: j,
                },
                capacity: CostValue::Infinite,
            });
        }
    }
    FlowNetwork {
        n,
        m,
        arcs,
        relation,
    }
}

#[derive(Clone, Debug)]
pub struct ClampedNetwork {
    pub network: FlowNetwork,
    pub capacities: Vec<Rational>,
    /// Indices of arcs whose capacity was infinite (structural or cost entry).
    pub clamped: Vec<usize>,
    /// Finite budget: every finite-cost mechanism costs at most this.
    pub bound: Rational,
}

impl ClampedNetwork {
    pub fn clamp_value(&self) -> Rational {
        &self.bound + Rational::one()
    }
}

/// Replaces every infinite capacity by `B + 1`, where `B` is the sum of the finite
/// cost entries plus `n` times the largest one.
pub fn clamp_capacities(network: FlowNetwork) -> ClampedNetwork {
    let finite: Vec<&Rational> = network
        .arcs
        .iter()
        .filter(|a| !a.is_structural())
        .filter_map(|a| a.capacity.finite())
        .collect();
    let sum: Rational = finite.iter().copied().sum();
    let max = finite.iter().copied().max().cloned().unwrap_or_else(Rational::zero);
    let bound = sum + max * Rational::from_integer(BigInt::from(network.n));
    let clamp = &bound + Rational::one();
    let mut clamped = Vec::new();
    let capacities = network
        .arcs
        .iter()
        .enumerate()
        .map(|(k, a)| match &a.capacity {
            CostValue::Finite(v) => v.clone(),
            CostValue::Infinite => {
                clamped.push(k);
                clamp.clone()
            }
        })
        .collect();
    ClampedNetwork {
        network,
        capacities,
        clamped,
        bound,
    }
}

#[derive(Clone, Debug)]
pub struct CutResult {
    pub n: usize,
    pub m: usize,
    /// Indexed by node id.
    pub source_side: Vec<bool>,
    /// Cut capacity in clamped units.
    pub raw_value: Rational,
    /// `Infinite` when the raw value exceeds the finite budget.
    pub value: CostValue,
    pub bound: Rational,
    /// Capacities were multiplied by this to make them integral.
    pub scale: BigInt,
}

impl CutResult {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.source_side[grid_node(self.m, i, j)]
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

/// Exact min cut; the source side is everything reachable from `s` in the final residual graph.
pub fn min_cut(network: &ClampedNetwork) -> CutResult {
    let scale = network
        .capacities
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<BigInt> = network
        .capacities
        .iter()
        .map(|c| (c * Rational::from_integer(scale.clone())).to_integer())
        .collect();
    let total: BigInt = scaled.iter().sum();
    let nodes = network.network.node_count();
    let arcs = &network.network.arcs;

    let (flow, source_side) = if total.to_i128().is_some() {
        let mut g = FlowGraph::<i128>::new(nodes);
        for (a, c) in arcs.iter().zip(&scaled) {
            g.add_arc(a.from, a.to, c.to_i128().unwrap_or(i128::MAX));
        }
        let f = g.max_flow(SOURCE, SINK);
        (BigInt::from(f), g.reachable(SOURCE))
    } else {
        let mut g = FlowGraph::<BigInt>::new(nodes);
        for (a, c) in arcs.iter().zip(&scaled) {
            g.add_arc(a.from, a.to, c.clone());
        }
        let f = g.max_flow(SOURCE, SINK);
        (f, g.reachable(SOURCE))
    };
    let raw_value = Rational::new(flow, scale.clone());
    let value = if raw_value > network.bound {
        CostValue::Infinite
    } else {
        CostValue::Finite(raw_value.clone())
    };
    CutResult {
        n: network.network.n,
        m: network.network.m,
        source_side,
        raw_value,
        value,
        bound: network.bound.clone(),
        scale,
    }
}

/// Gives each type the topmost outcome whose grid node lies on the source side.
pub fn extract_mechanism(cut: &CutResult) -> Result<DeterministicMechanism> {
    if !cut.is_finite() {
        return Err(Error::InfiniteOptimum);
    }
    let assignment = (0..cut.n)
        .map(|i| (0..cut.m).rev().find(|&j| cut.contains(i, j)).unwrap_or(0))
        .collect();
    Ok(DeterministicMechanism::new(assignment))
}

/// True when the source side never holds `(i, j)` without `(i, j-1)`.
pub fn is_downward_closed(cut: &CutResult) -> bool {
    (0..cut.n).all(|i| (1..cut.m).all(|j| !cut.contains(i, j) || cut.contains(i, j - 1)))
}

/// Arcs leaving the source side.
pub fn crossing_arcs<'a>(network: &'a FlowNetwork, cut: &'a CutResult) -> impl Iterator<Item = &'a Arc> {
    network
        .arcs
        .iter()
        .filter(|a| cut.source_side[a.from] && !cut.source_side[a.to])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicSolution {
    /// `None` when no finite-cost truthful mechanism exists.
    pub mechanism: Option<DeterministicMechanism>,
    pub cost: CostValue,
}

/// Cheapest truthful deterministic mechanism; among ties, every type gets its lowest optimal outcome.
pub fn solve_deterministic(instance: &Instance) -> Result<DeterministicSolution> {
    validate(instance).into_result()?;
    Ok(solve_network(instance, build_network(instance)))
}

/// Like [`solve_deterministic`] but skips the transitive closure.
pub fn solve_deterministic_unclosed(instance: &Instance) -> Result<DeterministicSolution> {
    validate(instance).into_result()?;
    Ok(solve_network(instance, build_network_unclosed(instance)))
}

fn solve_network(instance: &Instance, network: FlowNetwork) -> DeterministicSolution {
    let cut = min_cut(&clamp_capacities(network));
    match extract_mechanism(&cut) {
        Ok(mech) => {
            debug_assert_eq!(
                instance::cost_deterministic(&mech, instance, instance::CostMode::Truthful),
                cut.value
            );
            DeterministicSolution {
                mechanism: Some(mech),
                cost: cut.value,
            }
        }
        Err(_) => DeterministicSolution {
            mechanism: None,
            cost: CostValue::Infinite,
        },
    }
}

/// Graphviz rendering; cut arcs are drawn red when a cut is given.
pub fn to_dot(network: &FlowNetwork, cut: Option<&CutResult>) -> String {
    let mut out = String::from("digraph mincut {\n  rankdir=BT;\n  s; t;\n");
    for i in 0..network.n {
        for j in 0..network.m {
            let node = grid_node(network.m, i, j);
            let fill = match cut {
                Some(c) if c.source_side[node] => ", style=filled, fillcolor=lightblue",
                _ => "",
            };
            let _ = writeln!(out, "  n{node} [label=\"({i},{j})\"{fill}];");
        }
    }
    let name = |v: usize| match v {
        SOURCE => "s".to_string(),
        SINK => "t".to_string(),
        _ => format!("n{v}"),
    };
    for arc in &network.arcs {
        let crossing = cut.is_some_and(|c| c.source_side[arc.from] && !c.source_side[arc.to]);
        let color = if crossing { ", color=red" } else { "" };
        let style = if arc.is_structural() { ", style=dashed" } else { "" };
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}\"{style}{color}];",
            name(arc.from),
            name(arc.to),
            arc.capacity
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{small_cut_instance, gap_instance};
    use crate::instance::{AdditiveCostMatrix, OutcomeSpace};

    fn instance(outcomes: &[i64], relation: ReportingRelation, costs: &[&[i64]]) -> Instance {
        Instance::new(
            OutcomeSpace::from_ints(outcomes),
            relation,
            AdditiveCostMatrix::from_ints(costs),
        )
        .unwrap()
    }

    #[test]
    fn small_cut_shape() {
        let net = build_network(&small_cut_instance());
        assert_eq!(net.node_count(), 11);
        let horizontal: Vec<_> = net
            .arcs
            .iter()
            .filter_map(|a| match a.kind {
                ArcKind::Horizontal { from_type, to_type, level } => Some((from_type, to_type, level)),
                _ => None,
            })
            .collect();
        // type 1 may report type 0, so type 0 at level j forces type 1 to at least j
        assert_eq!(horizontal, vec![(0, 1, 0), (0, 1, 1), (0, 1, 2)]);
    }

    #[test]
    fn single_node_chain() {
        let inst = instance(&[0], ReportingRelation::identity(1), &[&[4]]);
        let net = build_network(&inst);
        assert_eq!(net.node_count(), 3);
        assert_eq!(net.arcs.len(), 2);
        assert_eq!(net.arcs[1].capacity, CostValue::from_int(4));
        assert_eq!(net.arcs[1].to, SINK);
    }

    #[test]
    fn full_relation_horizontal_count() {
        let inst = instance(&[0, 1], ReportingRelation::full(2), &[&[0, 0], &[0, 0]]);
        assert_eq!(build_network(&inst).horizontal_count(), 4);
    }

    #[test]
    fn arc_count_bound() {
        let inst = instance(&[0, 1, 2], ReportingRelation::full(3), &[&[0; 3], &[0; 3], &[0; 3]]);
        let (n, m) = (3, 3);
        assert!(build_network(&inst).arcs.len() <= m * n * n + (m + 1) * n);
    }

    #[test]
    fn clamp_bound_values() {
        let zero = instance(&[0, 1], ReportingRelation::full(2), &[&[0, 0], &[0, 0]]);
        let clamped = clamp_capacities(build_network(&zero));
        assert_eq!(clamped.bound, Rational::zero());
        assert_eq!(clamped.clamp_value(), Rational::one());

        let inst = instance(&[0, 1], ReportingRelation::identity(2), &[&[3, 1], &[2, -1]]);
        let clamped = clamp_capacities(build_network(&inst));
        // 6 + 2 * 3
        assert_eq!(clamped.bound, crate::cost::int(12));
        // two source arcs and one infinite cost entry
        assert_eq!(clamped.clamped.len(), 3);
    }

    #[test]
    fn single_type_cut() {
        let inst = instance(&[0, 1], ReportingRelation::identity(1), &[&[3, 1]]);
        let cut = min_cut(&clamp_capacities(build_network(&inst)));
        assert_eq!(cut.value, CostValue::from_int(1));
        assert_eq!(extract_mechanism(&cut).unwrap().assignment, vec![1]);
    }

    #[test]
    fn zero_network() {
        let inst = instance(&[0, 1], ReportingRelation::full(2), &[&[0, 0], &[0, 0]]);
        let cut = min_cut(&clamp_capacities(build_network(&inst)));
        assert_eq!(cut.value, CostValue::zero());
        // lowest optimal outcome
        assert_eq!(extract_mechanism(&cut).unwrap().assignment, vec![0, 0]);
    }

    #[test]
    fn small_cut_extraction() {
        let inst = small_cut_instance();
        let cut = min_cut(&clamp_capacities(build_network(&inst)));
        let expected = [(0, 1), (1, 2), (2, 2)]
            .iter()
            .map(|&(i, j)| inst.cost(i, j).clone())
            .sum::<CostValue>();
        assert_eq!(cut.value, expected);
        assert_eq!(extract_mechanism(&cut).unwrap().assignment, vec![1, 2, 2]);
        assert!(is_downward_closed(&cut));
    }

    #[test]
    fn everything_on_source_side() {
        let cut = CutResult {
            n: 2,
            m: 2,
            source_side: vec![true, false, true, true, true, true],
            raw_value: Rational::zero(),
            value: CostValue::zero(),
            bound: Rational::zero(),
            scale: BigInt::one(),
        };
        assert_eq!(extract_mechanism(&cut).unwrap().assignment, vec![1, 1]);
    }

    #[test]
    fn gap_instance_is_infinite() {
        let inst = gap_instance();
        let cut = min_cut(&clamp_capacities(build_network(&inst)));
        assert!(cut.raw_value > cut.bound);
        assert!(matches!(extract_mechanism(&cut), Err(Error::InfiniteOptimum)));
        let sol = solve_deterministic(&inst).unwrap();
        assert_eq!(sol.cost, CostValue::Infinite);
        assert!(sol.mechanism.is_none());
    }

    #[test]
    fn two_type_example() {
        // type 1 may report type 0
        let inst = instance(
            &[0, 1],
            ReportingRelation::reflexive_with(2, [(1, 0)]),
            &[&[0, 5], &[4, 0]],
        );
        let sol = solve_deterministic(&inst).unwrap();
        assert_eq!(sol.cost, CostValue::zero());
        assert_eq!(sol.mechanism.unwrap().assignment, vec![0, 1]);
    }

    #[test]
    fn identity_relation_is_per_type_minimum() {
        let inst = instance(
            &[0, 2, 3],
            ReportingRelation::identity(3),
            &[&[5, 2, 9], &[1, -1, 0], &[7, 7, 7]],
        );
        let sol = solve_deterministic(&inst).unwrap();
        // 2 + 0 + 7
        assert_eq!(sol.cost, CostValue::from_int(9));
    }

    #[test]
    fn rational_capacities_scale() {
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 1]),
            ReportingRelation::full(2),
            AdditiveCostMatrix::new(vec![
                vec![crate::cost::ratio(1, 3).into(), crate::cost::ratio(1, 7).into()],
                vec![crate::cost::ratio(1, 2).into(), crate::cost::ratio(5, 7).into()],
            ]),
        )
        .unwrap();
        let sol = solve_deterministic(&inst).unwrap();
        // (0,0) costs 5/6, (1,1) costs 6/7
        assert_eq!(sol.cost, CostValue::Finite(crate::cost::ratio(5, 6)));
    }

    #[test]
    fn huge_capacities_use_big_integers() {
        let big: CostValue = "1e40".parse().unwrap();
        let zero = CostValue::zero();
        let inst = Instance::new(
            OutcomeSpace::from_ints(&[0, 1]),
            ReportingRelation::full(3),
            AdditiveCostMatrix::new(vec![
                vec![big.clone(), zero.clone()],
                vec![big.clone(), big.clone()],
                vec![zero, big.clone()],
            ]),
        )
        .unwrap();
        let sol = solve_deterministic(&inst).unwrap();
        assert_eq!(sol.cost, big.clone() + big);
    }

    #[test]
    fn invalid_instance_is_rejected() {
        let inst = instance(&[1, 0], ReportingRelation::identity(1), &[&[0, 0]]);
        assert!(matches!(solve_deterministic(&inst), Err(Error::Invalid(_))));
    }

    #[test]
    fn dot_output_mentions_cut() {
        let inst = small_cut_instance();
        let net = build_network(&inst);
        let cut = min_cut(&clamp_capacities(net.clone()));
        let dot = to_dot(&net, Some(&cut));
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("color=red"));
    }
}
