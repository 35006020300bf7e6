//! Minimizing the chain-greedy extension of a cost oracle over a polytope of
//! marginal profiles.
//!
//! Iterates come from projected subgradient steps (or an ellipsoid method).
//! Every evaluated point also yields a global affine minorant of the objective,
//! and a small LP over those minorants gives both a certified lower bound and
//! the next point to visit. The objective is piecewise linear with finitely
//! many pieces, so the bound closes in finitely many rounds.

use minilp::{ComparisonOp, OptimizationDirection, Problem, Solution, Variable};

use crate::error::{Error, Result};
use crate::instance::{validate_skeleton, Skeleton};

use super::chain::{chain_cost, interpret_marginals, value_and_subgradient, ChainDistribution, MarginalProfile};
use super::oracle::{default_penalty, CostOracle};

/// Largest violation of any halfspace tolerated after projecting.
pub const PROJECTION_TOLERANCE: f64 = 1e-11;

const MAX_PROJECTION_SWEEPS: usize = 200_000;

/// `sum a_k p_k >= 0` over flattened profile entries `p[i * m + j]`.
#[derive(Clone, Debug)]
struct Halfspace {
    terms: Vec<(usize, f64)>,
    norm_sq: f64,
}

impl Halfspace {
    fn new(terms: Vec<(usize, f64)>) -> Option<Self> {
        let terms: Vec<_> = terms.into_iter().filter(|(_, a)| *a != 0.0).collect();
        let norm_sq: f64 = terms.iter().map(|(_, a)| a * a).sum();
        (norm_sq > 0.0).then_some(Self { terms, norm_sq })
    }

    fn eval(&self, p: &[f64]) -> f64 {
        self.terms.iter().map(|&(k, a)| a * p[k]).sum()
    }
}

/// Profiles whose rows are distributions and which satisfy a list of
/// homogeneous linear inequalities.
#[derive(Clone, Debug)]
pub struct FeasibleSet {
    n: usize,
    m: usize,
    halfspaces: Vec<Halfspace>,
}

impl FeasibleSet {
    /// Row simplices plus expected utility of `i1` at least that of `i2` for every reporting pair.
    pub fn utility_order(skeleton: &Skeleton) -> Self {
        let (n, m) = (skeleton.n(), skeleton.m());
        let u = skeleton.outcomes.utilities_f64();
        let (lo, hi) = (u[0], u[m - 1]);
        let range = if hi > lo { hi - lo } else { 1.0 };
        let scaled: Vec<f64> = u.iter().map(|x| (x - lo) / range).collect();
        let halfspaces = skeleton
            .relation
            .off_diagonal()
            .filter_map(|(a, b)| {
                let mut terms = Vec::with_capacity(2 * m);
                for (j, w) in scaled.iter().enumerate() {
                    terms.push((a * m + j, *w));
                    terms.push((b * m + j, -*w));
                }
                Halfspace::new(terms)
            })
            .collect();
        Self { n, m, halfspaces }
    }

    /// Row simplices plus first-order stochastic dominance of `i1` over `i2` for every reporting pair.
    /// Its vertices are exactly the deterministic truthful outcome vectors.
    pub fn dominance_order(skeleton: &Skeleton) -> Self {
        let (n, m) = (skeleton.n(), skeleton.m());
        let mut halfspaces = Vec::new();
        for (a, b) in skeleton.relation.off_diagonal() {
            for k in 1..m {
                let mut terms = Vec::with_capacity(2 * (m - k));
                for j in k..m {
                    terms.push((a * m + j, 1.0));
                    terms.push((b * m + j, -1.0));
                }
                halfspaces.extend(Halfspace::new(terms));
            }
        }
        Self { n, m, halfspaces }
    }

    pub fn dim(&self) -> usize {
        self.n * self.m
    }

    /// Uniform rows; feasible for both families of constraints.
    pub fn center(&self) -> Vec<f64> {
        vec![1.0 / self.m as f64; self.dim()]
    }

    /// Largest halfspace violation, measured along the unit normal.
    pub fn max_violation(&self, p: &[f64]) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| (-h.eval(p)).max(0.0) / h.norm_sq.sqrt())
            .fold(0.0, f64::max)
    }

    /// Euclidean projection by Dykstra's cyclic scheme: row simplices as one
    /// block, then each halfspace. Stops once every halfspace holds to
    /// [`PROJECTION_TOLERANCE`]; the rows are exact simplices on return.
    pub fn project(&self, point: &[f64]) -> Vec<f64> {
        let mut x = point.to_vec();
        project_rows(&mut x, self.m);
        if self.halfspaces.is_empty() || self.max_violation(&x) <= PROJECTION_TOLERANCE {
            return x;
        }
        let mut x = point.to_vec();
        let dim = x.len();
        let mut row_corr = vec![0.0; dim];
        let mut half_corr: Vec<f64> = vec![0.0; self.halfspaces.len()];
        for _ in 0..MAX_PROJECTION_SWEEPS {
            for (h, corr) in self.halfspaces.iter().zip(half_corr.iter_mut()) {
                // the stored increment is a multiple of the normal
                for &(k, a) in &h.terms {
                    x[k] -= *corr * a;
                }
                let value = h.eval(&x);
                let lambda = if value < 0.0 { -value / h.norm_sq } else { 0.0 };
                for &(k, a) in &h.terms {
                    x[k] += lambda * a;
                }
                *corr = lambda;
            }
            let mut y: Vec<f64> = x.iter().zip(&row_corr).map(|(a, b)| a + b).collect();
            let pre = y.clone();
            project_rows(&mut y, self.m);
            for k in 0..dim {
                row_corr[k] = pre[k] - y[k];
            }
            x = y;
            if self.max_violation(&x) <= PROJECTION_TOLERANCE {
                break;
            }
        }
        x
    }

    /// Same point with each row clipped and renormalized; no halfspace handling.
    pub fn to_profile(&self, p: &[f64]) -> Result<MarginalProfile> {
        MarginalProfile::normalized(p.chunks(self.m).map(<[f64]>::to_vec).collect())
    }
}

/// Euclidean projection of each length-`m` row onto the probability simplex.
pub fn project_rows(x: &mut [f64], m: usize) {
    for row in x.chunks_mut(m) {
        project_simplex(row);
    }
}

fn project_simplex(row: &mut [f64]) {
    let mut sorted: Vec<f64> = row.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, v) in sorted.iter().enumerate() {
        cumsum += v;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    for v in row.iter_mut() {
        *v = (*v - theta).max(0.0);
    }
    let sum: f64 = row.iter().sum();
    if sum > 0.0 {
        row.iter_mut().for_each(|v| *v /= sum);
    }
}

/// Which iteration drives the search between certificate rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ConvexBackend {
    #[default]
    Subgradient,
    Ellipsoid,
}

impl ConvexBackend {
    pub fn name(&self) -> &'static str {
        match self {
            ConvexBackend::Subgradient => "subgradient",
            ConvexBackend::Ellipsoid => "ellipsoid",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConvexOptions {
    /// Stop once the best value is within this of the certified lower bound.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Iterations between certificate rounds.
    pub round_every: usize,
    pub backend: ConvexBackend,
}

impl Default for ConvexOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-3,
            max_iterations: 100_000,
            round_every: 8,
            backend: ConvexBackend::Subgradient,
        }
    }
}

impl ConvexOptions {
    fn check(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParams(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_iterations == 0 || self.round_every == 0 {
            return Err(Error::InvalidParams("iteration counts must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of a converged run.
#[derive(Clone, Debug)]
pub(crate) struct ConvexRun {
    pub point: Vec<f64>,
    pub lower_bound: f64,
    pub iterations: usize,
}

/// Collected affine minorants `F(y) >= offset + slope . y`, with an LP kept warm across rounds.
struct Cuts {
    n: usize,
    m: usize,
    slopes: Vec<Vec<f64>>,
    offsets: Vec<f64>,
    vars: Vec<Variable>,
    level: Option<Variable>,
    solution: Option<Solution>,
    added: usize,
    base: Problem,
}

impl Cuts {
    fn new(set: &FeasibleSet) -> Self {
        let (n, m) = (set.n, set.m);
        let mut base = Problem::new(OptimizationDirection::Minimize);
        let vars: Vec<Variable> = (0..n * m).map(|_| base.add_var(0.0, (0.0, 1.0))).collect();
        let level = base.add_var(1.0, (0.0, f64::INFINITY));
        for i in 0..n {
            let row: Vec<(Variable, f64)> = (0..m).map(|j| (vars[i * m + j], 1.0)).collect();
            base.add_constraint(&row[..], ComparisonOp::Eq, 1.0);
        }
        for h in &set.halfspaces {
            let terms: Vec<(Variable, f64)> = h.terms.iter().map(|&(k, a)| (vars[k], a)).collect();
            base.add_constraint(&terms[..], ComparisonOp::Ge, 0.0);
        }
        Self {
            n,
            m,
            slopes: Vec::new(),
            offsets: Vec::new(),
            vars,
            level: Some(level),
            solution: None,
            added: 0,
            base,
        }
    }

    fn push(&mut self, at: &[f64], value: f64, grad: &[f64]) {
        let offset = value - grad.iter().zip(at).map(|(g, x)| g * x).sum::<f64>();
        self.slopes.push(grad.to_vec());
        self.offsets.push(offset);
    }

    fn cut_terms(&self, k: usize) -> Vec<(Variable, f64)> {
        let mut terms = vec![(self.level.unwrap(), 1.0)];
        for (var, g) in self.vars.iter().zip(&self.slopes[k]) {
            if *g != 0.0 {
                terms.push((*var, -g));
            }
        }
        terms
    }

    /// Minimum of the current model over the feasible set, with its minimizer.
    fn solve(&mut self) -> Option<(f64, Vec<f64>)> {
        let mut solution = self.solution.take();
        while let Some(sol) = solution.take() {
            if self.added == self.slopes.len() {
                solution = Some(sol);
                break;
            }
            let terms = self.cut_terms(self.added);
            solution = sol.add_constraint(&terms[..], ComparisonOp::Ge, self.offsets[self.added]).ok();
            self.added += 1;
        }
        if solution.is_none() {
            let mut problem = self.base.clone();
            for k in 0..self.slopes.len() {
                let terms = self.cut_terms(k);
                problem.add_constraint(&terms[..], ComparisonOp::Ge, self.offsets[k]);
            }
            solution = problem.solve().ok();
            self.added = self.slopes.len();
        }
        let sol = solution?;
        let value = *sol.var_value(self.level.unwrap());
        let point: Vec<f64> = self.vars.iter().map(|v| *sol.var_value(*v)).collect();
        debug_assert_eq!(point.len(), self.n * self.m);
        self.solution = Some(sol);
        Some((value, point))
    }
}

/// Subtracts each row's mean so the direction stays inside the row-sum-zero space.
fn center_rows(g: &mut [f64], m: usize) {
    for row in g.chunks_mut(m) {
        let mean = row.iter().sum::<f64>() / m as f64;
        row.iter_mut().for_each(|x| *x -= mean);
    }
}

/// Objective evaluations with the oracle's infinite values replaced by a penalty.
pub(crate) struct Objective<'a> {
    pub oracle: &'a dyn CostOracle,
    pub penalty: f64,
    pub m: usize,
}

impl Objective<'_> {
    pub fn eval(&self, p: &[f64]) -> (f64, Vec<f64>) {
        let rows: Vec<Vec<f64>> = p.chunks(self.m).map(<[f64]>::to_vec).collect();
        let (value, grad) = value_and_subgradient(&rows, self.oracle, self.penalty);
        (value, grad.concat())
    }
}

/// Runs the search. `offer` sees every feasible point with its objective value
/// and returns the best upper bound known so far; this lets callers track
/// incumbents other than the iterates themselves.
pub(crate) fn minimize(
    set: &FeasibleSet,
    objective: &Objective,
    options: &ConvexOptions,
    offer: &mut dyn FnMut(&[f64], f64) -> f64,
) -> Result<ConvexRun> {
    options.check()?;
    let mut cuts = Cuts::new(set);
    let mut lower = f64::NEG_INFINITY;
    let mut best_point = set.center();
    let (value, grad) = objective.eval(&best_point);
    cuts.push(&best_point, value, &grad);
    let mut best_value = value;
    let mut upper = offer(&best_point, value);

    let mut visit = |p: &[f64], cuts: &mut Cuts, best_point: &mut Vec<f64>, best_value: &mut f64| {
        let (value, grad) = objective.eval(p);
        cuts.push(p, value, &grad);
        if value < *best_value {
            *best_value = value;
            *best_point = p.to_vec();
        }
        (value, grad, offer(p, value))
    };

    let mut ellipsoid = match options.backend {
        ConvexBackend::Ellipsoid => Some(Ellipsoid::new(set)),
        ConvexBackend::Subgradient => None,
    };
    let mut x = best_point.clone();
    let mut x_value = value;
    let mut x_grad = grad;
    let mut iterations = 0;
    while iterations < options.max_iterations {
        iterations += 1;
        if iterations % options.round_every == 1 || options.round_every == 1 {
            if let Some((bound, y)) = cuts.solve() {
                let margin = 1e-9 * bound.abs().max(1.0);
                lower = lower.max(bound - margin);
                if upper - lower <= options.tolerance {
                    break;
                }
                let y = set.project(&y);
                let (v, g, u) = visit(&y, &mut cuts, &mut best_point, &mut best_value);
                upper = u;
                if upper - lower <= options.tolerance {
                    break;
                }
                if ellipsoid.is_none() {
                    x = y;
                    x_value = v;
                    x_grad = g;
                }
                continue;
            }
        }
        match ellipsoid.as_mut() {
            Some(e) => {
                // the ellipsoid keeps its own center; visited points feed the cuts
                let _ = e.step(set, |p| {
                    let (v, g, u) = visit(p, &mut cuts, &mut best_point, &mut best_value);
                    upper = u;
                    (v, g)
                });
            }
            None => {
                let mut direction = x_grad.clone();
                center_rows(&mut direction, set.m);
                let norm_sq: f64 = direction.iter().map(|g| g * g).sum();
                if norm_sq <= 1e-24 {
                    continue;
                }
                let level = if lower.is_finite() {
                    0.5 * (upper.min(best_value) + lower)
                } else {
                    best_value - options.tolerance.max(1e-3 * best_value.abs())
                };
                let step = ((x_value - level).max(0.0) / norm_sq).max(1e-12);
                let trial: Vec<f64> = x.iter().zip(&direction).map(|(a, g)| a - step * g).collect();
                x = set.project(&trial);
                let (v, g, u) = visit(&x, &mut cuts, &mut best_point, &mut best_value);
                upper = u;
                x_value = v;
                x_grad = g;
            }
        }
    }
    if upper - lower > options.tolerance {
        return Err(Error::NonConvergence {
            iterations,
            best: upper,
            gap: lower.is_finite().then_some(upper - lower),
        });
    }
    Ok(ConvexRun {
        point: best_point,
        lower_bound: lower,
        iterations,
    })
}

/// Central-cut ellipsoid over reduced coordinates `p_{i,j}`, `j >= 1`, with
/// `p_{i,0}` implied by the row sum.
struct Ellipsoid {
    m: usize,
    center: Vec<f64>,
    shape: Vec<Vec<f64>>,
}

impl Ellipsoid {
    fn new(set: &FeasibleSet) -> Self {
        let m = set.m;
        let d = set.n * (m - 1);
        let full = set.center();
        let center = reduce(&full, m);
        let r2 = d.max(1) as f64;
        let shape = (0..d)
            .map(|a| (0..d).map(|b| if a == b { r2 } else { 0.0 }).collect())
            .collect();
        Self { m, center, shape }
    }

    /// One cut. Returns the evaluated point when the center was feasible.
    fn step(&mut self, set: &FeasibleSet, mut eval: impl FnMut(&[f64]) -> (f64, Vec<f64>)) -> Option<Vec<f64>> {
        let d = self.center.len();
        if d == 0 {
            return None;
        }
        let full = expand(&self.center, self.m);
        let (cut, feasible) = match self.violated(set, &full) {
            Some(normal) => (normal, None),
            None => {
                let (_, g) = eval(&full);
                (reduce_gradient(&g, self.m), Some(full))
            }
        };
        let pg: Vec<f64> = self.shape.iter().map(|row| row.iter().zip(&cut).map(|(a, b)| a * b).sum()).collect();
        let gpg: f64 = pg.iter().zip(&cut).map(|(a, b)| a * b).sum();
        if gpg <= 1e-300 {
            return feasible;
        }
        let b: Vec<f64> = pg.iter().map(|x| x / gpg.sqrt()).collect();
        let df = d as f64;
        if d == 1 {
            self.center[0] -= b[0] / 2.0;
            self.shape[0][0] /= 4.0;
        } else {
            for (c, bk) in self.center.iter_mut().zip(&b) {
                *c -= bk / (df + 1.0);
            }
            let scale = df * df / (df * df - 1.0);
            for r in 0..d {
                for c in 0..d {
                    self.shape[r][c] = scale * (self.shape[r][c] - 2.0 / (df + 1.0) * b[r] * b[c]);
                }
            }
        }
        feasible
    }

    /// Outward direction of some violated constraint, in reduced coordinates.
    fn violated(&self, set: &FeasibleSet, full: &[f64]) -> Option<Vec<f64>> {
        let m = self.m;
        let d = self.center.len();
        for (k, v) in self.center.iter().enumerate() {
            if *v < 0.0 {
                let mut g = vec![0.0; d];
                g[k] = -1.0;
                return Some(g);
            }
        }
        for i in 0..set.n {
            let sum: f64 = self.center[i * (m - 1)..(i + 1) * (m - 1)].iter().sum();
            if sum > 1.0 {
                let mut g = vec![0.0; d];
                g[i * (m - 1)..(i + 1) * (m - 1)].iter_mut().for_each(|x| *x = 1.0);
                return Some(g);
            }
        }
        for h in &set.halfspaces {
            if h.eval(full) < -PROJECTION_TOLERANCE {
                let mut normal = vec![0.0; set.dim()];
                for &(k, a) in &h.terms {
                    normal[k] = -a;
                }
                return Some(reduce_gradient(&normal, m));
            }
        }
        None
    }
}

fn reduce(full: &[f64], m: usize) -> Vec<f64> {
    full.chunks(m).flat_map(|row| row[1..].to_vec()).collect()
}

fn expand(reduced: &[f64], m: usize) -> Vec<f64> {
    reduced
        .chunks(m - 1)
        .flat_map(|row| {
            let rest: f64 = row.iter().sum();
            std::iter::once(1.0 - rest).chain(row.iter().copied())
        })
        .collect()
}

fn reduce_gradient(full: &[f64], m: usize) -> Vec<f64> {
    full.chunks(m).flat_map(|row| row[1..].iter().map(|g| g - row[0]).collect::<Vec<_>>()).collect()
}

/// Cheapest randomized truthful mechanism for a submodular cost, to additive error.
#[derive(Clone, Debug)]
pub struct RandomizedSubmodularSolution {
    pub chain: ChainDistribution,
    pub marginals: MarginalProfile,
    /// Expected cost of `chain` under the oracle; infinite if it touches an infinite point.
    pub cost: f64,
    /// Certified lower bound on the optimum (with infinite values replaced by a penalty).
    pub lower_bound: f64,
    pub iterations: usize,
}

pub(crate) fn check_dims(oracle: &dyn CostOracle, skeleton: &Skeleton) -> Result<()> {
    validate_skeleton(&skeleton.outcomes, &skeleton.relation).into_result()?;
    if oracle.n() != skeleton.n() || oracle.m() != skeleton.m() {
        return Err(Error::Dimension(format!(
            "oracle is {}x{}, skeleton is {}x{}",
            oracle.n(),
            oracle.m(),
            skeleton.n(),
            skeleton.m()
        )));
    }
    Ok(())
}

/// Solves the convex program over marginal profiles whose expected utilities
/// respect every reporting pair, with objective the expected cost of the
/// non-crossing interpretation.
pub fn solve_randomized_submodular(
    oracle: &dyn CostOracle,
    skeleton: &Skeleton,
    epsilon: f64,
) -> Result<RandomizedSubmodularSolution> {
    let options = ConvexOptions {
        tolerance: epsilon,
        ..ConvexOptions::default()
    };
    solve_randomized_submodular_with(oracle, skeleton, &options)
}

pub fn solve_randomized_submodular_with(
    oracle: &dyn CostOracle,
    skeleton: &Skeleton,
    options: &ConvexOptions,
) -> Result<RandomizedSubmodularSolution> {
    check_dims(oracle, skeleton)?;
    options.check()?;
    let set = FeasibleSet::utility_order(skeleton);
    let objective = Objective {
        oracle,
        penalty: default_penalty(oracle),
        m: skeleton.m(),
    };
    let mut best = f64::INFINITY;
    let run = minimize(&set, &objective, options, &mut |_, v| {
        best = best.min(v);
        best
    })?;
    let marginals = set.to_profile(&run.point)?;
    let chain = interpret_marginals(&marginals);
    let utilities = skeleton.outcomes.utilities_f64();
    let rows = chain.marginals(skeleton.m());
    for (a, b) in skeleton.relation.off_diagonal() {
        let ua: f64 = rows[a].iter().zip(&utilities).map(|(p, u)| p * u).sum();
        let ub: f64 = rows[b].iter().zip(&utilities).map(|(p, u)| p * u).sum();
        if ua < ub - 1e-9 {
            return Err(Error::NotTruthful(a, b));
        }
    }
    Ok(RandomizedSubmodularSolution {
        cost: chain_cost(&chain, oracle),
        chain,
        marginals,
        lower_bound: run.lower_bound,
        iterations: run.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::int;
    use crate::generators::gap_instance;
    use crate::instance::{AdditiveCostMatrix, OutcomeSpace, ReportingRelation};
    use crate::submodular::oracle::{constant_oracle, AdditiveOracle};

    #[test]
    fn simplex_projection() {
        let mut row = vec![0.5, 0.5, 0.5];
        project_simplex(&mut row);
        assert!(row.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
        let mut row = vec![2.0, -1.0];
        project_simplex(&mut row);
        assert_eq!(row, vec![1.0, 0.0]);
    }

    #[test]
    fn projection_lands_in_the_set() {
        let skeleton = Skeleton::new(OutcomeSpace::ladder(3), ReportingRelation::full(3));
        let set = FeasibleSet::utility_order(&skeleton);
        let p = set.project(&[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.2, 0.3, 0.5]);
        assert!(set.max_violation(&p) <= PROJECTION_TOLERANCE);
        for row in p.chunks(3) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gap_instance_wrapped_additively() {
        let inst = gap_instance();
        let oracle = AdditiveOracle::new(inst.costs().clone());
        for backend in [ConvexBackend::Subgradient, ConvexBackend::Ellipsoid] {
            let options = ConvexOptions {
                backend,
                ..ConvexOptions::default()
            };
            let sol = solve_randomized_submodular_with(&oracle, &inst.skeleton(), &options).unwrap();
            assert!(sol.cost.abs() <= 1e-3, "{backend:?}: {}", sol.cost);
        }
    }

    #[test]
    fn constant_oracle_costs_the_constant() {
        let skeleton = Skeleton::new(OutcomeSpace::ladder(3), ReportingRelation::full(2));
        let oracle = constant_oracle(2, 3, int(5));
        let sol = solve_randomized_submodular(&oracle, &skeleton, 1e-3).unwrap();
        assert!((sol.cost - 5.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_inputs() {
        let skeleton = Skeleton::new(OutcomeSpace::ladder(2), ReportingRelation::identity(2));
        let oracle = AdditiveOracle::new(AdditiveCostMatrix::zeros(3, 2));
        assert!(solve_randomized_submodular(&oracle, &skeleton, 1e-3).is_err());
        let oracle = AdditiveOracle::new(AdditiveCostMatrix::zeros(2, 2));
        assert!(solve_randomized_submodular(&oracle, &skeleton, 0.0).is_err());
    }
}
