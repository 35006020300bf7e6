//! Timing runs over generated families, reported as CSV rows.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use crate::envelope::solve_randomized;
use crate::error::{Error, Result};
use crate::generators::{random_convex_instance, random_instance, random_sparse_instance, RandomParams};
use crate::instance::Instance;
use crate::mincut::solve_deterministic;

pub const CSV_HEADER: &str = "family,n,m,seed,algo,cost,micros";

/// Expected off-diagonal pairs per type in the sparse family. Much above one,
/// a giant strongly connected component appears and the closure has order
/// `n^2` pairs, which dominates the run time.
pub const SPARSE_DEGREE: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// About [`SPARSE_DEGREE`] reporting pairs per type.
    Sparse,
    /// Each pair with probability `RandomParams` default density.
    Dense,
    /// Convex cost rows, default density.
    Convex,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Sparse => "sparse",
            Family::Dense => "dense",
            Family::Convex => "convex",
        }
    }

    pub fn generate(&self, seed: u64, n: usize, m: usize) -> Result<Instance> {
        match self {
            Family::Sparse => random_sparse_instance(seed, n, m, SPARSE_DEGREE, 20),
            Family::Dense => random_instance(seed, &RandomParams::new(n, m)),
            Family::Convex => random_convex_instance(seed, &RandomParams::new(n, m)),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sparse" | "random" => Ok(Family::Sparse),
            "dense" => Ok(Family::Dense),
            "convex" => Ok(Family::Convex),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchAlgo {
    Det,
    Rand,
}

impl BenchAlgo {
    pub fn name(&self) -> &'static str {
        match self {
            BenchAlgo::Det => "det",
            BenchAlgo::Rand => "rand",
        }
    }
}

impl FromStr for BenchAlgo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "det" => Ok(BenchAlgo::Det),
            "rand" => Ok(BenchAlgo::Rand),
            other => Err(Error::Parse(format!("unknown bench algorithm {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub m: usize,
    pub repetitions: usize,
    /// Repetition `r` uses seed `base_seed + r`.
    pub base_seed: u64,
    pub algos: Vec<BenchAlgo>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub algo: String,
    pub cost: String,
    pub micros: u128,
}

/// Type count, seed and solver of one bench run.
type Task = (usize, u64, BenchAlgo);

/// Runs one instance with one solver.
pub fn run_one(family: Family, n: usize, m: usize, seed: u64, algo: BenchAlgo) -> Result<BenchRow> {
    let instance = family.generate(seed, n, m)?;
    let start = Instant::now();
    let cost = match algo {
        BenchAlgo::Det => solve_deterministic(&instance)?.cost,
        BenchAlgo::Rand => solve_randomized(&instance)?.cost,
    };
    let micros = start.elapsed().as_micros();
    Ok(BenchRow {
        family: family.name().into(),
        n,
        m,
        seed,
        algo: algo.name().into(),
        cost: cost.to_string(),
        micros,
    })
}

/// Every (size, repetition, algorithm) combination, in that nesting order.
/// Independent jobs run on up to `jobs` threads; row order does not depend on it.
pub fn run_bench(spec: &BenchSpec, jobs: usize) -> Result<Vec<BenchRow>> {
    let mut tasks = Vec::new();
    for &n in &spec.sizes {
        for r in 0..spec.repetitions {
            for &algo in &spec.algos {
                tasks.push((n, spec.base_seed + r as u64, algo));
            }
        }
    }
    let jobs = jobs.max(1).min(tasks.len().max(1));
    let chunks: Vec<Vec<(usize, Task)>> = (0..jobs)
        .map(|w| tasks.iter().copied().enumerate().skip(w).step_by(jobs).collect())
        .collect();
    let mut results: Vec<Option<Result<BenchRow>>> = (0..tasks.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                scope.spawn(move || {
                    chunk
                        .into_iter()
                        .map(|(k, (n, seed, algo))| (k, run_one(spec.family, n, spec.m, seed, algo)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, row) in h.join().expect("bench worker panicked") {
                results[k] = Some(row);
            }
        }
    });
    results.into_iter().map(|r| r.expect("every task ran")).collect()
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{},{},{}", r.family, r.n, r.m, r.seed, r.algo, r.cost, r.micros);
    }
    out
}
