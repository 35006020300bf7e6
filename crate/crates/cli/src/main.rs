//! `pvmech`: generate, solve, verify and benchmark truthful mechanism instances.
//!
//! Exit codes: 0 ok, 2 usage or validation, 3 infinite optimum, 4 untruthful,
//! 5 enumeration budget, 6 failed self-check.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use pvmech::bench::{run_bench, to_csv, BenchAlgo, BenchSpec, Family};
use pvmech::cnf::parse_dimacs;
use pvmech::cost::{format_rational, format_sig, parse_rational, to_f64, CostValue, Rational};
use pvmech::envelope::solve_randomized;
use pvmech::generators::{
    gap_instance, minsat_reduction_nontransitive, minsat_reduction_single_peaked, random_instance, RandomParams,
    ReductionParams, PRNG_NAME,
};
use pvmech::instance::{cost_deterministic, cost_randomized, expected_utility, is_truthful, validate, CostMode};
use pvmech::io::{AnyInstanceFile, InstanceFile, MechanismFile, Meta, OracleSpec, PerTypeFile};
use pvmech::mincut::{build_network, clamp_capacities, min_cut, solve_deterministic, to_dot};
use pvmech::oracle::{
    brute_force_best_response_opt, brute_force_deterministic_opt, brute_force_envelope_opt, brute_force_oracle_opt,
    brute_force_truthful_general_opt, EnumerationBudget,
};
use pvmech::submodular::{
    chain_cost, in_truthful_lattice, interpret_marginals, is_submodular, solve_deterministic_submodular,
    solve_randomized_submodular, CheckMode, CostOracle, MarginalProfile, SubmodularBackend, SubmodularVerdict,
};
use pvmech::{DeterministicMechanism, Error, Instance, RandomizedMechanism};

const EXIT_USAGE: u8 = 2;
const EXIT_INFINITE: u8 = 3;
const EXIT_UNTRUTHFUL: u8 = 4;
const EXIT_BUDGET: u8 = 5;
const EXIT_SELF_CHECK: u8 = 6;

/// Significant digits for costs from the convex-program path.
const APPROX_DIGITS: usize = 12;

/// Slack for truthfulness of float marginals.
const FLOAT_SLACK: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "pvmech", version, about = "Cost-optimal truthful mechanisms under partial verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file.
    Generate(GenerateArgs),
    /// Solve an instance and self-check the result.
    Solve(SolveArgs),
    /// Check a mechanism against an instance.
    Verify(VerifyArgs),
    /// Compare a solver with brute force.
    Oracle(OracleArgs),
    /// Time the additive solvers over a generated family.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Gap,
    Minsat1,
    Minsat2,
    Random,
    Overhead,
}

#[derive(clap::Args)]
struct GenerateArgs {
    kind: Kind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Probability of each off-diagonal reporting pair.
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long, default_value_t = 20)]
    max_cost: u64,
    #[arg(long, default_value_t = 0.0)]
    infinity_rate: f64,
    /// Store the transitive closure of the relation.
    #[arg(long)]
    close: bool,
    /// DIMACS formula for the MinSAT reductions.
    #[arg(long)]
    cnf: Option<PathBuf>,
    /// Fixed charge for the overhead oracle.
    #[arg(long, default_value = "5")]
    overhead: String,
    /// Output path; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Det,
    Rand,
    SubDet,
    SubRand,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Det => "det",
            Algo::Rand => "rand",
            Algo::SubDet => "sub-det",
            Algo::SubRand => "sub-rand",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Brute,
    Lovasz,
}

impl From<Backend> for SubmodularBackend {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Brute => SubmodularBackend::Brute,
            Backend::Lovasz => SubmodularBackend::Lovasz,
        }
    }
}

#[derive(clap::Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Det)]
    algo: Algo,
    /// Mechanism output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the run report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the flow network with its minimum cut in DOT format (det only).
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Additive accuracy of the convex program (sub-rand).
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = Backend::Lovasz)]
    backend: Backend,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Truthful,
    BestResponse,
}

#[derive(clap::Args)]
struct VerifyArgs {
    instance: PathBuf,
    mechanism: PathBuf,
    /// Which cost the report's `cost` field carries; both are always listed.
    #[arg(long, value_enum, default_value_t = VerifyMode::Truthful)]
    mode: VerifyMode,
}

#[derive(clap::Args)]
struct OracleArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Det)]
    algo: Algo,
    /// Maximum number of enumerated states.
    #[arg(long, default_value_t = EnumerationBudget::default().0)]
    budget: u64,
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(long, default_value = "sparse")]
    family: String,
    /// Comma-separated type counts.
    #[arg(long, value_delimiter = ',', default_value = "10,100")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "det")]
    algos: Vec<String>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// CSV output path; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failed command with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn self_check(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_SELF_CHECK,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::InfiniteOptimum => EXIT_INFINITE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn command_echo() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn exact(cost: &CostValue) -> String {
    cost.to_string()
}

fn approx(cost: f64) -> String {
    if cost.is_finite() {
        format_sig(cost, APPROX_DIGITS)
    } else {
        "inf".into()
    }
}

/// What every solve, verify and oracle run prints.
struct RunReport {
    command: String,
    digest: String,
    solver: String,
    cost: String,
    micros: u128,
    checks: Value,
    extra: Value,
}

impl RunReport {
    fn to_json(&self) -> Value {
        let mut out = json!({
            "command": self.command,
            "instance_sha256": self.digest,
            "solver": self.solver,
            "cost": self.cost,
            "wall_micros": self.micros,
            "checks": self.checks,
        });
        if let Value::Object(extra) = &self.extra {
            for (k, v) in extra {
                out[k] = v.clone();
            }
        }
        out
    }

    fn emit(&self, path: Option<&Path>) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("report serializes") + "\n";
        if let Some(p) = path {
            fs::write(p, &text).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
        }
        print!("{text}");
        Ok(())
    }
}

fn load_common(path: &Path) -> Result<(InstanceFile, String), Failure> {
    let text = read(path)?;
    let file = InstanceFile::parse(&text)?;
    validate(&file.instance).into_result()?;
    Ok((file, digest(text.as_bytes())))
}

fn cmd_generate(args: &GenerateArgs) -> CmdResult {
    let random_params = || -> Result<RandomParams, Failure> {
        let params = RandomParams {
            n: args.n,
            m: args.m,
            edge_density: args.density,
            max_cost: args.max_cost,
            infinity_rate: args.infinity_rate,
            close: args.close,
        };
        params.check()?;
        Ok(params)
    };
    let random_meta = |generator: &str| Meta {
        generator: generator.into(),
        seed: Some(args.seed),
        params: json!({
            "n": args.n, "m": args.m, "edge_density": args.density, "max_cost": args.max_cost,
            "infinity_rate": args.infinity_rate, "close": args.close, "prng": PRNG_NAME,
        }),
    };
    let formula = || -> Result<_, Failure> {
        let path = args.cnf.as_ref().ok_or_else(|| Failure::usage("--cnf is required for MinSAT reductions"))?;
        Ok((parse_dimacs(&read(path)?)?, path.display().to_string()))
    };
    let text = match args.kind {
        Kind::Gap => InstanceFile {
            instance: gap_instance(),
            meta: Some(Meta {
                generator: "gap".into(),
                seed: None,
                params: json!({}),
            }),
            oracle: None,
        }
        .to_string_pretty(),
        Kind::Random => InstanceFile {
            instance: random_instance(args.seed, &random_params()?)?,
            meta: Some(random_meta("random")),
            oracle: None,
        }
        .to_string_pretty(),
        Kind::Overhead => {
            let overhead = parse_rational(&args.overhead)?;
            let mut meta = random_meta("overhead");
            meta.params["overhead"] = json!(format_rational(&overhead));
            InstanceFile {
                instance: random_instance(args.seed, &random_params()?)?,
                meta: Some(meta),
                oracle: Some(OracleSpec::Overhead(overhead)),
            }
            .to_string_pretty()
        }
        Kind::Minsat1 => {
            let (f, source) = formula()?;
            InstanceFile {
                instance: minsat_reduction_nontransitive(&f),
                meta: Some(Meta {
                    generator: "minsat1".into(),
                    seed: None,
                    params: json!({ "cnf": source, "vars": f.var_count(), "clauses": f.clause_count() }),
                }),
                oracle: None,
            }
            .to_string_pretty()
        }
        Kind::Minsat2 => {
            let (f, source) = formula()?;
            let params = ReductionParams::defaults(&f);
            PerTypeFile {
                instance: minsat_reduction_single_peaked(&f, &params)?,
                meta: Some(Meta {
                    generator: "minsat2".into(),
                    seed: None,
                    params: json!({
                        "cnf": source, "vars": f.var_count(), "clauses": f.clause_count(),
                        "big": format_rational(&params.big), "medium": format_rational(&params.medium),
                    }),
                }),
            }
            .to_string_pretty()
        }
    };
    write_or_print(args.out.as_deref(), &(text + "\n"))?;
    Ok(0)
}

fn require_additive(file: &InstanceFile, algo: Algo) -> Result<(), Failure> {
    match file.oracle_spec() {
        OracleSpec::Additive => Ok(()),
        other => Err(Failure::usage(format!(
            "--algo {} needs additive costs, the file has oracle kind {}; use sub-det or sub-rand",
            algo.name(),
            other.kind()
        ))),
    }
}

/// Truthfulness of float marginals by expected utility, with a small slack.
fn float_truthful(rows: &[Vec<f64>], instance: &Instance) -> Vec<(usize, usize)> {
    let u = instance.outcomes().utilities_f64();
    let eu: Vec<f64> = rows.iter().map(|r| r.iter().zip(&u).map(|(p, o)| p * o).sum()).collect();
    instance
        .relation()
        .off_diagonal()
        .filter(|&(a, b)| eu[a] + FLOAT_SLACK < eu[b])
        .collect()
}

fn cmd_solve(args: &SolveArgs) -> CmdResult {
    let (file, digest) = load_common(&args.instance)?;
    let instance = &file.instance;
    if args.dot.is_some() && args.algo != Algo::Det {
        return Err(Failure::usage("--dot applies to --algo det only"));
    }
    let start = Instant::now();
    let (mechanism, cost, checks) = match args.algo {
        Algo::Det => {
            require_additive(&file, args.algo)?;
            let sol = solve_deterministic(instance)?;
            if let Some(dot_path) = &args.dot {
                let clamped = clamp_capacities(build_network(instance));
                let cut = min_cut(&clamped);
                fs::write(dot_path, to_dot(&clamped.network, Some(&cut)))
                    .map_err(|e| Failure::usage(format!("{}: {e}", dot_path.display())))?;
            }
            match sol.mechanism {
                None => (None, exact(&sol.cost), json!({ "truthful": null })),
                Some(m) => {
                    let rand = RandomizedMechanism::point_mass(&m, instance.m());
                    let truthful = is_truthful(&rand, instance).is_truthful();
                    let recomputed = cost_deterministic(&m, instance, CostMode::Truthful) == sol.cost;
                    if !truthful || !recomputed {
                        return Err(Failure::self_check("min-cut mechanism failed its self-check"));
                    }
                    let checks = json!({ "truthful": truthful, "cost_recomputed": recomputed });
                    (Some(MechanismFile::Deterministic(m)), exact(&sol.cost), checks)
                }
            }
        }
        Algo::Rand => {
            require_additive(&file, args.algo)?;
            let sol = solve_randomized(instance)?;
            match sol.mechanism {
                None => (None, exact(&sol.cost), json!({ "truthful": null })),
                Some(m) => {
                    let truthful = is_truthful(&m, instance).is_truthful();
                    let recomputed = cost_randomized(&m, instance) == sol.cost;
                    if !truthful || !recomputed {
                        return Err(Failure::self_check("envelope mechanism failed its self-check"));
                    }
                    let checks = json!({ "truthful": truthful, "cost_recomputed": recomputed });
                    let file = MechanismFile::Randomized {
                        mechanism: m,
                        support: Some(sol.support),
                    };
                    (Some(file), exact(&sol.cost), checks)
                }
            }
        }
        Algo::SubDet => {
            let oracle = file.oracle_spec().build(instance)?;
            let verdict = submodularity(oracle.as_ref())?;
            let backend = SubmodularBackend::from(args.backend);
            if backend == SubmodularBackend::Lovasz && verdict.is_violation() {
                return Err(Failure::usage(format!(
                    "the cost is not submodular ({verdict:?}); use --backend brute"
                )));
            }
            let sol = solve_deterministic_submodular(oracle.as_ref(), &instance.skeleton(), backend)?;
            match sol.point {
                None => (None, exact(&sol.cost), json!({ "truthful": null })),
                Some(p) => {
                    let truthful = in_truthful_lattice(&p, instance.relation());
                    let recomputed = oracle.value(&p) == sol.cost;
                    if !truthful || !recomputed {
                        return Err(Failure::self_check("lattice minimizer failed its self-check"));
                    }
                    let checks = json!({
                        "truthful": truthful,
                        "cost_recomputed": recomputed,
                        "submodular": verdict_name(&verdict),
                        "lower_bound": sol.lower_bound,
                    });
                    (Some(MechanismFile::Deterministic(DeterministicMechanism::new(p))), exact(&sol.cost), checks)
                }
            }
        }
        Algo::SubRand => {
            let oracle = file.oracle_spec().build(instance)?;
            let verdict = submodularity(oracle.as_ref())?;
            let sol = solve_randomized_submodular(oracle.as_ref(), &instance.skeleton(), args.epsilon)?;
            let violations = float_truthful(&sol.chain.marginals(instance.m()), instance);
            if !violations.is_empty() || !sol.chain.is_chain() {
                return Err(Failure::self_check(format!(
                    "convex-program solution failed its self-check: {violations:?}"
                )));
            }
            let checks = json!({
                "truthful": true,
                "chain": true,
                "submodular": verdict_name(&verdict),
                "lower_bound": approx(sol.lower_bound),
                "iterations": sol.iterations,
            });
            if sol.cost.is_infinite() {
                (None, "inf".into(), checks)
            } else {
                (Some(MechanismFile::Chain(sol.chain)), approx(sol.cost), checks)
            }
        }
    };
    let micros = start.elapsed().as_micros();
    if let (Some(m), Some(path)) = (&mechanism, &args.out) {
        fs::write(path, m.to_string_pretty() + "\n").map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    let infinite = mechanism.is_none();
    let report = RunReport {
        command: command_echo(),
        digest,
        solver: args.algo.name().into(),
        cost,
        micros,
        checks,
        extra: json!({ "mechanism": mechanism.as_ref().map(MechanismFile::to_json) }),
    };
    report.emit(args.report.as_deref())?;
    if infinite {
        eprintln!("no finite-cost truthful mechanism exists");
        return Ok(EXIT_INFINITE);
    }
    Ok(0)
}

fn submodularity(oracle: &dyn CostOracle) -> Result<SubmodularVerdict, Failure> {
    match is_submodular(oracle, CheckMode::default()) {
        Ok(v) => Ok(v),
        Err(Error::BudgetExceeded { .. }) => Ok(is_submodular(
            oracle,
            CheckMode::Sampled {
                samples: 100_000,
                seed: 0,
            },
        )?),
        Err(e) => Err(e.into()),
    }
}

fn verdict_name(v: &SubmodularVerdict) -> String {
    match v {
        SubmodularVerdict::Submodular => "yes".into(),
        SubmodularVerdict::NoViolationFound { checked } => format!("no violation in {checked} sampled pairs"),
        SubmodularVerdict::Violation { a, b } => format!("violated at {a:?}, {b:?}"),
    }
}

/// Expected cost when every type reports its best feasible report (truth first, then lowest index).
fn best_response_cost(mech: &RandomizedMechanism, instance: &Instance) -> CostValue {
    let utilities: Vec<Rational> = (0..instance.n())
        .map(|i| expected_utility(mech, instance.outcomes(), i))
        .collect();
    let mut total = CostValue::zero();
    for i in 0..instance.n() {
        let mut report = i;
        for k in instance.relation().reports_of(i) {
            if utilities[k] > utilities[report] {
                report = k;
            }
        }
        for (j, p) in mech.row(report).iter().enumerate() {
            total += &instance.cost(i, j).scale(p);
        }
    }
    total
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let (file, digest) = load_common(&args.instance)?;
    let instance = &file.instance;
    let mech_file = MechanismFile::parse(&read(&args.mechanism)?)?;
    let start = Instant::now();
    let (n, m) = (instance.n(), instance.m());
    match &mech_file {
        MechanismFile::Deterministic(d) => d.check(n, m)?,
        MechanismFile::Randomized { mechanism, .. } => mechanism.check(n, m)?,
        MechanismFile::Chain(c) => {
            if c.support.iter().any(|(p, _)| p.len() != n || p.iter().any(|&j| j >= m)) {
                return Err(Failure::usage("chain support does not fit the instance"));
            }
        }
    }
    let rand = mech_file.as_randomized(m);
    let truth = is_truthful(&rand, instance);
    let spec = file.oracle_spec();
    let (truthful_cost, best_cost) = match (&spec, &mech_file) {
        (OracleSpec::Additive, MechanismFile::Deterministic(d)) => (
            exact(&cost_deterministic(d, instance, CostMode::Truthful)),
            exact(&cost_deterministic(d, instance, CostMode::BestResponse)),
        ),
        (OracleSpec::Additive, MechanismFile::Randomized { .. }) => {
            (exact(&cost_randomized(&rand, instance)), exact(&best_response_cost(&rand, instance)))
        }
        (OracleSpec::Additive, MechanismFile::Chain(_)) => (
            approx(cost_randomized(&rand, instance).to_f64()),
            approx(best_response_cost(&rand, instance).to_f64()),
        ),
        (_, MechanismFile::Deterministic(d)) => {
            let oracle = spec.build(instance)?;
            (exact(&oracle.value(&d.assignment)), "n/a".into())
        }
        (_, MechanismFile::Chain(c)) => {
            let oracle = spec.build(instance)?;
            (approx(chain_cost(c, oracle.as_ref())), "n/a".into())
        }
        (_, MechanismFile::Randomized { .. }) => {
            // a combinatorial cost is charged on the non-crossing coupling of the rows
            let oracle = spec.build(instance)?;
            let rows: Vec<Vec<f64>> = rand.rows().iter().map(|r| r.iter().map(to_f64).collect()).collect();
            let chain = interpret_marginals(&MarginalProfile::normalized(rows)?);
            (approx(chain_cost(&chain, oracle.as_ref())), "n/a".into())
        }
    };
    let utilities: Vec<String> = (0..n)
        .map(|i| {
            let u = expected_utility(&rand, instance.outcomes(), i);
            if rand.is_approximate() {
                approx(to_f64(&u))
            } else {
                format_rational(&u)
            }
        })
        .collect();
    let cost = match args.mode {
        VerifyMode::Truthful => truthful_cost.clone(),
        VerifyMode::BestResponse => best_cost.clone(),
    };
    let report = RunReport {
        command: command_echo(),
        digest,
        solver: "verify".into(),
        cost,
        micros: start.elapsed().as_micros(),
        checks: json!({
            "truthful": truth.is_truthful(),
            "violations": truth.violations.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
        }),
        extra: json!({
            "costs": { "truthful": truthful_cost, "best_response": best_cost },
            "expected_utility": utilities,
        }),
    };
    report.emit(None)?;
    if truth.is_truthful() {
        Ok(0)
    } else {
        for (a, b) in &truth.violations {
            eprintln!("type {a} gains by reporting {b}");
        }
        Ok(EXIT_UNTRUTHFUL)
    }
}

fn cmd_oracle(args: &OracleArgs) -> CmdResult {
    let text = read(&args.instance)?;
    let digest = digest(text.as_bytes());
    let budget = EnumerationBudget::new(args.budget)?;
    let start = Instant::now();
    let file = match AnyInstanceFile::parse(&text)? {
        AnyInstanceFile::Common(f) => f,
        AnyInstanceFile::PerType(f) => {
            let truthful = brute_force_truthful_general_opt(&f.instance, budget)?;
            let best = brute_force_best_response_opt(&f.instance, budget)?;
            let report = RunReport {
                command: command_echo(),
                digest,
                solver: "brute".into(),
                cost: exact(&truthful.cost),
                micros: start.elapsed().as_micros(),
                checks: json!({}),
                extra: json!({
                    "truthful_opt": exact(&truthful.cost),
                    "truthful_argmin": truthful.argmin,
                    "best_response_opt": exact(&best.cost),
                    "best_response_argmin": best.argmin,
                }),
            };
            report.emit(None)?;
            return Ok(0);
        }
    };
    validate(&file.instance).into_result()?;
    let instance = &file.instance;
    let (solver, brute, matched, tolerance) = match args.algo {
        Algo::Det => {
            require_additive(&file, args.algo)?;
            let brute = brute_force_deterministic_opt(instance, budget)?.cost;
            let solver = solve_deterministic(instance)?.cost;
            let matched = solver == brute;
            (exact(&solver), exact(&brute), matched, 0.0)
        }
        Algo::Rand => {
            require_additive(&file, args.algo)?;
            let brute = brute_force_envelope_opt(instance, budget)?;
            let solver = solve_randomized(instance)?.cost;
            let matched = solver == brute;
            (exact(&solver), exact(&brute), matched, 0.0)
        }
        Algo::SubDet => {
            let oracle = file.oracle_spec().build(instance)?;
            let brute = brute_force_oracle_opt(&instance.skeleton(), oracle.as_ref(), budget)?.cost;
            let sol = solve_deterministic_submodular(oracle.as_ref(), &instance.skeleton(), SubmodularBackend::Lovasz)?;
            let matched = sol.cost == brute;
            (exact(&sol.cost), exact(&brute), matched, 0.0)
        }
        Algo::SubRand => {
            // exact randomized ground truth exists only for additive costs
            require_additive(&file, args.algo)?;
            let brute = brute_force_envelope_opt(instance, budget)?;
            let oracle = file.oracle_spec().build(instance)?;
            let sol = solve_randomized_submodular(oracle.as_ref(), &instance.skeleton(), args.epsilon)?;
            let matched = match &brute {
                CostValue::Infinite => sol.cost.is_infinite(),
                CostValue::Finite(_) => (sol.cost - brute.to_f64()).abs() <= args.epsilon,
            };
            (approx(sol.cost), exact(&brute), matched, args.epsilon)
        }
    };
    let report = RunReport {
        command: command_echo(),
        digest,
        solver: args.algo.name().into(),
        cost: solver.clone(),
        micros: start.elapsed().as_micros(),
        checks: json!({ "match": matched, "tolerance": tolerance }),
        extra: json!({ "brute_cost": brute }),
    };
    report.emit(None)?;
    if matched {
        Ok(0)
    } else {
        Err(Failure::self_check(format!("solver {solver} disagrees with brute force {brute}")))
    }
}

fn cmd_bench(args: &BenchArgs) -> CmdResult {
    let family: Family = args.family.parse()?;
    let algos = args.algos.iter().map(|a| a.parse()).collect::<Result<Vec<BenchAlgo>, _>>()?;
    let spec = BenchSpec {
        family,
        sizes: args.sizes.clone(),
        m: args.m,
        repetitions: args.reps,
        base_seed: args.seed,
        algos,
    };
    let rows = run_bench(&spec, args.jobs)?;
    write_or_print(args.out.as_deref(), &to_csv(&rows))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
