//! Command-line front end: classify, solve, check/decide, optimize, generate,
//! and benchmark.
//!
//! Exit codes are stable: 0 success, 2 verified non-existence (or a failed
//! check), 3 not applicable, 4 enumeration/state ceiling exceeded, 5 parse
//! error, 1 any other failure. The environment variable `EQMANNA_CEILING`
//! overrides the default oracle ceiling.

use crate::dp::{dp_welfare_eqx, DpConfig, DpError, DpObjective, DpOutcome};
use crate::fairness::{self, check_po_nonwasteful, ZeroPolicy};

use crate::instances::io::{
    allocation_from_str, allocation_to_string, instance_document_from_str, instance_to_string,
};
use crate::instances::{generate, GeneratorSpec, Regime};
use crate::model::Instance;
use crate::oracle::{
    self, exact_po, exists_with, optimize_within, OptimumValue, OracleError, OracleObjective,
    Predicate,
};
use crate::solver::eq1po::solve_trivalued_eq1po;
use crate::solver::objective::solve_objective_eq1_with;
use crate::solver::transfer::{solve_bivalued_eqx_with, solve_trivalued_eq1_with, TransferRecord};
use crate::solver::two_agent::{
    solve_identical_eq1po, solve_two_agent_subjective_eq, solve_two_agent_trivalued_eq1po,
    solve_two_agent_type_normalized,
};
use crate::solver::{Outcome, SolveError, TieBreak};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NONEXISTENT: i32 = 2;
pub const EXIT_NOT_APPLICABLE: i32 = 3;
pub const EXIT_CEILING: i32 = 4;
pub const EXIT_PARSE: i32 = 5;

pub const CEILING_ENV: &str = "EQMANNA_CEILING";

#[derive(Parser, Debug)]
#[command(
    name = "eqmanna",
    about = "Equitable allocation of mixed manna: solvers, checkers, oracles, and generators",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print item classes and valuation-class flags of an instance file.
    Classify { instance: PathBuf },
    /// Run a solver and report which fairness checks the output passes.
    Solve {
        instance: PathBuf,
        /// auto picks the most specific applicable solver.
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Auto)]
        algorithm: AlgorithmArg,
        /// Print the assignment/transfer trace.
        #[arg(long)]
        trace: bool,
        /// Randomize tie-breaking with this seed (default: lexicographic).
        #[arg(long)]
        seed: Option<u64>,
        /// Write the allocation file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide existence of an allocation with the given properties by
    /// exhaustive search, or check a concrete allocation file.
    Decide {
        instance: PathBuf,
        /// Conjunction joined by '+': eq, eq1, eqx, eqx-nonzero, ef, ef1,
        /// efx, po (aliases: eq1po, eqxpo).
        #[arg(long)]
        property: String,
        /// Enumeration ceiling (default 2^24, or EQMANNA_CEILING).
        #[arg(long)]
        ceiling: Option<u64>,
        /// Write the witness allocation here when one is found.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check this allocation file against the properties instead of
        /// searching.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Welfare-maximal allocation within the strict-EQX set.
    Optimize {
        instance: PathBuf,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Dp)]
        method: MethodArg,
        /// Print per-layer state counts (dp method).
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        ceiling: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate an instance file for a valuation regime.
    Gen {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 9)]
        value_bound: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Run a solver suite over generated instances and emit CSV.
    Bench {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgorithmArg {
    Auto,
    Objective,
    Bivalued,
    Trivalued,
    TwoAgent,
    TwoAgentTripo,
    Identical,
    Eq1po,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ObjectiveArg {
    Uw,
    Ew,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MethodArg {
    Dp,
    Oracle,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum RegimeArg {
    Arbitrary,
    Objective,
    Identical,
    Bivalued,
    Trivalued,
    TypeNormalized,
    TwoAgentTypeNormalized,
    Binary,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Regime {
        match r {
            RegimeArg::Arbitrary => Regime::Arbitrary,
            RegimeArg::Objective => Regime::Objective,
            RegimeArg::Identical => Regime::Identical,
            RegimeArg::Bivalued => Regime::SymmetricBivaluedNormalized,
            RegimeArg::Trivalued => Regime::SymmetricTrivaluedNormalized,
            RegimeArg::TypeNormalized => Regime::TypeNormalized,
            RegimeArg::TwoAgentTypeNormalized => Regime::TwoAgentTypeNormalized,
            RegimeArg::Binary => Regime::Binary,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SuiteArg {
    Objective,
    Bivalued,
    Trivalued,
    TwoAgent,
    Eq1po,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match &e {
            SolveError::NotApplicable(_) => Failure::new(EXIT_NOT_APPLICABLE, e.to_string()),
            SolveError::Defect(_) => Failure::new(EXIT_FAILURE, e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::new(EXIT_CEILING, e.to_string())
    }
}

/// Parse argv and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(report) => {
            print!("{report}");
            EXIT_OK
        }
        Err(f) => {
            if f.code == EXIT_NONEXISTENT || f.code == EXIT_NOT_APPLICABLE {
                println!("{}", f.message);
            } else {
                eprintln!("error: {}", f.message);
            }
            f.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Classify { instance } => cmd_classify(&instance),
        Command::Solve { instance, algorithm, trace, seed, out } => {
            cmd_solve(&instance, algorithm, trace, seed, out.as_deref())
        }
        Command::Decide { instance, property, ceiling, out, check } => {
            cmd_decide(&instance, &property, ceiling, out.as_deref(), check.as_deref())
        }
        Command::Optimize { instance, objective, method, stats, ceiling, out } => {
            cmd_optimize(&instance, objective, method, stats, ceiling, out.as_deref())
        }
        Command::Gen { regime, n, m, value_bound, seed, out, name } => {
            cmd_gen(regime, n, m, value_bound, seed, &out, name)
        }
        Command::Bench { suite, csv, count, seed } => cmd_bench(suite, &csv, count, seed),
    }
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_FAILURE, format!("cannot read {}: {e}", path.display())))?;
    instance_document_from_str(&text)
        .map(|doc| doc.instance)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::new(EXIT_FAILURE, format!("cannot write {}: {e}", path.display())))
}

fn ceiling_or_env(arg: Option<u64>) -> u64 {
    arg.or_else(|| std::env::var(CEILING_ENV).ok().and_then(|s| s.parse().ok()))
        .unwrap_or(oracle::DEFAULT_CEILING)
}

fn cmd_classify(path: &Path) -> Result<String, Failure> {
    let inst = load_instance(path)?;
    let items = inst.classify_items();
    let class = inst.classify_valuations();
    let mut out = String::new();
    out.push_str(&format!(
        "instance: {}\n",
        inst.name().unwrap_or(&path.display().to_string())
    ));
    out.push_str(&format!("agents: {}, items: {}\n", inst.num_agents(), inst.num_items()));
    out.push_str(&format!(
        "O+: {}, O-: {}, O±: {}\n",
        items.objective_goods.len(),
        items.objective_chores.len(),
        items.subjective.len()
    ));
    out.push_str(&format!("objective: {}, identical: {}\n", class.is_objective, class.is_identical));
    match (class.is_symmetric_bivalued, class.is_symmetric_trivalued) {
        (true, _) => out.push_str(&format!(
            "symmetric: bivalued (w={})\n",
            class.symmetric_weight.unwrap_or(1)
        )),
        (false, true) => out.push_str(&format!(
            "symmetric: trivalued (w={})\n",
            class.symmetric_weight.unwrap_or(1)
        )),
        _ => out.push_str("symmetric: no\n"),
    }
    match class.total {
        Some(t) => out.push_str(&format!("normalized: true (total={t})\n")),
        None => out.push_str("normalized: false\n"),
    }
    match (class.good_sum, class.chore_sum) {
        (Some(g), Some(c)) => out.push_str(&format!("type-normalized: true (g={g}, c={c})\n")),
        _ => out.push_str("type-normalized: false\n"),
    }
    Ok(out)
}

/// Pick and run the most specific applicable solver. Returns the algorithm
/// label together with the outcome. The dispatch intentionally skips the
/// EQ1+PO decision procedure for non-normalized instances: `auto` only runs
/// solvers with existence guarantees (falling back from the EQ1+PO decision
/// to the plain tri-valued solver when the decision is negative), and
/// non-normalized subjective instances have none.
pub fn auto_solve(
    inst: &Instance,
    tie: TieBreak,
) -> Result<(&'static str, Outcome, Vec<TransferRecord>), SolveError> {
    let class = inst.classify_valuations();
    let items = inst.classify_items();
    if class.is_identical {
        let alloc = solve_identical_eq1po(inst)?;
        return Ok(("identical", Outcome::Found(alloc), Vec::new()));
    }
    if class.is_symmetric_bivalued && class.is_normalized {
        let (alloc, log) = solve_bivalued_eqx_with(inst, tie)?;
        return Ok(("bivalued", Outcome::Found(alloc), log));
    }
    if class.is_symmetric_trivalued && class.is_normalized {
        if let Outcome::Found(alloc) = solve_trivalued_eq1po(inst)? {
            return Ok(("eq1po", Outcome::Found(alloc), Vec::new()));
        }
        let (alloc, log) = solve_trivalued_eq1_with(inst, tie)?;
        return Ok(("trivalued", Outcome::Found(alloc), log));
    }
    if inst.num_agents() == 2 && class.is_type_normalized {
        if !items.subjective.is_empty()
            && items.objective_goods.is_empty()
            && items.objective_chores.is_empty()
        {
            let alloc = solve_two_agent_subjective_eq(inst)?;
            return Ok(("two-agent-subjective", Outcome::Found(alloc), Vec::new()));
        }
        let alloc = solve_two_agent_type_normalized(inst)?;
        return Ok(("two-agent", Outcome::Found(alloc), Vec::new()));
    }
    if class.is_objective {
        let (alloc, _) = solve_objective_eq1_with(inst, tie)?;
        return Ok(("objective", Outcome::Found(alloc), Vec::new()));
    }
    Err(SolveError::not_applicable(
        "no solver covers non-normalized subjective instances; try `decide`",
    ))
}

fn cmd_solve(
    path: &Path,
    algorithm: AlgorithmArg,
    trace: bool,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<String, Failure> {
    let inst = load_instance(path)?;
    let tie = seed.map(TieBreak::Seeded).unwrap_or_default();
    let mut report = String::new();
    let mut transfer_log: Vec<TransferRecord> = Vec::new();
    let (label, outcome) = match algorithm {
        AlgorithmArg::Auto => {
            let (label, outcome, log) = auto_solve(&inst, tie)?;
            transfer_log = log;
            (label, outcome)
        }
        AlgorithmArg::Objective => {
            let (alloc, phase_trace) = solve_objective_eq1_with(&inst, tie)?;
            if trace {
                for step in &phase_trace {
                    report.push_str(&format!(
                        "step {}: item {} -> agent {} ({:?}, utility {} -> {})\n",
                        step.step,
                        step.item,
                        step.agent,
                        step.phase,
                        step.agent_utility_before,
                        step.agent_utility_after
                    ));
                }
            }
            ("objective", Outcome::Found(alloc))
        }
        AlgorithmArg::Bivalued => {
            let (alloc, log) = solve_bivalued_eqx_with(&inst, tie)?;
            transfer_log = log;
            ("bivalued", Outcome::Found(alloc))
        }
        AlgorithmArg::Trivalued => {
            let (alloc, log) = solve_trivalued_eq1_with(&inst, tie)?;
            transfer_log = log;
            ("trivalued", Outcome::Found(alloc))
        }
        AlgorithmArg::TwoAgent => {
            let items = inst.classify_items();
            if inst.num_items() > 0
                && items.objective_goods.is_empty()
                && items.objective_chores.is_empty()
            {
                ("two-agent-subjective", Outcome::Found(solve_two_agent_subjective_eq(&inst)?))
            } else {
                ("two-agent", Outcome::Found(solve_two_agent_type_normalized(&inst)?))
            }
        }
        AlgorithmArg::TwoAgentTripo => {
            ("two-agent-tripo", Outcome::Found(solve_two_agent_trivalued_eq1po(&inst)?))
        }
        AlgorithmArg::Identical => ("identical", Outcome::Found(solve_identical_eq1po(&inst)?)),
        AlgorithmArg::Eq1po => ("eq1po", solve_trivalued_eq1po(&inst)?),
    };

    if trace {
        for rec in &transfer_log {
            report.push_str(&format!(
                "transfer {}: item {} from agent {} to agent {} (values {:?}, gap {})\n",
                rec.kind, rec.item, rec.from, rec.to, rec.value_pair, rec.gap_before
            ));
        }
    }

    let alloc = match outcome {
        Outcome::Found(a) => a,
        Outcome::NonExistent => {
            return Err(Failure::new(EXIT_NONEXISTENT, "no EQ1+PO allocation exists"));
        }
    };

    report.push_str(&format!("algorithm: {label}\n"));
    report.push_str(&format!("utilities: {:?}\n", alloc.utilities()));
    let fr = fairness::report(&inst, &alloc);
    let yesno = |v: bool| if v { "yes" } else { "no" };
    report.push_str(&format!(
        "EQ: {}, EQ1: {}, EQX: {}, EQX+-: {}\n",
        yesno(fr.eq.holds),
        yesno(fr.eq1.holds),
        yesno(fr.eqx.holds),
        yesno(fr.eqx_nonzero_marginals.holds)
    ));
    report.push_str(&format!(
        "EF: {}, EF1: {}, EFX: {}\n",
        yesno(fr.ef.holds),
        yesno(fr.ef1.holds),
        yesno(fr.efx.holds)
    ));
    if let Ok(cert) = check_po_nonwasteful(&inst, &alloc) {
        report.push_str(&format!("PO (non-wasteful certificate): {}\n", yesno(cert)));
    }
    if let Some(out_path) = out {
        write_file(out_path, &allocation_to_string(&alloc, Some(label)))?;
        report.push_str(&format!("allocation written to {}\n", out_path.display()));
    }
    Ok(report)
}

/// Parse a '+'-joined property conjunction.
pub fn parse_predicate(text: &str) -> Result<Predicate, String> {
    let mut pred = Predicate::default();
    for token in text.split('+') {
        match token.trim().to_ascii_lowercase().as_str() {
            "eq" => pred.eq = true,
            "eq1" => pred.eq1 = true,
            "eqx" => pred.eqx_strict = true,
            "eqx-nonzero" | "eqx+-" => pred.eqx_nonzero = true,
            "ef" => pred.ef = true,
            "ef1" => pred.ef1 = true,
            "efx" => pred.efx = true,
            "po" => pred.po = true,
            "eq1po" => {
                pred.eq1 = true;
                pred.po = true;
            }
            "eqxpo" => {
                pred.eqx_strict = true;
                pred.po = true;
            }
            other => return Err(format!("unknown property `{other}`")),
        }
    }
    Ok(pred)
}

fn cmd_decide(
    path: &Path,
    property: &str,
    ceiling: Option<u64>,
    out: Option<&Path>,
    check: Option<&Path>,
) -> Result<String, Failure> {
    let inst = load_instance(path)?;
    let pred = parse_predicate(property).map_err(|e| Failure::new(EXIT_FAILURE, e))?;
    let ceiling = ceiling_or_env(ceiling);

    if let Some(alloc_path) = check {
        let text = std::fs::read_to_string(alloc_path).map_err(|e| {
            Failure::new(EXIT_FAILURE, format!("cannot read {}: {e}", alloc_path.display()))
        })?;
        let alloc = allocation_from_str(&text, &inst)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", alloc_path.display())))?;
        let mut holds = pred.matches_basic(&inst, &alloc);
        if holds && pred.po {
            holds = exact_po(&inst, &alloc, ceiling)?;
        }
        return if holds {
            Ok(format!("allocation satisfies {property}\n"))
        } else {
            Err(Failure::new(EXIT_NONEXISTENT, format!("allocation violates {property}")))
        };
    }

    let total = oracle::allocation_count(&inst);
    match exists_with(&inst, &pred, ceiling)? {
        Some(alloc) => {
            let mut report =
                format!("EXISTS ({} allocations scanned at most)\nutilities: {:?}\n", total, alloc.utilities());
            if let Some(out_path) = out {
                write_file(out_path, &allocation_to_string(&alloc, Some("decide")))?;
                report.push_str(&format!("witness written to {}\n", out_path.display()));
            }
            Ok(report)
        }
        None => Err(Failure::new(
            EXIT_NONEXISTENT,
            format!("NONE ({total} allocations scanned)"),
        )),
    }
}

fn cmd_optimize(
    path: &Path,
    objective: ObjectiveArg,
    method: MethodArg,
    stats: bool,
    ceiling: Option<u64>,
    out: Option<&Path>,
) -> Result<String, Failure> {
    let inst = load_instance(path)?;
    let mut report = String::new();
    let (alloc, value) = match method {
        MethodArg::Dp => {
            let dp_objective = match objective {
                ObjectiveArg::Uw => DpObjective::Utilitarian,
                ObjectiveArg::Ew => DpObjective::Egalitarian,
            };
            let run = dp_welfare_eqx(&inst, dp_objective, &DpConfig::default()).map_err(|e| {
                match e {
                    DpError::EstimateExceeded { .. }
                    | DpError::StateCeiling { .. }
                    | DpError::TooManyAgents { .. } => Failure::new(EXIT_CEILING, e.to_string()),
                    other => Failure::new(EXIT_FAILURE, other.to_string()),
                }
            })?;
            if stats {
                report.push_str(&format!(
                    "states per layer: {:?}\ntotal states: {} (bound {})\n",
                    run.stats.layer_counts, run.stats.total_states, run.stats.theoretical_bound
                ));
            }
            match run.outcome {
                DpOutcome::Found { allocation, value } => (allocation, value),
                DpOutcome::NoEqxAllocation => {
                    return Err(Failure::new(EXIT_NONEXISTENT, "no EQX allocation exists"));
                }
            }
        }
        MethodArg::Oracle => {
            let oracle_objective = match objective {
                ObjectiveArg::Uw => OracleObjective::Utilitarian,
                ObjectiveArg::Ew => OracleObjective::Egalitarian,
            };
            let found = optimize_within(
                &inst,
                &Predicate::eqx(),
                oracle_objective,
                ceiling_or_env(ceiling),
            )?;
            match found {
                Some((alloc, OptimumValue::Scalar(v))) => (alloc, v),
                Some((_, OptimumValue::Nash(_))) => unreachable!("scalar objective"),
                None => return Err(Failure::new(EXIT_NONEXISTENT, "no EQX allocation exists")),
            }
        }
    };
    match objective {
        ObjectiveArg::Uw => {
            let mean = value as f64 / inst.num_agents() as f64;
            report.push_str(&format!("optimal UW sum: {value} (mean {mean:.3})\n"));
        }
        ObjectiveArg::Ew => report.push_str(&format!("optimal EW: {value}\n")),
    }
    report.push_str(&format!("utilities: {:?}\n", alloc.utilities()));
    if let Some(out_path) = out {
        write_file(out_path, &allocation_to_string(&alloc, Some("optimize")))?;
        report.push_str(&format!("allocation written to {}\n", out_path.display()));
    }
    Ok(report)
}

fn cmd_gen(
    regime: RegimeArg,
    n: usize,
    m: usize,
    value_bound: i64,
    seed: u64,
    out: &Path,
    name: Option<String>,
) -> Result<String, Failure> {
    let spec = GeneratorSpec {
        regime: regime.into(),
        num_agents: n,
        num_items: m,
        value_bound,
        seed,
    };
    let inst = generate(&spec).map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;
    let name = name.unwrap_or_else(|| {
        format!("gen-{}-n{}-m{}-s{}", spec.regime.name(), n, m, seed)
    });
    let inst = inst.with_name(name);
    write_file(out, &instance_to_string(&inst, Some(spec.regime.name())))?;
    Ok(format!("instance written to {}\n", out.display()))
}

fn cmd_bench(suite: SuiteArg, csv: &Path, count: usize, seed: u64) -> Result<String, Failure> {
    use rayon::prelude::*;
    let rows: Vec<String> = (0..count)
        .into_par_iter()
        .map(|i| bench_row(suite, seed + i as u64))
        .collect();
    let mut text = String::from("regime,n,m,seed,algorithm,wall_ns,eq1,eqx,po_checked,result\n");
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    write_file(csv, &text)?;
    Ok(format!("{count} rows written to {}\n", csv.display()))
}

fn bench_row(suite: SuiteArg, seed: u64) -> String {
    let k = seed as usize;
    let (regime, n, m, algorithm) = match suite {
        SuiteArg::Objective => {
            (Regime::Objective, 2 + k % 4, 1 + k % 12, AlgorithmArg::Objective)
        }
        SuiteArg::Bivalued => (
            Regime::SymmetricBivaluedNormalized,
            2 + k % 4,
            2 + k % 11,
            AlgorithmArg::Bivalued,
        ),
        SuiteArg::Trivalued => (
            Regime::SymmetricTrivaluedNormalized,
            2 + k % 4,
            2 + k % 11,
            AlgorithmArg::Trivalued,
        ),
        SuiteArg::TwoAgent => (Regime::TwoAgentTypeNormalized, 2, 2 + k % 11, AlgorithmArg::TwoAgent),
        SuiteArg::Eq1po => (
            Regime::SymmetricTrivaluedNormalized,
            2 + k % 3,
            2 + k % 9,
            AlgorithmArg::Eq1po,
        ),
    };
    let spec = GeneratorSpec {
        regime,
        num_agents: n,
        num_items: m,
        value_bound: if matches!(suite, SuiteArg::Objective) { 9 } else { 1 },
        seed,
    };
    let inst = match generate(&spec) {
        Ok(inst) => inst,
        Err(e) => {
            return format!(
                "{},{},{},{},{:?},0,false,false,false,generator-error:{e}",
                regime.name(),
                n,
                m,
                seed,
                algorithm
            );
        }
    };
    let started = Instant::now();
    let outcome: Result<Outcome, SolveError> = match algorithm {
        AlgorithmArg::Objective => {
            solve_objective_eq1_with(&inst, TieBreak::Lexicographic)
                .map(|(a, _)| Outcome::Found(a))
        }
        AlgorithmArg::Bivalued => {
            solve_bivalued_eqx_with(&inst, TieBreak::Lexicographic).map(|(a, _)| Outcome::Found(a))
        }
        AlgorithmArg::Trivalued => {
            solve_trivalued_eq1_with(&inst, TieBreak::Lexicographic).map(|(a, _)| Outcome::Found(a))
        }
        AlgorithmArg::TwoAgent => solve_two_agent_type_normalized(&inst).map(Outcome::Found),
        AlgorithmArg::Eq1po => solve_trivalued_eq1po(&inst),
        _ => unreachable!("bench suites map to concrete algorithms"),
    };
    let wall_ns = started.elapsed().as_nanos();
    let algo_name = format!("{algorithm:?}").to_lowercase();
    match outcome {
        Ok(Outcome::Found(alloc)) => {
            let eq1 = fairness::check_eq1(&inst, &alloc).holds;
            let eqx = fairness::check_eqx(&inst, &alloc, ZeroPolicy::Strict).holds;
            let po_checked = matches!(suite, SuiteArg::Eq1po)
                && check_po_nonwasteful(&inst, &alloc) == Ok(true);
            format!(
                "{},{},{},{},{},{},{},{},{},ok",
                regime.name(),
                n,
                m,
                seed,
                algo_name,
                wall_ns,
                eq1,
                eqx,
                po_checked
            )
        }
        Ok(Outcome::NonExistent) => format!(
            "{},{},{},{},{},{},false,false,true,nonexistent",
            regime.name(),
            n,
            m,
            seed,
            algo_name,
            wall_ns
        ),
        Err(SolveError::NotApplicable(_)) => format!(
            "{},{},{},{},{},{},false,false,false,not-applicable",
            regime.name(),
            n,
            m,
            seed,
            algo_name,
            wall_ns
        ),
        Err(SolveError::Defect(_)) => format!(
            "{},{},{},{},{},{},false,false,false,defect",
            regime.name(),
            n,
            m,
            seed,
            algo_name,
            wall_ns
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::fixtures::fixture;

    #[test]
    fn predicate_parsing() {
        let p = parse_predicate("eq1+po").unwrap();
        assert!(p.eq1 && p.po && !p.eq);
        let q = parse_predicate("eq1po").unwrap();
        assert_eq!(p, q);
        assert!(parse_predicate("eqx-nonzero").unwrap().eqx_nonzero);
        assert!(parse_predicate("bogus").is_err());
    }

    #[test]
    fn auto_dispatch_precedence() {
        let identical = fixture("ex_notEQX").unwrap().instance;
        assert_eq!(auto_solve(&identical, TieBreak::Lexicographic).unwrap().0, "identical");

        let table2 = fixture("table2_leximin").unwrap().instance;
        assert_eq!(auto_solve(&table2, TieBreak::Lexicographic).unwrap().0, "bivalued");

        // Tri-valued normalized with an EQ1+PO allocation: decision wins.
        let tri = Instance::new(vec![vec![1, -1, 0], vec![0, -1, 1]]).unwrap();
        assert!(tri.classify_valuations().is_normalized);
        assert_eq!(auto_solve(&tri, TieBreak::Lexicographic).unwrap().0, "eq1po");

        // ex_5_1 is bi-valued normalized, so the EQX solver takes precedence
        // even though no EQ1+PO exists.
        let e51 = fixture("ex_5_1").unwrap().instance;
        assert_eq!(auto_solve(&e51, TieBreak::Lexicographic).unwrap().0, "bivalued");

        // Non-normalized subjective instances fall through every solver.
        let e11 = fixture("ex_1_1").unwrap().instance;
        let err = auto_solve(&e11, TieBreak::Lexicographic).unwrap_err();
        assert!(matches!(err, SolveError::NotApplicable(_)));
        assert!(err.to_string().contains("try `decide`"));
    }

    #[test]
    fn auto_falls_back_to_trivalued_eq1_when_no_eq1po_exists() {
        // Tri-valued normalized instance without an EQ1+PO allocation:
        // Example 5.1 scaled to include a zero so the bivalued arm is
        // skipped.
        let inst = Instance::new(vec![
            vec![1, 1, 1, -1, -1, -1, 0],
            vec![-1, -1, -1, 1, 1, 1, 0],
            vec![-1, -1, -1, 1, 1, 1, 0],
        ])
        .unwrap();
        assert!(inst.classify_valuations().is_symmetric_trivalued);
        assert!(inst.classify_valuations().is_normalized);
        let (label, outcome, _) = auto_solve(&inst, TieBreak::Lexicographic).unwrap();
        match crate::solver::eq1po::solve_trivalued_eq1po(&inst).unwrap() {
            Outcome::NonExistent => {
                assert_eq!(label, "trivalued");
                let alloc = outcome.allocation().unwrap();
                assert!(fairness::check_eq1(&inst, alloc).holds);
            }
            Outcome::Found(_) => assert_eq!(label, "eq1po"),
        }
    }
}
