//! `normortho`: verify orthogonality facts about normal matrices over the
//! two-element tropical semiring.
//!
//! Every invocation writes one JSON report to stdout and a one-line summary
//! to stderr. Exit codes: 0 success, 1 a requested check failed, 2 usage or
//! input error, 3 a search hit its node or time limit.

mod input;

use std::io::Write;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use normortho::border::{border_orthogonality_condition, reduce_size, self_ortho_border_condition};
use normortho::families::{mm_characterize, mm_classify, mm_pair, sufficient_condition};
use normortho::graphs::{self, GraphKind};
use normortho::ortho::{orth_set, row_type};
use normortho::search::{
    check_theorem_theta, for_each_orthogonal_pair, theta_bounded, theta_delta_by_weight,
    theta_delta_exhaustive, theta_exhaustive, MAX_DELTA_EXHAUSTIVE_ORDER, MAX_EXHAUSTIVE_ORDER,
};
use normortho::{
    indicator, is_orthogonal, sigma, BorderedBlocks, FamilySpec, MmVariant, NormalMatrix,
    SearchLimits, VertexSet,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::UsageError;

const THREADS_ENV: &str = "NORMORTHO_THREADS";

#[derive(Parser)]
#[command(
    name = "normortho",
    version,
    about = "Orthogonality of normal matrices over the semiring {0, -1}",
    after_help = "MATRICES:\n\
                  \n  A matrix argument is either a file of '0'/'-' rows or an inline\
                  \n  matrix with rows separated by '/' or ',', e.g. 0-0/00-/-00.\
                  \n  Indices in flags and output are 1-based.\
                  \n\nEXAMPLES:\n\
                  \n  normortho mul 0-/00 00/-0 --expect-zero\
                  \n  normortho theta --n 4\
                  \n  normortho theta --n 5 --mode bounded --budget 13\
                  \n  normortho mm --n 6 --k 4 --m 3\
                  \n  normortho graph --kind wnl --n 4"
)]
struct Cli {
    #[command(flatten)]
    run: RunOptions,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunOptions {
    /// Worker threads [default: $NORMORTHO_THREADS, else all cores]
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Shuffle the order in which search work is dispatched; results are unchanged
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Give up after this many search nodes (exit 3)
    #[arg(long, global = true)]
    node_limit: Option<u64>,
    /// Give up after this many seconds (exit 3)
    #[arg(long, global = true)]
    time_limit: Option<f64>,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Products A⊙B and B⊙A
    Mul {
        a: String,
        b: String,
        /// Exit 1 unless A⊙B is the all-zero matrix
        #[arg(long)]
        expect_zero: bool,
    },
    /// Indicator matrix of a pair with every zero classified
    Indicator { a: String, b: String },
    /// Family membership of a pair: 𝔐_km case, sufficient conditions
    Classify { a: String, b: String },
    /// All matrices orthogonal to A (order <= 5)
    OrthSet {
        a: String,
        /// Search domain
        #[arg(long, value_enum, default_value_t = Domain::All)]
        domain: Domain,
    },
    /// Generic matrix of a family such as "V:1,2&Z:2,1"
    Generic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        set: String,
    },
    /// Generic pairs of 𝔐_km
    Mm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Case 0 to 3; all four when omitted
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=3))]
        variant: Option<u8>,
    },
    /// Least Σ(A,B) over orthogonal pairs
    Theta {
        #[arg(long)]
        n: usize,
        /// exhaustive for n <= 4, bounded otherwise
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Bounded mode: prove nothing exists at or below this Σ (default 4n-7)
        #[arg(long)]
        budget: Option<usize>,
        /// Bounded mode: do not restrict to canonical forms
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Least ν(A) - n over self-orthogonal matrices
    ThetaDelta {
        #[arg(long)]
        n: usize,
        /// full for n <= 5, weight otherwise
        #[arg(long, value_enum)]
        engine: Option<DeltaEngine>,
    },
    /// Every orthogonal pair with Σ <= max-sigma
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_sigma: usize,
        /// Report only the number of pairs
        #[arg(long)]
        count_only: bool,
    },
    /// Check the minimal-pair characterization at n = 2, 3, 4 or 7..=10
    CheckTheorem {
        #[arg(long)]
        n: usize,
    },
    /// Split matrices into inner block and border; check the bordering conditions
    Border { a: String, b: Option<String> },
    /// Drop index i when its row and column have no off-diagonal zeros
    Reduce {
        a: String,
        #[arg(long)]
        index: usize,
    },
    /// Statistics of the ORTHO, VNL or WNL graph (n <= 4)
    Graph {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Statistics (the default when --edges is absent)
        #[arg(long)]
        stats: bool,
        /// Include the vertex and edge lists
        #[arg(long)]
        edges: bool,
    },
    /// Distance between two vertices of a graph
    Dist {
        #[arg(long, value_enum)]
        kind: Kind,
        a: String,
        b: String,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Domain {
    All,
    Ortho,
    Vnl,
    Wnl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    Exhaustive,
    Bounded,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum DeltaEngine {
    Full,
    Weight,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    Ortho,
    Vnl,
    Wnl,
}

impl From<Kind> for GraphKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Ortho => GraphKind::Ortho,
            Kind::Vnl => GraphKind::Vnl,
            Kind::Wnl => GraphKind::Wnl,
        }
    }
}

impl From<Domain> for VertexSet {
    fn from(d: Domain) -> Self {
        match d {
            Domain::All => VertexSet::AllNormal,
            Domain::Ortho => VertexSet::Ortho,
            Domain::Vnl => VertexSet::Vnl,
            Domain::Wnl => VertexSet::Wnl,
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a Command,
    status: &'static str,
    result: Value,
}

/// What a subcommand produced: the payload, whether its check held, and a
/// one-line summary.
struct Outcome {
    result: Value,
    passed: bool,
    summary: String,
}

impl Outcome {
    fn ok(result: Value, summary: String) -> Self {
        Outcome {
            result,
            passed: true,
            summary,
        }
    }
}

fn limits(run: &RunOptions) -> Result<SearchLimits> {
    let time_limit = match run.time_limit {
        Some(s) if !(s.is_finite() && s >= 0.0) => {
            bail!(UsageError(format!(
                "--time-limit must be a non-negative number, got {s}"
            )))
        }
        s => s.map(Duration::from_secs_f64),
    };
    Ok(SearchLimits {
        node_limit: run.node_limit,
        time_limit,
        threads: run.threads,
        seed: run.seed,
        ..SearchLimits::default()
    })
}

/// The flag, else the environment variable.
fn threads(flag: Option<usize>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse() {
            Ok(t) => Ok(Some(t)),
            Err(_) => bail!(UsageError(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn check_order(a: &NormalMatrix, b: &NormalMatrix) -> Result<()> {
    if a.order() != b.order() {
        bail!(UsageError(format!(
            "orders differ: {} vs {}",
            a.order(),
            b.order()
        )));
    }
    Ok(())
}

fn pair(a: &str, b: &str) -> Result<(NormalMatrix, NormalMatrix)> {
    let (a, b) = (input::matrix(a)?, input::matrix(b)?);
    check_order(&a, &b)?;
    Ok((a, b))
}

fn execute(command: &Command, limits: &SearchLimits) -> Result<Outcome> {
    Ok(match command {
        Command::Mul { a, b, expect_zero } => {
            let (a, b) = pair(a, b)?;
            let ab = a.odot(&b)?;
            let ba = b.odot(&a)?;
            let passed = !expect_zero || ab.is_all_zero();
            Outcome {
                summary: format!(
                    "A⊙B {} zero, B⊙A {} zero",
                    if ab.is_all_zero() { "is" } else { "is not" },
                    if ba.is_all_zero() { "is" } else { "is not" }
                ),
                result: json!({
                    "ab": ab,
                    "ba": ba,
                    "ab_zero": ab.is_all_zero(),
                    "orthogonal": ab.is_all_zero() && ba.is_all_zero(),
                }),
                passed,
            }
        }
        Command::Indicator { a, b } => {
            let (a, b) = pair(a, b)?;
            let report = indicator(&a, &b)?;
            let rows = (0..a.order())
                .map(|i| row_type(&report, i))
                .collect::<normortho::Result<Vec<_>>>()?;
            let summary = format!(
                "orthogonal={} prop={} cost={} gift={} duplicates={}",
                report.is_orthogonal(),
                report.prop_count,
                report.cost_count,
                report.gift_count,
                report.duplicate_count
            );
            let mut result = serde_json::to_value(&report)?;
            result["row_types"] = serde_json::to_value(rows)?;
            Outcome::ok(result, summary)
        }
        Command::Classify { a, b } => {
            let (a, b) = pair(a, b)?;
            let n = a.order();
            let case = mm_classify(&a, &b)?;
            let characterized = mm_characterize(&indicator(&a, &b)?).map(|(k, m)| [k + 1, m + 1]);
            let mut conditions = Vec::new();
            for k in 0..n {
                for m in 0..n {
                    for c in 0..4u8 {
                        if sufficient_condition(c, &a, &b, k, m) {
                            conditions.push(json!({"condition": c, "k": k + 1, "m": m + 1}));
                        }
                    }
                }
            }
            Outcome::ok(
                json!({
                    "orthogonal": is_orthogonal(&a, &b)?,
                    "sigma": sigma(&a, &b)?,
                    "mm_case": case,
                    "characterized": characterized,
                    "sufficient_conditions": conditions,
                }),
                match case {
                    Some(v) => format!(
                        "family case k={} m={} variant {}",
                        v.k + 1,
                        v.m + 1,
                        v.variant
                    ),
                    None => "not a family pair".to_string(),
                },
            )
        }
        Command::OrthSet { a, domain } => {
            let a = input::matrix(a)?;
            let partners = orth_set(&a, (*domain).into())?;
            Outcome::ok(
                json!({"count": partners.len(), "matrices": partners}),
                format!("{} orthogonal partners", partners.len()),
            )
        }
        Command::Generic { n, set } => {
            let spec = FamilySpec::parse(*n, set)?;
            let g = spec.generic();
            Outcome::ok(
                json!({"set": spec, "generic": g, "nu": g.nu()}),
                format!("generic matrix with nu = {}", g.nu()),
            )
        }
        Command::Mm { n, k, m, variant } => {
            let (k, m) = (input::index(*k, *n, "k")?, input::index(*m, *n, "m")?);
            let variants: Vec<u8> = variant.map_or_else(|| (0..4).collect(), |v| vec![v]);
            let mut cases = Vec::new();
            for variant in variants {
                let case = MmVariant { k, m, variant };
                let (a, b) = mm_pair(case, *n)?;
                let (fa, fb) = case.specs(*n)?;
                let report = indicator(&a, &b)?;
                cases.push(json!({
                    "case": case,
                    "family_a": fa,
                    "family_b": fb,
                    "a": a,
                    "b": b,
                    "orthogonal": report.is_orthogonal(),
                    "sigma": sigma(&a, &b)?,
                    "prop": report.prop_count,
                    "gift": report.gift_count,
                }));
            }
            let summary = format!("{} generic pair(s)", cases.len());
            Outcome::ok(json!({"n": n, "cases": cases}), summary)
        }
        Command::Theta {
            n,
            mode,
            budget,
            no_symmetry,
        } => {
            let mode = mode.unwrap_or(if *n <= MAX_EXHAUSTIVE_ORDER {
                Mode::Exhaustive
            } else {
                Mode::Bounded
            });
            let limits = SearchLimits {
                symmetry: !no_symmetry,
                ..*limits
            };
            let cert = match mode {
                Mode::Exhaustive => {
                    if budget.is_some() {
                        bail!(UsageError(
                            "--budget applies to --mode bounded only".to_string()
                        ));
                    }
                    theta_exhaustive(*n, &limits)?
                }
                Mode::Bounded => {
                    let budget = budget.unwrap_or((4 * n).saturating_sub(7));
                    theta_bounded(*n, budget, &limits)?
                }
            };
            let summary = format!(
                "theta_{n} = {} ({:?}, {} nodes)",
                cert.value, cert.completeness, cert.search_stats.nodes
            );
            Outcome::ok(serde_json::to_value(&cert)?, summary)
        }
        Command::ThetaDelta { n, engine } => {
            let engine = engine.unwrap_or(if *n <= MAX_DELTA_EXHAUSTIVE_ORDER {
                DeltaEngine::Full
            } else {
                DeltaEngine::Weight
            });
            let cert = match engine {
                DeltaEngine::Full => theta_delta_exhaustive(*n, limits)?,
                DeltaEngine::Weight => theta_delta_by_weight(*n, limits)?,
            };
            let summary = format!(
                "theta_delta_{n} = {} with {} minimizers",
                cert.value, cert.witness_total
            );
            Outcome::ok(serde_json::to_value(&cert)?, summary)
        }
        Command::Enumerate {
            n,
            max_sigma,
            count_only,
        } => {
            let mut count = 0u64;
            let mut pairs = Vec::new();
            let stats = for_each_orthogonal_pair(*n, *max_sigma, limits, |a, b| {
                count += 1;
                if !count_only {
                    pairs.push(json!({"a": a, "b": b, "sigma": sigma(a, b).unwrap_or_default()}));
                }
            })?;
            let mut result =
                json!({"n": n, "max_sigma": max_sigma, "count": count, "nodes": stats.nodes});
            if !count_only {
                result["pairs"] = Value::Array(pairs);
            }
            Outcome::ok(
                result,
                format!("{count} orthogonal pairs with sigma <= {max_sigma}"),
            )
        }
        Command::CheckTheorem { n } => {
            let report = check_theorem_theta(*n, limits)?;
            Outcome {
                summary: format!(
                    "{:?} check at n={n}: verified={}",
                    report.check, report.verified
                ),
                passed: report.verified,
                result: serde_json::to_value(&report)?,
            }
        }
        Command::Border { a, b } => border(a, b.as_deref())?,
        Command::Reduce { a, index } => {
            let a = input::matrix(a)?;
            let i = input::index(*index, a.order(), "index")?;
            let reduced = reduce_size(&a, i)?;
            let mut result = json!({"reduced": reduced});
            if a.order() <= normortho::ortho::MAX_ENUMERATION_ORDER {
                let before = orth_set(&a, VertexSet::AllNormal)?.len();
                let after = orth_set(&reduced, VertexSet::AllNormal)?.len();
                result["orth_count"] = json!(before);
                result["reduced_orth_count"] = json!(after);
            }
            Outcome::ok(result, format!("reduced to order {}", reduced.order()))
        }
        Command::Graph {
            kind,
            n,
            stats: _,
            edges,
        } => {
            let g = graphs::build((*kind).into(), *n)?;
            let stats = g.stats();
            let mut result = serde_json::to_value(stats)?;
            if *edges {
                result["edge_list"] = serde_json::to_value(g.edge_list())?;
            }
            let summary = format!(
                "{} n={}: |V|={} |E|={} loops={} girth={} diameter={}",
                stats.kind,
                stats.n,
                stats.vertices,
                stats.edges,
                stats.loops,
                stats.girth,
                stats.diameter
            );
            Outcome::ok(result, summary)
        }
        Command::Dist { kind, a, b } => {
            let (a, b) = pair(a, b)?;
            let g = graphs::build((*kind).into(), a.order())?;
            let d = g.dist(&a, &b)?;
            Outcome::ok(json!({"distance": d}), format!("distance {d}"))
        }
    })
}

fn border(a: &str, b: Option<&str>) -> Result<Outcome> {
    let a = input::matrix(a)?;
    if a.order() < 2 {
        bail!(UsageError("bordering needs order >= 2".to_string()));
    }
    let x = BorderedBlocks::split(&a)?;
    match b {
        None => {
            let applies = normortho::is_self_orthogonal(&x.inner);
            let condition = if applies {
                Some(self_ortho_border_condition(&x)?)
            } else {
                None
            };
            let result = json!({
                "blocks": x,
                "inner_self_orthogonal": applies,
                "condition": condition,
                "self_orthogonal": normortho::is_self_orthogonal(&a),
            });
            let summary = match condition {
                Some(c) => format!("bordering condition {c}"),
                None => "inner block is not self-orthogonal".to_string(),
            };
            Ok(Outcome::ok(result, summary))
        }
        Some(b) => {
            let b = input::matrix(b)?;
            check_order(&a, &b)?;
            let y = BorderedBlocks::split(&b)?;
            let applies = is_orthogonal(&x.inner, &y.inner)?;
            let condition = if applies {
                Some(border_orthogonality_condition(&x, &y)?)
            } else {
                None
            };
            let result = json!({
                "blocks": [x, y],
                "inner_orthogonal": applies,
                "condition": condition,
                "orthogonal": is_orthogonal(&a, &b)?,
            });
            let summary = match condition {
                Some(c) => format!("bordering condition {c}"),
                None => "inner blocks are not orthogonal".to_string(),
            };
            Ok(Outcome::ok(result, summary))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<normortho::Error>() {
            return match e {
                normortho::Error::Inconclusive(_) => 3,
                _ => 2,
            };
        }
    }
    2
}

/// Writes the report to stdout. A closed pipe is not an error.
fn emit(report: &Report) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, report)?;
    match writeln!(out) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<Outcome> {
        let limits = limits(&cli.run)?;
        if let Some(t) = threads(cli.run.threads)? {
            if t == 0 {
                bail!(UsageError("--threads must be at least 1".to_string()));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global()?;
        }
        execute(&cli.command, &limits)
    };
    match run() {
        Ok(outcome) => {
            let report = Report {
                command: &cli.command,
                status: if outcome.passed { "ok" } else { "failed" },
                result: outcome.result,
            };
            if let Err(e) = emit(&report) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            eprintln!("{}", outcome.summary);
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(err) => {
            let code = exit_code(&err);
            if code == 3 {
                let report = Report {
                    command: &cli.command,
                    status: "inconclusive",
                    result: json!({"error": err.to_string()}),
                };
                let _ = emit(&report);
            }
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}
