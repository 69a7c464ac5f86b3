//! `swapsensus` command-line tool.
//!
//! Exit codes: 0 when solved or feasible, 1 when the answer is "no"
//! (infeasible, or an infinite distance), 2 on usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use swapsensus::hamming::{
    radius_consensus_ham_mixed, rs_consensus_ham_mixed, sum_consensus_ham,
    MixedRadiusQuery, MixedRadiusSumQuery,
};
use swapsensus::oracle::{self, brute_force, OpMix, OracleQuery, DEFAULT_CAP};
use swapsensus::pipeline::{radius_consensus_swap, rs_consensus_swap, sum_consensus_swap, PipelineRun};
use swapsensus::sh_radius::{radius_consensus_sh_with, ShRadiusOptions};
use swapsensus::sh_sum::{sum_consensus_sh, sum_consensus_sh_table, DpTable};
use swapsensus::{
    disentangle, hamming_distance, parse_instance, sh_distance, swap_string, BudgetedInstance,
    ConsensusAnswer, DisentangleOutcome, Instance, Metric, Word,
};

const CAP_VAR: &str = "SWAPSENSUS_ORACLE_CAP";

#[derive(Parser)]
#[command(name = "swapsensus", version, about = "Consensus strings under swap distances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Distance {
    Hamming,
    Swap,
    SwapHamming,
}

impl From<Distance> for Metric {
    fn from(d: Distance) -> Metric {
        match d {
            Distance::Hamming => Metric::Hamming,
            Distance::Swap => Metric::Swap,
            Distance::SwapHamming => Metric::SwapHamming,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Radius,
    Sum,
    RadiusSum,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Human,
    Json,
}

#[derive(clap::Args)]
struct Problem {
    #[arg(long)]
    distance: Distance,
    #[arg(long)]
    objective: ObjectiveArg,
    /// Radius bound.
    #[arg(short = 'd', long = "radius")]
    d: Option<usize>,
    /// Sum bound.
    #[arg(short = 'D', long = "sum-bound")]
    sum_bound: Option<usize>,
    /// File of per-word consumed budgets (whitespace separated, `#` comments).
    #[arg(long)]
    budgets: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Instance file: one word per line, `#` comments.
    input: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two words.
    Distance {
        #[arg(long)]
        metric: Distance,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        first: String,
        second: String,
    },
    /// Solve a consensus problem.
    Consensus {
        #[command(flatten)]
        problem: Problem,
        /// Print the swap pipeline trace (swap distance only).
        #[arg(long)]
        trace: bool,
        /// Print the dynamic programming table (swap-hamming sum only).
        #[arg(long)]
        dump_table: bool,
        /// Swap-hamming radius: retry the search from every input word.
        #[arg(long)]
        all_roots: bool,
    },
    /// Apply the forced swaps and print the result as JSON.
    Disentangle { input: PathBuf },
    /// Solve by enumerating every word over the instance alphabet.
    Oracle {
        #[command(flatten)]
        problem: Problem,
        /// Maximum number of candidate words (default 2000000, or the
        /// SWAPSENSUS_ORACLE_CAP environment variable).
        #[arg(long)]
        cap: Option<u128>,
    },
    /// Write a random instance around a planted center.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        sigma: usize,
        /// Operations applied to each word, at most.
        #[arg(long)]
        ops: usize,
        /// Use swaps only, so that all words match the center.
        #[arg(long)]
        swaps_only: bool,
        /// Instance file to write; the center goes to `<OUT>.json`.
        out: PathBuf,
    },
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("{}", path.display()))
}

fn read_budgets(path: &Path) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            let x = tok
                .parse()
                .with_context(|| format!("{}:{}: bad budget {tok:?}", path.display(), i + 1))?;
            out.push(x);
        }
    }
    Ok(out)
}

fn need_radius(p: &Problem) -> Result<usize> {
    p.d.with_context(|| "this objective needs a radius (-d)")
}

fn answer_json(a: &ConsensusAnswer) -> Value {
    serde_json::to_value(a).expect("answers serialize")
}

fn print_answer(a: &ConsensusAnswer, format: Format, extra: Vec<(&str, Value)>, human_extra: &str) {
    match format {
        Format::Json => {
            let mut v = answer_json(a);
            for (key, value) in extra {
                v[key] = value;
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Format::Human => {
            if !human_extra.is_empty() {
                print!("{human_extra}");
            }
            match &a.solution {
                Some(sol) => {
                    println!("feasible: {sol}");
                    let d: Vec<String> = a.per_string_distances.iter().map(|d| d.to_string()).collect();
                    println!("distances: {} (max {}, sum {})", d.join(" "), a.max_distance, a.sum_distance);
                }
                None => println!("infeasible: {}", a.reason.as_deref().unwrap_or("")),
            }
            let s = &a.stats;
            println!(
                "nodes {} / states {} / enumerated {} / {} us",
                s.nodes_expanded,
                s.dp_states,
                s.oracle_enumerated,
                s.elapsed.as_micros()
            );
        }
    }
}

fn exit_for(a: &ConsensusAnswer) -> ExitCode {
    if a.is_feasible() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn distance(metric: Distance, format: Format, first: &str, second: &str) -> Result<ExitCode> {
    let a: Word = first.parse().context("first word")?;
    let b: Word = second.parse().context("second word")?;
    let (cost, witness) = match metric {
        Distance::Hamming => {
            let d = hamming_distance(&a, &b)?;
            let pos: Vec<usize> = (0..a.len()).filter(|&p| a.at(p) != b.at(p)).map(|p| p + 1).collect();
            (Some(d), json!({ "substitutions": pos }))
        }
        Distance::Swap => match swap_string(&a, &b) {
            Ok(h) => (Some(h.popcount()), json!({ "swap_string": h.to_string() })),
            Err(swapsensus::Error::NotMatching { position }) => {
                (None, json!({ "not_matching_at": position }))
            }
            Err(e) => return Err(e.into()),
        },
        Distance::SwapHamming => {
            let (d, w) = sh_distance(&a, &b)?;
            (Some(d), serde_json::to_value(w)?)
        }
    };
    match format {
        Format::Json => {
            let v = json!({ "metric": Metric::from(metric), "distance": cost, "witness": witness });
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
        Format::Human => {
            match cost {
                Some(c) => println!("{c}"),
                None => println!("inf"),
            }
            println!("{witness}");
        }
    }
    Ok(if cost.is_some() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn render_trace(run: &PipelineRun) -> String {
    let mut out = String::new();
    if let Some(trace) = &run.trace {
        for step in trace.steps() {
            out.push_str(&format!("{}. {}\n", step.step, step.title));
            for row in step.rows {
                out.push_str(&format!("   {row}\n"));
            }
        }
    }
    out
}

fn trace_json(run: &PipelineRun) -> Value {
    match &run.trace {
        Some(t) => {
            let mut v = serde_json::to_value(t).expect("trace serializes");
            v["steps"] = serde_json::to_value(t.steps()).expect("steps serialize");
            v
        }
        None => Value::Null,
    }
}

fn consensus(p: Problem, trace: bool, dump_table: bool, all_roots: bool) -> Result<ExitCode> {
    if p.distance == Distance::SwapHamming && p.objective == ObjectiveArg::RadiusSum {
        bail!("unsupported: open problem (radius+sum consensus under the swap+hamming distance)");
    }
    if trace && p.distance != Distance::Swap {
        bail!("--trace is only available with --distance swap");
    }
    if dump_table && !(p.distance == Distance::SwapHamming && p.objective == ObjectiveArg::Sum) {
        bail!("--dump-table is only available with --distance swap-hamming --objective sum");
    }
    if p.budgets.is_some() && (p.distance != Distance::Hamming || p.objective == ObjectiveArg::Sum) {
        bail!("--budgets applies to --distance hamming with a radius or radius-sum objective");
    }
    let inst = read_instance(&p.input)?;
    let budgeted = match &p.budgets {
        Some(path) => BudgetedInstance::new(inst.clone(), read_budgets(path)?)
            .with_context(|| format!("{}", path.display()))?,
        None => BudgetedInstance::unbudgeted(inst.clone()),
    };

    let (answer, extra, human) = match p.distance {
        Distance::Swap => {
            let run = match p.objective {
                ObjectiveArg::Sum => sum_consensus_swap(&inst, p.sum_bound)?,
                ObjectiveArg::Radius => radius_consensus_swap(&inst, need_radius(&p)?)?,
                ObjectiveArg::RadiusSum => rs_consensus_swap(&inst, need_radius(&p)?, p.sum_bound)?,
            };
            let (extra, human) = if trace {
                (vec![("trace", trace_json(&run))], render_trace(&run))
            } else {
                (Vec::new(), String::new())
            };
            (run.answer, extra, human)
        }
        Distance::SwapHamming => match p.objective {
            ObjectiveArg::Sum if dump_table => {
                let (a, table): (ConsensusAnswer, DpTable) = sum_consensus_sh_table(&inst)?;
                let a = a.with_sum_bound(p.sum_bound);
                let table_json = serde_json::to_value(&table)?;
                (a, vec![("table", table_json)], table.render())
            }
            ObjectiveArg::Sum => (sum_consensus_sh(&inst, p.sum_bound)?, Vec::new(), String::new()),
            ObjectiveArg::Radius => {
                let opts = ShRadiusOptions { all_roots };
                let a = radius_consensus_sh_with(&inst, need_radius(&p)?, opts)?;
                (a, Vec::new(), String::new())
            }
            ObjectiveArg::RadiusSum => unreachable!("rejected above"),
        },
        Distance::Hamming => {
            let a = match p.objective {
                ObjectiveArg::Sum => sum_consensus_ham(&inst)?.with_sum_bound(p.sum_bound),
                ObjectiveArg::Radius => {
                    radius_consensus_ham_mixed(&MixedRadiusQuery::new(budgeted, need_radius(&p)?)?)?
                }
                ObjectiveArg::RadiusSum => rs_consensus_ham_mixed(&MixedRadiusSumQuery::new(
                    budgeted,
                    need_radius(&p)?,
                    p.sum_bound,
                )?)?,
            };
            (a, Vec::new(), String::new())
        }
    };
    print_answer(&answer, p.format, extra, &human);
    Ok(exit_for(&answer))
}

fn run_disentangle(input: &Path) -> Result<ExitCode> {
    let inst = read_instance(input)?;
    let (v, code) = match disentangle(&inst) {
        DisentangleOutcome::Disentangled(d) => {
            let mut v = serde_json::to_value(&d)?;
            v["status"] = json!("feasible");
            (v, ExitCode::SUCCESS)
        }
        DisentangleOutcome::Infeasible { column, reason } => (
            json!({ "status": "infeasible", "column": column, "reason": reason }),
            ExitCode::from(1),
        ),
    };
    println!("{}", serde_json::to_string_pretty(&v)?);
    Ok(code)
}

fn run_oracle(p: Problem, cap: Option<u128>) -> Result<ExitCode> {
    let cap = match cap {
        Some(c) => c,
        None => match std::env::var(CAP_VAR) {
            Ok(s) => s.trim().parse().with_context(|| format!("{CAP_VAR}={s:?} is not a number"))?,
            Err(_) => DEFAULT_CAP,
        },
    };
    let objective = match p.objective {
        ObjectiveArg::Sum => oracle::Objective::Sum,
        ObjectiveArg::Radius => oracle::Objective::Radius { d: need_radius(&p)? },
        ObjectiveArg::RadiusSum => oracle::Objective::RadiusSum {
            d: need_radius(&p)?,
            sum_bound: p.sum_bound,
        },
    };
    let inst = read_instance(&p.input)?;
    let mut q = OracleQuery::new(inst, p.distance.into(), objective).with_cap(cap);
    if let Some(path) = &p.budgets {
        q = q.with_budgets(read_budgets(path)?);
    }
    let mut a = brute_force(&q)?;
    if p.objective == ObjectiveArg::Sum {
        a = a.with_sum_bound(p.sum_bound);
    }
    print_answer(&a, p.format, Vec::new(), "");
    Ok(exit_for(&a))
}

#[allow(clippy::too_many_arguments)]
fn gen(seed: u64, n: usize, k: usize, sigma: usize, ops: usize, swaps_only: bool, out: &Path) -> Result<ExitCode> {
    if n == 0 || k == 0 || sigma < 2 {
        bail!("need --n >= 1, --k >= 1 and --sigma >= 2");
    }
    let mix = if swaps_only { OpMix::SwapsOnly } else { OpMix::Mixed };
    let planted = oracle::gen_planted_with(seed, n, k, sigma, ops, mix);
    fs::write(out, swapsensus::format_instance(&planted.instance))
        .with_context(|| format!("cannot write {}", out.display()))?;
    let mut sidecar = out.as_os_str().to_owned();
    sidecar.push(".json");
    let meta = json!({
        "seed": seed,
        "n": n,
        "k": k,
        "sigma": sigma,
        "ops_budget": ops,
        "mix": mix,
        "center": planted.center,
        "ops": planted.ops,
    });
    fs::write(&sidecar, serde_json::to_string_pretty(&meta)? + "\n")
        .with_context(|| format!("cannot write {}", Path::new(&sidecar).display()))?;
    println!("wrote {} and {}", out.display(), Path::new(&sidecar).display());
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Distance { metric, format, first, second } => distance(metric, format, &first, &second),
        Command::Consensus { problem, trace, dump_table, all_roots } => consensus(problem, trace, dump_table, all_roots),
        Command::Disentangle { input } => run_disentangle(&input),
        Command::Oracle { problem, cap } => run_oracle(problem, cap),
        Command::Gen { seed, n, k, sigma, ops, swaps_only, out } => gen(seed, n, k, sigma, ops, swaps_only, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
