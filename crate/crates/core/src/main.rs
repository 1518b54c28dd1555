//! Command-line workbench: arena generation, parity solving, lifting,
//! equilibrium checking, skeleton synthesis, probes, and the memory-bound
//! calculator. All results go to stdout as JSON; diagnostics go to stderr.
//! Exit codes: 0 for success/PASS, 2 for a FAIL verdict, 1 for errors.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use chromem::arena::{Arena, NodeId, Player};
use chromem::equilibrium::check_equilibrium;
use chromem::lifting::{compute_g, lift_with_skeleton, payoff_oracle, positional_lift};
use chromem::memory::{MemorySkeleton, Strategy};
use chromem::parity::{self, Convention, ParityGame};
use chromem::payoffs::Payoff;
use chromem::probes::{
    probe_am_lower, probe_fig2_lower, probe_mk_equilibrium, probe_mn_sufficiency, synth_mk,
    synth_mn, ProbeReport,
};

#[derive(Parser)]
#[command(name = "chromem", about = "Games on edge-colored graphs with chromatic memory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Max,
    Min,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Even,
    Odd,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Convention {
        match c {
            ConventionArg::Even => Convention::Even,
            ConventionArg::Odd => Convention::Odd,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random arena as JSON.
    Gen(GenArgs),
    /// Solve a parity game (arena JSON with per-edge priorities).
    SolveParity(SolveParityArgs),
    /// Lift one-player equilibria to a two-player equilibrium.
    Lift(LiftArgs),
    /// Check whether a strategy pair is an equilibrium.
    CheckEq(CheckEqArgs),
    /// Synthesize a named memory skeleton.
    SynthSkeleton(SynthArgs),
    /// Run a desk-scale probe; exit 0 on PASS, 2 on FAIL.
    Probe(ProbeArgs),
    /// Evaluate the memory-bound function g(n) from a tabulated f.
    ComputeG(ComputeGArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Maximum number of nodes.
    #[arg(long)]
    nodes: usize,
    /// Comma-separated color alphabet.
    #[arg(long, default_value = "-1,+1")]
    alphabet: String,
    #[arg(long)]
    seed: u64,
    /// Make this side choice-free (one-player arena).
    #[arg(long, value_enum)]
    one_player: Option<SideArg>,
}

#[derive(Args)]
struct SolveParityArgs {
    /// Arena JSON file; every edge must carry a "priority" field.
    #[arg(long)]
    game: String,
    #[arg(long, value_enum, default_value = "even")]
    convention: ConventionArg,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    arena: String,
    /// Payoff descriptor: psi | mean | parity-even | parity-odd | JSON.
    #[arg(long)]
    payoff: String,
    /// Memory skeleton JSON file; with it, the output pair is chromatic.
    #[arg(long)]
    skeleton: Option<String>,
}

#[derive(Args)]
struct CheckEqArgs {
    #[arg(long)]
    arena: String,
    #[arg(long)]
    payoff: String,
    /// Max strategy JSON file.
    #[arg(long)]
    sigma: String,
    /// Min strategy JSON file.
    #[arg(long)]
    tau: String,
    /// "all" or a comma-separated list of node ids.
    #[arg(long, default_value = "all")]
    starts: String,
}

#[derive(Args)]
struct SynthArgs {
    /// Skeleton family: mn (bounded counter) or mk (run-length tracker).
    #[arg(value_parser = ["mn", "mk"])]
    kind: String,
    /// Counter bound (mn).
    #[arg(long)]
    n: Option<usize>,
    /// Run-length bound (mk).
    #[arg(long)]
    k: Option<u64>,
    /// Comma-separated accepting run lengths (mk).
    #[arg(long)]
    t: Option<String>,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(subcommand)]
    which: ProbeCommand,
}

#[derive(Subcommand)]
enum ProbeCommand {
    /// Two-node counter game lower bound.
    Fig2 {
        #[arg(long, default_value_t = 2)]
        s_max: usize,
    },
    /// Branching arena chromatic lower bound.
    Am {
        #[arg(long)]
        m: usize,
    },
    /// Bounded-counter skeleton sufficiency on random one-player arenas.
    Mn {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Run-length skeleton equilibria on random two-player arenas.
    Mk {
        /// Comma-separated accepting run lengths.
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args)]
struct ComputeGArgs {
    /// Comma-separated values f(1), f(2), ... or a path to a JSON array.
    #[arg(long)]
    table: String,
    #[arg(long)]
    n: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> chromem::Result<ExitCode> {
    match cli.command {
        Command::Gen(args) => {
            let alphabet: Vec<&str> = args.alphabet.split(',').collect();
            let side = args.one_player.map(|s| match s {
                SideArg::Max => Player::Max,
                SideArg::Min => Player::Min,
            });
            let a = Arena::random(args.nodes, &alphabet, args.seed, side);
            println!("{}", serde_json::to_string_pretty(&a.to_json())?);
            Ok(ExitCode::SUCCESS)
        }
        Command::SolveParity(args) => {
            let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(&args.game)?)?;
            let (arena, priorities) = Arena::from_json(&value)?;
            let priority = priorities.ok_or_else(|| {
                chromem::Error::BadParameter("every edge needs a priority".into())
            })?;
            let g = ParityGame { arena, priority, max_wins: args.convention.into() };
            let sol = parity::solve(&g);
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "winner": sol.winner,
                    "max_strategy": sol.max_strategy,
                    "min_strategy": sol.min_strategy,
                }))?
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Lift(args) => {
            let value: serde_json::Value =
                serde_json::from_str(&fs::read_to_string(&args.arena)?)?;
            let (arena, _) = Arena::from_json(&value)?;
            let payoff = Payoff::from_descriptor(&args.payoff)?;
            let oracle = payoff_oracle(payoff.clone());
            let out = match args.skeleton {
                Some(path) => {
                    let m: MemorySkeleton =
                        serde_json::from_str(&fs::read_to_string(&path)?)?;
                    let (sigma, tau, trace) = lift_with_skeleton(&arena, &m, &payoff, oracle)?;
                    json!({
                        "sigma": Strategy::Chromatic(sigma),
                        "tau": Strategy::Chromatic(tau),
                        "trace": trace,
                    })
                }
                None => {
                    let (sigma, tau, trace) = positional_lift(&arena, &payoff, oracle, None)?;
                    json!({
                        "sigma": Strategy::Positional(sigma),
                        "tau": Strategy::Positional(tau),
                        "trace": trace,
                    })
                }
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckEq(args) => {
            let value: serde_json::Value =
                serde_json::from_str(&fs::read_to_string(&args.arena)?)?;
            let (arena, _) = Arena::from_json(&value)?;
            let payoff = Payoff::from_descriptor(&args.payoff)?;
            let sigma: Strategy = serde_json::from_str(&fs::read_to_string(&args.sigma)?)?;
            let tau: Strategy = serde_json::from_str(&fs::read_to_string(&args.tau)?)?;
            let starts: Vec<NodeId> = if args.starts == "all" {
                arena.nodes().collect()
            } else {
                args.starts
                    .split(',')
                    .map(|s| {
                        s.trim().parse().map_err(|_| {
                            chromem::Error::BadParameter(format!("bad start node {s:?}"))
                        })
                    })
                    .collect::<chromem::Result<_>>()?
            };
            let report = check_equilibrium(&arena, &payoff, &sigma, &tau, &starts)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if report.is_equilibrium() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::SynthSkeleton(args) => {
            let skel = match args.kind.as_str() {
                "mn" => {
                    let n = args.n.ok_or_else(|| {
                        chromem::Error::BadParameter("mn requires --n".into())
                    })?;
                    synth_mn(n)
                }
                _ => {
                    let k = args.k.ok_or_else(|| {
                        chromem::Error::BadParameter("mk requires --k".into())
                    })?;
                    let t = parse_u64_list(&args.t.ok_or_else(|| {
                        chromem::Error::BadParameter("mk requires --t".into())
                    })?)?;
                    synth_mk(k, &t)
                }
            };
            println!("{}", serde_json::to_string_pretty(&skel)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Probe(args) => {
            let report = match args.which {
                ProbeCommand::Fig2 { s_max } => probe_fig2_lower(s_max)?,
                ProbeCommand::Am { m } => probe_am_lower(m)?,
                ProbeCommand::Mn { n, trials, seed } => probe_mn_sufficiency(n, trials, seed)?,
                ProbeCommand::Mk { t, trials, seed } => {
                    let t = parse_u64_list(&t)?;
                    probe_mk_equilibrium(&t, trials, seed)?
                }
            };
            emit_report(&report)
        }
        Command::ComputeG(args) => {
            let table = if args.table.ends_with(".json") {
                serde_json::from_str(&fs::read_to_string(&args.table)?)?
            } else {
                parse_u64_list(&args.table)?
            };
            let g = compute_g(&table, args.n);
            println!("{}", serde_json::to_string_pretty(&json!({ "n": args.n, "g": g }))?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_u64_list(s: &str) -> chromem::Result<Vec<u64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| chromem::Error::BadParameter(format!("bad integer {x:?}")))
        })
        .collect()
}

fn emit_report(report: &ProbeReport) -> chromem::Result<ExitCode> {
    println!("{}", serde_json::to_string_pretty(report)?);
    eprintln!(
        "{}: {} ({} trials, {} ms)",
        report.probe,
        report.verdict,
        report.trials.len(),
        report.elapsed_ms
    );
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
