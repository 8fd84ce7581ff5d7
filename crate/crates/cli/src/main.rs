//! `esp`: stability analysis of preference configurations from the shell.

mod commands;
mod error;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use esp_core::rational;
use esp_core::verdict::Order;
use esp_core::{Budget, Q};
use sha2::{Digest, Sha256};

use crate::commands::Outcome;
use crate::error::{CliError, CliResult};
use crate::input::{Loaded, Source};
use crate::report::{Format, Node, Report};

#[derive(Parser, Debug)]
#[command(name = "esp", version, about = "Multi-mutation stability of preference configurations")]
struct Cli {
    /// Report rendering.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Analysis {
    /// Game file (JSON).
    game: PathBuf,
    /// Configuration file (JSON).
    config: PathBuf,
    /// Mutation order: a positive integer or `inf`.
    #[arg(long, value_parser = parse_order)]
    order: Order,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Equilibrium, frontier and dominance facts for every pure profile.
    Analyze { game: PathBuf },
    /// Cooperative vertices and frontier membership of pure payoff points.
    Frontier { game: PathBuf },
    /// Stability verdict with a certificate or a verified witness.
    Certify {
        #[arg(long, conflicts_with = "multi", required_unless_present = "multi")]
        single: bool,
        #[arg(long)]
        multi: bool,
        #[command(flatten)]
        run: Analysis,
    },
    /// The full entrant construction refuting stability.
    Invade(Analysis),
    /// Closed-form classification of the symmetric 2x2 game `A B / C D`.
    Classify2x2 {
        #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_hyphen_values = true)]
        payoffs: Vec<String>,
    },
    /// Floating-point re-evaluation of a witness's fitness differences.
    Oracle {
        #[command(flatten)]
        run: Analysis,
        #[arg(long, default_value = "1/1000")]
        eps: String,
    },
}

fn parse_order(s: &str) -> Result<Order, String> {
    match s.trim() {
        "inf" | "infinite" | "∞" => Ok(Order::Infinite),
        t => match t.parse::<u32>() {
            Ok(r) if r >= 1 => Ok(Order::Finite(r)),
            _ => Err(format!("`{t}` is not a positive order or `inf`")),
        },
    }
}

fn budget_from_env() -> CliResult<Budget> {
    match std::env::var("ESP_BUDGET") {
        Err(_) => Ok(Budget::default()),
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(k) if k >= 1 => Ok(Budget::scaled(k)),
            _ => Err(CliError::Input(format!("ESP_BUDGET=`{v}` must be a positive integer scale factor"))),
        },
    }
}

fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    let hex: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn parse_q(s: &str, what: &str) -> CliResult<Q> {
    rational::parse(s).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

/// Reads the game and configuration, recording their bytes for the digest.
fn load(run: &Analysis, sources: &mut Vec<Source>) -> CliResult<Loaded> {
    let g = Source::read(&run.game)?;
    let c = Source::read(&run.config)?;
    let game = input::load_game(&g);
    sources.push(g);
    sources.push(c);
    input::load_config(&game?, &sources[1])
}

fn execute(command: &Command, sources: &mut Vec<Source>, extra: &mut Vec<u8>) -> CliResult<Outcome> {
    let budget = budget_from_env()?;
    match command {
        Command::Analyze { game } | Command::Frontier { game } => {
            let src = Source::read(game)?;
            let g = input::load_game(&src);
            sources.push(src);
            let g = g?;
            if matches!(command, Command::Analyze { .. }) {
                commands::analyze(&g, &budget)
            } else {
                commands::frontier(&g, &budget)
            }
        }
        Command::Certify { single, run, .. } => {
            let cfg = load(run, sources)?;
            match (&cfg, single) {
                (Loaded::Multi(_), true) => {
                    return Err(CliError::Input(format!("{}: --single given a multi-population configuration", sources[1].name)))
                }
                (Loaded::Single(_), false) => {
                    return Err(CliError::Input(format!("{}: --multi given a single-population configuration", sources[1].name)))
                }
                _ => {}
            }
            commands::certify(&cfg, run.order, &budget)
        }
        Command::Invade(run) => {
            let cfg = load(run, sources)?;
            commands::invade(&cfg, run.order, &budget)
        }
        Command::Oracle { run, eps } => {
            extra.extend_from_slice(eps.as_bytes());
            let e = parse_q(eps, "--eps")?;
            if e <= rational::zero() || e >= rational::one() {
                return Err(CliError::Input(format!("--eps {e} must lie strictly between 0 and 1")));
            }
            let cfg = load(run, sources)?;
            commands::oracle(&cfg, run.order, &e, &budget)
        }
        Command::Classify2x2 { payoffs } => {
            extra.extend_from_slice(payoffs.join(" ").as_bytes());
            let names = ["A", "B", "C", "D"];
            let mut q = Vec::with_capacity(4);
            for (s, n) in payoffs.iter().zip(names) {
                q.push(parse_q(s, n)?);
            }
            let q: [Q; 4] = q.try_into().map_err(|_| CliError::Input("--payoffs takes four values".into()))?;
            commands::classify2x2(&q)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::iter::once("esp".to_string())
        .chain(std::env::args().skip(1))
        .collect::<Vec<_>>()
        .join(" ");
    let mut sources = Vec::new();
    let mut extra = Vec::new();
    let result = execute(&cli.command, &mut sources, &mut extra);
    let mut parts: Vec<&[u8]> = sources.iter().map(|s| s.text.as_bytes()).collect();
    parts.push(&extra);
    let digest = digest(&parts);
    let report = match result {
        Ok(o) => Report {
            command: echo,
            digest,
            body: o.body,
            summary: o.summary,
            error: None,
            status: o.status,
            exit: o.exit,
        },
        Err(e) => Report {
            command: echo,
            digest,
            body: Node::map(),
            summary: None,
            error: Some(e.to_string()),
            status: e.status(),
            exit: e.exit_code(),
        },
    };
    print!("{}", report.render(cli.format));
    ExitCode::from(report.exit as u8)
}
