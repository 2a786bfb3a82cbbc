use std::process::ExitCode;

use aqdirac_cli::{
    analyze, check, render_report, resolve_chain, spin_norm, spin_table, CheckParams, MethodChoice,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "aqdirac", version, about = "Dirac index of weakly fair A_q(λ) modules of U(p,q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Brute,
    Structured,
    Both,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Brute => MethodChoice::Brute,
            MethodArg::Structured => MethodChoice::Structured,
            MethodArg::Both => MethodChoice::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyse one chain: ranges, infinitesimal character, feasibility, index.
    Analyze {
        /// Chain as `A:p,q;A:p,q;…`.
        #[arg(long, conflicts_with_all = ["blocks", "lambda"])]
        chain: Option<String>,
        /// Block sizes as `p,q;p,q;…`.
        #[arg(long)]
        blocks: Option<String>,
        /// Integer λ per block as `l;l;…` (default 0).
        #[arg(long, requires = "blocks", allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
        #[arg(long)]
        json: bool,
    },
    /// Randomised invariant campaign over weakly fair chains.
    Check {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        #[arg(long, default_value_t = 3)]
        max_block: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Spin module table, or spin norm and u-smallness of a K-type.
    Spin {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// Highest weight as `a,b|c,d` (entries `n` or `n/2`).
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce(&T) -> String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("report serialises")
        );
    } else {
        print!("{}", text(value));
    }
}

fn input_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_INPUT)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            chain,
            blocks,
            lambda,
            method,
            json,
        } => {
            let chain = match resolve_chain(chain.as_deref(), blocks.as_deref(), lambda.as_deref()) {
                Ok(c) => c,
                Err(e) => return input_error(e),
            };
            match analyze(&chain, method.into()) {
                Ok(report) => {
                    emit(json, &report, render_report);
                    if report.methods_agree {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(EXIT_VIOLATION)
                    }
                }
                Err(e) => input_error(e),
            }
        }
        Command::Check {
            count,
            max_k,
            max_block,
            seed,
            json,
        } => {
            let params = CheckParams {
                count,
                max_k,
                max_block,
                seed,
            };
            match check(params) {
                Err(e) => input_error(e),
                Ok(Ok(summary)) => {
                    emit(json, &summary, |s| s.render());
                    ExitCode::SUCCESS
                }
                Ok(Err(violation)) => {
                    println!("violation: {}", violation.message);
                    println!("reproduce: seed={seed} chain=\"{}\"", violation.chain);
                    ExitCode::from(EXIT_VIOLATION)
                }
            }
        }
        Command::Spin { p, q, mu, json } => match mu {
            None => match spin_table(p, q) {
                Ok(table) => {
                    emit(json, &table, |t| t.render());
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(e),
            },
            Some(mu) => match spin_norm(p, q, &mu) {
                Ok(norm) => {
                    emit(json, &norm, |n| n.render());
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(e),
            },
        },
    }
}
