use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use ae_core::harness::{export_transcript, run_experiment, ExperimentConfig, Report};
use ae_core::solver::{verify_observation1, MAX_AUDIT_N};
use ae_core::strategy::build_strategy;
use ae_core::{run_match_with, AuditLevel, LosingProperty, MatchOptions, PlayMode, Player};

#[derive(Parser)]
#[command(name = "aegame", version, about = "Avoider-Enforcer games on K_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play a single match.
    Play {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        avoider: String,
        #[arg(long)]
        enforcer: String,
        #[arg(long, value_parser = parse_property)]
        property: LosingProperty,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "stop_at_loss", value_parser = parse_mode)]
        mode: PlayMode,
        #[arg(long, default_value = "checkpoints", value_parser = parse_audit)]
        audit: AuditLevel,
        /// Write the transcript here.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Run a tournament described by a config file.
    Tournament {
        #[arg(long)]
        config: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Solve a tiny board exactly and check the extremal sandwich.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_property)]
        property: LosingProperty,
        /// Permit n = 6 (about 29M positions).
        #[arg(long)]
        allow_large: bool,
    },
    /// Recompute the verdicts of a saved report.
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
}

fn parse_property(s: &str) -> Result<LosingProperty, String> {
    LosingProperty::from_id(s).ok_or_else(|| {
        let ids: Vec<&str> = LosingProperty::ALL.iter().map(|p| p.id()).collect();
        format!("unknown property `{s}` (expected one of {})", ids.join(", "))
    })
}

fn parse_mode(s: &str) -> Result<PlayMode, String> {
    PlayMode::from_id(s).ok_or_else(|| format!("unknown mode `{s}` (stop_at_loss or play_out)"))
}

fn parse_audit(s: &str) -> Result<AuditLevel, String> {
    AuditLevel::from_id(s).ok_or_else(|| format!("unknown audit level `{s}` (none, checkpoints, full)"))
}

fn print_verdicts(report: &Report) {
    print!("{}", report.summary_table());
    for v in &report.verdicts {
        println!("{}: {}", v.name, v.status.id());
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Play {
            n,
            avoider,
            enforcer,
            property,
            seed,
            mode,
            audit,
            transcript,
        } => {
            let mut a = build_strategy(&avoider, Player::Avoider)?;
            let mut e = build_strategy(&enforcer, Player::Enforcer)?;
            let opts = MatchOptions::new(mode, seed).with_audit(audit);
            let result = run_match_with(n, a.as_mut(), e.as_mut(), property, &opts)?;
            match result.loss_round {
                Some(r) => println!("loss_round={r}"),
                None => println!("loss_round=none"),
            }
            println!("moves={}", result.transcript.moves.len());
            for (k, v) in &result.avoider_stats {
                println!("avoider.{k}={v}");
            }
            for (k, v) in &result.enforcer_stats {
                println!("enforcer.{k}={v}");
            }
            if let Some(f) = &result.fault {
                println!("fault: {} played {} in round {}: {}", f.player, f.edge, f.round, f.reason);
            }
            for v in &result.invariant_violations {
                println!("violation round {} [{}]: {}", v.round, v.source, v.detail);
            }
            if let Some(path) = transcript {
                export_transcript(&result, &path)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(result.fault.is_none() && result.invariant_violations.is_empty())
        }
        Command::Tournament { config, report } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let cfg = ExperimentConfig::parse(&text)?;
            let rep = run_experiment(&cfg)?;
            match report {
                Some(path) => {
                    fs::write(&path, rep.render())
                        .with_context(|| format!("writing {}", path.display()))?;
                    print_verdicts(&rep);
                }
                None => print!("{}", rep.render()),
            }
            Ok(rep.all_asserted_pass())
        }
        Command::Solve {
            n,
            property,
            allow_large,
        } => {
            if n > MAX_AUDIT_N && !allow_large {
                bail!("n={n} needs --allow-large");
            }
            let report = verify_observation1(n, property)?;
            println!("{report}");
            Ok(report.pass)
        }
        Command::Verify { report } => {
            let text = fs::read_to_string(&report)
                .with_context(|| format!("reading {}", report.display()))?;
            let rep = Report::parse(&text)?;
            print_verdicts(&rep);
            Ok(rep.all_asserted_pass())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
