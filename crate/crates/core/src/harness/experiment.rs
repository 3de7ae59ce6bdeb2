use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{replay, run_match_with, MatchOptions, MatchResult, Player};
use crate::strategy::build_strategy;
use crate::transcript::Transcript;

use super::bounds::{bound_by_name, BoundSpec};
use super::config::ExperimentConfig;
use super::report::{invariant_verdict, verify_bounds, MatchRow, Report, Verdict};

// cap on diagnostics copied into a report row
const MAX_NOTES: usize = 5;

struct Planned {
    index: usize,
    n: usize,
    avoider: String,
    enforcer: String,
    seed: u64,
}

fn plan(cfg: &ExperimentConfig) -> Vec<Planned> {
    let mut out = Vec::with_capacity(cfg.match_count());
    for &n in &cfg.ns {
        for a in &cfg.avoiders {
            for e in &cfg.enforcers {
                for _ in 0..cfg.repetitions {
                    let index = out.len();
                    out.push(Planned {
                        index,
                        n,
                        avoider: a.clone(),
                        enforcer: e.clone(),
                        seed: cfg.seed.wrapping_add(index as u64),
                    });
                }
            }
        }
    }
    out
}

fn configured_bounds(cfg: &ExperimentConfig) -> Result<Vec<&'static BoundSpec>> {
    cfg.bounds
        .iter()
        .map(|b| bound_by_name(b).ok_or_else(|| Error::Config(format!("unknown bound `{b}`"))))
        .collect()
}

/// Bound verdicts followed by the invariant verdict.
pub fn verdicts_for(cfg: &ExperimentConfig, rows: &[MatchRow]) -> Result<Vec<Verdict>> {
    let bounds = configured_bounds(cfg)?;
    let mut out = verify_bounds(rows, &bounds);
    out.push(invariant_verdict(rows));
    Ok(out)
}

fn transcript_file(dir: &Path, p: &Planned) -> PathBuf {
    dir.join(format!("match-{:04}-n{}-seed{}.txt", p.index, p.n, p.seed))
}

fn play(cfg: &ExperimentConfig, bounds: &[&BoundSpec], p: &Planned) -> Result<MatchRow> {
    let mut avoider = build_strategy(&p.avoider, Player::Avoider)?;
    let mut enforcer = build_strategy(&p.enforcer, Player::Enforcer)?;
    let opts = MatchOptions::new(cfg.mode, p.seed).with_audit(cfg.audit);
    let result = run_match_with(p.n, avoider.as_mut(), enforcer.as_mut(), cfg.property, &opts)?;

    let mut notes = Vec::new();
    if let Some(f) = &result.fault {
        notes.push(format!(
            "strategy fault: {} played {} in round {}: {}",
            f.player, f.edge, f.round, f.reason
        ));
    }
    for v in result.invariant_violations.iter().take(MAX_NOTES) {
        notes.push(format!("violation round {} [{}]: {}", v.round, v.source, v.detail));
    }
    let bound_failed = bounds
        .iter()
        .any(|b| b.direction != super::bounds::Direction::MarginOnly && !b.holds(p.n, result.loss_round));
    let failed = bound_failed || result.fault.is_some() || !result.invariant_violations.is_empty();
    let transcript_path = match (&cfg.transcript_dir, failed) {
        (Some(dir), true) => {
            let path = transcript_file(dir, p);
            export_transcript(&result, &path)?;
            Some(path)
        }
        _ => None,
    };
    let mut stats: Vec<(String, String)> = Vec::new();
    for (prefix, list) in [("a.", &result.avoider_stats), ("e.", &result.enforcer_stats)] {
        stats.extend(list.iter().map(|(k, v)| (format!("{prefix}{k}"), v.clone())));
    }
    Ok(MatchRow {
        index: p.index,
        n: p.n,
        avoider: p.avoider.clone(),
        enforcer: p.enforcer.clone(),
        seed: p.seed,
        loss_round: result.loss_round,
        violations: result.invariant_violations.len(),
        fault: result.fault.as_ref().map(|f| f.reason.clone()),
        transcript_path,
        notes,
        stats,
        transcript: cfg.keep_transcripts.then_some(result.transcript),
    })
}

/// Plays every match of the tournament (in parallel) and judges the bounds.
/// Rows come back in match-index order, so the rendered report depends only
/// on the config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let bounds = configured_bounds(cfg)?;
    if let Some(dir) = &cfg.transcript_dir {
        fs::create_dir_all(dir)?;
    }
    let planned = plan(cfg);
    let rows: Vec<MatchRow> = planned
        .par_iter()
        .map(|p| play(cfg, &bounds, p))
        .collect::<Result<_>>()?;
    let verdicts = verdicts_for(cfg, &rows)?;
    Ok(Report {
        config: cfg.clone(),
        rows,
        verdicts,
    })
}

pub fn export_transcript(result: &MatchResult, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, result.transcript.render())?;
    Ok(())
}

/// Reads a transcript and rebuilds the match by replaying it.
pub fn import_transcript(path: &Path) -> Result<MatchResult> {
    let text = fs::read_to_string(path)?;
    let transcript = Transcript::parse(&text)?;
    let (final_state, loss_round) = replay(&transcript, transcript.header.property)?;
    Ok(MatchResult {
        transcript,
        loss_round,
        invariant_violations: Vec::new(),
        final_state,
        fault: None,
        avoider_stats: Vec::new(),
        enforcer_stats: Vec::new(),
    })
}
