use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::game::{AuditLevel, PlayMode, Player};
use crate::props::LosingProperty;
use crate::strategy::build_strategy;

use super::bounds::bound_by_name;

/// A tournament: every `(n, avoider, enforcer)` combination is played
/// `repetitions` times, match `i` using seed `seed + i`.
///
/// Text form, one `key = value` per line, `#` starts a comment, lists are
/// comma-separated:
///
/// ```text
/// n = 100, 200
/// property = non_bipartite
/// avoider = adversary:random
/// enforcer = odd_cycle_enforcer
/// repetitions = 20
/// seed = 1
/// mode = stop_at_loss
/// audit = checkpoints
/// bounds = odd_cycle_upper
/// transcript_dir = transcripts
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub ns: Vec<usize>,
    pub property: LosingProperty,
    pub avoiders: Vec<String>,
    pub enforcers: Vec<String>,
    pub repetitions: usize,
    pub seed: u64,
    pub mode: PlayMode,
    pub audit: AuditLevel,
    pub bounds: Vec<String>,
    pub transcript_dir: Option<PathBuf>,
    /// Keep every transcript in memory on the report rows.
    pub keep_transcripts: bool,
}

impl ExperimentConfig {
    pub fn new(ns: Vec<usize>, property: LosingProperty, avoider: &str, enforcer: &str) -> Self {
        ExperimentConfig {
            ns,
            property,
            avoiders: vec![avoider.to_string()],
            enforcers: vec![enforcer.to_string()],
            repetitions: 1,
            seed: 0,
            mode: PlayMode::StopAtLoss,
            audit: AuditLevel::Checkpoints,
            bounds: Vec::new(),
            transcript_dir: None,
            keep_transcripts: false,
        }
    }

    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        let mut ns = None;
        let mut property = None;
        let mut avoiders = None;
        let mut enforcers = None;
        let mut cfg = ExperimentConfig::new(Vec::new(), LosingProperty::NonPlanar, "", "");
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Config(format!("line {line_no}: {msg}"));
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| bad(format!("expected key = value, found `{line}`")))?;
            if seen.contains(&key.to_string()) {
                return Err(bad(format!("duplicate key `{key}`")));
            }
            seen.push(key.to_string());
            let list = || -> Vec<String> {
                value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
            };
            match key {
                "n" => {
                    let parsed: std::result::Result<Vec<usize>, _> =
                        list().iter().map(|s| s.parse::<usize>()).collect();
                    ns = Some(parsed.map_err(|_| bad(format!("bad n list `{value}`")))?);
                }
                "property" => {
                    property = Some(
                        LosingProperty::from_id(value)
                            .ok_or_else(|| bad(format!("unknown property `{value}`")))?,
                    )
                }
                "avoider" => avoiders = Some(list()),
                "enforcer" => enforcers = Some(list()),
                "repetitions" => {
                    cfg.repetitions = value.parse().map_err(|_| bad(format!("bad repetitions `{value}`")))?
                }
                "seed" => cfg.seed = value.parse().map_err(|_| bad(format!("bad seed `{value}`")))?,
                "mode" => {
                    cfg.mode = PlayMode::from_id(value).ok_or_else(|| bad(format!("unknown mode `{value}`")))?
                }
                "audit" => {
                    cfg.audit =
                        AuditLevel::from_id(value).ok_or_else(|| bad(format!("unknown audit level `{value}`")))?
                }
                "bounds" => cfg.bounds = list(),
                "transcript_dir" => cfg.transcript_dir = Some(PathBuf::from(value)),
                "keep_transcripts" => {
                    cfg.keep_transcripts = value.parse().map_err(|_| bad(format!("bad boolean `{value}`")))?
                }
                _ => return Err(bad(format!("unknown key `{key}`"))),
            }
        }
        let missing = |k: &str| Error::Config(format!("missing required key `{k}`"));
        cfg.ns = ns.ok_or_else(|| missing("n"))?;
        cfg.property = property.ok_or_else(|| missing("property"))?;
        cfg.avoiders = avoiders.ok_or_else(|| missing("avoider"))?;
        cfg.enforcers = enforcers.ok_or_else(|| missing("enforcer"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ns.is_empty() || self.ns.iter().any(|&n| n < 2) {
            return Err(Error::Config("n must list board sizes of at least 2".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.avoiders.is_empty() || self.enforcers.is_empty() {
            return Err(Error::Config("need at least one avoider and one enforcer".into()));
        }
        for id in &self.avoiders {
            build_strategy(id, Player::Avoider)?;
        }
        for id in &self.enforcers {
            build_strategy(id, Player::Enforcer)?;
        }
        for b in &self.bounds {
            bound_by_name(b).ok_or_else(|| Error::Config(format!("unknown bound `{b}`")))?;
        }
        Ok(())
    }

    /// Canonical single-line `key=value` form, used as the report header.
    pub fn render_line(&self) -> String {
        let ns: Vec<String> = self.ns.iter().map(|n| n.to_string()).collect();
        let mut out = format!(
            "n={} property={} avoider={} enforcer={} repetitions={} seed={} mode={} audit={} bounds={}",
            ns.join(","),
            self.property.id(),
            self.avoiders.join(","),
            self.enforcers.join(","),
            self.repetitions,
            self.seed,
            self.mode.id(),
            self.audit.id(),
            self.bounds.join(","),
        );
        if let Some(dir) = &self.transcript_dir {
            out.push_str(&format!(" transcript_dir={}", dir.display()));
        }
        out
    }

    /// Parses [`ExperimentConfig::render_line`] output.
    pub fn parse_line(line: &str) -> Result<ExperimentConfig> {
        let mut text = String::new();
        for field in line.split(' ').filter(|f| !f.is_empty()) {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("bad config field `{field}`")))?;
            if k == "bounds" && v.is_empty() {
                continue;
            }
            text.push_str(&format!("{k} = {v}\n"));
        }
        Self::parse(&text)
    }

    pub fn match_count(&self) -> usize {
        self.ns.len() * self.avoiders.len() * self.enforcers.len() * self.repetitions
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_lists_and_defaults() {
        let cfg = ExperimentConfig::parse(
            "# odd cycle game\nn = 100, 200\nproperty = non_bipartite\navoider = adversary:random, adversary:lex\n\
             enforcer = odd_cycle_enforcer  # the pairing-free strategy\nrepetitions = 3\nbounds = odd_cycle_upper\n",
        )
        .unwrap();
        assert_eq!(cfg.ns, vec![100, 200]);
        assert_eq!(cfg.avoiders.len(), 2);
        assert_eq!(cfg.match_count(), 12);
        assert_eq!(cfg.audit, AuditLevel::Checkpoints);
        assert_eq!(ExperimentConfig::parse_line(&cfg.render_line()).unwrap(), cfg);
    }

    #[test]
    fn misspelt_strategy_is_a_config_error() {
        let err = ExperimentConfig::parse("n = 10\nproperty = non_planar\navoider = avoidr\nenforcer = adversary:lex\n")
            .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(ExperimentConfig::parse("n = 10\nproperty = non_planar\navoider = adversary:lex\n").is_err());
        assert!(ExperimentConfig::parse(
            "n = 10\nproperty = non_planar\navoider = adversary:lex\nenforcer = adversary:lex\nrepetitions = 0\n"
        )
        .is_err());
        assert!(ExperimentConfig::parse(
            "n = 10\nproperty = non_planar\navoider = odd_cycle_enforcer\nenforcer = adversary:lex\n"
        )
        .is_err());
    }
}
