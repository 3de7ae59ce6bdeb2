use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::transcript::Transcript;

use super::bounds::{BoundSpec, Direction};
use super::config::ExperimentConfig;

/// One played match.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchRow {
    pub index: usize,
    pub n: usize,
    pub avoider: String,
    pub enforcer: String,
    pub seed: u64,
    pub loss_round: Option<usize>,
    pub violations: usize,
    pub fault: Option<String>,
    pub transcript_path: Option<PathBuf>,
    /// Human-readable diagnostics (violations, faults); rendered as comments.
    pub notes: Vec<String>,
    pub stats: Vec<(String, String)>,
    /// In-memory transcript, when kept.
    pub transcript: Option<Transcript>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Failed only where the bound is not asserted.
    Warn,
    MarginOnly,
}

impl Status {
    pub fn id(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Warn => "warn",
            Status::MarginOnly => "margin-only",
        }
    }

    fn from_id(s: &str) -> Option<Status> {
        [Status::Pass, Status::Fail, Status::Warn, Status::MarginOnly]
            .into_iter()
            .find(|x| x.id() == s)
    }
}

/// Margins of one bound at one board size.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundAtN {
    pub n: usize,
    pub value: f64,
    pub threshold: i64,
    pub matches: usize,
    pub min_margin: f64,
    pub mean_margin: f64,
    pub max_margin: f64,
    pub failing: Vec<usize>,
    pub asserted: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub worst_margin: Option<f64>,
    pub per_n: Vec<BoundAtN>,
    /// `(match index, seed, transcript path)` of every failing row.
    pub failing: Vec<(usize, u64, Option<PathBuf>)>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub config: ExperimentConfig,
    pub rows: Vec<MatchRow>,
    pub verdicts: Vec<Verdict>,
}

/// One verdict per bound, with worst-case margin.
pub fn verify_bounds(rows: &[MatchRow], bounds: &[&BoundSpec]) -> Vec<Verdict> {
    bounds.iter().map(|b| judge(rows, b)).collect()
}

fn judge(rows: &[MatchRow], bound: &BoundSpec) -> Verdict {
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut per_n = Vec::new();
    let mut failing = Vec::new();
    let mut hard_fail = false;
    let mut soft_fail = false;
    let mut worst: Option<f64> = None;
    for n in ns {
        let group: Vec<&MatchRow> = rows.iter().filter(|r| r.n == n).collect();
        let margins: Vec<f64> = group.iter().map(|r| bound.margin(n, r.loss_round)).collect();
        let finite: Vec<f64> = margins.iter().copied().filter(|m| m.is_finite()).collect();
        let min = margins.iter().copied().fold(f64::INFINITY, f64::min);
        let max = margins.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = if finite.len() == margins.len() {
            finite.iter().sum::<f64>() / finite.len() as f64
        } else if margins.contains(&f64::NEG_INFINITY) {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
        worst = Some(worst.map_or(min, |w: f64| w.min(min)));
        let asserted = bound.asserted_at(n);
        let mut bad = Vec::new();
        for r in &group {
            if !bound.holds(n, r.loss_round) {
                bad.push(r.index);
                failing.push((r.index, r.seed, r.transcript_path.clone()));
            }
        }
        if !bad.is_empty() {
            if asserted {
                hard_fail = true;
            } else {
                soft_fail = true;
            }
        }
        per_n.push(BoundAtN {
            n,
            value: bound.value(n),
            threshold: bound.threshold(n),
            matches: group.len(),
            min_margin: min,
            mean_margin: mean,
            max_margin: max,
            failing: bad,
            asserted,
        });
    }
    let status = if bound.direction == Direction::MarginOnly {
        Status::MarginOnly
    } else if hard_fail {
        Status::Fail
    } else if soft_fail {
        Status::Warn
    } else {
        Status::Pass
    };
    Verdict {
        name: bound.name.to_string(),
        status,
        worst_margin: worst,
        per_n,
        failing,
    }
}

/// Passes iff no match had a strategy fault or an invariant violation.
pub fn invariant_verdict(rows: &[MatchRow]) -> Verdict {
    let failing: Vec<(usize, u64, Option<PathBuf>)> = rows
        .iter()
        .filter(|r| r.violations > 0 || r.fault.is_some())
        .map(|r| (r.index, r.seed, r.transcript_path.clone()))
        .collect();
    Verdict {
        name: "invariants".into(),
        status: if failing.is_empty() { Status::Pass } else { Status::Fail },
        worst_margin: None,
        per_n: Vec::new(),
        failing,
    }
}

fn fmt_f64(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.4}")
    }
}

fn fmt_opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or("none".into(), |v| v.to_string())
}

impl Report {
    pub fn all_asserted_pass(&self) -> bool {
        self.verdicts.iter().all(Verdict::passed)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "report config {}", self.config.render_line());
        for r in &self.rows {
            let _ = write!(
                out,
                "match index={} n={} avoider={} enforcer={} seed={} loss_round={} violations={} fault={} transcript={}",
                r.index,
                r.n,
                r.avoider,
                r.enforcer,
                r.seed,
                fmt_opt(&r.loss_round),
                r.violations,
                if r.fault.is_some() { "yes" } else { "no" },
                fmt_opt(&r.transcript_path.as_ref().map(|p| p.display().to_string())),
            );
            for (k, v) in &r.stats {
                let _ = write!(out, " {k}={v}");
            }
            out.push('\n');
            for note in &r.notes {
                let _ = writeln!(out, "# match {}: {}", r.index, note.replace('\n', " "));
            }
        }
        for v in &self.verdicts {
            for b in &v.per_n {
                let failing: Vec<String> = b.failing.iter().map(|i| i.to_string()).collect();
                let _ = writeln!(
                    out,
                    "bound name={} n={} value={} threshold={} matches={} min_margin={} mean_margin={} max_margin={} asserted={} failing={}",
                    v.name,
                    b.n,
                    fmt_f64(b.value),
                    b.threshold,
                    b.matches,
                    fmt_f64(b.min_margin),
                    fmt_f64(b.mean_margin),
                    fmt_f64(b.max_margin),
                    b.asserted,
                    failing.join(","),
                );
            }
            let _ = writeln!(
                out,
                "verdict name={} status={} worst_margin={}",
                v.name,
                v.status.id(),
                v.worst_margin.map_or("none".into(), fmt_f64)
            );
            for (index, seed, path) in &v.failing {
                let _ = writeln!(
                    out,
                    "# {} failed at match {index} (seed {seed}), transcript {}",
                    v.name,
                    fmt_opt(&path.as_ref().map(|p| p.display().to_string()))
                );
            }
        }
        if self.config.bounds.iter().any(|b| b == "planarity_lower") {
            out.push_str(
                "# caveat: a pool of adversaries can refute but not prove a bound over all opponents; \
                 the structural audit checks the strategy's shape invariants\n",
            );
        }
        out.push_str(&self.summary_table());
        out
    }

    /// Human-readable table, every line a `#` comment.
    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# {:<20} {:>6} {:>10} {:>7} {:>12} {:>12} {:>12}  status",
            "bound", "n", "threshold", "matches", "min_margin", "mean_margin", "max_margin"
        );
        for v in &self.verdicts {
            for b in &v.per_n {
                let status = if !b.failing.is_empty() {
                    if b.asserted { "fail" } else { "warn" }
                } else if b.asserted {
                    "pass"
                } else {
                    v.status.id()
                };
                let _ = writeln!(
                    out,
                    "# {:<20} {:>6} {:>10} {:>7} {:>12} {:>12} {:>12}  {}",
                    v.name,
                    b.n,
                    b.threshold,
                    b.matches,
                    fmt_f64(b.min_margin),
                    fmt_f64(b.mean_margin),
                    fmt_f64(b.max_margin),
                    status
                );
            }
            if v.per_n.is_empty() {
                let _ = writeln!(out, "# {:<20} {:>71}", v.name, v.status.id());
            }
        }
        out
    }

    /// Reads back the config and match rows; bound lines are not trusted and
    /// verdicts are recomputed from the rows.
    pub fn parse(text: &str) -> Result<Report> {
        let mut config = None;
        let mut rows = Vec::new();
        let mut recorded = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let perr = |reason: String| Error::Parse { line: line_no, reason };
            if let Some(rest) = line.strip_prefix("report config ") {
                config = Some(ExperimentConfig::parse_line(rest).map_err(|e| perr(e.to_string()))?);
            } else if let Some(rest) = line.strip_prefix("match ") {
                rows.push(parse_row(rest).map_err(perr)?);
            } else if let Some(rest) = line.strip_prefix("verdict ") {
                let fields = fields(rest);
                let get = |k: &str| fields.iter().find(|(a, _)| a == k).map(|(_, b)| b.clone());
                let status = get("status").and_then(|s| Status::from_id(&s));
                recorded.push((get("name").unwrap_or_default(), status));
            }
        }
        let config = config.ok_or_else(|| Error::Parse {
            line: 1,
            reason: "missing `report config` line".into(),
        })?;
        let mut report = Report {
            config,
            rows,
            verdicts: Vec::new(),
        };
        report.verdicts = super::experiment::verdicts_for(&report.config, &report.rows)?;
        Ok(report)
    }
}

fn fields(s: &str) -> Vec<(String, String)> {
    s.split(' ')
        .filter_map(|f| f.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn parse_row(s: &str) -> std::result::Result<MatchRow, String> {
    let fields = fields(s);
    let get = |k: &str| {
        fields
            .iter()
            .find(|(a, _)| a == k)
            .map(|(_, b)| b.clone())
            .ok_or_else(|| format!("match row lacks `{k}`"))
    };
    let num = |k: &str| -> std::result::Result<usize, String> {
        get(k)?.parse().map_err(|_| format!("bad `{k}`"))
    };
    let loss = get("loss_round")?;
    let known = [
        "index", "n", "avoider", "enforcer", "seed", "loss_round", "violations", "fault", "transcript",
    ];
    Ok(MatchRow {
        index: num("index")?,
        n: num("n")?,
        avoider: get("avoider")?,
        enforcer: get("enforcer")?,
        seed: get("seed")?.parse().map_err(|_| "bad `seed`".to_string())?,
        loss_round: if loss == "none" {
            None
        } else {
            Some(loss.parse().map_err(|_| "bad `loss_round`".to_string())?)
        },
        violations: num("violations")?,
        fault: (get("fault")? == "yes").then(|| "recorded in report".to_string()),
        transcript_path: match get("transcript")?.as_str() {
            "none" => None,
            p => Some(PathBuf::from(p)),
        },
        notes: Vec::new(),
        stats: fields.iter().filter(|(k, _)| !known.contains(&k.as_str())).cloned().collect(),
        transcript: None,
    })
}
