//! Plain-text transcript format.
//!
//! ```text
//! n=<n> property=<id> avoider=<name> enforcer=<name> seed=<u64>
//! <round> <A|E> <u> <v>
//! ...
//! ```
//!
//! Every line, including the last, ends with a single `\n`. Fields are
//! separated by exactly one space, integers are unsigned decimal without
//! leading zeros, and rounds are 1-based (an Enforcer move carries the round
//! number of the Avoider move before it). Any deviation is a parse error, so
//! `parse(render(t)) == t` and `render(parse(s)) == s` for every accepted `s`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::game::{Edge, Player};
use crate::props::LosingProperty;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptHeader {
    pub n: usize,
    pub property: LosingProperty,
    pub avoider: String,
    pub enforcer: String,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub round: usize,
    pub player: Player,
    pub edge: Edge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub header: TranscriptHeader,
    pub moves: Vec<Move>,
}

impl Transcript {
    pub fn render(&self) -> String {
        let h = &self.header;
        let mut out = String::with_capacity(64 + self.moves.len() * 16);
        // writing to a String cannot fail
        let _ = writeln!(
            out,
            "n={} property={} avoider={} enforcer={} seed={}",
            h.n,
            h.property.id(),
            h.avoider,
            h.enforcer,
            h.seed
        );
        for m in &self.moves {
            let _ = writeln!(
                out,
                "{} {} {} {}",
                m.round,
                m.player.code(),
                m.edge.u,
                m.edge.v
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Transcript> {
        if text.is_empty() {
            return Err(perr(1, "empty input"));
        }
        if !text.ends_with('\n') {
            let line = text.split('\n').count();
            return Err(perr(line, "missing final newline (truncated?)"));
        }
        let mut lines = text[..text.len() - 1].split('\n');
        let header = parse_header(lines.next().unwrap_or(""))?;
        let mut moves = Vec::new();
        for (i, line) in lines.enumerate() {
            moves.push(parse_move(i + 2, line, header.n)?);
        }
        Ok(Transcript { header, moves })
    }
}

fn perr(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_uint<T: std::str::FromStr>(line: usize, field: &str, s: &str) -> Result<T> {
    let canonical = !s.is_empty()
        && s.bytes().all(|b| b.is_ascii_digit())
        && (s == "0" || !s.starts_with('0'));
    if !canonical {
        return Err(perr(line, format!("{field}: `{s}` is not a canonical unsigned integer")));
    }
    s.parse()
        .map_err(|_| perr(line, format!("{field}: `{s}` out of range")))
}

fn parse_header(line: &str) -> Result<TranscriptHeader> {
    let fields: Vec<&str> = line.split(' ').collect();
    let keys = ["n", "property", "avoider", "enforcer", "seed"];
    if fields.len() != keys.len() {
        return Err(perr(1, format!("header needs {} fields, found {}", keys.len(), fields.len())));
    }
    let mut values = Vec::with_capacity(keys.len());
    for (field, key) in fields.iter().zip(keys) {
        let value = field
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| perr(1, format!("expected `{key}=...`, found `{field}`")))?;
        if value.is_empty() {
            return Err(perr(1, format!("empty value for `{key}`")));
        }
        values.push(value);
    }
    let n: usize = parse_uint(1, "n", values[0])?;
    if n < 2 {
        return Err(perr(1, format!("n={n} is below 2")));
    }
    let property = LosingProperty::from_id(values[1])
        .ok_or_else(|| perr(1, format!("unknown property `{}`", values[1])))?;
    Ok(TranscriptHeader {
        n,
        property,
        avoider: values[2].to_string(),
        enforcer: values[3].to_string(),
        seed: parse_uint(1, "seed", values[4])?,
    })
}

fn parse_move(line_no: usize, line: &str, n: usize) -> Result<Move> {
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != 4 {
        return Err(perr(line_no, format!("move needs 4 fields, found {}", fields.len())));
    }
    let round: usize = parse_uint(line_no, "round", fields[0])?;
    if round == 0 {
        return Err(perr(line_no, "rounds are 1-based"));
    }
    let player = Player::from_code(fields[1])
        .ok_or_else(|| perr(line_no, format!("player must be A or E, found `{}`", fields[1])))?;
    let u: usize = parse_uint(line_no, "u", fields[2])?;
    let v: usize = parse_uint(line_no, "v", fields[3])?;
    if u >= v || v >= n {
        return Err(perr(line_no, format!("edge {u} {v} is not canonical on K_{n}")));
    }
    Ok(Move {
        round,
        player,
        edge: Edge { u, v },
    })
}
