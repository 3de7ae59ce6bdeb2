//! Independent oracles shared by the integration tests. None of them reuse
//! the library's graph algorithms.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use ae_core::game::{all_edges, Edge};
use ae_core::LosingProperty;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Vec<Edge> {
    all_edges(n).into_iter().filter(|_| rng.gen_bool(p)).collect()
}

/// A uniformly shuffled full edge sequence of `K_n`.
pub fn shuffled_edges(rng: &mut impl Rng, n: usize) -> Vec<Edge> {
    let mut edges = all_edges(n);
    edges.shuffle(rng);
    edges
}

fn adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    adj
}

/// Number of connected components, by BFS.
pub fn components(n: usize, edges: &[Edge]) -> usize {
    let adj = adjacency(n, edges);
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = vec![s];
        while let Some(x) = queue.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
    }
    count
}

/// Two-colouring by BFS.
pub fn bipartite(n: usize, edges: &[Edge]) -> bool {
    let adj = adjacency(n, edges);
    let mut colour = vec![None; n];
    for s in 0..n {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let c = colour[x].unwrap();
            for &y in &adj[x] {
                match colour[y] {
                    None => {
                        colour[y] = Some(!c);
                        queue.push_back(y);
                    }
                    Some(d) if d == c => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

fn has_edge(mask: u64, k: usize, a: usize, b: usize) -> bool {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    mask >> (a * k + b) & 1 == 1
}

fn contains_kuratowski(k: usize, mask: u64) -> bool {
    let subsets = |size: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for bits in 0u32..1 << k {
            if bits.count_ones() as usize == size {
                out.push((0..k).filter(|i| bits >> i & 1 == 1).collect());
            }
        }
        out
    };
    for s in subsets(5) {
        let complete = (0..5).all(|i| (i + 1..5).all(|j| has_edge(mask, k, s[i], s[j])));
        if complete {
            return true;
        }
    }
    for s in subsets(6) {
        // every split of the six into two triples, with s[0] on the left
        for pair in 0u32..1 << 5 {
            if pair.count_ones() != 2 {
                continue;
            }
            let left: Vec<usize> = std::iter::once(s[0])
                .chain((1..6).filter(|i| pair >> (i - 1) & 1 == 1).map(|i| s[i]))
                .collect();
            let right: Vec<usize> = s.iter().copied().filter(|v| !left.contains(v)).collect();
            if left.iter().all(|&x| right.iter().all(|&y| has_edge(mask, k, x, y))) {
                return true;
            }
        }
    }
    false
}

fn contract(k: usize, mask: u64, a: usize, b: usize) -> (usize, u64) {
    // merge b into a, then renumber to 0..k-1
    let relabel = |x: usize| {
        let x = if x == b { a } else { x };
        if x > b {
            x - 1
        } else {
            x
        }
    };
    let nk = k - 1;
    let mut out = 0u64;
    for x in 0..k {
        for y in x + 1..k {
            if has_edge(mask, k, x, y) {
                let (p, q) = (relabel(x), relabel(y));
                if p != q {
                    let (p, q) = if p < q { (p, q) } else { (q, p) };
                    out |= 1 << (p * nk + q);
                }
            }
        }
    }
    (nk, out)
}

fn has_minor(k: usize, mask: u64, seen: &mut HashSet<(usize, u64)>) -> bool {
    if k < 5 || !seen.insert((k, mask)) {
        return false;
    }
    if contains_kuratowski(k, mask) {
        return true;
    }
    for a in 0..k {
        for b in a + 1..k {
            if has_edge(mask, k, a, b) {
                let (nk, nm) = contract(k, mask, a, b);
                if has_minor(nk, nm, seen) {
                    return true;
                }
            }
        }
    }
    false
}

/// Planarity by Wagner's theorem: no K_5 or K_{3,3} minor, found by
/// exhaustive edge contraction. Only sensible for n ≤ 8.
pub fn planar_by_minors(n: usize, edges: &[Edge]) -> bool {
    assert!(n <= 8);
    let mask = edges.iter().fold(0u64, |m, e| m | 1 << (e.u * n + e.v));
    !has_minor(n, mask, &mut HashSet::new())
}

/// Direct recomputation of each property.
pub fn recompute(property: LosingProperty, n: usize, edges: &[Edge]) -> bool {
    match property {
        LosingProperty::NonPlanar => !planar_by_minors(n, edges),
        LosingProperty::NonBipartite => !bipartite(n, edges),
        LosingProperty::ConnectedSpanning => components(n, edges) == 1,
        LosingProperty::MinDegreeOne => {
            let mut deg = vec![0; n];
            for e in edges {
                deg[e.u] += 1;
                deg[e.v] += 1;
            }
            deg.iter().all(|&d| d > 0)
        }
    }
}

/// Value of a position by plain minimax over edge sets, `None` meaning
/// Avoider never loses. `memo` may be shared between calls for one board.
pub fn minimax(
    n: usize,
    property: LosingProperty,
    avoider: &mut Vec<Edge>,
    enforcer: &mut Vec<Edge>,
    memo: &mut HashMap<(Vec<Edge>, Vec<Edge>), Option<usize>>,
) -> Option<usize> {
    let mut key = (avoider.clone(), enforcer.clone());
    key.0.sort();
    key.1.sort();
    if let Some(v) = memo.get(&key) {
        return *v;
    }
    let free: Vec<Edge> = all_edges(n)
        .into_iter()
        .filter(|e| !avoider.contains(e) && !enforcer.contains(e))
        .collect();
    let avoider_turn = avoider.len() == enforcer.len();
    let better = |x: Option<usize>, y: Option<usize>| -> bool {
        // is x better than y for Avoider
        match (x, y) {
            (None, Some(_)) => true,
            (Some(a), Some(b)) => a > b,
            _ => false,
        }
    };
    let mut best: Option<Option<usize>> = None;
    for e in free {
        let v = if avoider_turn {
            avoider.push(e);
            let v = if recompute_fast(property, n, avoider) {
                Some(avoider.len())
            } else {
                minimax(n, property, avoider, enforcer, memo)
            };
            avoider.pop();
            v
        } else {
            enforcer.push(e);
            let v = minimax(n, property, avoider, enforcer, memo);
            enforcer.pop();
            v
        };
        best = Some(match best {
            None => v,
            Some(b) if (avoider_turn && better(v, b)) || (!avoider_turn && better(b, v)) => v,
            Some(b) => b,
        });
    }
    let value = best.unwrap_or(None);
    memo.insert(key, value);
    value
}

fn recompute_fast(property: LosingProperty, n: usize, edges: &[Edge]) -> bool {
    if property == LosingProperty::NonPlanar && (edges.len() < 9 || n < 5) {
        return false;
    }
    recompute(property, n, edges)
}

use ae_core::game::{replay, run_match_with, AuditLevel, MatchOptions, PlayMode, Player};
use ae_core::props::{is_planar, ComponentTracker, ParityUnionFind};
use ae_core::strategy::{build_strategy, BiBunchAvoider};
use ae_core::transcript::Transcript;

/// Incremental trackers against recomputation after every edge.
pub fn tracker_suite(runs: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for run in 0..runs {
        let property = LosingProperty::ALL[run % 4];
        let n = if property == LosingProperty::NonPlanar {
            rng.gen_range(5..=8)
        } else {
            rng.gen_range(2..=14)
        };
        let seq = shuffled_edges(&mut rng, n);
        let mut tracker = property.tracker(n);
        let mut parity = ParityUnionFind::new(n);
        let mut comps = ComponentTracker::new(n);
        for k in 1..=seq.len() {
            let e = seq[k - 1];
            let prefix = &seq[..k];
            let tracked = tracker.add_edge(e);
            if tracked != recompute(property, n, prefix) {
                return Err(format!("run {run}: {property} tracker disagrees on n={n} after {k} edges"));
            }
            if tracked != property.check(n, prefix) {
                return Err(format!("run {run}: {property} tracker and check disagree after {k} edges"));
            }
            parity.add_edge(e.u, e.v);
            if parity.has_odd_cycle() == bipartite(n, prefix) {
                return Err(format!("run {run}: parity union-find wrong after {k} edges"));
            }
            comps.add_edge(e.u, e.v);
            if comps.component_count() != components(n, prefix) {
                return Err(format!("run {run}: component count wrong after {k} edges"));
            }
            if property == LosingProperty::NonPlanar && is_planar(n, prefix) != planar_by_minors(n, prefix) {
                return Err(format!("run {run}: planarity wrong on {prefix:?}"));
            }
        }
    }
    Ok(())
}

const PAIRS: [(LosingProperty, &str, &str); 6] = [
    (LosingProperty::MinDegreeOne, "adversary:random", "adversary:random"),
    (LosingProperty::NonBipartite, "bibunch_avoider", "odd_cycle_enforcer"),
    (LosingProperty::ConnectedSpanning, "isolated_vertex_avoider", "connectivity_enforcer"),
    (LosingProperty::NonPlanar, "adversary:random", "adversary:greedy:planarity"),
    (LosingProperty::NonBipartite, "adversary:greedy:odd_cycle", "odd_cycle_enforcer:random"),
    (LosingProperty::MinDegreeOne, "extremal_avoider:min_degree_one:random", "adversary:lex"),
];

fn play(n: usize, pair: usize, seed: u64, mode: PlayMode) -> ae_core::MatchResult {
    let (p, a, e) = PAIRS[pair];
    let mut a = build_strategy(a, Player::Avoider).unwrap();
    let mut e = build_strategy(e, Player::Enforcer).unwrap();
    run_match_with(n, a.as_mut(), e.as_mut(), p, &MatchOptions::new(mode, seed)).unwrap()
}

/// Round trips of real and of randomly corrupted transcripts.
pub fn transcript_fuzz(runs: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    let alphabet = b"0123456789 AE\nx=-";
    for run in 0..runs {
        let mode = if rng.gen_bool(0.5) { PlayMode::PlayOut } else { PlayMode::StopAtLoss };
        let n = rng.gen_range(2..=12);
        let result = play(n, run % PAIRS.len(), rng.gen(), mode);
        let text = result.transcript.render();
        let back = Transcript::parse(&text).map_err(|e| format!("run {run}: {e}"))?;
        if back != result.transcript || back.render() != text {
            return Err(format!("run {run}: round trip changed the transcript"));
        }
        for _ in 0..20 {
            let mut bytes = text.clone().into_bytes();
            let pos = rng.gen_range(0..bytes.len());
            match rng.gen_range(0..3) {
                0 => bytes[pos] = alphabet[rng.gen_range(0..alphabet.len())],
                1 => {
                    bytes.remove(pos);
                }
                _ => bytes.insert(pos, alphabet[rng.gen_range(0..alphabet.len())]),
            }
            let mutated = String::from_utf8(bytes).unwrap();
            if let Ok(t) = Transcript::parse(&mutated) {
                if t.render() != mutated {
                    return Err(format!("run {run}: accepted non-canonical text {mutated:?}"));
                }
            }
        }
        let cut = rng.gen_range(0..text.len());
        let truncated = &text[..cut];
        if !truncated.ends_with('\n') && Transcript::parse(truncated).is_ok() {
            return Err(format!("run {run}: accepted a transcript cut mid-line"));
        }
    }
    Ok(())
}

/// Same seed gives the same match, and replaying reproduces the loss round.
pub fn replay_determinism(runs: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for run in 0..runs {
        let n = rng.gen_range(4..=30);
        let s: u64 = rng.gen();
        let pair = run % PAIRS.len();
        let mode = if run % 3 == 0 { PlayMode::PlayOut } else { PlayMode::StopAtLoss };
        let first = play(n, pair, s, mode);
        let second = play(n, pair, s, mode);
        if first.transcript != second.transcript || first.avoider_stats != second.avoider_stats {
            return Err(format!("run {run}: two plays with seed {s} differ"));
        }
        let (state, loss) = replay(&first.transcript, PAIRS[pair].0).map_err(|e| e.to_string())?;
        if loss != first.loss_round || state.avoider_edges() != first.final_state.avoider_edges() {
            return Err(format!("run {run}: replay disagrees with the recorded match"));
        }
    }
    Ok(())
}

/// Bi-bunch structure after full-audit matches against assorted Enforcers.
pub fn bibunch_suite(matches: usize, n: usize, seed: u64) -> Result<(), String> {
    let enforcers = ["adversary:random", "adversary:lex", "adversary:greedy:bibunch", "odd_cycle_enforcer", "odd_cycle_enforcer:random"];
    let floor = (n * n) as f64 / 8.0 + (n as f64 - 2.0) / 12.0;
    for i in 0..matches {
        let id = enforcers[i % enforcers.len()];
        let mut avoider = BiBunchAvoider::new();
        let mut enforcer = build_strategy(id, Player::Enforcer).unwrap();
        let opts = MatchOptions::new(PlayMode::StopAtLoss, seed + i as u64).with_audit(AuditLevel::Full);
        let r = run_match_with(n, &mut avoider, enforcer.as_mut(), LosingProperty::NonBipartite, &opts)
            .map_err(|e| e.to_string())?;
        if let Some(v) = r.invariant_violations.first() {
            return Err(format!("match {i} vs {id}: {v:?}"));
        }
        if r.fault.is_some() {
            return Err(format!("match {i} vs {id}: strategy fault"));
        }
        let loss = r.loss_round.unwrap_or(usize::MAX);
        if (loss as f64) < floor {
            return Err(format!("match {i} vs {id}: lost in round {loss}, below {floor:.2}"));
        }
        let bunches = avoider.bunches();
        let mut side = vec![None; n];
        for (b, bunch) in bunches.iter().enumerate() {
            if n.is_multiple_of(2) && bunch.left.len() != bunch.right.len() {
                return Err(format!("match {i}: unbalanced bunch {bunch:?}"));
            }
            for (s, part) in [&bunch.left, &bunch.right].into_iter().enumerate() {
                for &v in part {
                    if side[v].replace((b, s)).is_some() {
                        return Err(format!("match {i}: vertex {v} in two bunches"));
                    }
                }
            }
        }
        let edges = r.final_state.avoider_edges();
        let safe = if r.loss_round.is_some() { &edges[..edges.len() - 1] } else { edges };
        for e in safe {
            match (side[e.u], side[e.v]) {
                (Some((a, x)), Some((b, y))) if a == b && x != y => {}
                other => return Err(format!("match {i}: Avoider edge {e:?} not across a bunch: {other:?}")),
            }
        }
        if !bipartite(n, safe) {
            return Err(format!("match {i}: Avoider graph not bipartite before the loss"));
        }
    }
    Ok(())
}
