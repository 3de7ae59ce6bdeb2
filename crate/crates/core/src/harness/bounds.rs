use crate::game::edge_count;

/// How a bound is judged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Every loss round must be at least the bound (a match Avoider never loses passes).
    Lower,
    /// Every loss round must be at most the bound (a match Avoider never loses fails).
    Upper,
    /// Reported as a normalised margin, never judged.
    MarginOnly,
}

impl Direction {
    pub fn id(self) -> &'static str {
        match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
            Direction::MarginOnly => "margin-only",
        }
    }
}

/// A closed-form bound on Avoider's loss round as a function of `n`.
#[derive(Clone, Copy, Debug)]
pub struct BoundSpec {
    pub name: &'static str,
    pub direction: Direction,
    pub formula: &'static str,
    pub source: &'static str,
    /// Below this `n` a failure is a warning.
    pub min_n: usize,
    value: fn(f64) -> f64,
    /// Scale used in the margin: `(loss - value) / scale` for margin-only bounds.
    scale: fn(f64) -> f64,
}

impl BoundSpec {
    pub fn value(&self, n: usize) -> f64 {
        (self.value)(n as f64)
    }

    /// The integer loss-round threshold: ceiling for lower bounds, floor for upper.
    pub fn threshold(&self, n: usize) -> i64 {
        let v = self.value(n);
        match self.direction {
            Direction::Upper => (v + 1e-9).floor() as i64,
            _ => (v - 1e-9).ceil() as i64,
        }
    }

    pub fn scale(&self, n: usize) -> f64 {
        (self.scale)(n as f64)
    }

    /// Signed slack of one match: positive means inside the bound.
    /// `None` stands for a match Avoider never lost.
    pub fn margin(&self, n: usize, loss_round: Option<usize>) -> f64 {
        let v = self.value(n);
        match (self.direction, loss_round) {
            (Direction::Lower, Some(r)) => r as f64 - v,
            (Direction::Lower, None) => f64::INFINITY,
            (Direction::Upper, Some(r)) => v - r as f64,
            (Direction::Upper, None) => f64::NEG_INFINITY,
            (Direction::MarginOnly, Some(r)) => (r as f64 - v) / self.scale(n),
            (Direction::MarginOnly, None) => f64::INFINITY,
        }
    }

    pub fn holds(&self, n: usize, loss_round: Option<usize>) -> bool {
        match (self.direction, loss_round) {
            (Direction::Lower, Some(r)) => r as i64 >= self.threshold(n),
            (Direction::Lower, None) => true,
            (Direction::Upper, Some(r)) => r as i64 <= self.threshold(n),
            (Direction::Upper, None) => false,
            (Direction::MarginOnly, _) => true,
        }
    }

    pub fn asserted_at(&self, n: usize) -> bool {
        self.direction != Direction::MarginOnly && n >= self.min_n
    }
}

fn half_c_n_minus_1(n: f64) -> f64 {
    edge_count(n as usize - 1) as f64 / 2.0
}

fn ceil_log2(n: f64) -> f64 {
    (n as usize).next_power_of_two().trailing_zeros() as f64
}

fn one(_: f64) -> f64 {
    1.0
}

/// The isolated-vertex strategy's threshold `l` at its default `ε`.
pub fn isolated_threshold(n: usize, eps: f64) -> f64 {
    (1.0 - 4.0 * eps) / 2.0 * (n as f64).ln()
}

pub const BOUNDS: &[BoundSpec] = &[
    BoundSpec {
        name: "planarity_lower",
        direction: Direction::Lower,
        formula: "3n - 28 sqrt(n)",
        source: "planarity avoidance strategy",
        min_n: 0,
        value: |n| 3.0 * n - 28.0 * n.sqrt(),
        scale: one,
    },
    BoundSpec {
        name: "odd_cycle_upper",
        direction: Direction::Upper,
        formula: "n^2/8 + n/2 + 1",
        source: "forcing an odd cycle",
        min_n: 0,
        value: |n| n * n / 8.0 + n / 2.0 + 1.0,
        scale: one,
    },
    BoundSpec {
        name: "bipartite_lower",
        direction: Direction::Lower,
        formula: "n^2/8 + (n-2)/12",
        source: "avoiding odd cycles with bi-bunches",
        min_n: 0,
        value: |n| n * n / 8.0 + (n - 2.0) / 12.0,
        scale: one,
    },
    BoundSpec {
        name: "bipartite_theta",
        direction: Direction::MarginOnly,
        formula: "(loss - n^2/8) / n",
        source: "non-bipartite game, n^2/8 + Theta(n)",
        min_n: 0,
        value: |n| n * n / 8.0,
        scale: |n| n,
    },
    BoundSpec {
        name: "spanning_upper",
        direction: Direction::Upper,
        formula: "C(n-1,2)/2 + 2 ceil(log2 n) + 1",
        source: "forcing a connected spanning graph",
        min_n: 0,
        value: |n| half_c_n_minus_1(n) + 2.0 * ceil_log2(n) + 1.0,
        scale: one,
    },
    BoundSpec {
        name: "isolated_lower_core",
        direction: Direction::Lower,
        formula: "C(n-1,2)/2 + 1",
        source: "keeping an isolated vertex",
        min_n: 0,
        value: |n| half_c_n_minus_1(n) + 1.0,
        scale: one,
    },
    BoundSpec {
        name: "isolated_lower_full",
        direction: Direction::Lower,
        formula: "C(n-1,2)/2 + l/2, l = (1-4eps)/2 ln n, eps = 0.1",
        source: "keeping an isolated vertex",
        min_n: 64,
        value: |n| half_c_n_minus_1(n) + isolated_threshold(n as usize, 0.1) / 2.0,
        scale: one,
    },
    BoundSpec {
        name: "connectivity_theta",
        direction: Direction::MarginOnly,
        formula: "(loss - C(n-1,2)/2) / ln n",
        source: "connectivity game, C(n-1,2)/2 + Theta(log n)",
        min_n: 0,
        value: half_c_n_minus_1,
        scale: |n| n.ln(),
    },
];

pub fn bound_by_name(name: &str) -> Option<&'static BoundSpec> {
    BOUNDS.iter().find(|b| b.name == name)
}
