//! Closed-form trajectory of Matching Pennies with unit step size started
//! from `y1 = y2 = (1, 0)`.
//!
//! Writing `t = n(n+1)/2 + k` with `0 <= k <= n`, both players play pure
//! strategies throughout and the payoff vectors cycle through four integer
//! patterns by `n mod 4`. Regret grows like `n/2`, i.e. like `√(t/2)`.

use num_rational::Ratio;
use serde::Serialize;

use crate::ftrl::{simulate, EngineError, Trajectory};
use crate::game::NormalizedGame;
use crate::metrics::{regret, Player};

/// `t = n(n+1)/2 + k` with `0 <= k <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TriangularIndex {
    pub n: u64,
    pub k: u64,
}

impl TriangularIndex {
    pub fn iteration(&self) -> u64 {
        self.n * (self.n + 1) / 2 + self.k
    }
}

pub fn triangular_index(t: u64) -> TriangularIndex {
    let tri = |n: u64| n * (n + 1) / 2;
    let mut n = ((((8 * t + 1) as f64).sqrt() - 1.0) / 2.0) as u64;
    while tri(n) > t {
        n -= 1;
    }
    while tri(n + 1) <= t {
        n += 1;
    }
    TriangularIndex { n, k: t - tri(n) }
}

/// Raw payoff vectors `(y1, y2)` at iteration `t`.
pub fn exact_payoff_vectors(t: u64) -> ([i64; 2], [i64; 2]) {
    let TriangularIndex { n, k } = triangular_index(t);
    let (n, k) = (n as i64, k as i64);
    let a = [1 + k, -k];
    let b = [1 + n - k, -n + k];
    let c = [-k, 1 + k];
    let d = [-n + k, 1 + n - k];
    match n % 4 {
        0 => (a, b),
        1 => (b, c),
        2 => (c, d),
        _ => (d, a),
    }
}

/// Row player's utility summed over iterations `0..=t`.
pub fn exact_cumulative_utility(t: u64) -> i64 {
    let TriangularIndex { n, k } = triangular_index(t);
    let (n, k) = (n as i64, k as i64);
    if n % 2 == 0 {
        1 - n / 2 + k
    } else {
        (n - 1) / 2 - k
    }
}

/// Row player's regret through iteration `t`.
pub fn exact_regret(t: u64) -> Ratio<i64> {
    let TriangularIndex { n, k } = triangular_index(t);
    let n = n as i64;
    let half = |v: i64| Ratio::new(v, 2);
    match (n % 4, k < n as u64) {
        (0, true) => half(n),
        (1, true) => half(n - 1),
        (2, true) => half(n) + 1,
        (_, true) => half(n + 1),
        (0, false) => half(n),
        (1, false) => half(n + 3),
        (2, false) => half(n) + 1,
        (_, false) => half(n + 1),
    }
}

/// Simulates the oracle's run for `t_max` iterations.
pub fn simulate_pure_start(t_max: usize) -> Result<Trajectory, EngineError> {
    simulate(
        &NormalizedGame::matching_pennies(),
        [1.0, 0.0],
        [1.0, 0.0],
        1.0,
        t_max,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Divergence {
    pub t: u64,
    pub quantity: &'static str,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    /// Iterations compared, `0..=t_max`.
    pub checked: u64,
    pub first_divergence: Option<Divergence>,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.first_divergence.is_none()
    }
}

fn to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Compares payoff vectors, cumulative utility and regret of a simulated
/// run against the closed forms with exact equality.
pub fn verify_against_simulation(traj: &Trajectory) -> OracleCheck {
    let series = regret(traj, Player::Row);
    let mut utility = 0.0;
    for t in 0..traj.len() {
        let tt = t as u64;
        let (y1, y2) = traj.raw_payoffs(t);
        let (e1, e2) = exact_payoff_vectors(tt);
        let expect = [e1[0] as f64, e1[1] as f64, e2[0] as f64, e2[1] as f64];
        let found = [y1[0], y1[1], y2[0], y2[1]];
        utility += traj.record(t).utility;
        let eu = exact_cumulative_utility(tt) as f64;
        let er = to_f64(exact_regret(tt));
        let mismatch = if expect != found {
            Some((
                "payoff vectors",
                format!("{expect:?}"),
                format!("{found:?}"),
            ))
        } else if utility != eu {
            Some(("cumulative utility", eu.to_string(), utility.to_string()))
        } else if series.regret[t] != er {
            Some(("regret", er.to_string(), series.regret[t].to_string()))
        } else {
            None
        };
        if let Some((quantity, expected, found)) = mismatch {
            return OracleCheck {
                checked: tt + 1,
                first_divergence: Some(Divergence {
                    t: tt,
                    quantity,
                    expected,
                    found,
                }),
            };
        }
    }
    OracleCheck {
        checked: traj.len() as u64,
        first_divergence: None,
    }
}
