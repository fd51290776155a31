//! Regret, time averages and boundary detection over a trajectory.

use serde::Serialize;

use crate::ftrl::{Record, Trajectory};
use crate::game::PayoffMatrix2x2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Player {
    Row,
    Column,
}

impl Player {
    /// The payoff vector this player observes at a record, and its own utility.
    fn feedback(self, m: &PayoffMatrix2x2, r: &Record) -> ([f64; 2], f64) {
        match self {
            Player::Row => (m.row_payoffs(r.x2), r.utility),
            Player::Column => {
                let g = m.column_payoffs(r.x1);
                ([-g[0], -g[1]], -r.utility)
            }
        }
    }
}

/// Cumulative regret through each iteration `t = 0..=T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretSeries {
    pub player: Player,
    /// Cumulative payoff of the best pure strategy in hindsight.
    pub best: Vec<f64>,
    /// Cumulative payoff actually received.
    pub realized: Vec<f64>,
    pub regret: Vec<f64>,
}

impl RegretSeries {
    pub fn len(&self) -> usize {
        self.regret.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regret.is_empty()
    }

    /// Largest `regret(t)/√t` over `t` in `[from, to]`, ignoring `t = 0`.
    pub fn max_ratio(&self, from: usize, to: usize) -> Option<f64> {
        self.ratios(from, to).reduce(f64::max)
    }

    /// `regret(t)/√t` for `t` in `[from, to]` (clipped to the horizon, `t ≥ 1`).
    pub fn ratios(&self, from: usize, to: usize) -> impl Iterator<Item = f64> + '_ {
        let end = to.min(self.regret.len().saturating_sub(1));
        (from.max(1)..=end).map(move |t| self.regret[t] / (t as f64).sqrt())
    }
}

/// Regret of one player: best fixed pure strategy minus realized payoff,
/// both summed over `t = 0..=T`.
pub fn regret(traj: &Trajectory, player: Player) -> RegretSeries {
    let m = traj.matrix();
    let n = traj.len();
    let mut best = Vec::with_capacity(n);
    let mut realized = Vec::with_capacity(n);
    let mut regret = Vec::with_capacity(n);
    let mut cumulative = [0.0f64; 2];
    let mut received = 0.0;
    for r in traj.records() {
        let (g, u) = player.feedback(m, r);
        cumulative[0] += g[0];
        cumulative[1] += g[1];
        received += u;
        let b = cumulative[0].max(cumulative[1]);
        best.push(b);
        realized.push(received);
        regret.push(b - received);
    }
    RegretSeries {
        player,
        best,
        realized,
        regret,
    }
}

/// Running means of the first-strategy probabilities, `(x̄11, x̄21)` at each `t`.
pub fn running_averages(traj: &Trajectory) -> Vec<[f64; 2]> {
    let mut sum = [0.0f64; 2];
    traj.records()
        .iter()
        .enumerate()
        .map(|(t, r)| {
            sum[0] += r.x1[0];
            sum[1] += r.x2[0];
            let k = (t + 1) as f64;
            [sum[0] / k, sum[1] / k]
        })
        .collect()
}

/// `(1/(T+1)) Σ_{t=0}^{T} x^t` for both players.
pub fn time_average_strategy(traj: &Trajectory, horizon: usize) -> ([f64; 2], [f64; 2]) {
    let mut s1 = [0.0f64; 2];
    let mut s2 = [0.0f64; 2];
    for r in &traj.records()[..=horizon] {
        for j in 0..2 {
            s1[j] += r.x1[j];
            s2[j] += r.x2[j];
        }
    }
    let k = (horizon + 1) as f64;
    ([s1[0] / k, s1[1] / k], [s2[0] / k, s2[1] / k])
}

/// `‖x̄^T − x^NE‖∞` over both players.
pub fn nash_gap(traj: &Trajectory, horizon: usize) -> f64 {
    let (a1, a2) = time_average_strategy(traj, horizon);
    let ne = traj.game.equilibrium();
    gap_to(&[a1, a2], &[ne.x1, ne.x2])
}

/// The same gap for a precomputed running average.
pub fn gap_from_average(average: [f64; 2], traj: &Trajectory) -> f64 {
    let ne = traj.game.equilibrium();
    (average[0] - ne.x1[0])
        .abs()
        .max((average[1] - ne.x2[0]).abs())
}

fn gap_to(avg: &[[f64; 2]; 2], ne: &[[f64; 2]; 2]) -> f64 {
    avg.iter()
        .zip(ne)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

fn fully_mixed(x: [f64; 2]) -> bool {
    x[0].min(x[1]) > 0.0
}

/// Whether both players place positive mass on both strategies.
pub fn both_mixed(r: &Record) -> bool {
    fully_mixed(r.x1) && fully_mixed(r.x2)
}

/// Smallest `B` such that no record from `B` on has both players fully mixed.
/// `None` when the final record is itself fully mixed for both players.
pub fn boundary_entry_index(traj: &Trajectory) -> Option<usize> {
    let records = traj.records();
    match records.iter().rposition(both_mixed) {
        None => Some(0),
        Some(last) if last + 1 < records.len() => Some(last + 1),
        Some(_) => None,
    }
}

/// Number of records at or after `from` where both players are fully mixed.
pub fn mixed_count_from(traj: &Trajectory, from: usize) -> usize {
    traj.records()[from.min(traj.len())..]
        .iter()
        .filter(|r| both_mixed(r))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{DualTransform, ZPoint};
    use crate::ftrl::simulate;
    use crate::game::{normalize, NormalizedGame};

    fn pure_start_run(t: usize) -> Trajectory {
        simulate(
            &NormalizedGame::matching_pennies(),
            [1.0, 0.0],
            [1.0, 0.0],
            1.0,
            t,
        )
        .unwrap()
    }

    #[test]
    fn pennies_regret_examples() {
        let traj = pure_start_run(10);
        let r = regret(&traj, Player::Row);
        assert_eq!(r.regret[0], 0.0);
        assert_eq!(r.regret[4], 2.0);
        assert_eq!(r.regret[10], 2.0);
        assert_eq!(r.len(), 11);
    }

    #[test]
    fn regret_is_nonnegative_for_column_player_too() {
        let traj = pure_start_run(50);
        let r = regret(&traj, Player::Column);
        assert!(r.regret.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn pure_start_run_lives_on_the_boundary() {
        let traj = pure_start_run(100);
        assert_eq!(boundary_entry_index(&traj), Some(0));
        assert_eq!(mixed_count_from(&traj, 0), 0);
    }

    #[test]
    fn equilibrium_run_has_no_entry_and_zero_gap() {
        let game = normalize(&PayoffMatrix2x2::new(2.0, -1.0, -2.0, 4.0).unwrap()).unwrap();
        let ne = game.equilibrium();
        let (y1, y2) = DualTransform::new(&game, 0.3).from_z(ZPoint::new(ne.x1[0], ne.x2[0]));
        let traj = simulate(&game, y1, y2, 0.3, 10).unwrap();
        assert_eq!(boundary_entry_index(&traj), None);
        assert!(nash_gap(&traj, 10) < 1e-12);
        let avg = running_averages(&traj);
        assert!(gap_from_average(avg[10], &traj) < 1e-12);
    }

    #[test]
    fn averages_agree() {
        let traj = simulate(
            &NormalizedGame::matching_pennies(),
            [0.2, -0.2],
            [-0.3, 0.3],
            0.15,
            300,
        )
        .unwrap();
        let running = running_averages(&traj);
        for t in [0, 1, 17, 300] {
            let (a1, a2) = time_average_strategy(&traj, t);
            assert!((running[t][0] - a1[0]).abs() < 1e-14);
            assert!((running[t][1] - a2[0]).abs() < 1e-14);
            assert!((nash_gap(&traj, t) - gap_from_average(running[t], &traj)).abs() < 1e-14);
        }
    }

    #[test]
    fn ratio_window_is_clipped() {
        let traj = pure_start_run(10);
        let r = regret(&traj, Player::Row);
        assert_eq!(r.ratios(0, 100).count(), 10);
        assert_eq!(r.max_ratio(4, 4), Some(1.0));
    }
}
