//! Per-run measurements shared by the simulate and sweep commands.

use serde::Serialize;
use zslab_core::metrics::mixed_count_from;
use zslab_core::partition::{analyze, ChangeTrend};
use zslab_core::{
    boundary_entry_index, dual_path, linear_fit, regret, DualPath, LinearFit, PartitionReport,
    Player, RegretSeries, Trajectory, ZPoint,
};

/// Partitions discarded before fitting growth laws.
pub const BURN_IN: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct RunMetrics {
    pub horizon: usize,
    pub final_regret: f64,
    /// Largest and median `regret(t)/√t` over the ratio window.
    pub max_ratio: Option<f64>,
    pub median_ratio: Option<f64>,
    pub boundary_entry: Option<usize>,
    pub mixed_after_entry: usize,
    pub partitions: usize,
    pub kappa: Option<usize>,
    pub change_trend: Option<ChangeTrend>,
    pub skips: usize,
    pub out_of_order: usize,
    pub energy_fit: Option<LinearFit>,
    pub time_fit: Option<LinearFit>,
    /// Smallest one-step energy change.
    pub min_energy_step: f64,
    /// Largest one-step energy change while both coordinates stay on one linear piece.
    pub max_flat_change: f64,
    pub flat_steps: usize,
}

/// Everything derived from one trajectory.
pub struct RunAnalysis {
    pub path: DualPath,
    pub regret: RegretSeries,
    pub partitions: Option<PartitionReport>,
    pub metrics: RunMetrics,
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    let mid = v.len() / 2;
    let (_, m, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    Some(*m)
}

/// Both z-coordinates lie in the same linear piece at `a` and `b`.
pub fn same_linear_pieces(a: ZPoint, b: ZPoint) -> bool {
    let piece = |z: f64| {
        if z <= 0.0 {
            Some(false)
        } else if z >= 1.0 {
            Some(true)
        } else {
            None
        }
    };
    let (a1, a2, b1, b2) = (piece(a.z1), piece(a.z2), piece(b.z1), piece(b.z2));
    a1.is_some() && a2.is_some() && a1 == b1 && a2 == b2
}

/// Measures one run; `window_start` opens the `regret/√t` window.
pub fn analyze_run(traj: &Trajectory, window_start: usize) -> RunAnalysis {
    let path = dual_path(traj);
    let series = regret(traj, Player::Row);
    let horizon = traj.horizon();
    let ratios: Vec<f64> = series.ratios(window_start, horizon).collect();
    let boundary_entry = boundary_entry_index(traj);
    let partitions = boundary_entry.and_then(|b| analyze(traj, &path, b).ok());

    let mut min_energy_step = f64::INFINITY;
    let mut max_flat_change: f64 = 0.0;
    let mut flat_steps = 0;
    for t in 0..horizon {
        let d = path.energy[t + 1] - path.energy[t];
        min_energy_step = min_energy_step.min(d);
        if same_linear_pieces(path.z[t], path.z[t + 1]) {
            flat_steps += 1;
            max_flat_change = max_flat_change.max(d.abs());
        }
    }

    let metrics = RunMetrics {
        horizon,
        final_regret: series.regret[horizon],
        max_ratio: ratios.iter().copied().reduce(f64::max),
        median_ratio: median(ratios),
        boundary_entry,
        mixed_after_entry: boundary_entry.map_or(0, |b| mixed_count_from(traj, b)),
        partitions: partitions.as_ref().map_or(0, |p| p.len()),
        kappa: partitions.as_ref().map(|p| p.kappa()),
        change_trend: partitions.as_ref().and_then(|p| p.change_trend(BURN_IN)),
        skips: partitions.as_ref().map_or(0, |p| p.skip_count()),
        out_of_order: partitions.as_ref().map_or(0, |p| p.out_of_order_count()),
        energy_fit: partitions.as_ref().map(|p| p.energy_fit(BURN_IN)),
        time_fit: partitions.as_ref().map(|p| p.time_fit(BURN_IN)),
        min_energy_step: if horizon == 0 { 0.0 } else { min_energy_step },
        max_flat_change,
        flat_steps,
    };
    RunAnalysis {
        path,
        regret: series,
        partitions,
        metrics,
    }
}

/// Fit of the squared running maximum of regret against `t`, for `t >= 1`.
pub fn envelope_fit(series: &RegretSeries) -> LinearFit {
    let mut best = f64::NEG_INFINITY;
    let (xs, ys): (Vec<f64>, Vec<f64>) = series
        .regret
        .iter()
        .enumerate()
        .map(|(t, &r)| {
            best = best.max(r);
            (t as f64, best * best)
        })
        .skip(1)
        .unzip();
    linear_fit(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use zslab_core::{simulate, NormalizedGame};

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(vec![4.0, 1.0, 3.0, 2.0]), Some(3.0));
        assert_eq!(median(vec![]), None);
    }

    #[test]
    fn linear_piece_pairs() {
        assert!(same_linear_pieces(
            ZPoint::new(1.5, -0.2),
            ZPoint::new(1.0, -3.0)
        ));
        assert!(!same_linear_pieces(
            ZPoint::new(1.5, -0.2),
            ZPoint::new(0.5, -3.0)
        ));
        assert!(!same_linear_pieces(
            ZPoint::new(1.5, 2.0),
            ZPoint::new(1.5, -3.0)
        ));
    }

    #[test]
    fn pure_start_run_metrics() {
        let traj = simulate(
            &NormalizedGame::matching_pennies(),
            [1.0, 0.0],
            [1.0, 0.0],
            1.0,
            5050,
        )
        .unwrap();
        let a = analyze_run(&traj, 10);
        let m = &a.metrics;
        assert_eq!(m.boundary_entry, Some(0));
        assert_eq!(m.mixed_after_entry, 0);
        assert_eq!(m.partitions, 98);
        assert_eq!(m.skips, 0);
        assert!(m.min_energy_step >= -1e-12);
        assert!(m.time_fit.unwrap().r_squared > 0.999);
        assert!(envelope_fit(&a.regret).r_squared > 0.95);
    }
}
