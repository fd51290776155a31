mod common;

use common::random_game;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zslab_core::metrics::mixed_count_from;
use zslab_core::partition::analyze;
use zslab_core::{
    boundary_entry_index, classify, dual_path, energy_drift, first_rotation, integrate, nash_gap,
    regret, simulate, time_average_strategy, NormalizedGame, Player, Region, Trajectory, ZPoint,
};

fn reference_run(eta: f64, t: usize) -> Trajectory {
    simulate(
        &NormalizedGame::matching_pennies(),
        [0.2, -0.2],
        [-0.3, 0.3],
        eta,
        t,
    )
    .unwrap()
}

/// Regret recomputed from the payoff vectors: the cumulative payoff of each
/// pure strategy through `t` is `y^{t+1} - y^0`.
fn regret_from_payoff_vectors(traj: &Trajectory, t: usize, player: Player) -> f64 {
    let (a0, b0) = traj.raw_payoffs(0);
    let (a1, b1) = traj.raw_payoffs(t + 1);
    let realized: f64 = traj.records()[..=t].iter().map(|r| r.utility).sum();
    match player {
        Player::Row => (a1[0] - a0[0]).max(a1[1] - a0[1]) - realized,
        Player::Column => (b1[0] - b0[0]).max(b1[1] - b0[1]) + realized,
    }
}

#[test]
fn incremental_regret_matches_recomputation() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let game = random_game(&mut rng);
    let traj = simulate(&game, [1.0, -0.5], [0.25, 0.0], 0.3, 200_000).unwrap();
    for player in [Player::Row, Player::Column] {
        let series = regret(&traj, player);
        for _ in 0..100 {
            let t = rng.gen_range(0..traj.horizon());
            let scratch = regret_from_payoff_vectors(&traj, t, player);
            assert!(
                (series.regret[t] - scratch).abs() <= 1e-9 * (1.0 + scratch.abs()),
                "t={t}"
            );
        }
    }
}

#[test]
fn pure_best_response_dominates_mixed_comparators() {
    let traj = reference_run(0.15, 5000);
    let series = regret(&traj, Player::Row);
    let m = traj.matrix();
    let mut sum = [0.0; 2];
    for (t, r) in traj.records().iter().enumerate() {
        let g = m.row_payoffs(r.x2);
        sum = [sum[0] + g[0], sum[1] + g[1]];
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            assert!(p * sum[0] + (1.0 - p) * sum[1] <= series.best[t] + 1e-9);
        }
    }
}

#[test]
fn duality_gap_of_averages_is_bounded_by_regret() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for game in [NormalizedGame::matching_pennies(), random_game(&mut rng)] {
        let traj = simulate(&game, [0.5, 0.0], [0.0, 0.3], 0.2, 50_000).unwrap();
        let (r1, r2) = (regret(&traj, Player::Row), regret(&traj, Player::Column));
        let m = traj.matrix();
        for t in [100, 1_000, 10_000, 50_000] {
            let (a1, a2) = time_average_strategy(&traj, t);
            let best_row = m.row_payoffs(a2).into_iter().fold(f64::MIN, f64::max);
            let best_col = m.column_payoffs(a1).into_iter().fold(f64::MAX, f64::min);
            let bound = (r1.regret[t] + r2.regret[t]) / (t + 1) as f64;
            assert!(best_row - best_col <= bound + 1e-9, "t={t}");
        }
    }
}

#[test]
fn average_strategy_approaches_equilibrium() {
    let traj = reference_run(0.15, 100_000);
    assert!(nash_gap(&traj, 100_000) < nash_gap(&traj, 1_000));
    assert!(nash_gap(&traj, 100_000) < 0.05);
}

#[test]
fn reference_run_settles_on_the_boundary() {
    let traj = reference_run(0.15, 5000);
    let b = boundary_entry_index(&traj).expect("boundary reached");
    assert!(b > 0 && b < 5000);
    assert_eq!(mixed_count_from(&traj, b), 0);
    assert!(mixed_count_from(&traj, b - 1) > 0);
}

#[test]
fn reference_run_rotates_clockwise() {
    let traj = reference_run(0.15, 140);
    let path = dual_path(&traj);
    let b = boundary_entry_index(&traj).unwrap();
    let report = analyze(&traj, &path, b).unwrap();
    assert_eq!(report.out_of_order_count(), 0);
    assert_eq!(report.skip_count(), 0);
    // Iterations 95 to 140 pass through all four regions once.
    let mut seen: Vec<Region> = (95..=140).map(|t| classify(path.z[t])).collect();
    seen.dedup();
    assert!(seen.len() >= 4 && seen.len() <= 5, "{seen:?}");
    assert!(seen
        .windows(2)
        .all(|w| (w[1].index().unwrap() + 4 - w[0].index().unwrap()) % 4 == 1));
}

#[test]
fn partitions_grow_linearly_in_energy_and_quadratically_in_time() {
    for eta in [0.05, 0.15, 0.5] {
        let traj = reference_run(eta, 300_000);
        let path = dual_path(&traj);
        let b = boundary_entry_index(&traj).unwrap();
        let report = analyze(&traj, &path, b).unwrap();
        assert!(report.len() > 200, "eta={eta}: {}", report.len());
        assert_eq!(report.skip_count(), 0, "eta={eta}");
        assert_eq!(report.out_of_order_count(), 0);
        assert!(report.energy_fit(10).r_squared >= 0.99);
        assert!(report.time_fit(10).r_squared >= 0.99);
        let trend = report.change_trend(10).unwrap();
        assert!(
            trend.last_decile_max <= trend.first_decile_max + 1,
            "{trend:?}"
        );
        assert!(report
            .partitions
            .iter()
            .all(|p| p.length >= 1 && p.start >= b));
        for p in report.complete() {
            let d = p.energy_delta.unwrap();
            assert!(d > 0.0, "eta={eta} j={}", p.j);
        }
    }
}

#[test]
fn continuous_refinement_reduces_drift_over_a_rotation() {
    let game = NormalizedGame::matching_pennies();
    let traj = reference_run(0.15, 2000);
    let ne = game.equilibrium();
    let steps = first_rotation(&dual_path(&traj).z, ZPoint::new(ne.x1[0], ne.x2[0])).unwrap();
    let mut last = f64::INFINITY;
    for k in 0..=4 {
        let dt = 0.5f64.powi(k);
        let run = integrate(&game, [0.2, -0.2], [-0.3, 0.3], 0.15, steps as f64, dt).unwrap();
        let drift = energy_drift(&run);
        assert!(drift >= -1e-9);
        assert!(drift <= last, "dt={dt}: {drift} > {last}");
        assert!(run.energy.windows(2).all(|w| w[1] >= w[0] - 1e-9));
        last = drift;
    }
}

proptest! {
    #[test]
    fn every_point_has_exactly_one_region(
        z1 in prop_oneof![Just(0.0), Just(1.0), -3.0f64..4.0],
        z2 in prop_oneof![Just(0.0), Just(1.0), -3.0f64..4.0],
    ) {
        let member = [
            z1 < 1.0 && z2 >= 1.0,
            z1 >= 1.0 && z2 > 0.0,
            z1 > 0.0 && z2 <= 0.0,
            z1 <= 0.0 && z2 < 1.0,
            z1 > 0.0 && z1 < 1.0 && z2 > 0.0 && z2 < 1.0,
        ];
        prop_assert_eq!(member.iter().filter(|&&m| m).count(), 1);
        let expected = [Region::Z0, Region::Z1, Region::Z2, Region::Z3, Region::Interior]
            [member.iter().position(|&m| m).unwrap()];
        prop_assert_eq!(classify(ZPoint::new(z1, z2)), expected);
    }
}
