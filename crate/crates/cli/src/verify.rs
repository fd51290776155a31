//! Self-check suites runnable from the command line.
//!
//! Each suite compares the library against an independent computation and
//! reports how many checks ran, how many failed, and the first failure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use zslab_core::dual::conjugate_energy_expanded;
use zslab_core::pennies::{simulate_pure_start, verify_against_simulation};
use zslab_core::{
    conjugate_energy, energy_coefficients, gd_strategy, normalize, simulate, support_set,
    DualTransform, NormalizedGame, PayoffMatrix2x2, ZPoint,
};

use crate::analysis::{analyze_run, BURN_IN};
use crate::config::on_line_start;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Pennies,
    Projection,
    Energy,
    Partitions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(suite: &'static str) -> Self {
        Self {
            suite,
            checks: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {}: {} checks, {} failures",
            self.suite, self.checks, self.failures
        )?;
        if let Some(d) = &self.first_failure {
            write!(f, "\n  first failure: {d}")?;
        }
        Ok(())
    }
}

/// Default iteration counts per suite.
pub fn default_size(suite: Suite) -> usize {
    match suite {
        Suite::Pennies => 20_100,
        Suite::Projection => 10_000,
        Suite::Energy => 100_000,
        Suite::Partitions => 1_000_000,
    }
}

/// Runs a suite; `size` is the horizon (pennies, partitions) or sample count.
pub fn run(suite: Suite, size: usize) -> SuiteReport {
    match suite {
        Suite::Pennies => pennies(size),
        Suite::Projection => projection(size),
        Suite::Energy => energy(size),
        Suite::Partitions => partitions(size),
    }
}

/// Simulated Matching Pennies against the closed-form trajectory.
pub fn pennies(t_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new("pennies");
    match simulate_pure_start(t_max) {
        Ok(traj) => {
            let check = verify_against_simulation(&traj);
            report.checks = check.checked;
            if let Some(d) = check.first_divergence {
                report.failures = 1;
                report.first_failure = Some(format!(
                    "t={}: {} expected {} found {}",
                    d.t, d.quantity, d.expected, d.found
                ));
            }
        }
        Err(e) => report.check(false, || e.to_string()),
    }
    report
}

/// Maximizer of `y·x - ||x||²/(2η)` over the simplex via bisection on the
/// multiplier of the sum constraint.
pub fn qp_oracle(y: &[f64], eta: f64) -> Vec<f64> {
    let mass = |l: f64| y.iter().map(|v| (eta * (v - l)).max(0.0)).sum::<f64>();
    let top = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut lo, mut hi) = (top - 1.0 / eta, top);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let l = 0.5 * (lo + hi);
    y.iter().map(|v| (eta * (v - l)).max(0.0)).collect()
}

/// Largest subset satisfying the optimality conditions of the closed form:
/// non-negative masses inside, non-positive would-be masses outside.
pub fn exhaustive_support(y: &[f64], eta: f64) -> Vec<usize> {
    let n = y.len();
    let mut best = Vec::new();
    for bits in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|j| bits >> j & 1 == 1).collect();
        let size = s.len() as f64;
        let mean = s.iter().map(|&j| y[j]).sum::<f64>() / size;
        let mass = |j: usize| eta * (y[j] - mean) + 1.0 / size;
        let ok = (0..n).all(|j| {
            if s.contains(&j) {
                mass(j) >= 0.0
            } else {
                mass(j) <= 0.0
            }
        });
        if ok && s.len() > best.len() {
            best = s;
        }
    }
    best
}

/// Closed-form projection against the QP and subset oracles on random inputs.
pub fn projection(samples: usize) -> SuiteReport {
    let mut report = SuiteReport::new("projection");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..samples {
        let n = rng.gen_range(2..=4);
        let eta = 10f64.powf(rng.gen_range(-2.0..1.0));
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let x = gd_strategy(&y, eta);
        let q = qp_oracle(&y, eta);
        let err = x
            .iter()
            .zip(&q)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        report.check(err <= 1e-8, || {
            format!("y={y:?} eta={eta}: L-inf error {err:e}")
        });
        let s = support_set(&y, eta);
        let e = exhaustive_support(&y, eta);
        report.check(s.indices() == e.as_slice(), || {
            format!(
                "y={y:?} eta={eta}: support {:?} vs exhaustive {e:?}",
                s.indices()
            )
        });
    }
    report
}

fn suite_games() -> Vec<NormalizedGame> {
    let mut games = vec![NormalizedGame::matching_pennies()];
    for (a, b, c, d) in [(2.0, -1.0, -2.0, 4.0), (3.0, -1.0, 0.0, 2.0)] {
        let m = PayoffMatrix2x2::new(a, b, c, d).expect("finite entries");
        games.push(normalize(&m).expect("fully mixed game"));
    }
    games
}

/// Piecewise energy against the direct conjugate, then energy monotonicity
/// and flatness along runs of `horizon` iterations.
pub fn energy(horizon: usize) -> SuiteReport {
    let mut report = SuiteReport::new("energy");
    let mut rng = ChaCha8Rng::seed_from_u64(0xe7e7);
    let games = suite_games();
    for i in 0..horizon.max(1) {
        let game = &games[i % games.len()];
        let eta = 10f64.powf(rng.gen_range(-2.0..0.5));
        let t = DualTransform::new(game, eta);
        let coeffs = energy_coefficients(game, eta);
        let z = ZPoint::new(rng.gen_range(-1.5..2.5), rng.gen_range(-1.5..2.5));
        let (y1, y2) = t.from_z(z);
        for (p, (zi, y)) in [(z.z1, y1), (z.z2, y2)].into_iter().enumerate() {
            let direct = conjugate_energy(&y, eta);
            let piece = coeffs.players[p].eval(zi);
            let expanded = conjugate_energy_expanded(&y, eta);
            let tol = 1e-9 * (1.0 + direct.abs());
            report.check(
                (piece - direct).abs() <= tol && (expanded - direct).abs() <= tol,
                || {
                    format!(
                        "z={zi} eta={eta}: piecewise {piece}, direct {direct}, expanded {expanded}"
                    )
                },
            );
        }
    }
    for game in &games {
        for eta in [0.05, 0.15, 0.5, 1.0] {
            let (y1, y2) = on_line_start(game, [0.2, -0.3]);
            let traj = match simulate(game, y1, y2, eta, horizon) {
                Ok(t) => t,
                Err(e) => {
                    report.check(false, || e.to_string());
                    continue;
                }
            };
            let m = analyze_run(&traj, 1).metrics;
            report.check(m.min_energy_step >= -1e-9, || {
                format!("eta={eta}: energy dropped by {:e}", -m.min_energy_step)
            });
            report.check(m.max_flat_change <= 1e-9, || {
                format!(
                    "eta={eta}: energy changed by {:e} on a linear segment",
                    m.max_flat_change
                )
            });
        }
    }
    report
}

/// Partition growth laws on Matching Pennies runs of `horizon` iterations.
pub fn partitions(horizon: usize) -> SuiteReport {
    let mut report = SuiteReport::new("partitions");
    let game = NormalizedGame::matching_pennies();
    for eta in [0.05, 0.15, 0.5, 1.0] {
        let (y1, y2) = on_line_start(&game, [0.2, -0.3]);
        let traj = match simulate(&game, y1, y2, eta, horizon) {
            Ok(t) => t,
            Err(e) => {
                report.check(false, || e.to_string());
                continue;
            }
        };
        let m = analyze_run(&traj, 1).metrics;
        report.check(m.partitions > BURN_IN + 2, || {
            format!("eta={eta}: only {} partitions", m.partitions)
        });
        let r2 = |f: Option<zslab_core::LinearFit>| f.map_or(f64::NAN, |f| f.r_squared);
        let (er, tr) = (r2(m.energy_fit), r2(m.time_fit));
        report.check(er >= 0.99, || format!("eta={eta}: energy fit R² {er}"));
        report.check(tr >= 0.99, || format!("eta={eta}: time fit R² {tr}"));
        report.check(m.out_of_order == 0, || {
            format!("eta={eta}: {} out-of-order transitions", m.out_of_order)
        });
        if eta <= 0.5 {
            report.check(m.skips == 0, || format!("eta={eta}: {} skips", m.skips));
        }
        if let Some(trend) = m.change_trend {
            report.check(trend.last_decile_max <= trend.first_decile_max + 1, || {
                format!("eta={eta}: strategy changes grow {trend:?}")
            });
        }
    }
    report
}
