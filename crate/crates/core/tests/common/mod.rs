#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use zslab_core::{check_assumptions, normalize, NormalizedGame, PayoffMatrix2x2};

/// A random game with a unique fully mixed equilibrium, normalized.
pub fn random_game(rng: &mut ChaCha8Rng) -> NormalizedGame {
    loop {
        let mut e = || rng.gen_range(-5.0..5.0);
        let m = match PayoffMatrix2x2::new(e(), e(), e(), e()) {
            Ok(m) => m,
            Err(_) => continue,
        };
        if m.mixing_denominator().abs() < 0.5 || !check_assumptions(&m).all_passed() {
            continue;
        }
        let ne = zslab_core::nash_equilibrium(&m).unwrap();
        if [ne.x1[0], ne.x2[0]].iter().any(|p| (p - 0.5).abs() > 0.45) {
            continue;
        }
        return normalize(&m).unwrap();
    }
}

/// Maximizer of `y·x - ||x||²/(2η)` on the simplex by bisection on the
/// multiplier of the sum constraint: `x_j = max(0, η(y_j - λ))`.
pub fn qp_oracle(y: &[f64], eta: f64) -> Vec<f64> {
    let mass = |lambda: f64| y.iter().map(|v| (eta * (v - lambda)).max(0.0)).sum::<f64>();
    let max = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (mut lo, mut hi) = (max - 1.0 / eta, max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    y.iter().map(|v| (eta * (v - lambda)).max(0.0)).collect()
}

/// The largest subset whose closed-form masses are non-negative and
/// whose excluded coordinates would receive non-positive mass.
pub fn exhaustive_support(y: &[f64], eta: f64) -> Vec<usize> {
    let n = y.len();
    let mut best: Vec<usize> = Vec::new();
    for bits in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|j| bits & (1 << j) != 0).collect();
        let size = s.len() as f64;
        let mean = s.iter().map(|&j| y[j]).sum::<f64>() / size;
        let mass = |j: usize| eta * (y[j] - mean) + 1.0 / size;
        let valid = (0..n).all(|j| {
            if s.contains(&j) {
                mass(j) >= 0.0
            } else {
                mass(j) <= 0.0
            }
        });
        if valid && s.len() > best.len() {
            best = s;
        }
    }
    best
}

pub fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}
