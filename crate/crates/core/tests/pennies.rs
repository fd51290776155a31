use num_rational::Ratio;
use zslab_core::pennies::{simulate_pure_start, verify_against_simulation};
use zslab_core::{
    exact_cumulative_utility, exact_payoff_vectors, exact_regret, regret, triangular_index, Player,
};

type Q = Ratio<i64>;

/// Unit-step gradient descent on Matching Pennies in exact rationals.
/// With two strategies the projection is `x_1 = clamp((y_1 - y_2)/2 + 1/2)`.
struct RationalPennies {
    y1: [Q; 2],
    y2: [Q; 2],
    utility: Q,
    cumulative: [Q; 2],
}

fn first_mass(y: [Q; 2]) -> Q {
    let half = Q::new(1, 2);
    let v = (y[0] - y[1]) * half + half;
    v.max(Q::from_integer(0)).min(Q::from_integer(1))
}

impl RationalPennies {
    fn new() -> Self {
        let one = Q::from_integer(1);
        let zero = Q::from_integer(0);
        Self {
            y1: [one, zero],
            y2: [one, zero],
            utility: zero,
            cumulative: [zero, zero],
        }
    }

    /// Accounts for the current round and returns the row player's regret through it.
    fn play(&mut self) -> Q {
        let one = Q::from_integer(1);
        let p = first_mass(self.y1);
        let q = first_mass(self.y2);
        // A = [[1,-1],[-1,1]]: A x2 = (2q-1, 1-2q), Aᵀ x1 = (2p-1, 1-2p).
        let g1 = [q * 2 - one, one - q * 2];
        let g2 = [p * 2 - one, one - p * 2];
        self.utility += p * g1[0] + (one - p) * g1[1];
        self.cumulative[0] += g1[0];
        self.cumulative[1] += g1[1];
        let regret = self.cumulative[0].max(self.cumulative[1]) - self.utility;
        self.y1 = [self.y1[0] + g1[0], self.y1[1] + g1[1]];
        self.y2 = [self.y2[0] - g2[0], self.y2[1] - g2[1]];
        regret
    }
}

#[test]
fn closed_forms_match_exact_rational_simulation() {
    let mut sim = RationalPennies::new();
    for t in 0..=20_100u64 {
        let (e1, e2) = exact_payoff_vectors(t);
        let as_q = |v: [i64; 2]| [Q::from_integer(v[0]), Q::from_integer(v[1])];
        assert_eq!(sim.y1, as_q(e1), "y1 at t={t}");
        assert_eq!(sim.y2, as_q(e2), "y2 at t={t}");
        let r = sim.play();
        assert_eq!(
            sim.utility,
            Q::from_integer(exact_cumulative_utility(t)),
            "utility at t={t}"
        );
        assert_eq!(r, exact_regret(t), "regret at t={t}");
    }
}

#[test]
fn float_simulator_matches_closed_forms_exactly() {
    let traj = simulate_pure_start(20_100).unwrap();
    let check = verify_against_simulation(&traj);
    assert!(check.passed(), "{:?}", check.first_divergence);
    assert_eq!(check.checked, 20_101);
}

#[test]
fn regret_tracks_square_root_of_time() {
    for t in 10..=200_000u64 {
        let r = exact_regret(t);
        let ratio = (*r.numer() as f64 / *r.denom() as f64) / (t as f64).sqrt();
        assert!((0.2..=1.2).contains(&ratio), "t={t} ratio={ratio}");
    }
    let t = 199 * 200 / 2;
    let r = exact_regret(t);
    let ratio = (*r.numer() as f64 / *r.denom() as f64) / (t as f64).sqrt();
    assert!((ratio - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.01);
}

#[test]
fn regret_at_block_boundaries_matches() {
    let traj = simulate_pure_start(20_100).unwrap();
    let series = regret(&traj, Player::Row);
    for n in 0..200u64 {
        let t = n * (n + 1) / 2;
        assert_eq!(triangular_index(t).k, 0);
        let r = exact_regret(t);
        assert_eq!(
            series.regret[t as usize],
            *r.numer() as f64 / *r.denom() as f64
        );
    }
}
