//! Dual-space geometry of gradient descent in normalized 2x2 games.
//!
//! For a singular payoff matrix the increments of each player's payoff
//! vector are orthogonal to a fixed normal (`[d-c, a-b]` for the row player,
//! `[d-b, a-c]` for the column player). Since the strategies ignore
//! constant shifts of `y`, the initial vectors can be moved onto the lines
//! through the origin with those normals, after which each player's dual
//! state is a single coordinate. The affine change of variable
//!
//! ```text
//! z_i = η (1 - slope_i) y_i1 / 2 + 1/2
//! ```
//!
//! makes the strategy the clamp of `z_i` to `[0, 1]`, and turns the convex
//! conjugate (the player's "energy") into a function that is linear below
//! 0, linear above 1 and quadratic in between.

use serde::Serialize;

use crate::ftrl::{gd_strategy, support_set, Trajectory};
use crate::game::NormalizedGame;

/// z-coordinates of on-line payoff vectors with first components `y11`, `y21`.
pub fn to_z(game: &NormalizedGame, eta: f64, y11: f64, y21: f64) -> ZPoint {
    DualTransform::new(game, eta).to_z(y11, y21)
}

/// Line slopes and z-scales for both players at a fixed learning rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualTransform {
    /// `(c-d)/(a-b)`: on the row player's line, `y12 = slope1 · y11`.
    pub slope1: f64,
    /// `(b-d)/(a-c)`: on the column player's line, `y22 = slope2 · y21`.
    pub slope2: f64,
    pub scale1: f64,
    pub scale2: f64,
}

impl DualTransform {
    pub fn new(game: &NormalizedGame, eta: f64) -> Self {
        let m = &game.matrix;
        let slope1 = (m.c - m.d) / (m.a - m.b);
        let slope2 = (m.b - m.d) / (m.a - m.c);
        Self {
            slope1,
            slope2,
            scale1: eta * (1.0 - slope1) / 2.0,
            scale2: eta * (1.0 - slope2) / 2.0,
        }
    }

    pub fn to_z(&self, y11: f64, y21: f64) -> ZPoint {
        ZPoint {
            z1: self.scale1 * y11 + 0.5,
            z2: self.scale2 * y21 + 0.5,
        }
    }

    /// Inverse of [`to_z`](Self::to_z): the on-line payoff vectors for a z-point.
    pub fn from_z(&self, z: ZPoint) -> ([f64; 2], [f64; 2]) {
        let y11 = (z.z1 - 0.5) / self.scale1;
        let y21 = (z.z2 - 0.5) / self.scale2;
        ([y11, self.slope1 * y11], [y21, self.slope2 * y21])
    }
}

/// Transformed dual coordinates of both players.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZPoint {
    pub z1: f64,
    pub z2: f64,
}

impl ZPoint {
    pub fn new(z1: f64, z2: f64) -> Self {
        Self { z1, z2 }
    }
}

/// Initial payoff vectors moved onto the dual lines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectedStart {
    pub y1: [f64; 2],
    pub y2: [f64; 2],
    /// The constant removed from each player's vector.
    pub offsets: [f64; 2],
}

/// Normal of the row player's dual line.
pub fn row_normal(game: &NormalizedGame) -> [f64; 2] {
    let m = &game.matrix;
    [m.d - m.c, m.a - m.b]
}

/// Normal of the column player's dual line.
pub fn column_normal(game: &NormalizedGame) -> [f64; 2] {
    let m = &game.matrix;
    [m.d - m.b, m.a - m.c]
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Removes `λ_i·1` from each vector so that it lies on its player's dual line.
pub fn project_initial(game: &NormalizedGame, y1: [f64; 2], y2: [f64; 2]) -> ProjectedStart {
    let denom = game.matrix.mixing_denominator();
    let l1 = dot(row_normal(game), y1) / denom;
    let l2 = dot(column_normal(game), y2) / denom;
    ProjectedStart {
        y1: [y1[0] - l1, y1[1] - l1],
        y2: [y2[0] - l2, y2[1] - l2],
        offsets: [l1, l2],
    }
}

/// Pulls payoff vectors back onto the dual lines after an update.
///
/// In exact arithmetic the updates never leave the lines; in floating point
/// the accumulated vectors drift along the all-ones direction, which no
/// strategy can see, so removing that component is free.
#[derive(Debug, Clone, Copy)]
pub struct LineKeeper {
    normals: [[f64; 2]; 2],
    denom: f64,
}

impl LineKeeper {
    pub fn new(game: &NormalizedGame) -> Self {
        Self {
            normals: [row_normal(game), column_normal(game)],
            denom: game.matrix.mixing_denominator(),
        }
    }

    #[inline]
    pub fn restore(&self, y1: [f64; 2], y2: [f64; 2]) -> ([f64; 2], [f64; 2]) {
        let pull = |w: [f64; 2], y: [f64; 2]| {
            let l = dot(w, y) / self.denom;
            if l == 0.0 {
                y
            } else {
                [y[0] - l, y[1] - l]
            }
        };
        (pull(self.normals[0], y1), pull(self.normals[1], y2))
    }
}

/// The first-strategy probabilities: `z` clamped to the unit square.
pub fn strategy_from_z(z: ZPoint) -> (f64, f64) {
    (z.z1.clamp(0.0, 1.0), z.z2.clamp(0.0, 1.0))
}

/// `y·x* - ||x*||²/(2η)` with `x*` the gradient-descent strategy for `y`.
pub fn conjugate_energy(y: &[f64], eta: f64) -> f64 {
    let x = gd_strategy(y, eta);
    let linear: f64 = y.iter().zip(&x).map(|(a, b)| a * b).sum();
    let sq: f64 = x.iter().map(|v| v * v).sum();
    linear - sq / (2.0 * eta)
}

/// The same conjugate expanded over the support set:
/// `η/2 Σ y_j² + Σ y_j/|S| - η/2 (Σ y_j)²/|S| - 1/(2η|S|)`.
pub fn conjugate_energy_expanded(y: &[f64], eta: f64) -> f64 {
    let s = support_set(y, eta);
    let size = s.len() as f64;
    let (sum, sum_sq) = s
        .indices()
        .iter()
        .fold((0.0, 0.0), |(a, b), &j| (a + y[j], b + y[j] * y[j]));
    eta / 2.0 * sum_sq + sum / size - eta / 2.0 * sum * sum / size - 1.0 / (2.0 * eta * size)
}

/// One player's energy as a function of its z-coordinate.
///
/// ```text
/// h(z) = alpha_low  z - beta_low    z <= 0
///        alpha_high z - beta_high   z >= 1
///        gamma z² + alpha z - beta  otherwise
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlayerEnergy {
    pub alpha_low: f64,
    pub beta_low: f64,
    pub alpha_high: f64,
    pub beta_high: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl PlayerEnergy {
    /// Coefficients for a player whose line has the given slope and z-scale.
    ///
    /// With `y1 = (z - 1/2)/scale` and `y2 = slope · y1`, the conjugate is
    /// `y2 - 1/(2η)` when the strategy is pure on the second action,
    /// `y1 - 1/(2η)` when pure on the first, and
    /// `η/4 (y1 - y2)² + (y1 + y2)/2 - 1/(4η)` when mixed.
    fn from_line(slope: f64, scale: f64, eta: f64) -> Self {
        let half_inv_eta = 1.0 / (2.0 * eta);
        // (1 + slope)/2 · (z - 1/2)/scale: the mixed piece's linear part.
        let lin = (1.0 + slope) / (2.0 * scale);
        Self {
            alpha_low: slope / scale,
            beta_low: slope / (2.0 * scale) + half_inv_eta,
            alpha_high: 1.0 / scale,
            beta_high: 1.0 / (2.0 * scale) + half_inv_eta,
            gamma: 1.0 / eta,
            alpha: lin - 1.0 / eta,
            beta: lin / 2.0,
        }
    }

    pub fn lower_piece(&self, z: f64) -> f64 {
        self.alpha_low * z - self.beta_low
    }

    pub fn upper_piece(&self, z: f64) -> f64 {
        self.alpha_high * z - self.beta_high
    }

    pub fn mixed_piece(&self, z: f64) -> f64 {
        (self.gamma * z + self.alpha) * z - self.beta
    }

    pub fn eval(&self, z: f64) -> f64 {
        if z <= 0.0 {
            self.lower_piece(z)
        } else if z >= 1.0 {
            self.upper_piece(z)
        } else {
            self.mixed_piece(z)
        }
    }
}

/// Energy coefficients for both players.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PiecewiseEnergy {
    pub players: [PlayerEnergy; 2],
}

pub fn energy_coefficients(game: &NormalizedGame, eta: f64) -> PiecewiseEnergy {
    let t = DualTransform::new(game, eta);
    PiecewiseEnergy {
        players: [
            PlayerEnergy::from_line(t.slope1, t.scale1, eta),
            PlayerEnergy::from_line(t.slope2, t.scale2, eta),
        ],
    }
}

/// Player `i`'s (0 or 1) energy at z-coordinate `z`.
pub fn piecewise_energy(coeffs: &PiecewiseEnergy, z: f64, player: usize) -> f64 {
    coeffs.players[player].eval(z)
}

/// Sum of both players' energies.
pub fn total_energy(coeffs: &PiecewiseEnergy, z: ZPoint) -> f64 {
    coeffs.players[0].eval(z.z1) + coeffs.players[1].eval(z.z2)
}

/// z-points and total energies along a trajectory.
#[derive(Debug, Clone)]
pub struct DualPath {
    pub transform: DualTransform,
    pub coeffs: PiecewiseEnergy,
    pub z: Vec<ZPoint>,
    pub energy: Vec<f64>,
}

pub fn dual_path(traj: &Trajectory) -> DualPath {
    let transform = DualTransform::new(&traj.game, traj.eta);
    let coeffs = energy_coefficients(&traj.game, traj.eta);
    let z: Vec<ZPoint> = traj
        .records()
        .iter()
        .map(|r| transform.to_z(r.y1[0], r.y2[0]))
        .collect();
    let energy = z.iter().map(|&p| total_energy(&coeffs, p)).collect();
    DualPath {
        transform,
        coeffs,
        z,
        energy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{normalize, PayoffMatrix2x2};

    fn pennies() -> NormalizedGame {
        NormalizedGame::matching_pennies()
    }

    #[test]
    fn projection_examples() {
        let g = pennies();
        let p = project_initial(&g, [1.0, 0.0], [0.0, 0.0]);
        assert_eq!(p.y1, [0.5, -0.5]);
        assert_eq!(dot(row_normal(&g), p.y1), 0.0);
        assert_eq!(p.y2, [0.0, 0.0]);
        assert_eq!(p.offsets, [0.5, 0.0]);
        for c in [-3.5, 0.25, 17.0] {
            let p = project_initial(&g, [c, c], [c, c]);
            assert_eq!(p.y1, [0.0, 0.0]);
            assert_eq!(p.y2, [0.0, 0.0]);
        }
    }

    #[test]
    fn column_normal_is_orthogonal_to_column_increments() {
        let g = normalize(&PayoffMatrix2x2::new(2.0, -1.0, -2.0, 4.0).unwrap()).unwrap();
        let w = column_normal(&g);
        for x in [[1.0, 0.0], [0.0, 1.0], [0.3, 0.7]] {
            let inc = g.matrix.column_payoffs(x);
            assert!(dot(w, inc).abs() < 1e-12);
        }
        let w = row_normal(&g);
        for x in [[1.0, 0.0], [0.0, 1.0], [0.3, 0.7]] {
            assert!(dot(w, g.matrix.row_payoffs(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn z_examples() {
        let t = DualTransform::new(&pennies(), 1.0);
        assert_eq!(t.slope1, -1.0);
        assert_eq!(t.to_z(0.5, 0.0), ZPoint::new(1.0, 0.5));
        let t = DualTransform::new(&pennies(), 0.15);
        let z = t.to_z(0.2, -0.3);
        assert!((z.z1 - 0.53).abs() < 1e-15);
        assert!((z.z2 - 0.455).abs() < 1e-15);
    }

    #[test]
    fn clamp_examples() {
        assert_eq!(strategy_from_z(ZPoint::new(1.5, 0.5)), (1.0, 0.5));
        assert_eq!(strategy_from_z(ZPoint::new(-0.2, 1.3)), (0.0, 1.0));
        assert_eq!(strategy_from_z(ZPoint::new(0.75, 0.25)), (0.75, 0.25));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate_energy(&[1.0, 0.0], 1.0), 0.5);
        assert_eq!(conjugate_energy_expanded(&[1.0, 0.0], 1.0), 0.5);
        assert_eq!(conjugate_energy(&[0.0, 0.0], 1.0), -0.25);
        assert_eq!(conjugate_energy(&[5.0, -4.0], 1.0), 4.5);
        assert_eq!(conjugate_energy_expanded(&[5.0, -4.0], 1.0), 4.5);
    }

    #[test]
    fn pennies_energy_values() {
        let c = energy_coefficients(&pennies(), 1.0);
        let p = &c.players[0];
        assert_eq!(p.eval(0.5), -0.25);
        // z = 1 is y = (1/2, -1/2), where x = (1, 0) and h = 1/2 - 1/2.
        assert_eq!(p.eval(1.0), 0.0);
        assert_eq!(p.eval(1.5), 0.5);
        assert_eq!(total_energy(&c, ZPoint::new(0.5, 0.5)), -0.5);
        assert_eq!(piecewise_energy(&c, 1.5, 1), 0.5);
    }

    #[test]
    fn coefficient_signs_and_continuity() {
        for (game, eta) in [
            (pennies(), 0.15),
            (
                normalize(&PayoffMatrix2x2::new(2.0, -1.0, -2.0, 4.0).unwrap()).unwrap(),
                0.7,
            ),
            (
                normalize(&PayoffMatrix2x2::new(3.0, -1.0, 0.0, 2.0).unwrap()).unwrap(),
                3.0,
            ),
        ] {
            for p in energy_coefficients(&game, eta).players {
                assert!(p.alpha_low < 0.0 && p.alpha_high > 0.0 && p.gamma > 0.0);
                assert!((p.lower_piece(0.0) - p.mixed_piece(0.0)).abs() < 1e-12);
                assert!((p.upper_piece(1.0) - p.mixed_piece(1.0)).abs() < 1e-12);
                // Second difference of the quadratic piece.
                let h = 1e-3;
                let d2 = (p.mixed_piece(0.5 + h) - 2.0 * p.mixed_piece(0.5)
                    + p.mixed_piece(0.5 - h))
                    / (h * h);
                assert!((d2 - 2.0 * p.gamma).abs() < 1e-6 * p.gamma.max(1.0));
            }
        }
    }
}
