//! Explicit Euler integration of continuous-time gradient descent.
//!
//! With `dt = 1` each Euler step is exactly one discrete round, so the
//! discrete dynamics are the coarsest member of this family. As `dt`
//! shrinks the flow approaches the continuous one, whose energy is
//! conserved, and the energy gained per unit time shrinks with it.

use serde::Serialize;

use crate::dual::{
    energy_coefficients, project_initial, total_energy, DualTransform, LineKeeper, ZPoint,
};
use crate::ftrl::{check_payoffs, check_rate, EngineError, Projector};
use crate::game::NormalizedGame;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuousRun {
    pub dt: f64,
    /// Constants removed from the initial vectors, as in a discrete trajectory.
    pub offsets: [f64; 2],
    pub y1: Vec<[f64; 2]>,
    pub y2: Vec<[f64; 2]>,
    pub z: Vec<ZPoint>,
    pub energy: Vec<f64>,
}

impl ContinuousRun {
    pub fn len(&self) -> usize {
        self.energy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energy.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }
}

/// Integrates from the dual-projected initial vectors over `horizon` time
/// units in `round(horizon/dt)` steps of size `dt`, sampling every step.
pub fn integrate(
    game: &NormalizedGame,
    y1_0: [f64; 2],
    y2_0: [f64; 2],
    eta: f64,
    horizon: f64,
    dt: f64,
) -> Result<ContinuousRun, EngineError> {
    check_rate(eta)?;
    check_payoffs(&y1_0)?;
    check_payoffs(&y2_0)?;
    if !(dt.is_finite() && dt > 0.0 && dt <= 1.0) {
        return Err(EngineError::InvalidStep(dt));
    }
    if !(horizon.is_finite() && horizon >= 0.0) {
        return Err(EngineError::InvalidHorizon(horizon));
    }
    game.verify()?;

    let steps = (horizon / dt).round() as usize;
    let m = game.matrix;
    let transform = DualTransform::new(game, eta);
    let coeffs = energy_coefficients(game, eta);
    let start = project_initial(game, y1_0, y2_0);
    let keeper = LineKeeper::new(game);
    let (mut y1, mut y2) = (start.y1, start.y2);
    let mut projector = Projector::new();
    let mut run = ContinuousRun {
        dt,
        offsets: start.offsets,
        y1: Vec::with_capacity(steps + 1),
        y2: Vec::with_capacity(steps + 1),
        z: Vec::with_capacity(steps + 1),
        energy: Vec::with_capacity(steps + 1),
    };
    for k in 0..=steps {
        let z = transform.to_z(y1[0], y2[0]);
        run.y1.push(y1);
        run.y2.push(y2);
        run.z.push(z);
        run.energy.push(total_energy(&coeffs, z));
        if k == steps {
            break;
        }
        let x1 = projector.project_pair(y1, eta);
        let x2 = projector.project_pair(y2, eta);
        let g1 = m.row_payoffs(x2);
        let g2 = m.column_payoffs(x1);
        (y1, y2) = keeper.restore(
            [y1[0] + dt * g1[0], y1[1] + dt * g1[1]],
            [y2[0] - dt * g2[0], y2[1] - dt * g2[1]],
        );
    }
    Ok(run)
}

/// Total energy at the end of the run minus at the start.
pub fn energy_drift(run: &ContinuousRun) -> f64 {
    match (run.energy.first(), run.energy.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    }
}

/// Index of the first sample at which the angle of `z - center`, unwrapped,
/// has turned through a full circle in either direction.
pub fn first_rotation(z: &[ZPoint], center: ZPoint) -> Option<usize> {
    let angle = |p: &ZPoint| (p.z2 - center.z2).atan2(p.z1 - center.z1);
    let mut turned = 0.0f64;
    let mut prev = angle(z.first()?);
    for (k, p) in z.iter().enumerate().skip(1) {
        let a = angle(p);
        let mut d = a - prev;
        if d > std::f64::consts::PI {
            d -= std::f64::consts::TAU;
        } else if d < -std::f64::consts::PI {
            d += std::f64::consts::TAU;
        }
        turned += d;
        prev = a;
        if turned.abs() >= std::f64::consts::TAU - 1e-9 {
            return Some(k);
        }
    }
    None
}
