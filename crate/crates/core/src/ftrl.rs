//! Discrete-time follow-the-regularized-leader with the squared Euclidean
//! regularizer (online gradient descent with a fixed step size).
//!
//! Each player keeps a cumulative payoff vector `y` and plays
//! `argmax_{x in simplex} { y·x - ||x||²/(2η) }`. The maximizer has a closed
//! form on its support set `S`:
//!
//! ```text
//! x_j = η (y_j - mean_{k in S} y_k) + 1/|S|   for j in S,   0 otherwise
//! ```
//!
//! where `S` is found by repeatedly discarding the lowest-payoff strategy
//! while its assigned mass would be negative.

use serde::Serialize;
use thiserror::Error;

use crate::dual;
use crate::game::{GameError, NormalizedGame, PayoffMatrix2x2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("learning rate must be positive and finite, got {0}")]
    InvalidRate(f64),
    #[error("integration step must lie in (0, 1], got {0}")]
    InvalidStep(f64),
    #[error("integration horizon must be finite and non-negative, got {0}")]
    InvalidHorizon(f64),
    #[error("a learner needs at least two strategies, got {0}")]
    TooFewStrategies(usize),
    #[error("payoff vector contains a non-finite entry")]
    NonFinitePayoff,
    #[error("payoff vector has {found} entries, the game needs {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Game(#[from] GameError),
}

pub(crate) fn check_rate(eta: f64) -> Result<(), EngineError> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(EngineError::InvalidRate(eta))
    }
}

pub(crate) fn check_payoffs(y: &[f64]) -> Result<(), EngineError> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(EngineError::NonFinitePayoff)
    }
}

/// A player's cumulative payoff vector and learning rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearnerState {
    y: Vec<f64>,
    eta: f64,
}

impl LearnerState {
    pub fn new(y: Vec<f64>, eta: f64) -> Result<Self, EngineError> {
        check_rate(eta)?;
        if y.len() < 2 {
            return Err(EngineError::TooFewStrategies(y.len()));
        }
        check_payoffs(&y)?;
        Ok(Self { y, eta })
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn strategy(&self) -> Vec<f64> {
        gd_strategy(&self.y, self.eta)
    }

    fn pair(&self) -> Result<[f64; 2], EngineError> {
        match self.y.as_slice() {
            &[a, b] => Ok([a, b]),
            other => Err(EngineError::DimensionMismatch {
                expected: 2,
                found: other.len(),
            }),
        }
    }
}

/// A strongly convex penalty on the simplex, scaled by the learning rate.
pub trait Regularizer {
    /// The regularized best response to the payoff vector `y`.
    fn choose(&self, y: &[f64]) -> Vec<f64>;

    /// `h(x)/η`.
    fn penalty(&self, x: &[f64]) -> f64;

    /// The convex conjugate `max_x { y·x - h(x)/η }`, evaluated at the maximizer.
    fn conjugate(&self, y: &[f64]) -> f64 {
        let x = self.choose(y);
        let linear: f64 = y.iter().zip(&x).map(|(a, b)| a * b).sum();
        linear - self.penalty(&x)
    }
}

/// `h(x) = ||x||² / 2`: the regularizer that turns FTRL into gradient descent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euclidean {
    pub eta: f64,
}

impl Regularizer for Euclidean {
    fn choose(&self, y: &[f64]) -> Vec<f64> {
        gd_strategy(y, self.eta)
    }

    fn penalty(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum::<f64>() / (2.0 * self.eta)
    }
}

/// Indices (0-based, ascending) that receive positive mass, plus any tied
/// at exactly zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportSet {
    indices: Vec<usize>,
}

impl SupportSet {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }
}

/// Reusable scratch space for the projection; avoids allocating per step.
#[derive(Debug, Default, Clone)]
pub struct Projector {
    active: Vec<usize>,
}

impl Projector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Greedy support search. Leaves the support, ascending, in `self.active`
    /// and returns `(mean payoff over S, |S|)`.
    fn search(&mut self, y: &[f64], eta: f64) -> (f64, f64) {
        self.active.clear();
        self.active.extend(0..y.len());
        loop {
            let size = self.active.len() as f64;
            let mean = self.active.iter().map(|&k| y[k]).sum::<f64>() / size;
            // Lowest payoff; ties go to the lowest index.
            let (pos, j) = self.active.iter().copied().enumerate().fold(
                (0, self.active[0]),
                |(bp, bj), (p, k)| {
                    if y[k] < y[bj] {
                        (p, k)
                    } else {
                        (bp, bj)
                    }
                },
            );
            if self.active.len() > 1 && eta * (y[j] - mean) + 1.0 / size < 0.0 {
                self.active.remove(pos);
            } else {
                return (mean, size);
            }
        }
    }

    pub fn support(&mut self, y: &[f64], eta: f64) -> SupportSet {
        self.search(y, eta);
        SupportSet {
            indices: self.active.clone(),
        }
    }

    /// Writes the gradient-descent strategy for `y` into `out`.
    pub fn project_into(&mut self, y: &[f64], eta: f64, out: &mut [f64]) {
        debug_assert_eq!(y.len(), out.len());
        let (mean, size) = self.search(y, eta);
        out.iter_mut().for_each(|v| *v = 0.0);
        for &j in &self.active {
            out[j] = eta * (y[j] - mean) + 1.0 / size;
        }
    }

    pub fn project_pair(&mut self, y: [f64; 2], eta: f64) -> [f64; 2] {
        let mut out = [0.0; 2];
        self.project_into(&y, eta, &mut out);
        out
    }
}

/// The support set of the gradient-descent strategy for `y`.
pub fn support_set(y: &[f64], eta: f64) -> SupportSet {
    Projector::new().support(y, eta)
}

/// `argmax_{x in simplex} { y·x - ||x||²/(2η) }`.
pub fn gd_strategy(y: &[f64], eta: f64) -> Vec<f64> {
    let mut out = vec![0.0; y.len()];
    Projector::new().project_into(y, eta, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub next1: LearnerState,
    pub next2: LearnerState,
    pub x1: [f64; 2],
    pub x2: [f64; 2],
}

/// One simultaneous round: both strategies come from the pre-step payoff
/// vectors, then `y1 += A x2` and `y2 -= Aᵀ x1`.
pub fn step(
    s1: &LearnerState,
    s2: &LearnerState,
    m: &PayoffMatrix2x2,
) -> Result<StepOutcome, EngineError> {
    let (y1, y2) = (s1.pair()?, s2.pair()?);
    let mut projector = Projector::new();
    let x1 = projector.project_pair(y1, s1.eta);
    let x2 = projector.project_pair(y2, s2.eta);
    let (n1, n2) = advance(m, y1, y2, x1, x2);
    Ok(StepOutcome {
        next1: LearnerState {
            y: n1.to_vec(),
            eta: s1.eta,
        },
        next2: LearnerState {
            y: n2.to_vec(),
            eta: s2.eta,
        },
        x1,
        x2,
    })
}

#[inline]
pub(crate) fn advance(
    m: &PayoffMatrix2x2,
    y1: [f64; 2],
    y2: [f64; 2],
    x1: [f64; 2],
    x2: [f64; 2],
) -> ([f64; 2], [f64; 2]) {
    let g1 = m.row_payoffs(x2);
    let g2 = m.column_payoffs(x1);
    (
        [y1[0] + g1[0], y1[1] + g1[1]],
        [y2[0] - g2[0], y2[1] - g2[1]],
    )
}

/// The state at one iteration of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Record {
    pub y1: [f64; 2],
    pub y2: [f64; 2],
    pub x1: [f64; 2],
    pub x2: [f64; 2],
    /// `x1 · A x2`.
    pub utility: f64,
}

/// Iterations `0..=T` of a gradient-descent run on a normalized game.
///
/// Payoff vectors are stored on the dual lines chosen by
/// [`dual::project_initial`] and held there by [`dual::LineKeeper`];
/// `offsets` holds the constant each player's initial vector was shifted
/// by, so `y + offset·1` recovers the caller's frame up to rounding.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub game: NormalizedGame,
    pub eta: f64,
    pub offsets: [f64; 2],
    records: Vec<Record>,
}

impl Trajectory {
    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The last iteration index `T`.
    pub fn horizon(&self) -> usize {
        self.records.len() - 1
    }

    pub fn record(&self, t: usize) -> &Record {
        &self.records[t]
    }

    /// Player payoff vectors at `t` in the frame of the initial vectors passed to [`simulate`].
    pub fn raw_payoffs(&self, t: usize) -> ([f64; 2], [f64; 2]) {
        let r = &self.records[t];
        let [o1, o2] = self.offsets;
        ([r.y1[0] + o1, r.y1[1] + o1], [r.y2[0] + o2, r.y2[1] + o2])
    }

    pub fn matrix(&self) -> &PayoffMatrix2x2 {
        &self.game.matrix
    }
}

/// Runs `iterations` rounds of gradient descent from the given initial
/// payoff vectors, after projecting them onto the dual lines.
pub fn simulate(
    game: &NormalizedGame,
    y1_0: [f64; 2],
    y2_0: [f64; 2],
    eta: f64,
    iterations: usize,
) -> Result<Trajectory, EngineError> {
    check_rate(eta)?;
    check_payoffs(&y1_0)?;
    check_payoffs(&y2_0)?;
    game.verify()?;

    let projected = dual::project_initial(game, y1_0, y2_0);
    let keeper = dual::LineKeeper::new(game);
    let m = game.matrix;
    let mut projector = Projector::new();
    let mut records = Vec::with_capacity(iterations + 1);
    let (mut y1, mut y2) = (projected.y1, projected.y2);
    for t in 0..=iterations {
        let x1 = projector.project_pair(y1, eta);
        let x2 = projector.project_pair(y2, eta);
        records.push(Record {
            y1,
            y2,
            x1,
            x2,
            utility: m.utility(x1, x2),
        });
        if t < iterations {
            let (n1, n2) = advance(&m, y1, y2, x1, x2);
            (y1, y2) = keeper.restore(n1, n2);
        }
    }
    Ok(Trajectory {
        game: *game,
        eta,
        offsets: projected.offsets,
        records,
    })
}
