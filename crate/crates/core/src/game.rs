//! 2x2 zero-sum games.
//!
//! The row player receives `x1 · A x2` and maximizes it; the column player
//! receives the negation. Everything downstream (the dual-space geometry,
//! the partition analysis) assumes the game has been brought into the
//! normal form produced by [`normalize`]: a singular payoff matrix with
//! `a > max{0, b, c}` and `d > max{0, b, c}`. Shifting the matrix by a
//! constant, swapping the players' roles and relabelling strategies all
//! leave the gradient-descent strategy sequence unchanged, so no generality
//! is lost.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance for equality tests on payoff entries.
pub const ENTRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("payoff entry `{entry}` is not finite ({value})")]
    NonFinite { entry: char, value: f64 },
    #[error("degenerate game: a + d - b - c = 0, no unique fully mixed equilibrium")]
    Degenerate,
    #[error("assumption violated: {condition} ({detail})")]
    AssumptionViolated {
        condition: Condition,
        detail: String,
    },
    #[error("unknown game preset `{0}`")]
    UnknownPreset(String),
}

/// `A = [[a, b], [c, d]]`, payoffs to the row player.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffMatrix2x2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl PayoffMatrix2x2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GameError> {
        for (entry, value) in [('a', a), ('b', b), ('c', c), ('d', d)] {
            if !value.is_finite() {
                return Err(GameError::NonFinite { entry, value });
            }
        }
        Ok(Self { a, b, c, d })
    }

    pub const fn matching_pennies() -> Self {
        Self {
            a: 1.0,
            b: -1.0,
            c: -1.0,
            d: 1.0,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// `a + d - b - c`, the common denominator of the equilibrium formulas.
    pub fn mixing_denominator(&self) -> f64 {
        self.a + self.d - self.b - self.c
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.a
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max(self.d.abs())
    }

    /// `A x2`: the payoff of each of the row player's pure strategies.
    pub fn row_payoffs(&self, x2: [f64; 2]) -> [f64; 2] {
        [
            self.a * x2[0] + self.b * x2[1],
            self.c * x2[0] + self.d * x2[1],
        ]
    }

    /// `Aᵀ x1`: the row player's payoff against each column strategy.
    pub fn column_payoffs(&self, x1: [f64; 2]) -> [f64; 2] {
        [
            self.a * x1[0] + self.c * x1[1],
            self.b * x1[0] + self.d * x1[1],
        ]
    }

    /// `x1 · A x2`.
    pub fn utility(&self, x1: [f64; 2], x2: [f64; 2]) -> f64 {
        let ax2 = self.row_payoffs(x2);
        x1[0] * ax2[0] + x1[1] * ax2[1]
    }

    pub fn shifted(&self, s: f64) -> Self {
        Self {
            a: self.a + s,
            b: self.b + s,
            c: self.c + s,
            d: self.d + s,
        }
    }

    /// `-Aᵀ`: the same game seen from the column player's side.
    pub fn negated_transpose(&self) -> Self {
        Self {
            a: -self.a,
            b: -self.c,
            c: -self.b,
            d: -self.d,
        }
    }

    /// `[[b, a], [d, c]]`: the column player's strategies relabelled.
    pub fn columns_swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
            c: self.d,
            d: self.c,
        }
    }

    fn tolerance(&self) -> f64 {
        ENTRY_TOLERANCE * self.max_abs_entry()
    }

    fn differs(&self, x: f64, y: f64) -> bool {
        (x - y).abs() > self.tolerance()
    }
}

impl fmt::Display for PayoffMatrix2x2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// A mixed strategy profile for a 2x2 game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NashPoint {
    pub x1: [f64; 2],
    pub x2: [f64; 2],
}

/// The unique fully mixed equilibrium given by the indifference conditions.
///
/// The second component of each pair is built as `1 - first`, so both pairs
/// sum to one exactly.
pub fn nash_equilibrium(m: &PayoffMatrix2x2) -> Result<NashPoint, GameError> {
    let denom = m.mixing_denominator();
    if !m.differs(denom, 0.0) {
        return Err(GameError::Degenerate);
    }
    let x11 = (m.d - m.c) / denom;
    let x21 = (m.d - m.b) / denom;
    Ok(NashPoint {
        x1: [x11, 1.0 - x11],
        x2: [x21, 1.0 - x21],
    })
}

/// The structural conditions required for a unique fully mixed equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    NonDegenerate,
    ADiffersFromB,
    ADiffersFromC,
    DDiffersFromB,
    DDiffersFromC,
    FullyMixed,
    Singular,
    DiagonalDominates,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::NonDegenerate => "a+d-b-c != 0",
            Condition::ADiffersFromB => "a != b",
            Condition::ADiffersFromC => "a != c",
            Condition::DDiffersFromB => "d != b",
            Condition::DDiffersFromC => "d != c",
            Condition::FullyMixed => "equilibrium components in (0,1)",
            Condition::Singular => "ad - bc = 0",
            Condition::DiagonalDominates => "a > max{0,b,c} and d > max{0,b,c}",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub passed: bool,
    /// The quantity the condition was evaluated on.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub checks: Vec<ConditionCheck>,
    /// Equilibrium components, when the game is non-degenerate.
    pub equilibrium: Option<NashPoint>,
}

impl AssumptionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, condition: Condition) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.condition == condition)
    }
}

impl fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            writeln!(f, "{mark}  {:<34} {}", c.condition.to_string(), c.detail)?;
        }
        Ok(())
    }
}

/// Evaluates every uniqueness precondition without failing early.
pub fn check_assumptions(m: &PayoffMatrix2x2) -> AssumptionReport {
    let mut checks = Vec::with_capacity(6);
    let denom = m.mixing_denominator();
    checks.push(ConditionCheck {
        condition: Condition::NonDegenerate,
        passed: m.differs(denom, 0.0),
        detail: format!("a+d-b-c = {denom}"),
    });
    let pairs = [
        (Condition::ADiffersFromB, 'a', m.a, 'b', m.b),
        (Condition::ADiffersFromC, 'a', m.a, 'c', m.c),
        (Condition::DDiffersFromB, 'd', m.d, 'b', m.b),
        (Condition::DDiffersFromC, 'd', m.d, 'c', m.c),
    ];
    for (condition, ln, lv, rn, rv) in pairs {
        checks.push(ConditionCheck {
            condition,
            passed: m.differs(lv, rv),
            detail: format!("{ln} = {lv}, {rn} = {rv}"),
        });
    }
    let equilibrium = nash_equilibrium(m).ok();
    let (passed, detail) = match &equilibrium {
        Some(ne) => {
            let inside = |p: f64| p > 0.0 && p < 1.0;
            (
                inside(ne.x1[0]) && inside(ne.x2[0]),
                format!(
                    "x1 = ({}, {}), x2 = ({}, {})",
                    ne.x1[0], ne.x1[1], ne.x2[0], ne.x2[1]
                ),
            )
        }
        None => (false, "undefined".to_string()),
    };
    checks.push(ConditionCheck {
        condition: Condition::FullyMixed,
        passed,
        detail,
    });
    AssumptionReport {
        checks,
        equilibrium,
    }
}

/// A game in normal form together with the transforms that produced it.
///
/// The transforms are applied in order: shift by `shift`, then (if
/// `players_swapped`) replace `A` by `-Aᵀ`, then (if `columns_relabeled`)
/// swap the two columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedGame {
    pub matrix: PayoffMatrix2x2,
    pub shift: f64,
    pub players_swapped: bool,
    pub columns_relabeled: bool,
    pub original: PayoffMatrix2x2,
}

/// Brings a game with a unique fully mixed equilibrium into normal form.
pub fn normalize(m: &PayoffMatrix2x2) -> Result<NormalizedGame, GameError> {
    let report = check_assumptions(m);
    if let Some(failed) = report.failures().next() {
        return Err(GameError::AssumptionViolated {
            condition: failed.condition,
            detail: failed.detail.clone(),
        });
    }

    // det(A + sJ) = det(A) + s(a + d - b - c)
    // Adding zero turns a negative zero into a positive one.
    let shift = -m.determinant() / m.mixing_denominator() + 0.0;
    let mut matrix = m.shifted(shift);

    let players_swapped = matrix.a <= 0.0;
    if players_swapped {
        matrix = matrix.negated_transpose();
    }
    let columns_relabeled = matrix.mixing_denominator() < 0.0;
    if columns_relabeled {
        matrix = matrix.columns_swapped();
    }

    let game = NormalizedGame {
        matrix,
        shift,
        players_swapped,
        columns_relabeled,
        original: *m,
    };
    game.verify()?;
    Ok(game)
}

impl NormalizedGame {
    pub fn matching_pennies() -> Self {
        let m = PayoffMatrix2x2::matching_pennies();
        NormalizedGame {
            matrix: m,
            shift: 0.0,
            players_swapped: false,
            columns_relabeled: false,
            original: m,
        }
    }

    /// Re-checks the normal-form invariants on `matrix`.
    pub fn verify(&self) -> Result<(), GameError> {
        let m = &self.matrix;
        let tol = m.tolerance();
        let det = m.determinant();
        // The determinant is quadratic in the entries.
        if det.abs() > ENTRY_TOLERANCE * m.max_abs_entry().powi(2).max(1.0) {
            return Err(GameError::AssumptionViolated {
                condition: Condition::Singular,
                detail: format!("det = {det}"),
            });
        }
        let floor = 0.0f64.max(m.b).max(m.c);
        if !(m.a > floor + tol && m.d > floor + tol) {
            return Err(GameError::AssumptionViolated {
                condition: Condition::DiagonalDominates,
                detail: format!("normalized matrix {m}"),
            });
        }
        if m.mixing_denominator() <= 0.0 {
            return Err(GameError::AssumptionViolated {
                condition: Condition::NonDegenerate,
                detail: format!("a+d-b-c = {}", m.mixing_denominator()),
            });
        }
        Ok(())
    }

    /// Replays the recorded transforms on `original`.
    pub fn reapply(&self) -> PayoffMatrix2x2 {
        let mut m = self.original.shifted(self.shift);
        if self.players_swapped {
            m = m.negated_transpose();
        }
        if self.columns_relabeled {
            m = m.columns_swapped();
        }
        m
    }

    /// Undoes the recorded transforms on `matrix`.
    ///
    /// Relabelling and swapping are exact; removing the shift is exact only
    /// when `entry + shift` did not round.
    pub fn unapply(&self) -> PayoffMatrix2x2 {
        let mut m = self.matrix;
        if self.columns_relabeled {
            m = m.columns_swapped();
        }
        if self.players_swapped {
            m = m.negated_transpose();
        }
        m.shifted(-self.shift)
    }

    /// Maps initial payoff vectors of the original game into this frame.
    pub fn to_normalized_frame(&self, y1: [f64; 2], y2: [f64; 2]) -> ([f64; 2], [f64; 2]) {
        // The shift adds a constant to every payoff and is invisible to the strategies.
        let (y1, mut y2) = if self.players_swapped {
            (y2, y1)
        } else {
            (y1, y2)
        };
        if self.columns_relabeled {
            y2.swap(0, 1);
        }
        (y1, y2)
    }

    /// Maps a strategy profile of this frame back to the original players.
    pub fn to_original_frame(&self, x1: [f64; 2], x2: [f64; 2]) -> ([f64; 2], [f64; 2]) {
        let mut x2 = x2;
        if self.columns_relabeled {
            x2.swap(0, 1);
        }
        if self.players_swapped {
            (x2, x1)
        } else {
            (x1, x2)
        }
    }

    pub fn equilibrium(&self) -> NashPoint {
        // Normal form guarantees a positive denominator.
        nash_equilibrium(&self.matrix).expect("normalized games are non-degenerate")
    }
}

/// How a game is named in a run configuration: either a preset or the four entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GameSpec {
    Preset(String),
    Entries { a: f64, b: f64, c: f64, d: f64 },
}

impl GameSpec {
    pub fn matrix(&self) -> Result<PayoffMatrix2x2, GameError> {
        match self {
            GameSpec::Preset(name) => match name.as_str() {
                "matching-pennies" => Ok(PayoffMatrix2x2::matching_pennies()),
                other => Err(GameError::UnknownPreset(other.to_string())),
            },
            GameSpec::Entries { a, b, c, d } => PayoffMatrix2x2::new(*a, *b, *c, *d),
        }
    }

    pub fn normalized(&self) -> Result<NormalizedGame, GameError> {
        normalize(&self.matrix()?)
    }
}

impl Default for GameSpec {
    fn default() -> Self {
        GameSpec::Preset("matching-pennies".to_string())
    }
}
