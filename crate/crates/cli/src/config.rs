//! JSON run and sweep configurations.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use zslab_core::{DualTransform, GameSpec, NormalizedGame, ZPoint};

use crate::error::CliError;

/// First payoff coordinates `(y11, y21)` of the default start, on the dual lines.
pub const DEFAULT_START: [f64; 2] = [0.2, -0.3];

/// Half-width of the box random starts are drawn from.
pub const RANDOM_START_RANGE: f64 = 2.0;

/// How the initial payoff vectors are chosen.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum InitialPayoffs {
    /// Full vectors `[[y11, y12], [y21, y22]]`, moved onto the dual lines before the run.
    Vectors([[f64; 2]; 2]),
    /// `"random"`: first coordinates uniform in `[-2, 2]`, drawn from the config seed.
    Named(String),
    /// `{"on_line": [y11, y21]}`: points already on the dual lines.
    OnLine { on_line: [f64; 2] },
}

impl InitialPayoffs {
    pub fn resolve(
        &self,
        game: &NormalizedGame,
        seed: u64,
    ) -> Result<([f64; 2], [f64; 2]), CliError> {
        match self {
            InitialPayoffs::Vectors([y1, y2]) => Ok((*y1, *y2)),
            InitialPayoffs::OnLine { on_line } => Ok(on_line_start(game, *on_line)),
            InitialPayoffs::Named(name) if name == "random" => Ok(random_start(game, seed)),
            InitialPayoffs::Named(name) => Err(CliError::InvalidField {
                field: "y0",
                reason: format!("unknown start {name:?}"),
            }),
        }
    }
}

impl Default for InitialPayoffs {
    fn default() -> Self {
        InitialPayoffs::OnLine {
            on_line: DEFAULT_START,
        }
    }
}

/// On-line vectors with the given first coordinates.
pub fn on_line_start(game: &NormalizedGame, first: [f64; 2]) -> ([f64; 2], [f64; 2]) {
    // The slopes do not depend on the step size.
    let t = DualTransform::new(game, 1.0);
    (
        [first[0], t.slope1 * first[0]],
        [first[1], t.slope2 * first[1]],
    )
}

/// A reproducible start uniform in `[-2, 2]²` over the first coordinates.
pub fn random_start(game: &NormalizedGame, seed: u64) -> ([f64; 2], [f64; 2]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = [
        rng.gen_range(-RANDOM_START_RANGE..=RANDOM_START_RANGE),
        rng.gen_range(-RANDOM_START_RANGE..=RANDOM_START_RANGE),
    ];
    on_line_start(game, first)
}

/// z-point of a start, for reporting.
pub fn start_z(game: &NormalizedGame, eta: f64, y1: [f64; 2], y2: [f64; 2]) -> ZPoint {
    let p = zslab_core::project_initial(game, y1, y2);
    DualTransform::new(game, eta).to_z(p.y1[0], p.y2[0])
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub game: GameSpec,
    pub eta: f64,
    #[serde(default)]
    pub y0: InitialPayoffs,
    pub iterations: usize,
    pub outputs: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        check_eta(self.eta)?;
        check_iterations(self.iterations)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_games")]
    pub games: Vec<GameSpec>,
    pub etas: Vec<f64>,
    pub seeds: Vec<u64>,
    pub iterations: usize,
    pub outputs: PathBuf,
    /// First iteration of the `regret/√t` window.
    #[serde(default = "default_window_start")]
    pub window_start: usize,
}

fn default_games() -> Vec<GameSpec> {
    vec![GameSpec::default()]
}

fn default_window_start() -> usize {
    1000
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        check_iterations(self.iterations)
    }
}

fn check_eta(eta: f64) -> Result<(), CliError> {
    if eta.is_finite() && eta > 0.0 {
        Ok(())
    } else {
        Err(CliError::InvalidField {
            field: "eta",
            reason: format!("must be positive and finite, got {eta}"),
        })
    }
}

fn check_iterations(n: usize) -> Result<(), CliError> {
    if n >= 1 {
        Ok(())
    } else {
        Err(CliError::InvalidField {
            field: "iterations",
            reason: "must be at least 1".into(),
        })
    }
}

/// Reads and parses a JSON document, reporting the position of syntax and field errors.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::ConfigParse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Creates the output directory if needed.
pub fn prepare_outputs(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}
