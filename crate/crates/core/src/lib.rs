//! Gradient descent in two-player zero-sum games.
//!
//! The crate simulates online gradient descent with a fixed step size in
//! 2x2 zero-sum games (the projection itself works for any number of
//! strategies) and measures what the dynamics do in the dual space:
//! payoff vectors rotate around the equilibrium, the system energy never
//! decreases, and regret grows like the square root of the horizon.
//!
//! ```
//! use zslab_core::{dual_path, regret, simulate, NormalizedGame, Player};
//!
//! let game = NormalizedGame::matching_pennies();
//! let traj = simulate(&game, [0.2, -0.2], [-0.3, 0.3], 0.15, 1000).unwrap();
//! let energy = dual_path(&traj).energy;
//! assert!(energy.windows(2).all(|w| w[1] >= w[0] - 1e-9));
//! assert!(regret(&traj, Player::Row).regret[1000] > 0.0);
//! ```

pub mod continuous;
pub mod dual;
pub mod export;
pub mod fit;
pub mod ftrl;
pub mod game;
pub mod metrics;
pub mod partition;
pub mod pennies;

pub use continuous::{energy_drift, first_rotation, integrate, ContinuousRun};
pub use dual::{
    conjugate_energy, dual_path, energy_coefficients, piecewise_energy, project_initial,
    strategy_from_z, to_z, total_energy, DualPath, DualTransform, PiecewiseEnergy, ZPoint,
};
pub use fit::{linear_fit, LinearFit};
pub use ftrl::{
    gd_strategy, simulate, step, support_set, EngineError, LearnerState, Record, SupportSet,
    Trajectory,
};
pub use game::{
    check_assumptions, nash_equilibrium, normalize, GameError, GameSpec, NashPoint, NormalizedGame,
    PayoffMatrix2x2,
};
pub use metrics::{
    boundary_entry_index, nash_gap, regret, running_averages, time_average_strategy, Player,
    RegretSeries,
};
pub use partition::{
    break_points, classify, partition_stats, PartitionError, PartitionReport, Region,
};
pub use pennies::{
    exact_cumulative_utility, exact_payoff_vectors, exact_regret, triangular_index, TriangularIndex,
};
