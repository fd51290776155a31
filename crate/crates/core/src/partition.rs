//! Region classification of z-points and the partition of a trajectory into
//! the stretches it spends in each region.
//!
//! Around the unit square, the four regions are
//!
//! ```text
//! Z0: z1 < 1,  z2 >= 1      Z1: z1 >= 1, z2 > 0
//! Z2: z1 > 0,  z2 <= 0      Z3: z1 <= 0, z2 < 1
//! ```
//!
//! and everything else is the open square itself. Dual trajectories visit
//! them clockwise, Z0 to Z1 to Z2 to Z3, occasionally jumping two at once
//! when the step size is large.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::dual::{DualPath, ZPoint};
use crate::fit::{linear_fit, LinearFit};
use crate::ftrl::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    Z0,
    Z1,
    Z2,
    Z3,
    Interior,
}

impl Region {
    /// Position in the clockwise order, `None` for the interior.
    pub fn index(self) -> Option<u8> {
        match self {
            Region::Z0 => Some(0),
            Region::Z1 => Some(1),
            Region::Z2 => Some(2),
            Region::Z3 => Some(3),
            Region::Interior => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Region::Z0 => "Z0",
            Region::Z1 => "Z1",
            Region::Z2 => "Z2",
            Region::Z3 => "Z3",
            Region::Interior => "Interior",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify(z: ZPoint) -> Region {
    let ZPoint { z1, z2 } = z;
    if z1 < 1.0 && z2 >= 1.0 {
        Region::Z0
    } else if z1 >= 1.0 && z2 > 0.0 {
        Region::Z1
    } else if z1 > 0.0 && z2 <= 0.0 {
        Region::Z2
    } else if z1 <= 0.0 && z2 < 1.0 {
        Region::Z3
    } else {
        Region::Interior
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("no Z0 entry in horizon at or after iteration {from}")]
    NoZ0Entry { from: usize },
}

/// Break points `t_0 < t_1 < ...` and the sentinel `T + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BreakPoints {
    pub starts: Vec<usize>,
    pub regions: Vec<Region>,
    pub sentinel: usize,
}

impl BreakPoints {
    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    /// End (exclusive) of partition `j`.
    pub fn end(&self, j: usize) -> usize {
        self.starts.get(j + 1).copied().unwrap_or(self.sentinel)
    }
}

/// `t_0` is the first `t >= from` in Z0; each later break point is the first
/// iteration whose region differs from its predecessor's.
pub fn break_points(z: &[ZPoint], from: usize) -> Result<BreakPoints, PartitionError> {
    let first = (from..z.len())
        .find(|&t| classify(z[t]) == Region::Z0)
        .ok_or(PartitionError::NoZ0Entry { from })?;
    let mut starts = vec![first];
    let mut regions = vec![Region::Z0];
    let mut current = Region::Z0;
    for (t, &p) in z.iter().enumerate().skip(first + 1) {
        let r = classify(p);
        if r != current {
            starts.push(t);
            regions.push(r);
            current = r;
        }
    }
    Ok(BreakPoints {
        starts,
        regions,
        sentinel: z.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    pub j: usize,
    pub start: usize,
    pub region: Region,
    pub length: usize,
    /// Total energy at the partition's first iteration.
    pub energy: f64,
    /// Energy at the next break point minus `energy`; absent for the last partition.
    pub energy_delta: Option<f64>,
    /// Iterations `t` in the partition with `x^t != x^{t+1}`.
    pub strategy_changes: usize,
    /// The region index advanced by two from the previous partition.
    pub skipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    pub partitions: Vec<Partition>,
    pub sentinel: usize,
}

/// Fills in per-partition statistics for a trajectory and its break points.
pub fn partition_stats(
    traj: &Trajectory,
    path: &DualPath,
    skeleton: &BreakPoints,
) -> PartitionReport {
    let records = traj.records();
    let mut partitions = Vec::with_capacity(skeleton.len());
    for (j, (&start, &region)) in skeleton.starts.iter().zip(&skeleton.regions).enumerate() {
        let end = skeleton.end(j);
        let next_start = skeleton.starts.get(j + 1).copied();
        let strategy_changes = (start..end)
            .filter(|&t| t + 1 < records.len())
            .filter(|&t| records[t].x1 != records[t + 1].x1 || records[t].x2 != records[t + 1].x2)
            .count();
        let skipped = j > 0
            && match (skeleton.regions[j - 1].index(), region.index()) {
                (Some(p), Some(c)) => (c + 4 - p) % 4 == 2,
                _ => false,
            };
        partitions.push(Partition {
            j,
            start,
            region,
            length: end - start,
            energy: path.energy[start],
            energy_delta: next_start.map(|s| path.energy[s] - path.energy[start]),
            strategy_changes,
            skipped,
        });
    }
    PartitionReport {
        partitions,
        sentinel: skeleton.sentinel,
    }
}

/// Break points from `from` on, then their statistics.
pub fn analyze(
    traj: &Trajectory,
    path: &DualPath,
    from: usize,
) -> Result<PartitionReport, PartitionError> {
    let skeleton = break_points(&path.z, from)?;
    Ok(partition_stats(traj, path, &skeleton))
}

/// Decile comparison of per-partition strategy-change counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChangeTrend {
    pub kappa: usize,
    pub first_decile_max: usize,
    pub last_decile_max: usize,
}

impl PartitionReport {
    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// Partitions that end at a break point rather than at the horizon.
    pub fn complete(&self) -> &[Partition] {
        &self.partitions[..self.partitions.len().saturating_sub(1)]
    }

    pub fn skip_count(&self) -> usize {
        self.partitions.iter().filter(|p| p.skipped).count()
    }

    /// Transitions that are neither one nor two steps clockwise.
    pub fn out_of_order_count(&self) -> usize {
        self.partitions
            .windows(2)
            .filter(|w| match (w[0].region.index(), w[1].region.index()) {
                (Some(p), Some(c)) => !matches!((c + 4 - p) % 4, 1 | 2),
                _ => true,
            })
            .count()
    }

    /// Largest strategy-change count over complete partitions.
    pub fn kappa(&self) -> usize {
        self.complete()
            .iter()
            .map(|p| p.strategy_changes)
            .max()
            .unwrap_or(0)
    }

    /// Maxima of strategy changes over the first and last tenth of the
    /// complete partitions that follow `burn_in`.
    pub fn change_trend(&self, burn_in: usize) -> Option<ChangeTrend> {
        let body = self.complete().get(burn_in..)?;
        let decile = body.len() / 10;
        if decile == 0 {
            return None;
        }
        let max_of = |s: &[Partition]| s.iter().map(|p| p.strategy_changes).max().unwrap_or(0);
        Some(ChangeTrend {
            kappa: self.kappa(),
            first_decile_max: max_of(&body[..decile]),
            last_decile_max: max_of(&body[body.len() - decile..]),
        })
    }

    /// Least-squares fit of `r_j` against `j` for `j >= burn_in`.
    pub fn energy_fit(&self, burn_in: usize) -> LinearFit {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .partitions
            .iter()
            .skip(burn_in)
            .map(|p| (p.j as f64, p.energy))
            .unzip();
        linear_fit(&xs, &ys)
    }

    /// Least-squares fit of `t_j` against `j²` for `j >= burn_in`.
    pub fn time_fit(&self, burn_in: usize) -> LinearFit {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .partitions
            .iter()
            .skip(burn_in)
            .map(|p| ((p.j * p.j) as f64, p.start as f64))
            .unzip();
        linear_fit(&xs, &ys)
    }
}
