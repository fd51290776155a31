//! CSV tables for trajectories and their derived series.
//!
//! Every table starts with a header row, even when it has no data rows.
//! Payoff vectors are written in the caller's frame, i.e. with the
//! dual-line offsets added back.

use std::io::Write;

use serde::Serialize;

use crate::continuous::ContinuousRun;
use crate::dual::DualPath;
use crate::ftrl::Trajectory;
use crate::metrics::RegretSeries;
use crate::partition::{classify, PartitionReport};

pub const TRAJECTORY_HEADER: [&str; 12] = [
    "t", "y11", "y12", "y21", "y22", "x11", "x21", "z1", "z2", "utility", "energy", "region",
];
pub const REGRET_HEADER: [&str; 4] = ["t", "regret", "regret2", "regret_over_sqrt_t"];
pub const AVERAGE_HEADER: [&str; 4] = ["t", "xbar11", "xbar21", "gap"];
pub const PARTITION_HEADER: [&str; 8] = [
    "j",
    "t_j",
    "region",
    "length",
    "r_j",
    "delta_r",
    "strategy_changes",
    "skipped",
];
pub const CONTINUOUS_HEADER: [&str; 5] = ["t", "y11", "y21", "energy", "drift"];

/// Writes a header followed by serialized rows.
pub fn write_table<W: Write, R: Serialize>(
    out: W,
    header: &[&str],
    rows: impl IntoIterator<Item = R>,
) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trajectory<W: Write>(out: W, traj: &Trajectory, path: &DualPath) -> csv::Result<()> {
    let rows = traj.records().iter().enumerate().map(|(t, r)| {
        let (y1, y2) = traj.raw_payoffs(t);
        let z = path.z[t];
        (
            t,
            y1[0],
            y1[1],
            y2[0],
            y2[1],
            r.x1[0],
            r.x2[0],
            z.z1,
            z.z2,
            r.utility,
            path.energy[t],
            classify(z).label(),
        )
    });
    write_table(out, &TRAJECTORY_HEADER, rows)
}

/// `regret2` is the squared regret; the ratio column is empty at `t = 0`.
pub fn write_regret<W: Write>(out: W, series: &RegretSeries) -> csv::Result<()> {
    let rows = series.regret.iter().enumerate().map(|(t, &r)| {
        let ratio = (t > 0).then(|| r / (t as f64).sqrt());
        (t, r, r * r, ratio)
    });
    write_table(out, &REGRET_HEADER, rows)
}

/// `averages[t]` holds `(x̄11, x̄21)` and `gaps[t]` the distance to equilibrium.
pub fn write_average<W: Write>(out: W, averages: &[[f64; 2]], gaps: &[f64]) -> csv::Result<()> {
    let rows = averages
        .iter()
        .zip(gaps)
        .enumerate()
        .map(|(t, (a, g))| (t, a[0], a[1], *g));
    write_table(out, &AVERAGE_HEADER, rows)
}

pub fn write_partitions<W: Write>(out: W, report: &PartitionReport) -> csv::Result<()> {
    let rows = report.partitions.iter().map(|p| {
        (
            p.j,
            p.start,
            p.region.label(),
            p.length,
            p.energy,
            p.energy_delta,
            p.strategy_changes,
            p.skipped,
        )
    });
    write_table(out, &PARTITION_HEADER, rows)
}

pub fn write_continuous<W: Write>(out: W, run: &ContinuousRun) -> csv::Result<()> {
    let base = run.energy.first().copied().unwrap_or(0.0);
    let rows = (0..run.len()).map(|k| {
        (
            run.time(k),
            run.y1[k][0] + run.offsets[0],
            run.y2[k][0] + run.offsets[1],
            run.energy[k],
            run.energy[k] - base,
        )
    });
    write_table(out, &CONTINUOUS_HEADER, rows)
}
