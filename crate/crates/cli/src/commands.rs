//! The simulate, sweep and plot commands.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use zslab_core::export::{
    write_average, write_partitions, write_regret, write_table, write_trajectory,
};
use zslab_core::partition::PartitionReport;
use zslab_core::{running_averages, simulate, GameSpec, LinearFit, NormalizedGame, Trajectory};

use crate::analysis::{analyze_run, envelope_fit, RunAnalysis, RunMetrics};
use crate::config::{self, random_start, RunConfig, SweepConfig};
use crate::error::CliError;
use crate::svg;

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateSummary {
    pub game: NormalizedGame,
    pub eta: f64,
    pub y1_start: [f64; 2],
    pub y2_start: [f64; 2],
    pub iterations: usize,
    pub metrics: RunMetrics,
    /// Fit of the squared running maximum of regret against `t`.
    pub envelope_fit: LinearFit,
    pub files: Vec<PathBuf>,
}

/// Runs one configuration and writes its tables and the three figures.
pub fn cmd_simulate(config: &RunConfig) -> Result<SimulateSummary, CliError> {
    config.validate()?;
    let game = config.game.normalized()?;
    let (y1, y2) = config.y0.resolve(&game, config.seed)?;
    let traj = simulate(&game, y1, y2, config.eta, config.iterations)?;
    config::prepare_outputs(&config.outputs)?;
    let analysis = analyze_run(&traj, 1000.min(config.iterations));
    let files = write_run(&traj, &analysis, &config.outputs)?;
    let summary = SimulateSummary {
        game,
        eta: config.eta,
        y1_start: y1,
        y2_start: y2,
        iterations: config.iterations,
        metrics: analysis.metrics,
        envelope_fit: envelope_fit(&analysis.regret),
        files,
    };
    let path = config.outputs.join("summary.json");
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_text(&path, &(json + "\n"))?;
    Ok(summary)
}

/// Writes the four tables and three SVG figures for a trajectory.
pub fn write_run(
    traj: &Trajectory,
    analysis: &RunAnalysis,
    dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    let mut target = |name: &str| {
        let p = dir.join(name);
        files.push(p.clone());
        p
    };

    write_trajectory(create(&target("trajectory.csv"))?, traj, &analysis.path)?;
    write_regret(create(&target("regret.csv"))?, &analysis.regret)?;
    let averages = running_averages(traj);
    let ne = traj.game.equilibrium();
    let gaps: Vec<f64> = averages
        .iter()
        .map(|a| (a[0] - ne.x1[0]).abs().max((a[1] - ne.x2[0]).abs()))
        .collect();
    write_average(create(&target("average.csv"))?, &averages, &gaps)?;
    let p = target("partitions.csv");
    match &analysis.partitions {
        Some(report) => write_partitions(create(&p)?, report)?,
        None => write_partitions(
            create(&p)?,
            &PartitionReport {
                partitions: Vec::new(),
                sentinel: traj.len(),
            },
        )?,
    }

    let strategies: Vec<(f64, f64)> = traj.records().iter().map(|r| (r.x1[0], r.x2[0])).collect();
    let z: Vec<(f64, f64)> = analysis.path.z.iter().map(|p| (p.z1, p.z2)).collect();
    let title = format!("Strategies and payoff vectors, eta = {}", traj.eta);
    write_text(
        &target("orbit.svg"),
        &svg::orbit_plot(&title, &strategies, &z),
    )?;
    let regret: Vec<(f64, f64)> = analysis
        .regret
        .regret
        .iter()
        .enumerate()
        .map(|(t, &r)| (t as f64, r))
        .collect();
    write_text(
        &target("regret.svg"),
        &svg::line_plot("Player 1 regret", "iteration", "regret", &regret),
    )?;
    let squared: Vec<(f64, f64)> = regret.iter().map(|&(t, r)| (t, r * r)).collect();
    write_text(
        &target("regret2.svg"),
        &svg::line_plot("Player 1 regret squared", "iteration", "regret²", &squared),
    )?;
    Ok(files)
}

pub const SUMMARY_HEADER: [&str; 13] = [
    "game",
    "eta",
    "seed",
    "final_regret",
    "max_regret_over_sqrt_t",
    "kappa",
    "energy_slope",
    "energy_r2",
    "time_r2",
    "boundary_entry",
    "partitions",
    "skips",
    "error",
];

/// One sweep run. Numeric fields are empty when the run failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(skip)]
    pub game_index: usize,
    pub game: String,
    pub eta: f64,
    pub seed: u64,
    pub final_regret: Option<f64>,
    pub max_regret_over_sqrt_t: Option<f64>,
    pub kappa: Option<usize>,
    pub energy_slope: Option<f64>,
    pub energy_r2: Option<f64>,
    pub time_r2: Option<f64>,
    pub boundary_entry: Option<usize>,
    pub partitions: Option<usize>,
    pub skips: Option<usize>,
    pub error: String,
}

pub fn game_label(spec: &GameSpec) -> String {
    match spec {
        GameSpec::Preset(name) => name.clone(),
        GameSpec::Entries { a, b, c, d } => format!("[[{a},{b}],[{c},{d}]]"),
    }
}

fn sweep_one(
    spec: &GameSpec,
    game_index: usize,
    eta: f64,
    seed: u64,
    cfg: &SweepConfig,
) -> SweepRow {
    let mut row = SweepRow {
        game_index,
        game: game_label(spec),
        eta,
        seed,
        final_regret: None,
        max_regret_over_sqrt_t: None,
        kappa: None,
        energy_slope: None,
        energy_r2: None,
        time_r2: None,
        boundary_entry: None,
        partitions: None,
        skips: None,
        error: String::new(),
    };
    let traj = spec.normalized().map_err(CliError::from).and_then(|game| {
        let (y1, y2) = random_start(&game, seed);
        simulate(&game, y1, y2, eta, cfg.iterations).map_err(CliError::from)
    });
    let traj = match traj {
        Ok(t) => t,
        Err(e) => {
            row.error = e.to_string();
            return row;
        }
    };
    let m = analyze_run(&traj, cfg.window_start).metrics;
    row.final_regret = Some(m.final_regret);
    row.max_regret_over_sqrt_t = m.max_ratio;
    row.kappa = m.kappa;
    row.energy_slope = m.energy_fit.map(|f| f.slope);
    row.energy_r2 = m.energy_fit.map(|f| f.r_squared);
    row.time_r2 = m.time_fit.map(|f| f.r_squared);
    row.boundary_entry = m.boundary_entry;
    row.partitions = Some(m.partitions);
    row.skips = Some(m.skips);
    row
}

/// Worker count from `ZSLAB_THREADS`, if set to a positive integer.
pub fn thread_limit() -> Option<usize> {
    std::env::var("ZSLAB_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

/// Runs every (game, eta, seed) combination and writes `summary.csv`,
/// rows ordered by game position, then eta, then seed.
pub fn cmd_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    config::prepare_outputs(&cfg.outputs)?;
    let jobs: Vec<(usize, f64, u64)> = (0..cfg.games.len())
        .flat_map(|g| {
            cfg.etas
                .iter()
                .flat_map(move |&eta| cfg.seeds.iter().map(move |&seed| (g, eta, seed)))
        })
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_limit() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().expect("thread pool");
    let mut rows: Vec<SweepRow> = pool.install(|| {
        jobs.par_iter()
            .map(|&(g, eta, seed)| sweep_one(&cfg.games[g], g, eta, seed, cfg))
            .collect()
    });
    rows.sort_by(|a, b| {
        a.game_index
            .cmp(&b.game_index)
            .then(a.eta.total_cmp(&b.eta))
            .then(a.seed.cmp(&b.seed))
    });
    let path = cfg.outputs.join("summary.csv");
    write_table(create(&path)?, &SUMMARY_HEADER, &rows)?;
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind<'a> {
    Orbit,
    Line(&'a str),
}

impl<'a> PlotKind<'a> {
    pub fn parse(kind: &'a str) -> Result<Self, CliError> {
        match kind {
            "orbit" => Ok(PlotKind::Orbit),
            k => match k.strip_prefix("line:") {
                Some(col) if !col.is_empty() => Ok(PlotKind::Line(col)),
                _ => Err(CliError::UnknownPlotKind(k.to_string())),
            },
        }
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<csv::StringRecord>,
}

impl Table {
    fn read(path: &Path) -> Result<Self, CliError> {
        let file = File::open(path).map_err(|e| CliError::io(path, e))?;
        let mut reader = csv::Reader::from_reader(file);
        let header = reader
            .headers()?
            .iter()
            .map(str::to_owned)
            .collect::<Vec<_>>();
        let rows = reader.records().collect::<Result<Vec<_>, _>>()?;
        if header.is_empty() || rows.is_empty() {
            return Err(CliError::EmptyInput {
                path: path.to_path_buf(),
            });
        }
        Ok(Table { header, rows })
    }

    fn column(&self, path: &Path, name: &str) -> Result<Vec<Option<f64>>, CliError> {
        let idx =
            self.header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| CliError::MissingColumn {
                    path: path.to_path_buf(),
                    column: name.to_string(),
                })?;
        self.rows
            .iter()
            .enumerate()
            .map(|(row, r)| {
                let v = r.get(idx).unwrap_or("").trim();
                if v.is_empty() {
                    return Ok(None);
                }
                v.parse().map(Some).map_err(|_| CliError::BadValue {
                    path: path.to_path_buf(),
                    row: row + 1,
                    column: name.to_string(),
                    value: v.to_string(),
                })
            })
            .collect()
    }

    fn pairs(&self, path: &Path, x: &str, y: &str) -> Result<Vec<(f64, f64)>, CliError> {
        let (xs, ys) = (self.column(path, x)?, self.column(path, y)?);
        Ok(xs
            .into_iter()
            .zip(ys)
            .filter_map(|(a, b)| Some((a?, b?)))
            .collect())
    }
}

/// Renders an SVG from a CSV written by this tool. Nothing is written on error.
pub fn cmd_plot(input: &Path, kind: &str, out: &Path) -> Result<(), CliError> {
    let kind = PlotKind::parse(kind)?;
    let table = Table::read(input)?;
    let svg = match kind {
        PlotKind::Orbit => {
            let strategies = table.pairs(input, "x11", "x21")?;
            let z = table.pairs(input, "z1", "z2")?;
            svg::orbit_plot("Strategies and payoff vectors", &strategies, &z)
        }
        PlotKind::Line(col) => {
            let x = table.header[0].clone();
            let pts = table.pairs(input, &x, col)?;
            svg::line_plot(col, &x, col, &pts)
        }
    };
    write_text(out, &svg)
}
