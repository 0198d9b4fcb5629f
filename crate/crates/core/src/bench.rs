//! Benchmark suites. Each produces one row per (instance, setting, seed) and
//! a JSON summary with per-cell medians and pass/fail checks.
//!
//! Cells run on a rayon pool sized by `TRICOLOR_THREADS` (default: all
//! cores); rows come back in cell order regardless of scheduling.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::branch::{best_effort, degree_reduce_is, derive_params, leaf_count_bound};
use crate::coloring::{approx_color, ColorConfig};
use crate::error::{invalid, Result};
use crate::graph::gen_planted_3col;
use crate::rounding::{
    bounded_degree_is_with, greedy_min_degree, hyperplane_round, RoundingConfig,
};
use crate::seed;
use crate::vector::{solve_vector_3coloring, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    RoundingScaling,
    LeafCount,
    EndToEnd,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::RoundingScaling, Suite::LeafCount, Suite::EndToEnd];

    pub fn name(self) -> &'static str {
        match self {
            Suite::RoundingScaling => "rounding-scaling",
            Suite::LeafCount => "leaf-count",
            Suite::EndToEnd => "end-to-end",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                invalid(format!(
                    "unknown suite {s:?}; expected rounding-scaling, leaf-count or end-to-end"
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RoundingScalingConfig {
    pub degrees: Vec<usize>,
    /// Instances have `n = n_per_degree * d` vertices.
    pub n_per_degree: usize,
    pub seeds: u64,
    /// Cap roundings averaged per instance.
    pub directions: u64,
    /// Lower bound required of every per-degree median ratio.
    pub kappa: f64,
    /// Largest allowed max/min ratio of the per-degree medians.
    pub band: f64,
}

impl Default for RoundingScalingConfig {
    fn default() -> Self {
        RoundingScalingConfig {
            degrees: vec![8, 16, 32, 64, 128],
            n_per_degree: 50,
            seeds: 20,
            directions: 128,
            kappa: 0.15,
            band: 2.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LeafCountConfig {
    pub sizes: Vec<usize>,
    pub ratios: Vec<f64>,
    /// Planted degree as a fraction of the threshold `d`.
    pub degree_fractions: Vec<f64>,
    pub seeds: u64,
    pub node_budget: u64,
    pub beta: f64,
}

impl Default for LeafCountConfig {
    fn default() -> Self {
        LeafCountConfig {
            sizes: vec![40, 80, 120, 160, 200],
            ratios: vec![3.0, 4.0],
            degree_fractions: vec![0.5, 0.75],
            seeds: 5,
            node_budget: 200_000,
            beta: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EndToEndConfig {
    pub sizes: Vec<usize>,
    pub degree: usize,
    pub ratios: Vec<f64>,
    /// Instances per ratio; instance `i` uses `sizes[i % sizes.len()]`.
    pub instances: u64,
    pub color: ColorConfig,
}

impl Default for EndToEndConfig {
    fn default() -> Self {
        EndToEndConfig {
            sizes: vec![60],
            degree: 8,
            ratios: vec![2.0],
            instances: 50,
            color: ColorConfig::default(),
        }
    }
}

/// Contents of a bench config file; missing sections take their defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    pub rounding_scaling: RoundingScalingConfig,
    pub leaf_count: LeafCountConfig,
    pub end_to_end: EndToEndConfig,
}

impl BenchConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingRow {
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub max_degree: usize,
    pub embedding_residual: f64,
    /// Mean size of single cap roundings at height `sqrt((2/3) ln d)`.
    pub mean_size: f64,
    /// Best set over the default threshold grid, including the greedy baseline.
    pub best_size: usize,
    pub greedy_size: usize,
    pub scale: f64,
    pub ratio: f64,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeafRow {
    pub n: usize,
    pub r: f64,
    pub d: usize,
    pub degree: usize,
    pub seed: u64,
    pub leaves: u64,
    pub nodes: u64,
    pub bound: f64,
    pub complete: bool,
    pub within_bound: bool,
    pub size: usize,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorRow {
    pub n: usize,
    pub degree: usize,
    pub r: f64,
    pub seed: u64,
    pub colors_used: usize,
    pub color_bound: usize,
    pub rounds: usize,
    pub rounds_met_guarantee: bool,
    pub promise_violation: bool,
    pub valid: bool,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rows {
    Rounding(Vec<RoundingRow>),
    Leaf(Vec<LeafRow>),
    Color(Vec<ColorRow>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchOutput {
    pub suite: String,
    pub rows: Rows,
    pub summary: serde_json::Value,
    pub checks: Vec<Check>,
}

impl BenchOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Writes `<suite>.csv` and `<suite>.summary.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{}.csv", self.suite));
        let mut w = csv::Writer::from_path(&csv_path).map_err(csv_error)?;
        match &self.rows {
            Rows::Rounding(rows) => rows.iter().try_for_each(|r| w.serialize(r)),
            Rows::Leaf(rows) => rows.iter().try_for_each(|r| w.serialize(r)),
            Rows::Color(rows) => rows.iter().try_for_each(|r| w.serialize(r)),
        }
        .map_err(csv_error)?;
        w.flush()?;

        let json_path = dir.join(format!("{}.summary.json", self.suite));
        let summary = serde_json::json!({
            "suite": self.suite,
            "summary": self.summary,
            "checks": self.checks,
            "pass": self.passed(),
        });
        std::fs::write(&json_path, serde_json::to_string_pretty(&summary)?)?;
        Ok((csv_path, json_path))
    }
}

fn csv_error(e: csv::Error) -> crate::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io.into(),
        other => invalid(format!("csv: {other:?}")),
    }
}

/// Runs `f` on a pool sized by `TRICOLOR_THREADS`.
pub fn with_bench_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    let threads = match std::env::var("TRICOLOR_THREADS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| invalid(format!("TRICOLOR_THREADS must be an integer, got {s:?}")))?,
        Err(_) => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| invalid(e.to_string()))?;
    Ok(pool.install(f))
}

pub fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

pub fn run_suite(suite: Suite, cfg: &BenchConfig) -> Result<BenchOutput> {
    with_bench_pool(|| match suite {
        Suite::RoundingScaling => rounding_scaling(&cfg.rounding_scaling),
        Suite::LeafCount => leaf_count(&cfg.leaf_count),
        Suite::EndToEnd => end_to_end(&cfg.end_to_end),
    })?
}

pub fn rounding_scaling_row(
    d: usize,
    n_per_degree: usize,
    seed: u64,
    directions: u64,
) -> Result<RoundingRow> {
    let start = Instant::now();
    let n = n_per_degree * d;
    let g = gen_planted_3col(n, d, seed)?.graph;
    let emb = solve_vector_3coloring(&g, &SolverConfig::default().with_seed(seed))?;
    let df = d as f64;
    let c = (2.0 / 3.0 * df.ln()).sqrt();
    let mut total = 0usize;
    for i in 0..directions {
        total += hyperplane_round(&g, &emb, c, seed::derive(seed, i))?.len();
    }
    let mean_size = total as f64 / directions.max(1) as f64;
    let best = bounded_degree_is_with(&g, 2.0, &RoundingConfig::default().with_seed(seed), &emb)?;
    let scale = n as f64 / (df.cbrt() * df.ln().sqrt());
    Ok(RoundingRow {
        d,
        n,
        seed,
        max_degree: g.max_degree(),
        embedding_residual: emb.residual(),
        mean_size,
        best_size: best.len(),
        greedy_size: greedy_min_degree(&g).len(),
        scale,
        ratio: mean_size / scale,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

fn rounding_scaling(cfg: &RoundingScalingConfig) -> Result<BenchOutput> {
    if cfg.degrees.iter().any(|&d| d < 2) || cfg.n_per_degree == 0 || cfg.directions == 0 {
        return Err(invalid(
            "degrees must be at least 2; n_per_degree and directions positive",
        ));
    }
    let cells: Vec<(usize, u64)> = cfg
        .degrees
        .iter()
        .flat_map(|&d| (0..cfg.seeds).map(move |s| (d, s)))
        .collect();
    let rows: Vec<RoundingRow> = cells
        .par_iter()
        .map(|&(d, s)| rounding_scaling_row(d, cfg.n_per_degree, s, cfg.directions))
        .collect::<Result<_>>()?;

    let medians: Vec<(usize, f64)> = cfg
        .degrees
        .iter()
        .map(|&d| {
            let mut r: Vec<f64> = rows
                .iter()
                .filter(|row| row.d == d)
                .map(|row| row.ratio)
                .collect();
            (d, median(&mut r))
        })
        .collect();
    let max = medians
        .iter()
        .map(|m| m.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let min = medians.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    let checks = vec![
        Check {
            name: "median ratio band".into(),
            pass: max <= cfg.band * min,
            detail: format!("max/min = {:.3} (limit {})", max / min, cfg.band),
        },
        Check {
            name: "median ratio floor".into(),
            pass: min >= cfg.kappa,
            detail: format!("min median = {min:.3} (kappa {})", cfg.kappa),
        },
    ];
    let summary = serde_json::json!({
        "median_ratio": medians.iter().map(|(d, m)| serde_json::json!({"d": d, "median": m})).collect::<Vec<_>>(),
        "max_median": max,
        "min_median": min,
        "kappa": cfg.kappa,
    });
    Ok(BenchOutput {
        suite: Suite::RoundingScaling.name().into(),
        rows: Rows::Rounding(rows),
        summary,
        checks,
    })
}

pub fn leaf_count_row(
    n: usize,
    r: f64,
    fraction: f64,
    seed: u64,
    node_budget: u64,
    beta: f64,
) -> Result<LeafRow> {
    let start = Instant::now();
    let params = derive_params(n, r, beta)?;
    let degree = ((params.d as f64 * fraction).round() as usize).max(1);
    let g = gen_planted_3col(n, degree, seed)?.graph;
    let base = |leaf: &crate::graph::Graph, _: &[usize]| Ok(greedy_min_degree(leaf));
    let (set, stats, cut) = best_effort(degree_reduce_is(&g, &params, base, node_budget))?;
    let bound = leaf_count_bound(n, &params);
    Ok(LeafRow {
        n,
        r,
        d: params.d,
        degree,
        seed,
        leaves: stats.leaves_explored,
        nodes: stats.nodes_expanded,
        bound,
        complete: !cut,
        within_bound: stats.leaves_explored as f64 <= bound,
        size: set.len(),
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

fn leaf_count(cfg: &LeafCountConfig) -> Result<BenchOutput> {
    let mut cells = Vec::new();
    for &n in &cfg.sizes {
        for &r in &cfg.ratios {
            for &f in &cfg.degree_fractions {
                for s in 0..cfg.seeds {
                    cells.push((n, r, f, s));
                }
            }
        }
    }
    let rows: Vec<LeafRow> = cells
        .par_iter()
        .map(|&(n, r, f, s)| leaf_count_row(n, r, f, s, cfg.node_budget, cfg.beta))
        .collect::<Result<_>>()?;
    let violations = rows.iter().filter(|r| !r.within_bound).count();
    let complete = rows.iter().filter(|r| r.complete).count();
    let checks = vec![Check {
        name: "leaves within bound".into(),
        pass: violations == 0,
        detail: format!("{violations} of {} rows exceed the bound", rows.len()),
    }];
    let summary = serde_json::json!({
        "rows": rows.len(),
        "violations": violations,
        "complete_trees": complete,
        "max_leaves": rows.iter().map(|r| r.leaves).max(),
    });
    Ok(BenchOutput {
        suite: Suite::LeafCount.name().into(),
        rows: Rows::Leaf(rows),
        summary,
        checks,
    })
}

pub fn end_to_end_row(
    n: usize,
    degree: usize,
    r: f64,
    seed: u64,
    cfg: &ColorConfig,
) -> Result<ColorRow> {
    let start = Instant::now();
    let g = gen_planted_3col(n, degree, seed)?.graph;
    let (_, rep) = approx_color(&g, r, cfg, seed)?;
    Ok(ColorRow {
        n,
        degree,
        r,
        seed,
        colors_used: rep.colors_used,
        color_bound: rep.color_bound(),
        rounds: rep.rounds,
        rounds_met_guarantee: rep.rounds_met_guarantee,
        promise_violation: rep.promise_violation,
        valid: rep.valid,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

fn end_to_end(cfg: &EndToEndConfig) -> Result<BenchOutput> {
    if cfg.sizes.is_empty() {
        return Err(invalid("sizes must be nonempty"));
    }
    let cells: Vec<(usize, f64, u64)> = cfg
        .ratios
        .iter()
        .flat_map(|&r| {
            (0..cfg.instances).map(move |i| (cfg.sizes[i as usize % cfg.sizes.len()], r, i))
        })
        .collect();
    let rows: Vec<ColorRow> = cells
        .par_iter()
        .map(|&(n, r, s)| end_to_end_row(n, cfg.degree, r, s, &cfg.color))
        .collect::<Result<_>>()?;

    let total = rows.len();
    let valid = rows.iter().filter(|r| r.valid).count();
    let within = rows
        .iter()
        .filter(|r| r.colors_used <= r.color_bound)
        .count();
    let conditioned: Vec<&ColorRow> = rows.iter().filter(|r| r.rounds_met_guarantee).collect();
    let conditioned_within = conditioned
        .iter()
        .filter(|r| r.colors_used <= r.color_bound)
        .count();
    let per_ratio: Vec<serde_json::Value> = cfg
        .ratios
        .iter()
        .map(|&r| {
            let mut colors: Vec<f64> = rows
                .iter()
                .filter(|row| row.r == r)
                .map(|row| row.colors_used as f64)
                .collect();
            serde_json::json!({"r": r, "median_colors": median(&mut colors)})
        })
        .collect();
    let checks = vec![
        Check {
            name: "all colorings valid".into(),
            pass: valid == total,
            detail: format!("{valid}/{total}"),
        },
        Check {
            name: "within 3r+4 colors in at least 95% of runs".into(),
            pass: within as f64 >= 0.95 * total as f64,
            detail: format!("{within}/{total}"),
        },
        Check {
            name: "within 3r+4 colors whenever every round met its guarantee".into(),
            pass: conditioned_within == conditioned.len(),
            detail: format!("{conditioned_within}/{}", conditioned.len()),
        },
    ];
    let summary = serde_json::json!({
        "runs": total,
        "valid": valid,
        "within_bound": within,
        "rounds_met_guarantee": conditioned.len(),
        "per_ratio": per_ratio,
    });
    Ok(BenchOutput {
        suite: Suite::EndToEnd.name().into(),
        rows: Rows::Color(rows),
        summary,
        checks,
    })
}
