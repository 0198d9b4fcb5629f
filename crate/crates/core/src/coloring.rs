//! Coloring by peeling: take a large independent set as a color class,
//! delete it, repeat until fewer than `max(t, 1)` vertices remain, then
//! 3-color the rest exactly.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{approx_independent_set_with, IsConfig};
use crate::branch::{derive_params, BranchStats};
use crate::error::{invalid, Result};
use crate::exact::{exact_3color, greedy_coloring, DEFAULT_COLOR_BUDGET};
use crate::graph::{verify_coloring, Coloring, Graph, VertexSet};
use crate::seed;
use crate::vector::{solve_vector_3coloring, SolverConfig, VectorEmbedding};

const SOLVER_STREAM: u64 = u64::MAX;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ColorConfig {
    #[serde(flatten)]
    pub is: IsConfig,
    /// Independent set calls per round; `None` means `n`.
    pub per_round_calls: Option<usize>,
    /// Node budget of the final exact 3-coloring.
    pub exact_budget: u64,
}

impl Default for ColorConfig {
    fn default() -> Self {
        ColorConfig {
            is: IsConfig::default(),
            per_round_calls: None,
            exact_budget: DEFAULT_COLOR_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub n: usize,
    pub m: usize,
    pub r: f64,
    pub t: f64,
    pub r_prime: f64,
    pub colors_used: usize,
    pub rounds: usize,
    pub is_calls: usize,
    pub per_round_sizes: Vec<usize>,
    /// Vertices remaining at the start of each round.
    pub per_round_vertices: Vec<usize>,
    pub per_round_calls: usize,
    /// Whether every round found at least `|V| / (3 r')` vertices.
    pub rounds_met_guarantee: bool,
    pub leaf_counters: BranchStats,
    pub residual_vertices: usize,
    pub promise_violation: bool,
    /// The exact stage ran out of budget and the residual was colored greedily.
    pub exact_budget_exceeded: bool,
    pub embedding_residual: Option<f64>,
    pub wall_ms: u64,
    pub seed: u64,
    pub valid: bool,
}

impl RunReport {
    /// Color bound that holds whenever every round met its size guarantee.
    pub fn color_bound(&self) -> usize {
        3 * self.r.ceil() as usize + 4
    }

    /// Round bound that holds whenever every round met its size guarantee.
    pub fn round_bound(&self) -> usize {
        3 * self.r.ceil() as usize + 1
    }
}

/// Best of `calls` independent set runs on `current` at ratio `r_prime`.
pub fn peel_round(
    current: &Graph,
    r_prime: f64,
    calls: usize,
    cfg: &IsConfig,
    seed: u64,
) -> Result<VertexSet> {
    peel_round_with(current, r_prime, calls, cfg, seed, None).map(|(s, _)| s)
}

fn peel_round_with(
    current: &Graph,
    r_prime: f64,
    calls: usize,
    cfg: &IsConfig,
    seed: u64,
    embedding: Option<&VectorEmbedding>,
) -> Result<(VertexSet, BranchStats)> {
    if current.vertex_count() == 0 {
        return Err(invalid("cannot peel an empty graph"));
    }
    if calls == 0 {
        return Err(invalid("calls must be positive"));
    }
    let runs: Vec<(VertexSet, BranchStats)> = (0..calls)
        .into_par_iter()
        .map(|i| {
            approx_independent_set_with(
                current,
                r_prime,
                cfg,
                seed::derive(seed, i as u64),
                embedding,
            )
            .map(|(s, rep)| (s, rep.stats))
        })
        .collect::<Result<_>>()?;
    let mut stats = BranchStats::default();
    let mut best: Option<VertexSet> = None;
    for (set, s) in runs {
        stats.merge(&s);
        if best.as_ref().is_none_or(|b| set.beats(b)) {
            best = Some(set);
        }
    }
    Ok((best.expect("calls > 0"), stats))
}

/// Colors `g`, which is promised to be 3-colorable, with about `3r + 4`
/// colors. A broken promise is reported, and the returned coloring is still
/// valid.
pub fn approx_color(
    g: &Graph,
    r: f64,
    cfg: &ColorConfig,
    seed: u64,
) -> Result<(Coloring, RunReport)> {
    let start = Instant::now();
    cfg.is.validate()?;
    let n = g.vertex_count();
    let params = derive_params(n, r, cfg.is.beta)?;
    let calls = cfg.per_round_calls.unwrap_or(n).max(1);
    if cfg.per_round_calls == Some(0) {
        return Err(invalid("per_round_calls must be positive"));
    }

    let embedding = if g.edge_count() > 0 {
        let solver = SolverConfig {
            seed: seed::derive(seed, SOLVER_STREAM),
            ..cfg.is.solver.clone()
        };
        Some(solve_vector_3coloring(g, &solver)?)
    } else {
        None
    };

    let mut report = RunReport {
        n,
        m: g.edge_count(),
        r,
        t: params.t,
        r_prime: params.r_prime,
        colors_used: 0,
        rounds: 0,
        is_calls: 0,
        per_round_sizes: Vec::new(),
        per_round_vertices: Vec::new(),
        per_round_calls: calls,
        rounds_met_guarantee: true,
        leaf_counters: BranchStats::default(),
        residual_vertices: 0,
        promise_violation: false,
        exact_budget_exceeded: false,
        embedding_residual: embedding.as_ref().map(VectorEmbedding::residual),
        wall_ms: 0,
        seed,
        valid: false,
    };

    let mut colors = vec![usize::MAX; n];
    let mut ids: Vec<usize> = (0..n).collect();
    let mut current = g.clone();
    let mut next_color = 0;
    let guard = params.t.max(1.0);
    while current.vertex_count() as f64 >= guard {
        let size_before = current.vertex_count();
        let local_emb = embedding
            .as_ref()
            .map(|e| e.restrict(&current, &ids, cfg.is.solver.epsilon));
        let round_seed = seed::derive(seed, report.rounds as u64);
        let (set, stats) = peel_round_with(
            &current,
            params.r_prime,
            calls,
            &cfg.is,
            round_seed,
            local_emb.as_ref(),
        )?;
        debug_assert!(!set.is_empty());
        for &v in set.members() {
            colors[ids[v]] = next_color;
        }
        next_color += 1;
        report.rounds += 1;
        report.is_calls += calls;
        report.per_round_sizes.push(set.len());
        report.per_round_vertices.push(size_before);
        report.rounds_met_guarantee &=
            (set.len() as f64) * 3.0 * params.r_prime >= size_before as f64;
        report.leaf_counters.merge(&stats);

        let (rest, map) = current.delete_vertices(&set)?;
        ids = map.iter().map(|&v| ids[v]).collect();
        current = rest;
        debug_assert_eq!(current.vertex_count(), size_before - set.len());
    }
    debug_assert!((current.vertex_count() as f64) < guard);

    report.residual_vertices = current.vertex_count();
    let residual = match exact_3color(&current, cfg.exact_budget) {
        Ok(Some(c)) => c,
        Ok(None) => {
            report.promise_violation = true;
            greedy_coloring(&current)
        }
        Err(crate::Error::BudgetExceeded { .. }) => {
            report.exact_budget_exceeded = true;
            greedy_coloring(&current)
        }
        Err(e) => return Err(e),
    };
    for (v, &c) in residual.assignment().iter().enumerate() {
        colors[ids[v]] = next_color + c;
    }
    debug_assert!(colors.iter().all(|&c| c != usize::MAX));

    let coloring = Coloring::new(colors);
    report.colors_used = coloring.colors_used();
    report.valid = verify_coloring(g, &coloring)?;
    report.wall_ms = start.elapsed().as_millis() as u64;
    Ok((coloring, report))
}
