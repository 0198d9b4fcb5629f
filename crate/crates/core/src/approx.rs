//! Approximate maximum independent set: degree-reduction branching over the
//! rounding base solver, repeated and keeping the best result.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::branch::{best_effort, degree_reduce_is, derive_params, ApproxParams, BranchStats};
use crate::error::{invalid, Result};
use crate::graph::{Graph, VertexSet};
use crate::rounding::{bounded_degree_is_with, greedy_min_degree, RoundingConfig};
use crate::seed;
use crate::vector::{solve_vector_3coloring, SolverConfig, VectorEmbedding};

/// Seed stream reserved for the vector solver.
const SOLVER_STREAM: u64 = u64::MAX;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IsConfig {
    /// Repetitions; `None` means `ceil(r)`.
    pub repetitions: Option<usize>,
    pub beta: f64,
    /// Node budget of each branching run.
    pub node_budget: u64,
    /// The run stops starting repetitions once `factor * ceil(r) * tau` has
    /// elapsed, `tau` the duration of the first repetition.
    pub time_cap_factor: f64,
    pub rounding: RoundingConfig,
    pub solver: SolverConfig,
}

impl Default for IsConfig {
    fn default() -> Self {
        IsConfig {
            repetitions: None,
            beta: 1.0,
            node_budget: 64,
            time_cap_factor: 5.0,
            rounding: RoundingConfig::default(),
            solver: SolverConfig::default(),
        }
    }
}

impl IsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == Some(0) {
            return Err(invalid("repetitions must be positive"));
        }
        if self.node_budget == 0 {
            return Err(invalid("node budget must be positive"));
        }
        if self.time_cap_factor.is_nan() || self.time_cap_factor <= 0.0 {
            return Err(invalid("time cap factor must be positive"));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(invalid("beta must be positive"));
        }
        self.rounding.validate()?;
        self.solver.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsReport {
    pub r: f64,
    /// Parameters of the branching, derived at ratio `max(2, r/2)`.
    pub params: ApproxParams,
    pub repetition_sizes: Vec<usize>,
    pub stats: BranchStats,
    pub budget_exceeded: bool,
    pub time_capped: bool,
    /// Residual of the embedding used by the leaves, if one was needed.
    pub embedding_residual: Option<f64>,
    pub wall_ms: u64,
}

/// Independent set of `g` aimed at size `alpha(g) / r`.
///
/// Ratios in `[1, 2)` are accepted and run the branching at ratio 2.
pub fn approx_independent_set(
    g: &Graph,
    r: f64,
    cfg: &IsConfig,
    seed: u64,
) -> Result<(VertexSet, IsReport)> {
    approx_independent_set_with(g, r, cfg, seed, None)
}

/// [`approx_independent_set`] reusing an embedding of `g`. Leaves use its
/// restriction, which stays feasible on induced subgraphs.
pub fn approx_independent_set_with(
    g: &Graph,
    r: f64,
    cfg: &IsConfig,
    seed: u64,
    embedding: Option<&VectorEmbedding>,
) -> Result<(VertexSet, IsReport)> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(invalid(format!("ratio must be at least 1, got {r}")));
    }
    cfg.validate()?;
    let start = Instant::now();
    let params = derive_params(g.vertex_count(), (r / 2.0).max(2.0), cfg.beta)?;
    let mut report = IsReport {
        r,
        params,
        repetition_sizes: Vec::new(),
        stats: BranchStats::default(),
        budget_exceeded: false,
        time_capped: false,
        embedding_residual: None,
        wall_ms: 0,
    };
    if g.vertex_count() == 0 {
        return Ok((VertexSet::trusted_independent(g, Vec::new()), report));
    }

    let solved;
    let embedding = match embedding {
        Some(e) => Some(e),
        None if g.max_degree() as f64 > params.r_prime => {
            let solver = SolverConfig {
                seed: seed::derive(seed, SOLVER_STREAM),
                ..cfg.solver.clone()
            };
            solved = solve_vector_3coloring(g, &solver)?;
            Some(&solved)
        }
        None => None,
    };
    report.embedding_residual = embedding.map(VectorEmbedding::residual);

    let repetitions = cfg.repetitions.unwrap_or(r.ceil() as usize);
    let mut best: Option<VertexSet> = None;
    let mut cap: Option<Duration> = None;
    for rep in 0..repetitions {
        if cap.is_some_and(|c| start.elapsed() >= c) {
            report.time_capped = true;
            break;
        }
        let rep_seed = seed::derive(seed, rep as u64);
        let mut leaf_index = 0u64;
        let base = |leaf: &Graph, keep: &[usize]| {
            let rounding = cfg
                .rounding
                .clone()
                .with_seed(seed::derive(rep_seed, leaf_index));
            leaf_index += 1;
            match embedding {
                Some(emb) => {
                    let restricted = emb.restrict(leaf, keep, cfg.solver.epsilon);
                    bounded_degree_is_with(leaf, params.r_prime, &rounding, &restricted)
                }
                None => Ok(greedy_min_degree(leaf)),
            }
        };
        let (set, stats, cut) = best_effort(degree_reduce_is(g, &params, base, cfg.node_budget))?;
        report.stats.merge(&stats);
        report.budget_exceeded |= cut;
        report.repetition_sizes.push(set.len());
        if best.as_ref().is_none_or(|b| set.beats(b)) {
            best = Some(set);
        }
        if rep == 0 {
            let tau = start.elapsed().as_secs_f64();
            cap = Duration::try_from_secs_f64(cfg.time_cap_factor * r.ceil() * tau).ok();
        }
    }
    report.wall_ms = start.elapsed().as_millis() as u64;
    Ok((best.expect("at least one repetition"), report))
}
