//! Cap rounding of a vector 3-coloring into an independent set.
//!
//! A Gaussian direction `z` selects the cap `{v : <x_v, z> >= c}`. Edges
//! inside the cap are repaired by deleting vertices with the most conflicts
//! first. [`bounded_degree_is`] runs this over several directions and cap
//! heights and keeps the best set, never doing worse than a greedy baseline.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{Graph, VertexSet};
use crate::seed;
use crate::vector::{solve_vector_3coloring, SolveStatus, SolverConfig, VectorEmbedding};

/// Cap heights tried by [`bounded_degree_is`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "values")]
pub enum ThresholdGrid {
    /// Multiples of `sqrt((2/3) ln(D + 2))`, `D` the maximum degree of the
    /// graph being rounded.
    Relative(Vec<f64>),
    /// Fixed heights.
    Absolute(Vec<f64>),
}

impl Default for ThresholdGrid {
    fn default() -> Self {
        ThresholdGrid::Relative(vec![0.6, 0.8, 1.0, 1.2, 1.4])
    }
}

impl ThresholdGrid {
    fn values(&self) -> &[f64] {
        match self {
            ThresholdGrid::Relative(v) | ThresholdGrid::Absolute(v) => v,
        }
    }

    /// Concrete heights for a graph of maximum degree `max_degree`.
    pub fn heights(&self, max_degree: usize) -> Vec<f64> {
        match self {
            ThresholdGrid::Absolute(v) => v.clone(),
            ThresholdGrid::Relative(v) => {
                let center = (2.0 / 3.0 * (max_degree as f64 + 2.0).ln()).sqrt();
                v.iter().map(|s| s * center).collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RoundingConfig {
    /// Gaussian directions drawn per call.
    pub trials: usize,
    pub threshold_grid: ThresholdGrid,
    pub seed: u64,
}

impl Default for RoundingConfig {
    fn default() -> Self {
        RoundingConfig {
            trials: 8,
            threshold_grid: ThresholdGrid::default(),
            seed: 0,
        }
    }
}

impl RoundingConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        let v = self.threshold_grid.values();
        if v.is_empty() {
            return Err(invalid("threshold grid is empty"));
        }
        if v.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return Err(invalid("threshold grid must be positive"));
        }
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("threshold grid must be strictly increasing"));
        }
        Ok(())
    }
}

fn check_embedding(g: &Graph, emb: &VectorEmbedding) -> Result<()> {
    if emb.len() != g.vertex_count() {
        return Err(invalid(format!(
            "embedding has {} vectors for {} vertices",
            emb.len(),
            g.vertex_count()
        )));
    }
    Ok(())
}

fn projections(emb: &VectorEmbedding, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = seed::rng(seed);
    let z: Vec<f64> = (0..emb.dimension())
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    (0..n)
        .map(|v| emb.vector(v).iter().zip(&z).map(|(a, b)| a * b).sum())
        .collect()
}

/// Cap at height `c` plus conflict repair. Nonempty whenever `proj` is.
fn round_projections(g: &Graph, proj: &[f64], c: f64) -> Vec<usize> {
    let n = g.vertex_count();
    let mut in_cap: Vec<bool> = proj.iter().map(|&p| p >= c).collect();
    let mut conflicts = vec![0usize; n];
    let mut heap = BinaryHeap::new();
    for v in (0..n).filter(|&v| in_cap[v]) {
        conflicts[v] = g.neighbors(v).iter().filter(|&&u| in_cap[u]).count();
        if conflicts[v] > 0 {
            heap.push((conflicts[v], Reverse(v)));
        }
    }
    while let Some((k, Reverse(v))) = heap.pop() {
        if !in_cap[v] || conflicts[v] != k || k == 0 {
            continue;
        }
        in_cap[v] = false;
        for &u in g.neighbors(v) {
            if in_cap[u] {
                conflicts[u] -= 1;
                if conflicts[u] > 0 {
                    heap.push((conflicts[u], Reverse(u)));
                }
            }
        }
    }
    let set: Vec<usize> = (0..n).filter(|&v| in_cap[v]).collect();
    if set.is_empty() && n > 0 {
        let best = (0..n)
            .max_by(|&a, &b| proj[a].total_cmp(&proj[b]).then(b.cmp(&a)))
            .expect("nonempty");
        return vec![best];
    }
    set
}

/// One cap rounding with direction drawn from `seed`.
pub fn hyperplane_round(g: &Graph, emb: &VectorEmbedding, c: f64, seed: u64) -> Result<VertexSet> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid(format!("cap height must be positive, got {c}")));
    }
    check_embedding(g, emb)?;
    let proj = projections(emb, g.vertex_count(), seed);
    Ok(VertexSet::trusted_independent(
        g,
        round_projections(g, &proj, c),
    ))
}

/// Repeatedly takes a vertex of minimum remaining degree (ties: smaller id)
/// and deletes its closed neighborhood. Size is at least `n / (D + 1)`.
pub fn greedy_min_degree(g: &Graph) -> VertexSet {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..n).map(|v| Reverse((degree[v], v))).collect();
    let mut set = Vec::new();
    while let Some(Reverse((d, v))) = heap.pop() {
        if !alive[v] || degree[v] != d {
            continue;
        }
        set.push(v);
        alive[v] = false;
        for &u in g.neighbors(v) {
            if alive[u] {
                alive[u] = false;
                for &w in g.neighbors(u) {
                    if alive[w] {
                        degree[w] -= 1;
                        heap.push(Reverse((degree[w], w)));
                    }
                }
            }
        }
    }
    VertexSet::trusted_independent(g, set)
}

/// Large independent set in a graph of bounded degree.
///
/// Returns the greedy baseline when the maximum degree is at most `r`, or
/// when the vector 3-coloring misses its tolerance. Otherwise returns the
/// best of the baseline and every (trial, height) cap rounding.
pub fn bounded_degree_is(
    g: &Graph,
    r: f64,
    cfg: &RoundingConfig,
    solver: &SolverConfig,
) -> Result<VertexSet> {
    check_ratio(r)?;
    cfg.validate()?;
    if g.max_degree() as f64 <= r {
        return Ok(greedy_min_degree(g));
    }
    let emb = solve_vector_3coloring(g, solver)?;
    bounded_degree_is_with(g, r, cfg, &emb)
}

/// [`bounded_degree_is`] with a precomputed embedding of `g`.
pub fn bounded_degree_is_with(
    g: &Graph,
    r: f64,
    cfg: &RoundingConfig,
    emb: &VectorEmbedding,
) -> Result<VertexSet> {
    check_ratio(r)?;
    cfg.validate()?;
    check_embedding(g, emb)?;
    let baseline = greedy_min_degree(g);
    if g.max_degree() as f64 <= r || emb.status() != SolveStatus::ToleranceReached {
        return Ok(baseline);
    }
    let heights = cfg.threshold_grid.heights(g.max_degree());
    let n = g.vertex_count();
    let best = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let proj = projections(emb, n, seed::derive(cfg.seed, trial as u64));
            heights
                .iter()
                .map(|&c| VertexSet::new(round_projections(g, &proj, c)))
                .reduce(|a, b| if b.beats(&a) { b } else { a })
                .expect("grid is nonempty")
        })
        .reduce_with(|a, b| if b.beats(&a) { b } else { a })
        .expect("at least one trial");
    if best.beats(&baseline) {
        Ok(VertexSet::trusted_independent(g, best.into_members()))
    } else {
        Ok(baseline)
    }
}

fn check_ratio(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid(format!("ratio must be positive, got {r}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_planted_3col, verify_independent_set, Coloring};
    use crate::vector::planted_embedding;

    #[test]
    fn config_validation() {
        assert!(RoundingConfig::default().validate().is_ok());
        let bad = [
            RoundingConfig {
                trials: 0,
                ..Default::default()
            },
            RoundingConfig {
                threshold_grid: ThresholdGrid::Absolute(vec![]),
                ..Default::default()
            },
            RoundingConfig {
                threshold_grid: ThresholdGrid::Absolute(vec![1.0, 1.0]),
                ..Default::default()
            },
            RoundingConfig {
                threshold_grid: ThresholdGrid::Relative(vec![-1.0, 1.0]),
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn relative_heights() {
        let h = ThresholdGrid::Relative(vec![1.0]).heights(62);
        assert!((h[0] - (2.0f64 / 3.0 * 64f64.ln()).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn edgeless_cap_is_all_or_one() {
        let g = Graph::empty(10);
        let emb = VectorEmbedding::from_vectors(&g, &vec![vec![1.0, 0.0, 0.0]; 10], 1e-3).unwrap();
        let mut all = 0;
        for seed in 0..100 {
            let s = hyperplane_round(&g, &emb, 0.01, seed).unwrap();
            assert!(s.len() == 10 || s.len() == 1);
            all += (s.len() == 10) as usize;
        }
        assert!((30..=70).contains(&all), "{all}");
    }

    #[test]
    fn triangle_gives_singleton() {
        let g = Graph::complete(3);
        let emb = planted_embedding(&g, &Coloring::new(vec![0, 1, 2]), 3).unwrap();
        for seed in 0..20 {
            for c in [0.01, 0.5, 2.0] {
                assert_eq!(hyperplane_round(&g, &emb, c, seed).unwrap().len(), 1);
            }
        }
        assert!(hyperplane_round(&g, &emb, 0.0, 0).is_err());
    }

    #[test]
    fn greedy_baseline_bound() {
        for seed in 0..20 {
            let g = gen_planted_3col(120, 10, seed).unwrap().graph;
            let s = greedy_min_degree(&g);
            assert!(verify_independent_set(&g, &s).unwrap());
            assert!(s.len() * (g.max_degree() + 1) >= 120);
        }
        assert_eq!(greedy_min_degree(&Graph::star(6)).len(), 6);
    }

    #[test]
    fn small_cases() {
        let solver = SolverConfig::default();
        let cfg = RoundingConfig::default();
        assert_eq!(
            bounded_degree_is(&Graph::complete(3), 3.0, &cfg, &solver)
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            bounded_degree_is(&Graph::empty(10), 2.0, &cfg, &solver)
                .unwrap()
                .len(),
            10
        );
        assert_eq!(
            bounded_degree_is(&Graph::empty(0), 2.0, &cfg, &solver)
                .unwrap()
                .len(),
            0
        );
    }

    #[test]
    fn planted_rounding_beats_third_of_ratio() {
        let inst = gen_planted_3col(400, 30, 3).unwrap();
        let solver = SolverConfig::default();
        let emb = solve_vector_3coloring(&inst.graph, &solver).unwrap();
        let mut hits = 0;
        for seed in 0..50 {
            let cfg = RoundingConfig::default().with_seed(seed);
            let s = bounded_degree_is_with(&inst.graph, 8.0, &cfg, &emb).unwrap();
            assert!(verify_independent_set(&inst.graph, &s).unwrap());
            hits += (s.len() >= 17) as usize;
        }
        assert!(hits >= 45, "{hits}");
    }

    #[test]
    fn more_budget_never_hurts() {
        let inst = gen_planted_3col(150, 20, 4).unwrap();
        let emb = solve_vector_3coloring(&inst.graph, &SolverConfig::default()).unwrap();
        let small = RoundingConfig {
            trials: 2,
            threshold_grid: ThresholdGrid::Relative(vec![1.0]),
            seed: 11,
        };
        let large = RoundingConfig {
            trials: 6,
            threshold_grid: ThresholdGrid::Relative(vec![0.8, 1.0, 1.2]),
            seed: 11,
        };
        let a = bounded_degree_is_with(&inst.graph, 2.0, &small, &emb).unwrap();
        let b = bounded_degree_is_with(&inst.graph, 2.0, &large, &emb).unwrap();
        assert!(b.len() >= a.len());
    }
}
