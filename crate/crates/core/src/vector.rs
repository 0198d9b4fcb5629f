//! Vector 3-coloring: unit vectors with `<x_u, x_v> <= -1/2` on every edge.
//!
//! The relaxation is solved in factorized form. Rows of an `n x k` matrix are
//! kept on the unit sphere and the shifted squared hinge penalty
//!
//! ```text
//! F(X) = sum over edges e = {u, v} of max(0, <x_u, x_v> + 1/2 + s_e)^2
//! ```
//!
//! is minimized by Riemannian conjugate gradients (Polak-Ribiere+, retraction
//! by normalization) with Armijo backtracking. The shifts `s_e >= 0` are
//! augmented Lagrangian multipliers: every few iterations they absorb the
//! current violation, `s_e <- max(0, s_e + <x_u, x_v> + 1/2)`. Between two
//! shift updates `F` never increases. With all shifts zero `F` is the plain
//! squared hinge penalty.
//!
//! On 3-colorable graphs the feasible set is nearly rigid wherever triangles
//! overlap, and the plain penalty then converges sublinearly; the shifts keep
//! pushing the persistent violators and restore fast convergence.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{Coloring, Graph};
use crate::seed;

/// Target inner product on edges.
pub const EDGE_INNER_PRODUCT: f64 = -0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Tolerance on the residual, the largest edge violation.
    pub epsilon: f64,
    /// Gradient evaluations allowed per attempt.
    pub max_iterations: usize,
    /// Factorization rank; `None` means `max(3, min(n, 25))`.
    pub rank: Option<usize>,
    pub initial_step: f64,
    pub step_growth: f64,
    /// Sufficient-decrease constant of the line search.
    pub armijo: f64,
    /// Iterations between multiplier updates; 0 keeps all shifts at zero.
    pub multiplier_period: usize,
    /// Extra attempts from fresh seeds when the tolerance is missed.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 1e-3,
            max_iterations: 20_000,
            rank: None,
            initial_step: 0.5,
            step_growth: 2.0,
            armijo: 1e-4,
            multiplier_period: 10,
            restarts: 5,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(invalid("epsilon must be nonnegative"));
        }
        if self.max_iterations == 0 {
            return Err(invalid("max_iterations must be positive"));
        }
        if matches!(self.rank, Some(k) if k < 3) {
            return Err(invalid("rank must be at least 3"));
        }
        if !(self.initial_step > 0.0
            && self.step_growth >= 1.0
            && self.armijo > 0.0
            && self.armijo < 1.0)
        {
            return Err(invalid("step parameters out of range"));
        }
        Ok(())
    }

    pub fn rank_for(&self, n: usize) -> usize {
        self.rank.unwrap_or_else(|| n.clamp(3, 25))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    ToleranceReached,
    ToleranceNotReached,
}

/// One unit vector per vertex, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorEmbedding {
    dimension: usize,
    coords: Vec<f64>,
    residual: f64,
    status: SolveStatus,
    iterations: usize,
}

impl VectorEmbedding {
    /// Builds an embedding from explicit vectors, normalizing each one, and
    /// evaluates its residual on `g`.
    pub fn from_vectors(g: &Graph, vectors: &[Vec<f64>], epsilon: f64) -> Result<Self> {
        let dimension = vectors.first().map_or(3, Vec::len);
        if dimension == 0 || vectors.iter().any(|v| v.len() != dimension) {
            return Err(invalid("vectors must share one positive dimension"));
        }
        if vectors.len() != g.vertex_count() {
            return Err(invalid(format!(
                "{} vectors for a graph with {} vertices",
                vectors.len(),
                g.vertex_count()
            )));
        }
        let mut coords: Vec<f64> = vectors.iter().flatten().copied().collect();
        for row in coords.chunks_mut(dimension) {
            if !normalize(row) {
                return Err(invalid("zero vector cannot be normalized"));
            }
        }
        Ok(Self::evaluated(g, dimension, coords, epsilon, 0))
    }

    fn evaluated(
        g: &Graph,
        dimension: usize,
        coords: Vec<f64>,
        epsilon: f64,
        iterations: usize,
    ) -> Self {
        let residual = residual_of(g, dimension, &coords);
        let status = if residual <= epsilon {
            SolveStatus::ToleranceReached
        } else {
            SolveStatus::ToleranceNotReached
        };
        VectorEmbedding {
            dimension,
            coords,
            residual,
            status,
            iterations,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dimension
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn vector(&self, v: usize) -> &[f64] {
        &self.coords[v * self.dimension..(v + 1) * self.dimension]
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn status(&self) -> SolveStatus {
        self.status
    }

    /// Gradient evaluations spent by the successful (or best) attempt.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Rows `keep` of this embedding, as an embedding of `sub`, the subgraph
    /// induced by `keep`. The residual can only go down.
    pub fn restrict(&self, sub: &Graph, keep: &[usize], epsilon: f64) -> VectorEmbedding {
        let coords: Vec<f64> = keep
            .iter()
            .flat_map(|&v| self.vector(v).iter().copied())
            .collect();
        Self::evaluated(sub, self.dimension, coords, epsilon, self.iterations)
    }

    /// `{"k": .., "vectors": [[..], ..]}`
    pub fn to_json(&self) -> serde_json::Value {
        let vectors: Vec<&[f64]> = self.coords.chunks(self.dimension).collect();
        serde_json::json!({ "k": self.dimension, "vectors": vectors })
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(row: &mut [f64]) -> bool {
    let norm = dot(row, row).sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return false;
    }
    row.iter_mut().for_each(|x| *x /= norm);
    true
}

fn residual_of(g: &Graph, k: usize, coords: &[f64]) -> f64 {
    g.edges()
        .map(|(u, v)| {
            dot(&coords[u * k..(u + 1) * k], &coords[v * k..(v + 1) * k]) - EDGE_INNER_PRODUCT
        })
        .fold(0.0, f64::max)
}

/// Largest edge violation `max(0, <x_u, x_v> + 1/2)`.
pub fn embedding_residual(g: &Graph, emb: &VectorEmbedding) -> Result<f64> {
    if emb.len() != g.vertex_count() {
        return Err(invalid(format!(
            "embedding has {} vectors for a graph with {} vertices",
            emb.len(),
            g.vertex_count()
        )));
    }
    Ok(residual_of(g, emb.dimension, &emb.coords))
}

/// Maps color class `j` of a proper 3-coloring to the `j`-th of three planar
/// unit vectors at 120 degrees, padded to dimension `k`.
pub fn planted_embedding(g: &Graph, coloring: &Coloring, k: usize) -> Result<VectorEmbedding> {
    if k < 2 {
        return Err(invalid("planted embedding needs dimension at least 2"));
    }
    let s = 3f64.sqrt() / 2.0;
    let corners = [[1.0, 0.0], [-0.5, s], [-0.5, -s]];
    let vectors: Vec<Vec<f64>> = coloring
        .assignment()
        .iter()
        .map(|&c| {
            let mut v = vec![0.0; k];
            v[..2].copy_from_slice(&corners[c % 3]);
            v
        })
        .collect();
    VectorEmbedding::from_vectors(g, &vectors, 0.0)
}

/// Shifted penalty over a fixed edge list.
struct Penalty {
    n: usize,
    k: usize,
    edges: Vec<(usize, usize)>,
    shifts: Vec<f64>,
}

impl Penalty {
    #[inline]
    fn hinge(&self, x: &[f64], u: usize, v: usize) -> f64 {
        let k = self.k;
        dot(&x[u * k..(u + 1) * k], &x[v * k..(v + 1) * k]) - EDGE_INNER_PRODUCT
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.edges
            .iter()
            .zip(&self.shifts)
            .map(|(&(u, v), &s)| {
                let h = self.hinge(x, u, v) + s;
                if h > 0.0 {
                    h * h
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// Riemannian gradient on the product of spheres; returns its squared norm.
    fn gradient(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let k = self.k;
        grad.iter_mut().for_each(|g| *g = 0.0);
        for (&(u, v), &s) in self.edges.iter().zip(&self.shifts) {
            let h = self.hinge(x, u, v) + s;
            if h > 0.0 {
                let w = 2.0 * h;
                for i in 0..k {
                    grad[u * k + i] += w * x[v * k + i];
                    grad[v * k + i] += w * x[u * k + i];
                }
            }
        }
        project_tangent(x, grad, k);
        dot(grad, grad)
    }

    fn residual(&self, x: &[f64]) -> f64 {
        self.edges
            .iter()
            .map(|&(u, v)| self.hinge(x, u, v))
            .fold(0.0, f64::max)
    }

    fn update_shifts(&mut self, x: &[f64]) {
        for i in 0..self.edges.len() {
            let (u, v) = self.edges[i];
            self.shifts[i] = (self.shifts[i] + self.hinge(x, u, v)).max(0.0);
        }
    }

    fn random_start(&self, seed: u64) -> Vec<f64> {
        let mut rng = seed::rng(seed);
        let mut x = vec![0.0; self.n * self.k];
        for row in x.chunks_mut(self.k) {
            loop {
                row.iter_mut()
                    .for_each(|c| *c = StandardNormal.sample(&mut rng));
                if normalize(row) {
                    break;
                }
            }
        }
        x
    }
}

/// Projects each row of `dir` onto the tangent space at the matching row of `x`.
fn project_tangent(x: &[f64], dir: &mut [f64], k: usize) {
    for (d, xr) in dir.chunks_mut(k).zip(x.chunks(k)) {
        let radial = dot(d, xr);
        d.iter_mut().zip(xr).for_each(|(di, xi)| *di -= radial * xi);
    }
}

/// Penalty values after each accepted step, split where the shifts changed.
/// Each phase is non-increasing.
pub type SolveTrace = Vec<Vec<f64>>;

fn descend(
    problem: &mut Penalty,
    mut x: Vec<f64>,
    cfg: &SolverConfig,
    trace: &mut SolveTrace,
) -> (Vec<f64>, usize) {
    let k = problem.k;
    let mut grad = vec![0.0; x.len()];
    let mut prev_grad = vec![0.0; x.len()];
    let mut dir = vec![0.0; x.len()];
    let mut trial = vec![0.0; x.len()];
    let mut f = problem.value(&x);
    let mut prev_g2 = 0.0;
    let mut step = cfg.initial_step;
    trace.push(vec![f]);

    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        if problem.residual(&x) <= cfg.epsilon {
            break;
        }
        iterations += 1;
        if cfg.multiplier_period > 0 && iterations % cfg.multiplier_period == 0 {
            problem.update_shifts(&x);
            f = problem.value(&x);
            prev_g2 = 0.0;
            trace.push(vec![f]);
        }
        let g2 = problem.gradient(&x, &mut grad);
        if g2 == 0.0 {
            break;
        }

        // Polak-Ribiere+ with the previous gradient and direction moved to
        // the new tangent space by projection.
        let beta = if prev_g2 > 0.0 {
            project_tangent(&x, &mut prev_grad, k);
            let overlap: f64 = grad.iter().zip(&prev_grad).map(|(g, p)| g * (g - p)).sum();
            (overlap / prev_g2).max(0.0)
        } else {
            0.0
        };
        project_tangent(&x, &mut dir, k);
        dir.iter_mut()
            .zip(&grad)
            .for_each(|(d, g)| *d = beta * *d - g);
        let mut slope = dot(&dir, &grad);
        if slope >= 0.0 {
            dir.iter_mut().zip(&grad).for_each(|(d, g)| *d = -g);
            slope = -g2;
        }

        let accepted = loop {
            for ((t, xi), di) in trial.iter_mut().zip(&x).zip(&dir) {
                *t = xi + step * di;
            }
            for row in trial.chunks_mut(k) {
                normalize(row);
            }
            let f_trial = problem.value(&trial);
            if f_trial <= f + cfg.armijo * step * slope {
                break Some(f_trial);
            }
            step *= 0.5;
            if step < 1e-14 {
                break None;
            }
        };
        let Some(f_new) = accepted else { break };
        std::mem::swap(&mut x, &mut trial);
        std::mem::swap(&mut prev_grad, &mut grad);
        prev_g2 = g2;
        f = f_new;
        trace.last_mut().expect("open phase").push(f);
        step = (step * cfg.step_growth).min(1e3);
    }
    (x, iterations)
}

/// Approximate vector 3-coloring of `g`.
///
/// Returns the first attempt whose residual is within `cfg.epsilon`, or else
/// the best of `1 + cfg.restarts` attempts flagged
/// [`SolveStatus::ToleranceNotReached`]. Deterministic in `(g, cfg)`.
pub fn solve_vector_3coloring(g: &Graph, cfg: &SolverConfig) -> Result<VectorEmbedding> {
    solve_traced(g, cfg).map(|(emb, _)| emb)
}

/// Like [`solve_vector_3coloring`], also returning the penalty trace of the
/// returned attempt.
pub fn solve_traced(g: &Graph, cfg: &SolverConfig) -> Result<(VectorEmbedding, SolveTrace)> {
    cfg.validate()?;
    let n = g.vertex_count();
    let k = cfg.rank_for(n);
    if g.edge_count() == 0 {
        let mut coords = vec![0.0; n * k];
        coords.iter_mut().step_by(k).for_each(|c| *c = 1.0);
        return Ok((
            VectorEmbedding::evaluated(g, k, coords, cfg.epsilon, 0),
            vec![vec![0.0]],
        ));
    }

    let mut problem = Penalty {
        n,
        k,
        edges: g.edges().collect(),
        shifts: vec![0.0; g.edge_count()],
    };
    let mut best: Option<(VectorEmbedding, SolveTrace)> = None;
    for attempt in 0..=cfg.restarts {
        let start = problem.random_start(seed::derive(cfg.seed, attempt as u64));
        problem.shifts.iter_mut().for_each(|s| *s = 0.0);
        let mut trace = Vec::new();
        let (x, iterations) = descend(&mut problem, start, cfg, &mut trace);
        let emb = VectorEmbedding::evaluated(g, k, x, cfg.epsilon, iterations);
        let done = emb.status == SolveStatus::ToleranceReached;
        if best.as_ref().is_none_or(|(b, _)| emb.residual < b.residual) {
            best = Some((emb, trace));
        }
        if done {
            break;
        }
    }
    Ok(best.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_planted_3col;

    fn unit_norms(emb: &VectorEmbedding) -> bool {
        (0..emb.len()).all(|v| (dot(emb.vector(v), emb.vector(v)).sqrt() - 1.0).abs() <= 1e-9)
    }

    #[test]
    fn triangle_reaches_120_degrees() {
        let g = Graph::complete(3);
        let cfg = SolverConfig {
            epsilon: 1e-6,
            ..SolverConfig::default()
        };
        let emb = solve_vector_3coloring(&g, &cfg).unwrap();
        assert_eq!(emb.status(), SolveStatus::ToleranceReached);
        for (u, v) in g.edges() {
            assert!(dot(emb.vector(u), emb.vector(v)) <= -0.5 + 1e-6);
        }
        assert!(unit_norms(&emb));
    }

    #[test]
    fn edgeless_is_trivial() {
        let g = Graph::empty(7);
        let emb = solve_vector_3coloring(&g, &SolverConfig::default()).unwrap();
        assert_eq!(emb.residual(), 0.0);
        assert_eq!(emb.len(), 7);
        assert!(unit_norms(&emb));
    }

    #[test]
    fn residual_cases() {
        let k3 = Graph::complete(3);
        let planted = planted_embedding(&k3, &Coloring::new(vec![0, 1, 2]), 3).unwrap();
        assert_eq!(embedding_residual(&k3, &planted).unwrap(), 0.0);

        let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        let same =
            VectorEmbedding::from_vectors(&edge, &[vec![0.0, 1.0, 0.0], vec![0.0, 1.0, 0.0]], 1e-3)
                .unwrap();
        assert!((embedding_residual(&edge, &same).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(same.status(), SolveStatus::ToleranceNotReached);

        assert!(VectorEmbedding::from_vectors(&edge, &[vec![1.0, 0.0], vec![1.0]], 1e-3).is_err());
        assert!(embedding_residual(&Graph::complete(3), &same).is_err());
    }

    #[test]
    fn planted_witness_has_zero_residual() {
        for seed in 0..10 {
            let inst = gen_planted_3col(90, 12, seed).unwrap();
            let emb = planted_embedding(&inst.graph, &inst.hidden_coloring, 25).unwrap();
            assert!(embedding_residual(&inst.graph, &emb).unwrap() <= 1e-12);
            assert!(unit_norms(&emb));
        }
    }

    #[test]
    fn planted_instance_reaches_tolerance() {
        let inst = gen_planted_3col(60, 8, 1).unwrap();
        let witness = planted_embedding(&inst.graph, &inst.hidden_coloring, 25).unwrap();
        assert!(witness.residual() <= 1e-12);

        let cfg = SolverConfig {
            restarts: 0,
            ..SolverConfig::default()
        };
        let (emb, trace) = solve_traced(&inst.graph, &cfg).unwrap();
        assert_eq!(emb.status(), SolveStatus::ToleranceReached);
        assert!(emb.residual() <= 1e-3);
        assert!(emb.iterations() <= 20_000);
        assert!((embedding_residual(&inst.graph, &emb).unwrap() - emb.residual()).abs() <= 1e-9);
        assert!(!trace.is_empty());
        for phase in &trace {
            assert!(phase.windows(2).all(|w| w[1] <= w[0]));
        }
        assert!(unit_norms(&emb));
    }

    #[test]
    fn solver_is_deterministic() {
        let g = gen_planted_3col(45, 6, 9).unwrap().graph;
        let cfg = SolverConfig::default().with_seed(5);
        let a = solve_vector_3coloring(&g, &cfg).unwrap();
        let b = solve_vector_3coloring(&g, &cfg).unwrap();
        assert_eq!(a.coords, b.coords);
    }

    #[test]
    fn k4_does_not_reach_tolerance() {
        let cfg = SolverConfig {
            max_iterations: 2_000,
            restarts: 1,
            ..SolverConfig::default()
        };
        let emb = solve_vector_3coloring(&Graph::complete(4), &cfg).unwrap();
        // Four unit vectors cannot have all pairwise products <= -1/2.
        assert_eq!(emb.status(), SolveStatus::ToleranceNotReached);
        assert!(emb.residual() > 0.1);
        assert!(unit_norms(&emb));
    }

    #[test]
    fn restriction_keeps_feasibility() {
        let inst = gen_planted_3col(60, 8, 2).unwrap();
        let emb = solve_vector_3coloring(&inst.graph, &SolverConfig::default()).unwrap();
        let keep: Vec<usize> = (0..60).filter(|v| v % 3 != 1).collect();
        let sub = inst.graph.induced_subgraph(&keep);
        let r = emb.restrict(&sub, &keep, 1e-3);
        assert!(r.residual() <= emb.residual());
        assert_eq!(r.len(), keep.len());
        assert_eq!(r.vector(1), emb.vector(keep[1]));
    }

    #[test]
    fn json_shape() {
        let g = Graph::complete(3);
        let emb = planted_embedding(&g, &Coloring::new(vec![0, 1, 2]), 3).unwrap();
        let json = emb.to_json();
        assert_eq!(json["k"], 3);
        assert_eq!(json["vectors"].as_array().unwrap().len(), 3);
    }
}
