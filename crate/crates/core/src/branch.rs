//! Degree-reduction branching.
//!
//! While some vertex has degree above `d`, the `batch` highest-degree
//! vertices `B` are branched on: either one `v` in `B` joins the solution
//! (and `N[v]` is deleted), or all of `B` is discarded. Leaves have maximum
//! degree at most `d` and go to a base solver. Along the branch that agrees
//! with a fixed maximum independent set every take lowers the independence
//! number by one and every discard keeps it, so an exact base solver makes
//! the whole procedure exact.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{verify_independent_set, Graph, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxParams {
    pub r: f64,
    /// Degree threshold; leaves have maximum degree at most `d`.
    pub d: usize,
    /// Ratio handed to the leaf solver.
    pub r_prime: f64,
    /// Peeling stops once fewer than `t` vertices remain.
    pub t: f64,
    pub batch: usize,
    pub beta: f64,
}

/// `t = n / r^3`, `r' = max(1, r / ln r^3)`,
/// `d = max(ceil(2r) + 1, ceil(beta r^3 / ln^{3/2}(r + e)))`, `batch = d`.
pub fn derive_params(n: usize, r: f64, beta: f64) -> Result<ApproxParams> {
    if !(r >= 2.0 && r.is_finite()) {
        return Err(invalid(format!("ratio must be at least 2, got {r}")));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid(format!("beta must be positive, got {beta}")));
    }
    let r3 = r * r * r;
    let floor = (2.0 * r).ceil() as usize + 1;
    let scaled = (beta * r3 / (r + std::f64::consts::E).ln().powf(1.5)).ceil() as usize;
    let d = floor.max(scaled);
    Ok(ApproxParams {
        r,
        d,
        r_prime: (r / r3.ln()).max(1.0),
        t: n as f64 / r3,
        batch: d,
        beta,
    })
}

/// `exp((n/d) ln(4d) + 2 ln(n + 2))`, a ceiling on the number of leaves.
pub fn leaf_count_bound(n: usize, params: &ApproxParams) -> f64 {
    let d = params.d as f64;
    let n = n as f64;
    ((n / d) * (4.0 * d).ln() + 2.0 * (n + 2.0).ln()).exp()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchStats {
    pub leaves_explored: u64,
    pub max_depth: u64,
    /// Takes on the path to the returned leaf.
    pub takes_on_best_path: u64,
    pub nodes_expanded: u64,
    /// Leaves where the base solver returned fewer than `n_leaf / (3 r')`.
    pub leaves_below_guarantee: u64,
}

impl BranchStats {
    pub fn merge(&mut self, other: &BranchStats) {
        self.leaves_explored += other.leaves_explored;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.takes_on_best_path = self.takes_on_best_path.max(other.takes_on_best_path);
        self.nodes_expanded += other.nodes_expanded;
        self.leaves_below_guarantee += other.leaves_below_guarantee;
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BranchError {
    /// The node budget ran out. `best` is the best set found so far and is
    /// independent.
    #[error("branch budget of {budget} nodes exceeded (best so far: {})", best.len())]
    BudgetExceeded {
        budget: u64,
        best: VertexSet,
        stats: BranchStats,
    },
    #[error(transparent)]
    Base(#[from] Error),
}

impl From<BranchError> for Error {
    fn from(e: BranchError) -> Self {
        match e {
            BranchError::BudgetExceeded { budget, best, .. } => Error::BudgetExceeded {
                budget,
                best_size: Some(best.len()),
            },
            BranchError::Base(e) => e,
        }
    }
}

struct Search<'a, F> {
    g: &'a Graph,
    params: &'a ApproxParams,
    base: F,
    budget: u64,
    alive: Vec<bool>,
    degree: Vec<usize>,
    removed: Vec<usize>,
    taken: Vec<usize>,
    best: Option<VertexSet>,
    stats: BranchStats,
    out_of_budget: bool,
}

impl<F> Search<'_, F>
where
    F: FnMut(&Graph, &[usize]) -> Result<VertexSet>,
{
    fn remove(&mut self, v: usize) {
        debug_assert!(self.alive[v]);
        self.alive[v] = false;
        for &u in self.g.neighbors(v) {
            if self.alive[u] {
                self.degree[u] -= 1;
            }
        }
        self.removed.push(v);
    }

    fn restore_to(&mut self, mark: usize) {
        while self.removed.len() > mark {
            let v = self.removed.pop().expect("nonempty");
            for &u in self.g.neighbors(v) {
                if self.alive[u] {
                    self.degree[u] += 1;
                }
            }
            self.alive[v] = true;
        }
    }

    fn leaf(&mut self) -> Result<()> {
        let keep: Vec<usize> = (0..self.g.vertex_count())
            .filter(|&v| self.alive[v])
            .collect();
        let sub = self.g.induced_subgraph(&keep);
        let local = (self.base)(&sub, &keep)?;
        if !verify_independent_set(&sub, &local)? {
            return Err(invalid("base solver returned a dependent set"));
        }
        self.stats.leaves_explored += 1;
        if (local.len() as f64) * 3.0 * self.params.r_prime < keep.len() as f64 {
            self.stats.leaves_below_guarantee += 1;
        }
        let mut members = self.taken.clone();
        members.extend(local.members().iter().map(|&v| keep[v]));
        let candidate = VertexSet::new(members);
        if self.best.as_ref().is_none_or(|b| candidate.beats(b)) {
            self.best = Some(candidate);
            self.stats.takes_on_best_path = self.taken.len() as u64;
        }
        Ok(())
    }

    fn expand(&mut self, depth: u64) -> Result<()> {
        if self.best.is_some() && self.stats.nodes_expanded >= self.budget {
            self.out_of_budget = true;
            return Ok(());
        }
        self.stats.nodes_expanded += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);

        let d = self.params.d;
        let mut heavy: Vec<usize> = (0..self.g.vertex_count())
            .filter(|&v| self.alive[v] && self.degree[v] > d)
            .collect();
        if heavy.is_empty() {
            return self.leaf();
        }
        heavy.sort_by(|&a, &b| self.degree[b].cmp(&self.degree[a]).then(a.cmp(&b)));
        heavy.truncate(self.params.batch);

        let mark = self.removed.len();
        for &v in &heavy {
            self.remove(v);
        }
        self.expand(depth + 1)?;
        self.restore_to(mark);

        for &v in &heavy {
            if self.out_of_budget {
                break;
            }
            let neighbors: Vec<usize> = self
                .g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&u| self.alive[u])
                .collect();
            debug_assert!(
                neighbors.len() > d,
                "take must delete at least d + 2 vertices"
            );
            self.remove(v);
            for u in neighbors {
                self.remove(u);
            }
            self.taken.push(v);
            self.expand(depth + 1)?;
            self.taken.pop();
            self.restore_to(mark);
        }
        Ok(())
    }
}

/// Runs the branching on `g` and returns the best `taken ∪ leaf` set.
///
/// `base` receives each leaf graph together with the ids its vertices have
/// in `g`. At most `budget` nodes are expanded, except that the first
/// root-to-leaf path is always completed; when the budget cuts the search
/// short the best set so far comes back inside
/// [`BranchError::BudgetExceeded`].
pub fn degree_reduce_is<F>(
    g: &Graph,
    params: &ApproxParams,
    base: F,
    budget: u64,
) -> std::result::Result<(VertexSet, BranchStats), BranchError>
where
    F: FnMut(&Graph, &[usize]) -> Result<VertexSet>,
{
    if budget == 0 {
        return Err(invalid("budget must be positive").into());
    }
    if params.d == 0 || params.batch == 0 {
        return Err(invalid("degree threshold and batch must be positive").into());
    }
    let n = g.vertex_count();
    let mut search = Search {
        g,
        params,
        base,
        budget,
        alive: vec![true; n],
        degree: (0..n).map(|v| g.degree(v)).collect(),
        removed: Vec::with_capacity(n),
        taken: Vec::new(),
        best: None,
        stats: BranchStats::default(),
        out_of_budget: false,
    };
    search.expand(0)?;
    let best = search
        .best
        .take()
        .expect("first descent always reaches a leaf");
    let best = VertexSet::trusted_independent(g, best.into_members());
    if search.out_of_budget {
        Err(BranchError::BudgetExceeded {
            budget,
            best,
            stats: search.stats,
        })
    } else {
        Ok((best, search.stats))
    }
}

/// Unwraps a budget overrun into its best-so-far set, flagging it.
pub fn best_effort(
    outcome: std::result::Result<(VertexSet, BranchStats), BranchError>,
) -> Result<(VertexSet, BranchStats, bool)> {
    match outcome {
        Ok((set, stats)) => Ok((set, stats, false)),
        Err(BranchError::BudgetExceeded { best, stats, .. }) => Ok((best, stats, true)),
        Err(BranchError::Base(e)) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_max_independent_set, independence_number};

    fn exact_base(g: &Graph, _: &[usize]) -> Result<VertexSet> {
        exact_max_independent_set(g, u64::MAX)
    }

    #[test]
    fn params_small_ratios() {
        let p = derive_params(8000, 2.0, 1.0).unwrap();
        assert_eq!(p.t, 1000.0);
        assert_eq!(p.r_prime, 1.0);
        assert_eq!((p.d, p.batch), (5, 5));
        assert_eq!(derive_params(10, 3.0, 1.0).unwrap().d, 12);
        assert_eq!(derive_params(10, 4.0, 1.0).unwrap().d, 25);
        let p = derive_params(1, 16.0, 1.0).unwrap();
        assert!((p.r_prime - 16.0 / 4096f64.ln()).abs() < 1e-15);
        assert!(derive_params(10, 1.5, 1.0).is_err());
        assert!(derive_params(10, 2.0, 0.0).is_err());
    }

    #[test]
    fn bound_small_cases() {
        let p = derive_params(10, 2.0, 1.0).unwrap();
        assert!((leaf_count_bound(0, &p) - 4.0).abs() < 1e-12);
        assert!(leaf_count_bound(p.d, &p) >= 4.0 * p.d as f64);
    }

    #[test]
    fn low_degree_is_a_single_leaf() {
        let p = derive_params(10, 2.0, 1.0).unwrap();
        let g = Graph::cycle(10);
        let (s, stats) = degree_reduce_is(&g, &p, exact_base, 10).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(stats.leaves_explored, 1);
        assert_eq!(stats.nodes_expanded, 1);
    }

    #[test]
    fn star_takes_the_leaves() {
        let p = derive_params(11, 2.0, 1.0).unwrap();
        let (s, stats) = degree_reduce_is(&Graph::star(10), &p, exact_base, 100).unwrap();
        assert_eq!(s.len(), 10);
        assert!(!s.contains(0));
        assert_eq!(stats.leaves_explored, 2);
        assert_eq!(stats.takes_on_best_path, 0);
    }

    #[test]
    fn exact_on_dense_graphs() {
        let p = derive_params(12, 2.0, 1.0).unwrap();
        for g in [
            Graph::complete(12),
            Graph::complete_bipartite(6, 7),
            Graph::petersen(),
        ] {
            let (s, _) = degree_reduce_is(&g, &p, exact_base, u64::MAX).unwrap();
            assert_eq!(s.len(), independence_number(&g).unwrap());
            assert!(s.is_independent());
        }
    }

    #[test]
    fn budget_keeps_best_so_far() {
        let p = derive_params(30, 2.0, 1.0).unwrap();
        let g = Graph::complete(30);
        match degree_reduce_is(&g, &p, exact_base, 3) {
            Err(BranchError::BudgetExceeded { best, stats, .. }) => {
                assert_eq!(best.len(), 1);
                assert!(stats.leaves_explored >= 1);
            }
            other => panic!("expected budget overrun, got {other:?}"),
        }
        assert!(degree_reduce_is(&g, &p, exact_base, 0).is_err());
    }

    #[test]
    fn dependent_base_output_is_rejected() {
        let p = derive_params(3, 2.0, 1.0).unwrap();
        let bad = |g: &Graph, _: &[usize]| Ok(VertexSet::new((0..g.vertex_count()).collect()));
        assert!(matches!(
            degree_reduce_is(&Graph::complete(3), &p, bad, 10),
            Err(BranchError::Base(_))
        ));
    }
}
