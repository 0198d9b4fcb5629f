//! Exact solvers: maximum independent set by branch and bound, and
//! 3-coloring by backtracking. Both count work in search-node expansions.
//!
//! [`brute`] holds plain enumerators used only to cross-check the two
//! solvers on small graphs.

use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph, VertexSet};

pub const DEFAULT_MIS_BUDGET: u64 = 50_000_000;
pub const DEFAULT_COLOR_BUDGET: u64 = 50_000_000;

/// Fixed-width bitset over vertex ids.
#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for v in 0..n {
            b.insert(v);
        }
        b
    }

    #[inline]
    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn and_not_assign(&mut self, other: &Bits) {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a &= !b);
    }

    fn and_assign(&mut self, other: &Bits) {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a &= b);
    }
}

/// Branch and bound for maximum independent set.
struct MisSearch<'a> {
    neighbors: &'a [Bits],
    best: Vec<usize>,
    current: Vec<usize>,
    expanded: u64,
    budget: u64,
}

impl MisSearch<'_> {
    /// Upper bound on the independence number of the candidate set: the
    /// number of cliques in a greedy clique cover.
    fn clique_cover(&self, cand: &Bits) -> usize {
        let mut rest = cand.clone();
        let mut cliques = 0;
        while let Some(v) = rest.first() {
            cliques += 1;
            rest.remove(v);
            let mut extend = rest.clone();
            extend.and_assign(&self.neighbors[v]);
            while let Some(u) = extend.first() {
                rest.remove(u);
                extend.remove(u);
                extend.and_assign(&self.neighbors[u]);
            }
        }
        cliques
    }

    /// Vertices are decided in increasing id order with the include branch
    /// first, and the incumbent is replaced only on strict improvement. The
    /// first maximum set found is therefore the lexicographically smallest.
    fn search(&mut self, cand: Bits) -> Result<(), ()> {
        if self.expanded >= self.budget {
            return Err(());
        }
        self.expanded += 1;

        let Some(v) = cand.first() else {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            return Ok(());
        };
        if self.current.len() + self.clique_cover(&cand) <= self.best.len() {
            return Ok(());
        }

        let mut with_v = cand.clone();
        with_v.remove(v);
        with_v.and_not_assign(&self.neighbors[v]);
        self.current.push(v);
        let taken = self.search(with_v);
        self.current.pop();
        taken?;

        let mut without_v = cand;
        without_v.remove(v);
        self.search(without_v)
    }
}

fn neighbor_bits(g: &Graph) -> Vec<Bits> {
    let n = g.vertex_count();
    (0..n)
        .map(|v| {
            let mut b = Bits::empty(n);
            g.neighbors(v).iter().for_each(|&u| b.insert(u));
            b
        })
        .collect()
}

/// Maximum independent set of `g`; among maximum sets, the one with the
/// lexicographically smallest sorted member list.
///
/// Intended for graphs up to a few dozen vertices. Exceeding `budget` node
/// expansions yields [`Error::BudgetExceeded`] with the best size seen.
pub fn exact_max_independent_set(g: &Graph, budget: u64) -> Result<VertexSet> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }
    let neighbors = neighbor_bits(g);
    let mut search = MisSearch {
        neighbors: &neighbors,
        best: Vec::new(),
        current: Vec::new(),
        expanded: 0,
        budget,
    };
    match search.search(Bits::full(g.vertex_count())) {
        Ok(()) => Ok(VertexSet::trusted_independent(g, search.best)),
        Err(()) => Err(Error::BudgetExceeded {
            budget,
            best_size: Some(search.best.len()),
        }),
    }
}

/// Independence number via [`exact_max_independent_set`] with the default budget.
pub fn independence_number(g: &Graph) -> Result<usize> {
    exact_max_independent_set(g, DEFAULT_MIS_BUDGET).map(|s| s.len())
}

struct ColorSearch<'a> {
    g: &'a Graph,
    colors: Vec<Option<u8>>,
    /// Per vertex, how many neighbors currently hold each color.
    seen: Vec<[u32; 3]>,
    expanded: u64,
    budget: u64,
}

impl ColorSearch<'_> {
    fn saturation(&self, v: usize) -> usize {
        self.seen[v].iter().filter(|&&c| c > 0).count()
    }

    /// DSATUR order: most distinct neighbor colors, then most uncolored
    /// neighbors, then smallest id.
    fn pick(&self) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..self.colors.len() {
            if self.colors[v].is_some() {
                continue;
            }
            let sat = self.saturation(v);
            let free = self
                .g
                .neighbors(v)
                .iter()
                .filter(|&&u| self.colors[u].is_none())
                .count();
            if best.is_none_or(|(bs, bf, _)| (sat, free) > (bs, bf)) {
                best = Some((sat, free, v));
            }
        }
        best.map(|(_, _, v)| v)
    }

    fn assign(&mut self, v: usize, c: u8) {
        self.colors[v] = Some(c);
        for &u in self.g.neighbors(v) {
            self.seen[u][c as usize] += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: u8) {
        self.colors[v] = None;
        for &u in self.g.neighbors(v) {
            self.seen[u][c as usize] -= 1;
        }
    }

    /// Colors are tried in increasing order, and a vertex may open at most
    /// one new color (so the first vertex gets color 0).
    fn search(&mut self, used: u8) -> Result<bool, ()> {
        if self.expanded >= self.budget {
            return Err(());
        }
        self.expanded += 1;

        let Some(v) = self.pick() else {
            return Ok(true);
        };
        let limit = (used + 1).min(3);
        for c in 0..limit {
            if self.seen[v][c as usize] > 0 {
                continue;
            }
            self.assign(v, c);
            if self.search(used.max(c + 1))? {
                return Ok(true);
            }
            self.unassign(v, c);
        }
        Ok(false)
    }
}

/// A proper 3-coloring of `g` if one exists, found by backtracking in
/// saturation order. Returns `Ok(None)` when `g` is not 3-colorable.
pub fn exact_3color(g: &Graph, budget: u64) -> Result<Option<Coloring>> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }
    let n = g.vertex_count();
    let mut search = ColorSearch {
        g,
        colors: vec![None; n],
        seen: vec![[0; 3]; n],
        expanded: 0,
        budget,
    };
    match search.search(0) {
        Ok(true) => {
            let assignment = search
                .colors
                .iter()
                .map(|c| c.expect("all vertices colored") as usize)
                .collect();
            let coloring = Coloring::with_palette(assignment, 3)?;
            debug_assert!(crate::graph::verify_coloring(g, &coloring).unwrap());
            Ok(Some(coloring))
        }
        Ok(false) => Ok(None),
        Err(()) => Err(Error::BudgetExceeded {
            budget,
            best_size: None,
        }),
    }
}

/// Proper coloring by DSATUR without backtracking. Never fails; the palette
/// may be large.
pub fn greedy_coloring(g: &Graph) -> Coloring {
    let n = g.vertex_count();
    let mut colors: Vec<Option<usize>> = vec![None; n];
    let mut neighbor_colors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colors[v].is_none())
            .max_by_key(|&v| (neighbor_colors[v].len(), g.degree(v), std::cmp::Reverse(v)))
            .expect("an uncolored vertex remains");
        let c = (0..)
            .find(|c| neighbor_colors[v].binary_search(c).is_err())
            .unwrap();
        colors[v] = Some(c);
        for &u in g.neighbors(v) {
            if let Err(pos) = neighbor_colors[u].binary_search(&c) {
                neighbor_colors[u].insert(pos, c);
            }
        }
    }
    Coloring::new(colors.into_iter().map(|c| c.unwrap()).collect())
}

/// Exhaustive enumerators for cross-validation on tiny graphs.
pub mod brute {
    use crate::graph::{Coloring, Graph};

    fn masks(g: &Graph) -> Vec<u32> {
        (0..g.vertex_count())
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
            .collect()
    }

    /// Lexicographically smallest maximum independent set, by scanning all
    /// `2^n` subsets. Panics for `n > 24`.
    pub fn max_independent_set(g: &Graph) -> Vec<usize> {
        let n = g.vertex_count();
        assert!(n <= 24, "subset enumeration limited to 24 vertices");
        let adj = masks(g);
        let mut best: Option<Vec<usize>> = None;
        for subset in 0u32..(1u32 << n) {
            let independent = (0..n).all(|v| subset & (1 << v) == 0 || adj[v] & subset == 0);
            if !independent {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|&v| subset & (1 << v) != 0).collect();
            let better = match &best {
                None => true,
                Some(b) => members.len() > b.len() || (members.len() == b.len() && members < *b),
            };
            if better {
                best = Some(members);
            }
        }
        best.unwrap_or_default()
    }

    /// Whether some subset of size `k` is independent.
    pub fn has_independent_set_of_size(g: &Graph, k: usize) -> bool {
        let n = g.vertex_count();
        assert!(n <= 24, "subset enumeration limited to 24 vertices");
        let adj = masks(g);
        (0u32..(1u32 << n))
            .filter(|s| s.count_ones() as usize == k)
            .any(|s| (0..n).all(|v| s & (1 << v) == 0 || adj[v] & s == 0))
    }

    /// First proper 3-coloring in base-3 counting order with vertex 0 fixed
    /// to color 0 (`3^(n-1)` candidates). Panics for `n > 16`.
    pub fn three_coloring(g: &Graph) -> Option<Coloring> {
        let n = g.vertex_count();
        assert!(n <= 16, "coloring enumeration limited to 16 vertices");
        if n == 0 {
            return Some(Coloring::new(Vec::new()));
        }
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let total = 3u64.pow(n as u32 - 1);
        let mut colors = vec![0usize; n];
        for code in 0..total {
            let mut rest = code;
            for c in colors.iter_mut().skip(1) {
                *c = (rest % 3) as usize;
                rest /= 3;
            }
            if edges.iter().all(|&(u, v)| colors[u] != colors[v]) {
                return Some(Coloring::new(colors));
            }
        }
        None
    }
}
