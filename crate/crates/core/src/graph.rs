//! Simple undirected graphs, vertex subsets, colorings and the planted
//! 3-colorable instance generator.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::seed;

/// Immutable simple undirected graph on vertices `0..n`.
///
/// Adjacency lists are sorted and duplicate free; the graph is symmetric and
/// has no self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges and both orientations
    /// of an edge are merged; self-loops and out-of-range ids are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(invalid(format!("self-loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Ok(Self::from_raw_adjacency(adjacency))
    }

    /// Sorts and deduplicates symmetric adjacency lists.
    fn from_raw_adjacency(mut adjacency: Vec<Vec<usize>>) -> Self {
        let mut twice = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Graph {
            adjacency,
            edge_count: twice / 2,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n)
            .map(|v| (0..n).filter(|&u| u != v).collect())
            .collect();
        Graph {
            adjacency,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("valid star")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Self::from_edges(a + b, edges).expect("valid bipartite graph")
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Self::from_edges(10, outer.chain(spokes).chain(inner)).expect("valid Petersen graph")
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn average_degree(&self) -> f64 {
        if self.adjacency.is_empty() {
            0.0
        } else {
            2.0 * self.edge_count as f64 / self.vertex_count() as f64
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Full scan of the structural invariants.
    pub fn is_well_formed(&self) -> bool {
        let n = self.vertex_count();
        let mut twice = 0;
        for (v, list) in self.adjacency.iter().enumerate() {
            twice += list.len();
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &u in list {
                if u >= n || u == v || !self.has_edge(u, v) {
                    return false;
                }
            }
        }
        twice == 2 * self.edge_count
    }

    /// Subgraph induced by `keep` (sorted, distinct ids). Vertex `i` of the
    /// result is `keep[i]` of `self`.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let mut twice = 0;
        let adjacency: Vec<Vec<usize>> = keep
            .iter()
            .map(|&v| {
                let list: Vec<usize> = self.adjacency[v]
                    .iter()
                    .filter_map(|&u| (local[u] != usize::MAX).then_some(local[u]))
                    .collect();
                twice += list.len();
                list
            })
            .collect();
        Graph {
            adjacency,
            edge_count: twice / 2,
        }
    }

    /// Removes `s` and returns the remaining induced subgraph together with
    /// the map from new ids to ids of `self`.
    pub fn delete_vertices(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        let n = self.vertex_count();
        let mut removed = vec![false; n];
        for &v in s.members() {
            if v >= n {
                return Err(invalid(format!("vertex {v} out of range for n = {n}")));
            }
            removed[v] = true;
        }
        let keep: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
        let sub = self.induced_subgraph(&keep);
        Ok((sub, keep))
    }
}

/// A set of vertices, optionally certified independent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSet {
    members: Vec<usize>,
    independent: bool,
}

impl VertexSet {
    /// Uncertified set; members are sorted and deduplicated.
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet {
            members,
            independent: false,
        }
    }

    /// Checks independence in `g` and sets the certificate flag accordingly.
    pub fn certified(g: &Graph, members: Vec<usize>) -> Result<Self> {
        let mut set = Self::new(members);
        set.independent = verify_independent_set(g, &set)?;
        Ok(set)
    }

    /// Marks a set built by a procedure that only ever produces independent
    /// sets. Checked in debug builds.
    pub(crate) fn trusted_independent(g: &Graph, members: Vec<usize>) -> Self {
        let mut set = Self::new(members);
        set.independent = true;
        debug_assert!(verify_independent_set(g, &set).unwrap_or(false));
        set
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn into_members(self) -> Vec<usize> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_independent(&self) -> bool {
        self.independent
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Translates local ids through `map` (local id -> outer id).
    pub fn mapped(&self, map: &[usize]) -> VertexSet {
        let mut out = VertexSet::new(self.members.iter().map(|&v| map[v]).collect());
        out.independent = self.independent;
        out
    }

    /// Total order used wherever candidate sets are combined: larger wins,
    /// equal sizes go to the lexicographically smaller member list.
    pub fn beats(&self, other: &VertexSet) -> bool {
        match self.len().cmp(&other.len()) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => self.members < other.members,
        }
    }
}

/// Total vertex coloring with colors in `0..palette_size`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    #[serde(rename = "colors")]
    assignment: Vec<usize>,
    #[serde(rename = "palette")]
    palette_size: usize,
}

impl Coloring {
    /// Palette size is taken as one more than the largest color.
    pub fn new(assignment: Vec<usize>) -> Self {
        let palette_size = assignment.iter().max().map_or(1, |&c| c + 1);
        Coloring {
            assignment,
            palette_size,
        }
    }

    pub fn with_palette(assignment: Vec<usize>, palette_size: usize) -> Result<Self> {
        if palette_size == 0 {
            return Err(invalid("palette size must be positive"));
        }
        if let Some(&c) = assignment.iter().find(|&&c| c >= palette_size) {
            return Err(invalid(format!(
                "color {c} outside palette of size {palette_size}"
            )));
        }
        Ok(Coloring {
            assignment,
            palette_size,
        })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn color(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn palette_size(&self) -> usize {
        self.palette_size
    }

    /// Number of distinct colors actually assigned.
    pub fn colors_used(&self) -> usize {
        let mut seen = vec![false; self.palette_size];
        self.assignment.iter().for_each(|&c| seen[c] = true);
        seen.into_iter().filter(|&b| b).count()
    }

    /// JSON form `{"n": .., "colors": [..]}` used for hidden planted colorings.
    pub fn to_hidden_json(&self) -> serde_json::Value {
        serde_json::json!({ "n": self.assignment.len(), "colors": self.assignment })
    }

    pub fn from_hidden_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Hidden {
            n: usize,
            colors: Vec<usize>,
        }
        let hidden: Hidden = serde_json::from_value(value.clone())?;
        if hidden.n != hidden.colors.len() {
            return Err(invalid(format!(
                "hidden coloring declares n = {} but lists {} colors",
                hidden.n,
                hidden.colors.len()
            )));
        }
        Ok(Coloring::new(hidden.colors))
    }
}

/// True iff no edge of `g` is monochromatic under `c`.
pub fn verify_coloring(g: &Graph, c: &Coloring) -> Result<bool> {
    if c.len() != g.vertex_count() {
        return Err(invalid(format!(
            "coloring has {} entries for a graph with {} vertices",
            c.len(),
            g.vertex_count()
        )));
    }
    Ok(g.edges().all(|(u, v)| c.color(u) != c.color(v)))
}

/// True iff no edge of `g` has both endpoints in `s`.
pub fn verify_independent_set(g: &Graph, s: &VertexSet) -> Result<bool> {
    let n = g.vertex_count();
    let mut inside = vec![false; n];
    for &v in s.members() {
        if v >= n {
            return Err(invalid(format!("vertex {v} out of range for n = {n}")));
        }
        inside[v] = true;
    }
    Ok(s.members()
        .iter()
        .all(|&v| g.neighbors(v).iter().all(|&u| !inside[u])))
}

/// A random graph built around a hidden proper 3-coloring.
#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub graph: Graph,
    pub hidden_coloring: Coloring,
    pub target_degree: Option<usize>,
}

/// Planted 3-partite random graph.
///
/// Vertices are split into three classes whose sizes differ by at most one;
/// every cross-class pair becomes an edge with probability
/// `min(1, target_degree / (2n/3))`. Vertices left with more than
/// `2 * target_degree` neighbors then lose random incident edges until they
/// are at the cap.
pub fn gen_planted_3col(n: usize, target_degree: usize, seed: u64) -> Result<PlantedInstance> {
    if n < 3 {
        return Err(invalid(format!("planted instances need n >= 3, got {n}")));
    }
    if target_degree == 0 {
        return Err(invalid("target degree must be at least 1"));
    }
    let mut rng = seed::rng(seed);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut class = vec![0usize; n];
    for (pos, &v) in order.iter().enumerate() {
        class[v] = pos % 3;
    }

    let p = (target_degree as f64 / (2.0 * n as f64 / 3.0)).min(1.0);
    let mut adjacency = vec![Vec::new(); n];
    for u in 0..n {
        for v in (u + 1)..n {
            if class[u] != class[v] && rng.gen::<f64>() < p {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
    }

    let cap = 2 * target_degree;
    for v in 0..n {
        if adjacency[v].len() <= cap {
            continue;
        }
        let mut incident = std::mem::take(&mut adjacency[v]);
        incident.shuffle(&mut rng);
        let dropped = incident.split_off(cap);
        for u in dropped {
            adjacency[u].retain(|&w| w != v);
        }
        adjacency[v] = incident;
    }

    let graph = Graph::from_raw_adjacency(adjacency);
    let hidden_coloring = Coloring::with_palette(class, 3)?;
    Ok(PlantedInstance {
        graph,
        hidden_coloring,
        target_degree: Some(target_degree),
    })
}

impl From<Graph> for PlantedInstance {
    fn from(graph: Graph) -> Self {
        let n = graph.vertex_count();
        PlantedInstance {
            graph,
            hidden_coloring: Coloring::new(vec![0; n]),
            target_degree: None,
        }
    }
}

impl std::str::FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::dimacs::load_dimacs(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(members: &[usize]) -> VertexSet {
        VertexSet::new(members.to_vec())
    }

    #[test]
    fn constructors_are_well_formed() {
        for g in [
            Graph::complete(5),
            Graph::cycle(5),
            Graph::star(10),
            Graph::complete_bipartite(3, 3),
            Graph::petersen(),
            Graph::empty(4),
        ] {
            assert!(g.is_well_formed());
        }
        assert_eq!(Graph::petersen().edge_count(), 15);
        assert!(Graph::petersen().edges().all(|(u, v)| u < v));
        assert_eq!((0..10).map(|v| Graph::petersen().degree(v)).max(), Some(3));
    }

    #[test]
    fn from_edges_merges_and_rejects() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(matches!(
            Graph::from_edges(3, [(1, 1)]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn verify_coloring_cases() {
        let k3 = Graph::complete(3);
        assert!(verify_coloring(&k3, &Coloring::new(vec![0, 1, 2])).unwrap());
        assert!(!verify_coloring(&k3, &Coloring::new(vec![0, 0, 1])).unwrap());
        assert!(verify_coloring(&k3, &Coloring::new(vec![0, 1])).is_err());
    }

    #[test]
    fn verify_independent_set_cases() {
        let k3 = Graph::complete(3);
        assert!(verify_independent_set(&k3, &set(&[0])).unwrap());
        assert!(!verify_independent_set(&k3, &set(&[0, 1])).unwrap());
        assert!(verify_independent_set(&k3, &set(&[])).unwrap());
        assert!(verify_independent_set(&k3, &set(&[3])).is_err());
    }

    #[test]
    fn delete_vertices_cases() {
        let (g, map) = Graph::complete(3).delete_vertices(&set(&[2])).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert_eq!(map, vec![0, 1]);

        let p = Graph::petersen();
        let (same, map) = p.delete_vertices(&set(&[])).unwrap();
        assert_eq!(same, p);
        assert_eq!(map, (0..10).collect::<Vec<_>>());

        let (isolated, map) = Graph::star(10).delete_vertices(&set(&[0])).unwrap();
        assert_eq!((isolated.vertex_count(), isolated.edge_count()), (10, 0));
        assert_eq!(map, (1..=10).collect::<Vec<_>>());

        assert!(p.delete_vertices(&set(&[10])).is_err());
    }

    #[test]
    fn delete_vertices_composes() {
        let g = gen_planted_3col(40, 6, 11).unwrap().graph;
        let a = set(&[1, 5, 9, 30]);
        let (after_a, map_a) = g.delete_vertices(&a).unwrap();
        // B given in ids of the intermediate graph.
        let b_local = set(&[0, 2, 3, 20]);
        let (after_ab, map_b) = after_a.delete_vertices(&b_local).unwrap();
        let union: Vec<usize> = a
            .members()
            .iter()
            .copied()
            .chain(b_local.members().iter().map(|&v| map_a[v]))
            .collect();
        let (direct, map_direct) = g.delete_vertices(&set(&union)).unwrap();
        assert_eq!(after_ab, direct);
        let composed: Vec<usize> = map_b.iter().map(|&v| map_a[v]).collect();
        assert_eq!(composed, map_direct);
    }

    #[test]
    fn planted_small_cases() {
        let inst = gen_planted_3col(3, 2, 0).unwrap();
        let mut classes = inst.hidden_coloring.assignment().to_vec();
        classes.sort_unstable();
        assert_eq!(classes, vec![0, 1, 2]);
        assert!(verify_coloring(&inst.graph, &inst.hidden_coloring).unwrap());

        let inst = gen_planted_3col(9, 1, 2).unwrap();
        assert!(verify_coloring(&inst.graph, &inst.hidden_coloring).unwrap());
        assert!(inst.graph.max_degree() <= 2);

        assert!(gen_planted_3col(2, 4, 0).is_err());
        assert!(gen_planted_3col(9, 0, 0).is_err());
    }

    #[test]
    fn planted_average_degree_in_band() {
        for seed in 0..20 {
            let inst = gen_planted_3col(60, 8, seed).unwrap();
            let g = &inst.graph;
            assert!(g.is_well_formed());
            assert!(verify_coloring(g, &inst.hidden_coloring).unwrap());
            let avg = g.average_degree();
            assert!(
                (4.0..=16.0).contains(&avg),
                "seed {seed}: average degree {avg}"
            );
            assert!(g.max_degree() <= 16);
            let mut sizes = [0usize; 3];
            inst.hidden_coloring
                .assignment()
                .iter()
                .for_each(|&c| sizes[c] += 1);
            assert_eq!(sizes, [20, 20, 20]);
        }
    }

    #[test]
    fn planted_is_deterministic() {
        let a = gen_planted_3col(50, 5, 42).unwrap();
        let b = gen_planted_3col(50, 5, 42).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.hidden_coloring, b.hidden_coloring);
        assert_ne!(a.graph, gen_planted_3col(50, 5, 43).unwrap().graph);
    }

    #[test]
    fn hidden_coloring_json() {
        let c = Coloring::new(vec![0, 2, 1, 0]);
        let json = c.to_hidden_json();
        assert_eq!(json["n"], 4);
        assert_eq!(Coloring::from_hidden_json(&json).unwrap(), c);
        let bad = serde_json::json!({"n": 3, "colors": [0, 1]});
        assert!(Coloring::from_hidden_json(&bad).is_err());
    }

    #[test]
    fn beats_is_total() {
        assert!(set(&[4, 5, 6]).beats(&set(&[0, 1])));
        assert!(set(&[0, 9]).beats(&set(&[1, 2])));
        assert!(!set(&[1, 2]).beats(&set(&[1, 2])));
    }
}
