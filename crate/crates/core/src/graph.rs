//! Cubic multigraphs with loops and parallel edges, hop distances, girth,
//! distance powers and ball structure.
//!
//! Vertices are dense `0..n` labels. A loop at `v` is stored once in the edge
//! list and twice in `v`'s incidence list, so it contributes 2 to the degree.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod canonical;
pub mod named;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    Empty,
    #[error("edge {index}: endpoint {label} out of range for {n} vertices")]
    LabelOutOfRange { index: usize, label: usize, n: usize },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotCubic { vertex: Vertex, degree: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Length of a shortest cycle. `Infinite` sorts after every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn at_least(self, g: usize) -> bool {
        match self {
            Girth::Finite(len) => len >= g,
            Girth::Infinite => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(len) => write!(f, "{len}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl MultiGraph {
    /// Builds the multigraph with exactly the given edge multiset. Endpoints of
    /// each edge are normalized so that `u <= v`.
    pub fn new<I>(n: usize, edge_list: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut edges = Vec::new();
        let mut adj = vec![Vec::new(); n];
        for (index, (u, v)) in edge_list.into_iter().enumerate() {
            for label in [u, v] {
                if label >= n {
                    return Err(GraphError::LabelOutOfRange { index, label, n });
                }
            }
            let (u, v) = if u <= v { (u, v) } else { (v, u) };
            edges.push((u, v));
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(MultiGraph { n, edges, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Incident neighbors with multiplicity; a loop at `v` lists `v` twice.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut sorted: Vec<_> = self.edges.iter().filter(|(u, v)| u != v).collect();
        sorted.sort_unstable();
        sorted.windows(2).any(|w| w[0] == w[1])
    }

    pub fn is_simple(&self) -> bool {
        !self.has_loop() && !self.has_parallel_edges()
    }

    pub fn is_cubic(&self) -> bool {
        self.adj.iter().all(|a| a.len() == 3)
    }

    pub fn is_simple_cubic(&self) -> bool {
        self.is_cubic() && self.is_simple()
    }

    pub(crate) fn require_cubic(&self) -> Result<(), GraphError> {
        match self.adj.iter().position(|a| a.len() != 3) {
            Some(vertex) => Err(GraphError::NotCubic { vertex, degree: self.adj[vertex].len() }),
            None => Ok(()),
        }
    }

    pub(crate) fn require_vertex(&self, vertex: Vertex) -> Result<(), GraphError> {
        if vertex < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex, n: self.n })
        }
    }

    /// Drops loops and collapses parallel edges.
    pub fn simplify(&self) -> MultiGraph {
        let mut edges: Vec<_> = self.edges.iter().copied().filter(|(u, v)| u != v).collect();
        edges.sort_unstable();
        edges.dedup();
        MultiGraph::new(self.n, edges).expect("labels already validated")
    }

    /// Sorted edge multiset, the identity of a labeled multigraph.
    pub fn sorted_edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    /// BFS hop distances from `source`, `None` for unreachable vertices.
    pub fn distances_from(&self, source: Vertex) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distances(&self) -> DistanceMatrix {
        DistanceMatrix::new(self)
    }

    /// BFS layers `S_0 = {a}, S_1, ..., S_radius` (possibly empty at the tail).
    pub fn levels(&self, a: Vertex, radius: usize) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        seen[a] = true;
        let mut layers = vec![vec![a]];
        for _ in 0..radius {
            let mut next = Vec::new();
            for &u in layers.last().unwrap() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
            layers.push(next);
        }
        layers
    }

    /// `{v : dist(v, a) <= radius}`, sorted.
    pub fn ball(&self, a: Vertex, radius: usize) -> Vec<Vertex> {
        let mut b: Vec<_> = self.levels(a, radius).into_iter().flatten().collect();
        b.sort_unstable();
        b
    }

    /// Simple graph with `u ~ v` iff `1 <= dist(u, v) <= i`.
    pub fn power(&self, i: usize) -> MultiGraph {
        assert!(i >= 1, "graph power needs i >= 1");
        let mut edges = Vec::new();
        for u in 0..self.n {
            for (depth, layer) in self.levels(u, i).iter().enumerate().skip(1) {
                debug_assert!(depth <= i);
                edges.extend(layer.iter().filter(|&&w| w > u).map(|&w| (u, w)));
            }
        }
        MultiGraph::new(self.n, edges).expect("labels already validated")
    }

    pub fn girth(&self) -> Girth {
        if self.has_loop() {
            return Girth::Finite(1);
        }
        if self.has_parallel_edges() {
            return Girth::Finite(2);
        }
        let mut best = usize::MAX;
        for root in 0..self.n {
            if let Some(len) = self.short_cycle_from(root, best) {
                best = len;
            }
        }
        if best == usize::MAX {
            Girth::Infinite
        } else {
            Girth::Finite(best)
        }
    }

    /// True iff every cycle has length at least `g`. Only explores balls of
    /// radius about `g / 2`, so it stays cheap on large sparse graphs.
    pub fn has_girth_at_least(&self, g: usize) -> bool {
        if g <= 1 {
            return true;
        }
        if self.has_loop() {
            return false;
        }
        if g <= 2 {
            return true;
        }
        if self.has_parallel_edges() {
            return false;
        }
        (0..self.n).all(|root| self.short_cycle_from(root, g).is_none())
    }

    /// Smallest closed-walk length `< below` seen by a BFS from `root` on a
    /// graph without loops or parallel edges. Minimizing over all roots gives
    /// the girth exactly; each value found bounds it from above.
    fn short_cycle_from(&self, root: Vertex, below: usize) -> Option<usize> {
        // A cycle of length L <= below - 1 is detected while expanding depth
        // floor((L - 1) / 2) <= floor((below - 2) / 2).
        let max_expand = below.saturating_sub(2) / 2;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        let mut found: Option<usize> = None;
        while let Some(u) = queue.pop_front() {
            if dist[u] > max_expand {
                break;
            }
            for &w in &self.adj[u] {
                if w == parent[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else {
                    let len = dist[u] + dist[w] + 1;
                    let bound = found.unwrap_or(below);
                    if len < bound {
                        found = Some(len);
                    }
                }
            }
        }
        found
    }

    /// True iff the subgraph induced by `ball(a, k)` is a (3,k,a)-tree:
    /// `3 * 2^k - 2` vertices, acyclic, internal degree 3, leaves exactly at
    /// depth `k`. Radius 0 is the single root.
    pub fn check_ball_tree(&self, a: Vertex, k: usize) -> Result<bool, GraphError> {
        self.require_vertex(a)?;
        self.require_cubic()?;
        let layers = self.levels(a, k);
        let size: usize = layers.iter().map(Vec::len).sum();
        if k == 0 {
            return Ok(size == 1);
        }
        if size != 3 * (1usize << k) - 2 {
            return Ok(false);
        }
        let mut depth = vec![usize::MAX; self.n];
        for (d, layer) in layers.iter().enumerate() {
            for &v in layer {
                depth[v] = d;
            }
        }
        let inside = |v: Vertex| depth[v] != usize::MAX;
        let induced_edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| inside(u) && inside(v))
            .count();
        if induced_edges != size - 1 {
            return Ok(false);
        }
        for layer in &layers {
            for &v in layer {
                let induced_degree = self.adj[v].iter().filter(|&&w| inside(w)).count();
                let expected = if depth[v] < k { 3 } else { 1 };
                if induced_degree != expected {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Vertex order used by the exact searches: BFS from `start`, then from the
    /// lowest unvisited vertex for each further component.
    pub fn bfs_order(&self, start: Vertex) -> Vec<Vertex> {
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        for root in std::iter::once(start).chain(0..self.n) {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        order
    }

    /// Text form: `n m`, then one `u v` line per edge with `u <= v`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let parse_err = |line: usize, msg: &str| GraphError::Parse { line, msg: msg.to_string() };
        let mut lines = text.split('\n');
        let header = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let [n, m] = parse_fields::<2>(header).ok_or_else(|| parse_err(1, "expected \"n m\""))?;
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines.enumerate() {
            let line_no = idx + 2;
            if line.is_empty() && edges.len() == m {
                continue;
            }
            let [u, v] = parse_fields::<2>(line).ok_or_else(|| parse_err(line_no, "expected \"u v\""))?;
            if u > v {
                return Err(parse_err(line_no, "endpoints must satisfy u <= v"));
            }
            if u >= n || v >= n {
                return Err(parse_err(line_no, "endpoint out of range"));
            }
            if edges.len() == m {
                return Err(parse_err(line_no, "more edge lines than declared"));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(parse_err(edges.len() + 2, "fewer edge lines than declared"));
        }
        MultiGraph::new(n, edges).map_err(|e| match e {
            GraphError::Empty => parse_err(1, "n must be at least 1"),
            other => other,
        })
    }
}

/// Two multigraphs are equal when they have the same labeled edge multiset.
impl PartialEq for MultiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for MultiGraph {}

/// Parses exactly `N` whitespace-separated unsigned integers separated by
/// single spaces.
pub(crate) fn parse_fields<const N: usize>(line: &str) -> Option<[usize; N]> {
    let mut out = [0usize; N];
    let mut parts = line.split(' ');
    for slot in out.iter_mut() {
        let tok = parts.next()?;
        if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        *slot = tok.parse().ok()?;
    }
    parts.next().is_none().then_some(out)
}

/// All-pairs hop distances. Unreachable pairs are kept distinct from every
/// finite distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

const UNREACHABLE: u32 = u32::MAX;

impl DistanceMatrix {
    pub fn new(g: &MultiGraph) -> Self {
        let n = g.n();
        let mut dist = vec![UNREACHABLE; n * n];
        for u in 0..n {
            for (v, d) in g.distances_from(u).into_iter().enumerate() {
                if let Some(d) = d {
                    dist[u * n + v] = d;
                }
            }
        }
        DistanceMatrix { n, dist }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> Option<u32> {
        let d = self.dist[u * self.n + v];
        (d != UNREACHABLE).then_some(d)
    }

    /// True iff `u` and `v` are distinct and at distance at most `i`.
    pub fn within(&self, u: Vertex, v: Vertex, i: usize) -> bool {
        u != v && self.get(u, v).is_some_and(|d| d as usize <= i)
    }

    /// Largest finite distance.
    pub fn max_finite(&self) -> u32 {
        self.dist.iter().copied().filter(|&d| d != UNREACHABLE).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.dist.iter().all(|&d| d != UNREACHABLE)
    }
}
