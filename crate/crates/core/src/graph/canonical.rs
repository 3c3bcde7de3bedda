//! Canonical labeling by colour refinement plus individualization, and
//! exhaustive generation of connected cubic graphs up to isomorphism.
//!
//! Both are exponential in the worst case and meant for the small graphs used
//! as oracles (n <= 14).

use std::collections::BTreeSet;

use super::{MultiGraph, Vertex};

/// Edge multiset of `g` under its canonical relabeling. Two multigraphs are
/// isomorphic iff their canonical forms are equal.
pub fn canonical_form(g: &MultiGraph) -> Vec<(Vertex, Vertex)> {
    let n = g.n();
    let mut mult = vec![vec![0u32; n]; n];
    for &(u, v) in g.edges() {
        mult[u][v] += 1;
        if u != v {
            mult[v][u] += 1;
        }
    }
    let mut best: Option<Vec<(Vertex, Vertex)>> = None;
    search(g, &mult, vec![0; n], &mut best);
    best.expect("search visits at least one leaf")
}

fn refine(g: &MultiGraph, mult: &[Vec<u32>], mut colors: Vec<usize>) -> Vec<usize> {
    let n = g.n();
    let mut classes = count_classes(&colors);
    loop {
        let signatures: Vec<(usize, Vec<(usize, u32)>)> = (0..n)
            .map(|v| {
                let mut sig: Vec<(usize, u32)> = (0..n)
                    .filter(|&w| mult[v][w] > 0)
                    .map(|w| (colors[w], mult[v][w]))
                    .collect();
                sig.sort_unstable();
                (colors[v], sig)
            })
            .collect();
        let mut distinct = signatures.clone();
        distinct.sort();
        distinct.dedup();
        colors = signatures
            .iter()
            .map(|s| distinct.binary_search(s).unwrap())
            .collect();
        let next = distinct.len();
        if next == classes {
            return colors;
        }
        classes = next;
    }
}

fn count_classes(colors: &[usize]) -> usize {
    colors.iter().collect::<BTreeSet<_>>().len()
}

fn search(
    g: &MultiGraph,
    mult: &[Vec<u32>],
    colors: Vec<usize>,
    best: &mut Option<Vec<(Vertex, Vertex)>>,
) {
    let colors = refine(g, mult, colors);
    let n = g.n();
    // First colour class with more than one vertex.
    let mut sizes = vec![0usize; n];
    for &c in &colors {
        sizes[c] += 1;
    }
    let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
        let mut cert: Vec<_> = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (colors[u], colors[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        cert.sort_unstable();
        if best.as_ref().is_none_or(|b| cert < *b) {
            *best = Some(cert);
        }
        return;
    };
    for v in (0..n).filter(|&v| colors[v] == target) {
        let split: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(w, &c)| if w == v { 2 * c } else { 2 * c + 1 })
            .collect();
        search(g, mult, split, best);
    }
}

/// All connected simple cubic graphs on `n` vertices, one per isomorphism
/// class, each in canonical labeling. Sorted by canonical form.
pub fn connected_cubic_graphs(n: usize) -> Vec<MultiGraph> {
    if n < 4 || n % 2 == 1 {
        return Vec::new();
    }
    let mut gen = BfsGenerator { n, adj: vec![Vec::with_capacity(3); n], discovered: 1, seen: BTreeSet::new() };
    gen.extend(0, 0);
    gen.seen
        .into_iter()
        .map(|edges| MultiGraph::new(n, edges).expect("canonical labels in range"))
        .collect()
}

/// Generates labeled connected cubic graphs whose labels follow a BFS
/// discovery order, so every connected graph appears at least once.
struct BfsGenerator {
    n: usize,
    adj: Vec<Vec<Vertex>>,
    discovered: usize,
    seen: BTreeSet<Vec<(Vertex, Vertex)>>,
}

impl BfsGenerator {
    /// Fill the remaining slots of `v`, choosing partners greater than `after`.
    fn extend(&mut self, v: Vertex, after: Vertex) {
        if self.adj[v].len() == 3 {
            let next = v + 1;
            if next == self.n {
                let edges = (0..self.n)
                    .flat_map(|u| self.adj[u].iter().filter(move |&&w| w > u).map(move |&w| (u, w)))
                    .collect::<Vec<_>>();
                let g = MultiGraph::new(self.n, edges).unwrap();
                self.seen.insert(canonical_form(&g));
            } else if next < self.discovered {
                self.extend(next, next);
            }
            return;
        }
        let lo = after.max(v) + 1;
        for w in lo..self.discovered {
            if self.adj[w].len() < 3 && !self.adj[v].contains(&w) {
                self.link(v, w);
                self.extend(v, w);
                self.unlink(v, w);
            }
        }
        if self.discovered < self.n {
            let w = self.discovered;
            self.discovered += 1;
            self.link(v, w);
            self.extend(v, w);
            self.unlink(v, w);
            self.discovered -= 1;
        }
    }

    fn link(&mut self, v: Vertex, w: Vertex) {
        self.adj[v].push(w);
        self.adj[w].push(v);
    }

    fn unlink(&mut self, v: Vertex, w: Vertex) {
        self.adj[v].pop();
        self.adj[w].pop();
    }
}
