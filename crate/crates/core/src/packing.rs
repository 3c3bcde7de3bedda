//! Packing colorings: verification, exact `χ_p` by backtracking, greedy
//! upper bounds and the class-capacity lower-bound certificate.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{parse_fields, DistanceMatrix, GraphError, MultiGraph, Vertex};
use crate::independence::{max_i_independent, max_union_124};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PackingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vertex {0} has no color")]
    Unassigned(Vertex),
    #[error("vertex {0} has color 0; colors start at 1")]
    ZeroColor(Vertex),
    #[error("coloring covers {found} vertices, graph has {expected}")]
    LengthMismatch { found: usize, expected: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Color of each vertex, `None` while unassigned. Colors start at 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PackingColoring {
    pub colors: Vec<Option<u32>>,
}

impl PackingColoring {
    pub fn from_colors(colors: impl IntoIterator<Item = u32>) -> Self {
        PackingColoring { colors: colors.into_iter().map(Some).collect() }
    }

    /// Largest color used.
    pub fn k(&self) -> u32 {
        self.colors.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Text form: one `vertex color` line per vertex.
    pub fn to_text(&self) -> String {
        self.colors
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|c| format!("{v} {c}\n")))
            .collect()
    }

    pub fn parse(n: usize, text: &str) -> Result<Self, PackingError> {
        let mut colors = vec![None; n];
        for (idx, line) in text.split('\n').enumerate() {
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| PackingError::Parse { line: idx + 1, msg: msg.to_string() };
            let [v, c] = parse_fields::<2>(line).ok_or_else(|| err("expected \"vertex color\""))?;
            if v >= n {
                return Err(err("vertex out of range"));
            }
            if colors[v].is_some() {
                return Err(err("vertex colored twice"));
            }
            colors[v] = Some(u32::try_from(c).map_err(|_| err("color too large"))?);
        }
        Ok(PackingColoring { colors })
    }
}

/// Two vertices of color `color` at distance at most `color`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub color: u32,
    pub u: Vertex,
    pub v: Vertex,
    pub distance: u32,
}

/// All violations; empty iff the coloring is a packing coloring.
pub fn verify_packing(g: &MultiGraph, coloring: &PackingColoring) -> Result<Vec<Violation>, PackingError> {
    let n = g.n();
    if coloring.colors.len() != n {
        return Err(PackingError::LengthMismatch { found: coloring.colors.len(), expected: n });
    }
    let mut colors = Vec::with_capacity(n);
    for (v, c) in coloring.colors.iter().enumerate() {
        match c {
            None => return Err(PackingError::Unassigned(v)),
            Some(0) => return Err(PackingError::ZeroColor(v)),
            Some(c) => colors.push(*c),
        }
    }
    let mut violations = Vec::new();
    for u in 0..n {
        let dist = g.distances_from(u);
        for v in u + 1..n {
            if colors[v] == colors[u] {
                if let Some(d) = dist[v] {
                    if d <= colors[u] {
                        violations.push(Violation { color: colors[u], u, v, distance: d });
                    }
                }
            }
        }
    }
    Ok(violations)
}

/// Each vertex in `order` gets the smallest color that keeps every class valid.
/// Vertices missing from `order` stay unassigned.
pub fn greedy_packing(g: &MultiGraph, order: &[Vertex]) -> Result<PackingColoring, PackingError> {
    let mut colors: Vec<Option<u32>> = vec![None; g.n()];
    let mut classes: Vec<Vec<Vertex>> = Vec::new();
    for &v in order {
        g.require_vertex(v)?;
        if colors[v].is_some() {
            continue;
        }
        let dist = g.distances_from(v);
        let fits = |c: usize, class: &Vec<Vertex>| class.iter().all(|&w| dist[w].is_none_or(|d| d as usize > c + 1));
        let c = (0..classes.len()).find(|&c| fits(c, &classes[c])).unwrap_or_else(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(v);
        colors[v] = Some(c as u32 + 1);
    }
    Ok(PackingColoring { colors })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiP {
    Exact { value: u32, witness: PackingColoring },
    GreaterThan(u32),
}

/// Smallest `k` with `c_1 + ... + c_k >= n`.
fn capacity_lower_bound(g: &MultiGraph, capacities: &mut Vec<usize>) -> u32 {
    let n = g.n();
    let mut sum = 0;
    let mut k = 0;
    while sum < n {
        k += 1;
        if capacities.len() < k {
            capacities.push(max_i_independent(g, k).size);
        }
        sum += capacities[k - 1];
    }
    k as u32
}

struct ColorSearch<'a> {
    dm: &'a DistanceMatrix,
    order: Vec<Vertex>,
    k: usize,
    /// Colors at or above this value are forced to be singleton classes.
    singleton_from: usize,
    /// c_i(G) for i = 1..k.
    capacity: Vec<usize>,
    colors: Vec<usize>,
    /// blocked[v * (k + 1) + c]: colored vertices of color c within distance c of v.
    blocked: Vec<u32>,
    used: Vec<usize>,
}

impl ColorSearch<'_> {
    fn allowed(&self, v: Vertex, c: usize) -> bool {
        self.blocked[v * (self.k + 1) + c] == 0 && self.used[c] < self.capacity[c - 1]
    }

    fn set(&mut self, v: Vertex, c: usize, delta: i32) {
        for w in 0..self.dm.n() {
            if w != v && self.dm.within(v, w, c) {
                let b = &mut self.blocked[w * (self.k + 1) + c];
                *b = (*b as i32 + delta) as u32;
            }
        }
        self.used[c] = (self.used[c] as i32 + delta) as usize;
    }

    /// Every remaining vertex still has a color, and the classes can absorb them.
    fn feasible(&self, depth: usize) -> bool {
        let rest = &self.order[depth..];
        let mut room = 0;
        for c in 1..=self.k {
            let free = self.capacity[c - 1] - self.used[c];
            let open = rest.iter().filter(|&&v| self.allowed(v, c)).count();
            room += free.min(open);
        }
        room >= rest.len() && rest.iter().all(|&v| (1..=self.k).any(|c| self.allowed(v, c)))
    }

    fn dfs(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        if !self.feasible(depth) {
            return false;
        }
        let v = self.order[depth];
        let mut tried_singleton = false;
        for c in 1..=self.k {
            if !self.allowed(v, c) {
                continue;
            }
            if c >= self.singleton_from && self.used[c] == 0 {
                // Unused singleton colors are interchangeable.
                if tried_singleton {
                    continue;
                }
                tried_singleton = true;
            }
            self.colors[v] = c;
            self.set(v, c, 1);
            if self.dfs(depth + 1) {
                return true;
            }
            self.set(v, c, -1);
            self.colors[v] = 0;
        }
        false
    }
}

fn search_order(g: &MultiGraph) -> Vec<Vertex> {
    let start = (0..g.n()).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap_or(0);
    g.bfs_order(start)
}

/// Packing k-coloring if one exists.
fn packing_with(g: &MultiGraph, dm: &DistanceMatrix, k: usize, capacities: &mut Vec<usize>) -> Option<PackingColoring> {
    while capacities.len() < k {
        capacities.push(max_i_independent(g, capacities.len() + 1).size);
    }
    let singleton_from = if dm.is_connected() { dm.max_finite().max(1) as usize } else { usize::MAX };
    let mut search = ColorSearch {
        dm,
        order: search_order(g),
        k,
        singleton_from,
        capacity: capacities[..k].to_vec(),
        colors: vec![0; g.n()],
        blocked: vec![0; g.n() * (k + 1)],
        used: vec![0; k + 1],
    };
    search.dfs(0).then(|| PackingColoring::from_colors(search.colors.iter().map(|&c| c as u32)))
}

/// Exact packing chromatic number if it is at most `k_max`.
pub fn chi_p(g: &MultiGraph, k_max: u32) -> ChiP {
    if g.n() == 0 {
        return ChiP::Exact { value: 0, witness: PackingColoring { colors: vec![] } };
    }
    let dm = g.distances();
    let mut capacities = Vec::new();
    let lower = capacity_lower_bound(g, &mut capacities);
    let greedy = greedy_packing(g, &search_order(g)).expect("order covers all vertices");
    let upper = greedy.k();
    for k in lower..upper.min(k_max + 1) {
        if let Some(witness) = packing_with(g, &dm, k as usize, &mut capacities) {
            return ChiP::Exact { value: k, witness };
        }
    }
    if upper <= k_max {
        ChiP::Exact { value: upper, witness: greedy }
    } else {
        ChiP::GreaterThan(k_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ProvenGreater,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateTerm {
    pub label: String,
    pub value: usize,
}

/// Capacity argument: the classes of a packing k-coloring cover all `n`
/// vertices, so if the largest possible classes sum below `n` no such
/// coloring exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub n: usize,
    pub k: u32,
    pub terms: Vec<CertificateTerm>,
    pub total: usize,
    pub verdict: Verdict,
}

/// Classes 1, 2, 4 are bounded jointly by `c_{1,2,4}`, the rest by `c_i`.
/// For `k < 4` the joint term is `min(c_{1,2,4}, c_1 + ... + c_k)`.
pub fn lower_bound_certificate(g: &MultiGraph, k: u32) -> Certificate {
    let n = g.n();
    let mut terms = Vec::new();
    if k >= 1 {
        let joint = max_union_124(g).total;
        let small: Vec<usize> = (1..=k.min(2) as usize).map(|i| max_i_independent(g, i).size).collect();
        if k < 4 && small.iter().sum::<usize>() < joint {
            for (i, &c) in small.iter().enumerate() {
                terms.push(CertificateTerm { label: format!("c_{}", i + 1), value: c });
            }
        } else {
            terms.push(CertificateTerm { label: "c_{1,2,4}".into(), value: joint });
        }
        for i in (3..=k as usize).filter(|&i| i != 4) {
            terms.push(CertificateTerm { label: format!("c_{i}"), value: max_i_independent(g, i).size });
        }
    }
    let total = terms.iter().map(|t| t.value).sum();
    let verdict = if total < n { Verdict::ProvenGreater } else { Verdict::Inconclusive };
    Certificate { n, k, terms, total, verdict }
}
