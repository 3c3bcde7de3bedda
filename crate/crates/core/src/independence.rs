//! i-independent sets: verification, exact maximum via branch-and-bound on
//! the graph power, the joint `c_{1,2,4}` search, and the audit of the edge
//! count identity behind the `0.7174n` bound.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::graph::{GraphError, MultiGraph, Vertex};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IndependenceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("ball of radius {radius} around {vertex} is not a (3,{radius},a)-tree")]
    BallNotTree { vertex: Vertex, radius: usize },
    #[error("graph must be simple and cubic")]
    NotSimpleCubic,
    #[error("C{class} is not {class}-independent: {u} and {v} are at distance {distance}")]
    NotIndependent { class: usize, u: Vertex, v: Vertex, distance: u32 },
    #[error("vertex {vertex} lies in both C1 and C2")]
    Overlap { vertex: Vertex },
}

/// Outcome of an i-independence check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Check {
    Valid,
    /// First pair (in scan order) at distance at most `i`.
    Conflict { u: Vertex, v: Vertex, distance: u32 },
}

impl Check {
    pub fn is_valid(self) -> bool {
        self == Check::Valid
    }
}

/// Vertices at distance `1..=radius` from `v`, with their distances.
fn sphere_within(g: &MultiGraph, v: Vertex, radius: usize) -> Vec<(Vertex, u32)> {
    let mut dist: std::collections::HashMap<Vertex, u32> = std::collections::HashMap::from([(v, 0)]);
    let mut out = Vec::new();
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        if d as usize == radius {
            continue;
        }
        for &w in g.neighbors(u) {
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(w) {
                slot.insert(d + 1);
                out.push((w, d + 1));
                queue.push_back(w);
            }
        }
    }
    out
}

/// `true` iff all pairwise distances in `set` are at least `i + 1`.
/// Repeated vertices are treated as one.
pub fn verify_i_independent(g: &MultiGraph, set: &[Vertex], i: usize) -> Result<Check, GraphError> {
    let mut member = vec![false; g.n()];
    for &v in set {
        g.require_vertex(v)?;
        member[v] = true;
    }
    let mut seen = vec![false; g.n()];
    for &u in set {
        if seen[u] {
            continue;
        }
        seen[u] = true;
        if let Some(&(v, distance)) = sphere_within(g, u, i).iter().filter(|(w, _)| member[*w]).min() {
            let (u, v) = (u.min(v), u.max(v));
            return Ok(Check::Conflict { u, v, distance });
        }
    }
    Ok(Check::Valid)
}

/// Adjacency of the i-th power as bitsets (no self-loops).
fn power_adjacency(g: &MultiGraph, i: usize) -> Vec<BitSet> {
    (0..g.n())
        .map(|v| {
            let mut row = BitSet::new(g.n());
            for (w, _) in sphere_within(g, v, i) {
                row.insert(w);
            }
            row
        })
        .collect()
}

/// Upper bound on the independence number of the subgraph induced by `cand`:
/// the number of cliques in a greedy clique cover.
fn clique_cover_bound(adj: &[BitSet], cand: &BitSet) -> usize {
    let mut rest = cand.clone();
    let mut cliques = 0;
    while let Some(v) = rest.first() {
        cliques += 1;
        rest.remove(v);
        let mut common = adj[v].clone();
        common.intersect_with(&rest);
        while let Some(w) = common.first() {
            rest.remove(w);
            common.remove(w);
            common.intersect_with(&adj[w]);
        }
    }
    cliques
}

struct MisSearch<'a> {
    adj: &'a [BitSet],
    current: Vec<Vertex>,
    best: Vec<Vertex>,
}

impl MisSearch<'_> {
    fn expand(&mut self, mut cand: BitSet) {
        let mark = self.current.len();
        // Vertices of residual degree <= 1 belong to some optimum.
        loop {
            let low = cand.iter().find(|&v| self.adj[v].intersection_len(&cand) <= 1);
            let Some(v) = low else { break };
            self.current.push(v);
            cand.remove(v);
            cand.difference_with(&self.adj[v]);
        }
        if cand.is_empty() {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
        } else if self.current.len() + clique_cover_bound(self.adj, &cand) > self.best.len() {
            let (v, degree) = cand
                .iter()
                .map(|v| (v, self.adj[v].intersection_len(&cand)))
                .fold((usize::MAX, 0), |acc, (v, d)| if d > acc.1 { (v, d) } else { acc });
            let mut with = cand.clone();
            with.remove(v);
            with.difference_with(&self.adj[v]);
            self.current.push(v);
            self.expand(with);
            self.current.pop();
            // Residual components that are all cycles: some optimum contains v.
            if degree > 2 {
                cand.remove(v);
                self.expand(cand);
            }
        }
        self.current.truncate(mark);
    }
}

fn greedy_mis(adj: &[BitSet], n: usize) -> Vec<Vertex> {
    let mut cand = BitSet::full(n);
    let mut out = Vec::new();
    while !cand.is_empty() {
        let v = cand
            .iter()
            .min_by_key(|&v| (adj[v].intersection_len(&cand), v))
            .expect("non-empty");
        out.push(v);
        cand.remove(v);
        cand.difference_with(&adj[v]);
    }
    out
}

fn maximum_independent(adj: &[BitSet], n: usize) -> Vec<Vertex> {
    let mut search = MisSearch { adj, current: Vec::new(), best: greedy_mis(adj, n) };
    search.expand(BitSet::full(n));
    let mut best = search.best;
    best.sort_unstable();
    best
}

/// A maximum i-independent set: its size is `c_i(G)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependentSet {
    pub i: usize,
    pub size: usize,
    pub witness: Vec<Vertex>,
}

/// Exact `c_i(G)` with a witness, as a maximum independent set of `G^i`.
pub fn max_i_independent(g: &MultiGraph, i: usize) -> IndependentSet {
    let witness = maximum_independent(&power_adjacency(g, i), g.n());
    IndependentSet { i, size: witness.len(), witness }
}

/// Greedy i-independent set in a seeded random order, improved by
/// one-out/two-in swaps. A lower bound on `c_i(G)` for large graphs.
pub fn heuristic_i_independent(g: &MultiGraph, i: usize, seed: u64) -> IndependentSet {
    let n = g.n();
    let spheres: Vec<Vec<Vertex>> = (0..n).map(|v| sphere_within(g, v, i).into_iter().map(|(w, _)| w).collect()).collect();
    let mut order: Vec<Vertex> = (0..n).collect();
    rng::shuffle(&mut rng::from_seed(seed), &mut order);
    // conflicts[v] = members within distance i of v
    let mut conflicts = vec![0usize; n];
    let mut member = vec![false; n];
    let add = |v: Vertex, member: &mut [bool], conflicts: &mut [usize]| {
        member[v] = true;
        for &w in &spheres[v] {
            conflicts[w] += 1;
        }
    };
    for &v in &order {
        if !member[v] && conflicts[v] == 0 {
            add(v, &mut member, &mut conflicts);
        }
    }
    let mut improved = true;
    while improved {
        improved = false;
        for &x in &order {
            if !member[x] {
                continue;
            }
            // Vertices freed by removing x.
            let freed: Vec<Vertex> = spheres[x].iter().copied().filter(|&w| !member[w] && conflicts[w] == 1).collect();
            if freed.len() < 2 {
                continue;
            }
            let mut picked: Vec<Vertex> = Vec::new();
            for &w in &freed {
                if picked.iter().all(|p| !spheres[*p].contains(&w)) {
                    picked.push(w);
                }
            }
            if picked.len() >= 2 {
                member[x] = false;
                for &w in &spheres[x] {
                    conflicts[w] -= 1;
                }
                for w in picked {
                    add(w, &mut member, &mut conflicts);
                }
                improved = true;
            }
        }
    }
    let witness: Vec<Vertex> = (0..n).filter(|&v| member[v]).collect();
    IndependentSet { i, size: witness.len(), witness }
}

/// `c_1(G), ..., c_{i_max}(G)` with witnesses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceProfile {
    pub n: usize,
    pub c: Vec<IndependentSet>,
}

impl IndependenceProfile {
    pub fn sizes(&self) -> Vec<usize> {
        self.c.iter().map(|s| s.size).collect()
    }

    pub fn get(&self, i: usize) -> Option<&IndependentSet> {
        self.c.get(i.checked_sub(1)?)
    }
}

pub fn independence_profile(g: &MultiGraph, i_max: usize) -> IndependenceProfile {
    IndependenceProfile { n: g.n(), c: (1..=i_max).map(|i| max_i_independent(g, i)).collect() }
}

/// Disjoint sets `C1`, `C2`, `C4`, each `C_i` i-independent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetTriple {
    pub c1: Vec<Vertex>,
    pub c2: Vec<Vertex>,
    pub c4: Vec<Vertex>,
    pub total: usize,
}

/// Index of each joint class in the arrays below.
const CLASSES: [usize; 3] = [1, 2, 4];

impl SetTriple {
    fn from_assignment(assign: &[Option<usize>]) -> Self {
        let members = |c: usize| (0..assign.len()).filter(|&v| assign[v] == Some(c)).collect::<Vec<_>>();
        let (c1, c2, c4) = (members(0), members(1), members(2));
        let total = c1.len() + c2.len() + c4.len();
        SetTriple { c1, c2, c4, total }
    }

    pub fn classes(&self) -> [(usize, &[Vertex]); 3] {
        [(1, &self.c1), (2, &self.c2), (4, &self.c4)]
    }

    /// First violated class condition, or `Ok` if the triple is feasible.
    pub fn verify(&self, g: &MultiGraph) -> Result<(), IndependenceError> {
        let mut owner = vec![false; g.n()];
        for (_, set) in self.classes() {
            for &v in set {
                g.require_vertex(v)?;
                if std::mem::replace(&mut owner[v], true) {
                    return Err(IndependenceError::Overlap { vertex: v });
                }
            }
        }
        for (class, set) in self.classes() {
            if let Check::Conflict { u, v, distance } = verify_i_independent(g, set, class)? {
                return Err(IndependenceError::NotIndependent { class, u, v, distance });
            }
        }
        Ok(())
    }
}

struct JointSearch<'a> {
    order: Vec<Vertex>,
    adj: [&'a [BitSet]; 3],
    assign: Vec<Option<usize>>,
    /// Vertices that may still join class c: unprocessed and not blocked.
    open: [BitSet; 3],
    total: usize,
    best_total: usize,
    best: Vec<Option<usize>>,
}

impl JointSearch<'_> {
    fn bound(&self, depth: usize) -> usize {
        let remaining = self.order.len() - depth;
        let capacity: usize = (0..3).map(|c| clique_cover_bound(self.adj[c], &self.open[c])).sum();
        self.total + remaining.min(capacity)
    }

    fn dfs(&mut self, depth: usize) {
        if depth == self.order.len() {
            if self.total > self.best_total {
                self.best_total = self.total;
                self.best = self.assign.clone();
            }
            return;
        }
        if self.bound(depth) <= self.best_total {
            return;
        }
        let v = self.order[depth];
        let saved = self.open.clone();
        for c in 0..3 {
            self.open[c].remove(v);
        }
        for (c, before) in saved.iter().enumerate() {
            if before.contains(v) {
                self.assign[v] = Some(c);
                self.total += 1;
                self.open[c].difference_with(&self.adj[c][v]);
                self.dfs(depth + 1);
                self.open[c] = before.clone();
                self.open[c].remove(v);
                self.total -= 1;
                self.assign[v] = None;
            }
        }
        self.dfs(depth + 1);
        self.open = saved;
    }
}

/// Exact `c_{1,2,4}(G)`: depth-first over vertices in BFS order from 0,
/// classes tried in order 1, 2, 4, then unassigned.
pub fn max_union_124(g: &MultiGraph) -> SetTriple {
    let n = g.n();
    if n == 0 {
        return SetTriple { c1: vec![], c2: vec![], c4: vec![], total: 0 };
    }
    let powers: Vec<Vec<BitSet>> = CLASSES.iter().map(|&i| power_adjacency(g, i)).collect();
    let start = heuristic_union_124(g, 0);
    let mut best = vec![None; n];
    for (c, (_, set)) in start.classes().into_iter().enumerate() {
        for &v in set {
            best[v] = Some(c);
        }
    }
    let mut search = JointSearch {
        order: g.bfs_order(0),
        adj: [&powers[0], &powers[1], &powers[2]],
        assign: vec![None; n],
        open: [BitSet::full(n), BitSet::full(n), BitSet::full(n)],
        total: 0,
        best_total: start.total,
        best,
    };
    search.dfs(0);
    SetTriple::from_assignment(&search.best)
}

/// Feasible triple by seeded greedy (first feasible class in order 1, 2, 4)
/// followed by improving moves until none applies.
pub fn heuristic_union_124(g: &MultiGraph, seed: u64) -> SetTriple {
    let n = g.n();
    let spheres: Vec<Vec<Vec<Vertex>>> = CLASSES
        .iter()
        .map(|&i| (0..n).map(|v| sphere_within(g, v, i).into_iter().map(|(w, _)| w).collect()).collect())
        .collect();
    let mut order: Vec<Vertex> = (0..n).collect();
    rng::shuffle(&mut rng::from_seed(seed), &mut order);
    let mut state = JointState { spheres: &spheres, assign: vec![None; n], conflicts: vec![[0; 3]; n] };
    for &v in &order {
        if let Some(c) = (0..3).find(|&c| state.conflicts[v][c] == 0) {
            state.put(v, c);
        }
    }
    let mut improved = true;
    while improved {
        improved = false;
        for &v in &order {
            if state.assign[v].is_none() && state.relocate_into(v) {
                improved = true;
            }
        }
    }
    SetTriple::from_assignment(&state.assign)
}

struct JointState<'a> {
    spheres: &'a [Vec<Vec<Vertex>>],
    assign: Vec<Option<usize>>,
    /// conflicts[v][c]: members of class c within distance CLASSES[c] of v.
    conflicts: Vec<[usize; 3]>,
}

impl JointState<'_> {
    fn put(&mut self, v: Vertex, c: usize) {
        self.assign[v] = Some(c);
        for &w in &self.spheres[c][v] {
            self.conflicts[w][c] += 1;
        }
    }

    fn take(&mut self, v: Vertex) {
        let c = self.assign[v].take().expect("assigned");
        for &w in &self.spheres[c][v] {
            self.conflicts[w][c] -= 1;
        }
    }

    /// Unassigned `v` blocked by a single member `w` of class `c`: move `v`
    /// into `c` if `w` can move to another class. Net gain one.
    fn relocate_into(&mut self, v: Vertex) -> bool {
        for c in 0..3 {
            if self.conflicts[v][c] == 0 {
                self.put(v, c);
                return true;
            }
            if self.conflicts[v][c] != 1 {
                continue;
            }
            let w = *self.spheres[c][v].iter().find(|&&w| self.assign[w] == Some(c)).expect("one conflict");
            self.take(w);
            self.put(v, c);
            if let Some(d) = (0..3).find(|&d| d != c && self.conflicts[w][d] == 0) {
                self.put(w, d);
                return true;
            }
            self.take(v);
            self.put(w, c);
        }
        false
    }
}

/// `S_j ∪ S_{j-2} ∪ ...`, the alternate BFS levels of a tree-like ball.
pub fn alternating_level_set(g: &MultiGraph, a: Vertex, j: usize) -> Result<Vec<Vertex>, IndependenceError> {
    if !g.check_ball_tree(a, j)? {
        return Err(IndependenceError::BallNotTree { vertex: a, radius: j });
    }
    let levels = g.levels(a, j);
    let mut set: Vec<Vertex> = levels.iter().rev().step_by(2).flatten().copied().collect();
    set.sort_unstable();
    Ok(set)
}

/// The two sides of `3(n-s) - 2ℓ = 3s - 2(|C1| - q)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma10Audit {
    pub n: usize,
    pub c1: usize,
    pub c2: usize,
    /// `|C1| + |C2|`.
    pub s: usize,
    /// Edges of `G - C1 - C2`.
    pub ell: usize,
    /// `C1` vertices with no neighbour in `C2`.
    pub qcount: usize,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
    /// `n/2 - (ℓ - |C1| + q)/3`; equals `s` when the identity holds.
    pub derived_s: f64,
}

pub fn lemma10_audit(g: &MultiGraph, c1: &[Vertex], c2: &[Vertex]) -> Result<Lemma10Audit, IndependenceError> {
    if !g.is_simple_cubic() {
        return Err(IndependenceError::NotSimpleCubic);
    }
    let triple = SetTriple { c1: c1.to_vec(), c2: c2.to_vec(), c4: vec![], total: c1.len() + c2.len() };
    triple.verify(g)?;
    let n = g.n();
    let mut side = vec![0u8; n];
    for &v in c1 {
        side[v] = 1;
    }
    for &v in c2 {
        side[v] = 2;
    }
    let s = c1.len() + c2.len();
    let ell = g.edges().iter().filter(|&&(u, v)| side[u] == 0 && side[v] == 0).count();
    let qcount = c1.iter().filter(|&&v| g.neighbors(v).iter().all(|&w| side[w] != 2)).count();
    let (n_i, s_i, ell_i, c1_i, q_i) = (n as i64, s as i64, ell as i64, c1.len() as i64, qcount as i64);
    let lhs = 3 * (n_i - s_i) - 2 * ell_i;
    let rhs = 3 * s_i - 2 * (c1_i - q_i);
    Ok(Lemma10Audit {
        n,
        c1: c1.len(),
        c2: c2.len(),
        s,
        ell,
        qcount,
        lhs,
        rhs,
        holds: lhs == rhs,
        derived_s: n as f64 / 2.0 - (ell_i - c1_i + q_i) as f64 / 3.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn verify_examples() {
        let c6 = cycle(6);
        assert_eq!(verify_i_independent(&c6, &[0, 3], 2).unwrap(), Check::Valid);
        assert_eq!(verify_i_independent(&c6, &[0, 2], 2).unwrap(), Check::Conflict { u: 0, v: 2, distance: 2 });
        assert!(verify_i_independent(&petersen(), &[7], 9).unwrap().is_valid());
        assert!(verify_i_independent(&c6, &[], 1).unwrap().is_valid());
        assert!(verify_i_independent(&c6, &[6], 1).is_err());
    }

    #[test]
    fn exact_values() {
        let c6 = cycle(6);
        assert_eq!(max_i_independent(&c6, 1).size, 3);
        assert_eq!(max_i_independent(&c6, 2).size, 2);
        assert_eq!(max_i_independent(&c6, 4).size, 1);
        assert_eq!(max_i_independent(&petersen(), 1).size, 4);
        assert_eq!(independence_profile(&c6, 4).sizes(), vec![3, 2, 1, 1]);
        assert_eq!(independence_profile(&complete(4), 2).sizes(), vec![1, 1]);
        assert_eq!(independence_profile(&petersen(), 2).sizes(), vec![4, 1]);
        assert_eq!(max_i_independent(&complete(1), 3).size, 1);
        assert_eq!(max_i_independent(&heawood(), 1).size, 7);
    }

    #[test]
    fn witnesses_verify() {
        let g = heawood();
        for i in 1..=4 {
            let s = max_i_independent(&g, i);
            assert!(verify_i_independent(&g, &s.witness, i).unwrap().is_valid());
            let h = heuristic_i_independent(&g, i, 3);
            assert!(verify_i_independent(&g, &h.witness, i).unwrap().is_valid());
            assert!(h.size <= s.size);
        }
    }

    #[test]
    fn joint_examples() {
        assert_eq!(max_union_124(&cycle(6)).total, 5);
        assert_eq!(max_union_124(&complete(4)).total, 3);
        let p = petersen();
        let t = max_union_124(&p);
        t.verify(&p).unwrap();
        assert!(t.total >= 4);
        for seed in 0..50 {
            let h = heuristic_union_124(&cycle(6), seed);
            h.verify(&cycle(6)).unwrap();
            assert!((4..=5).contains(&h.total), "seed {seed}: {h:?}");
        }
    }

    #[test]
    fn alternating_levels() {
        let g = heawood();
        assert_eq!(alternating_level_set(&g, 0, 0).unwrap(), vec![0]);
        let one = alternating_level_set(&g, 0, 1).unwrap();
        assert_eq!(one.len(), 3);
        let two = alternating_level_set(&g, 0, 2).unwrap();
        assert_eq!(two.len(), 7);
        assert!(verify_i_independent(&g, &two, 1).unwrap().is_valid());
        assert_eq!(
            alternating_level_set(&complete(4), 0, 1),
            Err(IndependenceError::BallNotTree { vertex: 0, radius: 1 })
        );
    }

    #[test]
    fn audit_examples() {
        let k4 = complete(4);
        let a = lemma10_audit(&k4, &[0], &[]).unwrap();
        assert_eq!((a.lhs, a.rhs, a.ell), (3, 3, 3));
        let empty = lemma10_audit(&k4, &[], &[]).unwrap();
        assert_eq!((empty.lhs, empty.rhs), (0, 0));
        let p = petersen();
        let c1 = max_i_independent(&p, 1).witness;
        let far = (0..10).find(|v| !c1.contains(v)).unwrap();
        let audit = lemma10_audit(&p, &c1, &[far]).unwrap();
        assert!(audit.holds);
        assert!((audit.derived_s - audit.s as f64).abs() < 1e-12);
        assert!(matches!(lemma10_audit(&p, &[0, 1], &[]), Err(IndependenceError::NotIndependent { class: 1, .. })));
        assert!(matches!(lemma10_audit(&p, &[c1[0]], &[c1[0]]), Err(IndependenceError::Overlap { .. })));
        assert_eq!(lemma10_audit(&cycle(6), &[], &[]), Err(IndependenceError::NotSimpleCubic));
    }
}
