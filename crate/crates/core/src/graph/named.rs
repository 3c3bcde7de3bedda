//! Small named graphs used as fixtures and CLI shortcuts.

use super::{MultiGraph, Vertex};

fn build(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> MultiGraph {
    MultiGraph::new(n, edges).expect("named graph edges are in range")
}

pub fn complete(n: usize) -> MultiGraph {
    build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// `P_n`: `n` vertices, `n - 1` edges.
pub fn path(n: usize) -> MultiGraph {
    build(n, (1..n).map(|v| (v - 1, v)))
}

pub fn cycle(n: usize) -> MultiGraph {
    assert!(n >= 3);
    build(n, (0..n).map(|v| (v, (v + 1) % n)))
}

/// Generalized Petersen graph GP(m, s): outer `m`-cycle, inner star polygon
/// with step `s`, spokes `i -- m + i`.
pub fn generalized_petersen(m: usize, s: usize) -> MultiGraph {
    let outer = (0..m).map(|i| (i, (i + 1) % m));
    let spokes = (0..m).map(|i| (i, m + i));
    let inner = (0..m).map(|i| (m + i, m + (i + s) % m));
    build(2 * m, outer.chain(spokes).chain(inner))
}

pub fn petersen() -> MultiGraph {
    generalized_petersen(5, 2)
}

/// Triangular prism, the 6-vertex cubic graph with girth 3.
pub fn prism() -> MultiGraph {
    generalized_petersen(3, 1)
}

pub fn k33() -> MultiGraph {
    build(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v))))
}

/// Hamiltonian cubic graph from LCF notation `[jumps]^repeat`.
pub fn lcf(n: usize, jumps: &[i64], repeat: usize) -> MultiGraph {
    assert_eq!(jumps.len() * repeat, n);
    let ring = (0..n).map(|v| (v, (v + 1) % n));
    let chords = (0..n).filter_map(|v| {
        let j = jumps[v % jumps.len()];
        let w = (v as i64 + j).rem_euclid(n as i64) as usize;
        (v < w).then_some((v, w))
    });
    build(n, ring.chain(chords))
}

/// Heawood graph, LCF [5,-5]^7: the (3,6)-cage on 14 vertices.
pub fn heawood() -> MultiGraph {
    lcf(14, &[5, -5], 7)
}

/// A (3,9)-cage: the smallest cubic graphs of girth 9 have 58 vertices.
pub fn cage_3_9() -> MultiGraph {
    MultiGraph::parse(include_str!("../../data/cage_3_9.txt")).expect("bundled cage parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Girth;

    #[test]
    fn named_graph_shapes() {
        assert_eq!(complete(4).edge_count(), 6);
        assert_eq!(path(4).edge_count(), 3);
        for g in [petersen(), prism(), k33(), heawood()] {
            assert!(g.is_simple_cubic());
        }
        assert_eq!(prism().girth(), Girth::Finite(3));
        assert_eq!(k33().girth(), Girth::Finite(4));
    }

    #[test]
    fn bundled_cage_is_cubic_girth_nine() {
        let g = cage_3_9();
        assert_eq!(g.n(), 58);
        assert!(g.is_simple_cubic());
        assert_eq!(g.girth(), Girth::Finite(9));
    }
}
