use pcnlab::configmodel;
use pcnlab::graph::canonical::connected_cubic_graphs;
use pcnlab::graph::named;
use pcnlab::packing::{self, ChiP, Verdict};
use pcnlab::MultiGraph;

fn exact(g: &MultiGraph) -> u32 {
    match packing::chi_p(g, g.n() as u32) {
        ChiP::Exact { value, witness } => {
            assert!(packing::verify_packing(g, &witness).unwrap().is_empty());
            value
        }
        ChiP::GreaterThan(_) => unreachable!("n colours always suffice"),
    }
}

fn brute(g: &MultiGraph) -> u32 {
    let n = g.n();
    let dm = g.distances();
    (1..=n as u32)
        .find(|&k| {
            let mut colors = vec![1u32; n];
            loop {
                if (0..n).all(|u| (u + 1..n).all(|v| colors[u] != colors[v] || dm.get(u, v).is_none_or(|d| d > colors[u]))) {
                    return true;
                }
                let Some(pos) = colors.iter().position(|&c| c < k) else { return false };
                colors[..pos].fill(1);
                colors[pos] += 1;
            }
        })
        .unwrap()
}

#[test]
fn exact_matches_brute_force_on_random_small_graphs() {
    for seed in 0..24u64 {
        let n = [4, 6, 8][seed as usize % 3];
        let g = configmodel::random_pairing(n, seed).unwrap().project();
        assert_eq!(exact(&g), brute(&g), "seed {seed}");
    }
    let disconnected = MultiGraph::new(7, [(0, 1), (1, 2), (3, 4), (5, 6)]).unwrap();
    assert_eq!(exact(&disconnected), brute(&disconnected));
}

#[test]
fn certificate_is_sound_and_greedy_is_above() {
    // Soundness sandwich: PROVEN_GREATER at k implies chi_p > k.
    let mut graphs: Vec<MultiGraph> = [4, 6, 8, 10, 12, 14].iter().flat_map(|&n| connected_cubic_graphs(n)).collect();
    graphs.extend((0..8).map(|s| configmodel::sample_girth_conditioned(14 + 2 * (s as usize % 4), 3, s, 100_000).unwrap().graph));
    for g in &graphs {
        let chi = exact(g);
        let greedy = packing::greedy_packing(g, &(0..g.n()).collect::<Vec<_>>()).unwrap();
        assert!(greedy.k() >= chi);
        for k in 1..=chi {
            let cert = packing::lower_bound_certificate(g, k);
            if cert.verdict == Verdict::ProvenGreater {
                assert!(k < chi);
                assert_eq!(packing::chi_p(g, k), ChiP::GreaterThan(k));
            }
            assert_eq!(cert.total, cert.terms.iter().map(|t| t.value).sum::<usize>());
        }
    }
}

#[test]
fn known_values() {
    assert_eq!(exact(&named::petersen()), 7);
    assert_eq!(exact(&named::cycle(8)), 3);
    assert_eq!(exact(&named::cycle(9)), 4);
}
