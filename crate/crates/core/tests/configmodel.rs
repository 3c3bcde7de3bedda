use std::collections::{BTreeMap, HashMap};

use pcnlab::configmodel::{self, ConfigError};
use pcnlab::graph::canonical::canonical_form;
use pcnlab::graph::named;
use pcnlab::{rng, MultiGraph};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// All labeled simple cubic graphs on `n` vertices, by choosing 3n/2 of the
/// edges of K_n.
fn labeled_simple_cubic(n: usize) -> Vec<MultiGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let m = 3 * n / 2;
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        if mask.count_ones() as usize != m {
            continue;
        }
        let edges: Vec<_> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        let g = MultiGraph::new(n, edges).unwrap();
        if g.is_cubic() {
            out.push(g);
        }
    }
    out
}

#[test]
fn labeled_census_for_six_vertices() {
    let graphs = labeled_simple_cubic(6);
    assert_eq!(graphs.len(), 70);
    let k33 = canonical_form(&named::k33());
    let prism = canonical_form(&named::prism());
    let mut classes: HashMap<_, usize> = HashMap::new();
    for g in &graphs {
        *classes.entry(canonical_form(g)).or_default() += 1;
    }
    assert_eq!(classes.len(), 2);
    assert_eq!(classes[&k33], 10);
    assert_eq!(classes[&prism], 60);
}

#[test]
fn conditioned_samples_are_uniform_over_labeled_graphs() {
    // Isomorphism classes must appear in proportion to their labeled counts.
    let census = labeled_simple_cubic(6);
    let mut weight: BTreeMap<_, usize> = BTreeMap::new();
    for g in &census {
        *weight.entry(canonical_form(g)).or_default() += 1;
    }
    let trials = 14_000u64;
    let mut counts: BTreeMap<_, usize> = weight.keys().map(|k| (k.clone(), 0)).collect();
    let mut labeled: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
    for t in 0..trials {
        let s = configmodel::sample_girth_conditioned(6, 3, rng::mix(66, t), 10_000).unwrap();
        *counts.get_mut(&canonical_form(&s.graph)).expect("known class") += 1;
        *labeled.entry(s.graph.sorted_edges()).or_default() += 1;
    }
    let chi2 = |observed: Vec<usize>, expected: Vec<f64>| -> f64 {
        observed.iter().zip(&expected).map(|(&o, &e)| (o as f64 - e).powi(2) / e).sum()
    };
    let class_expected: Vec<f64> = weight.values().map(|&w| trials as f64 * w as f64 / 70.0).collect();
    let stat = chi2(counts.values().copied().collect(), class_expected);
    assert!(stat < ChiSquared::new(1.0).unwrap().inverse_cdf(0.999), "class chi2 {stat}");

    assert_eq!(labeled.len(), 70, "every labeled graph appears");
    let stat = chi2(labeled.values().copied().collect(), vec![trials as f64 / 70.0; 70]);
    assert!(stat < ChiSquared::new(69.0).unwrap().inverse_cdf(0.999), "labeled chi2 {stat}");
}

#[test]
fn exact_simple_fraction_for_six_vertices() {
    // 70 labeled graphs, 6^6 pairings each, out of 17!! pairings.
    let mut simple = 0u64;
    let mut total = 0u64;
    configmodel::for_each_pairing(6, |p| {
        total += 1;
        if p.project().is_simple() {
            simple += 1;
        }
    })
    .unwrap();
    assert_eq!(total, 34_459_425);
    assert_eq!(simple, 70 * 6u64.pow(6));
}

#[test]
fn exhausted_when_no_graph_qualifies() {
    assert_eq!(
        configmodel::sample_girth_conditioned(4, 5, 9, 500).unwrap_err(),
        ConfigError::Exhausted { tries: 500 }
    );
}

#[test]
fn estimate_is_deterministic_and_consistent() {
    let a = configmodel::estimate_acceptance(100, 3, 500, 4).unwrap();
    let b = configmodel::estimate_acceptance(100, 3, 500, 4).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.acceptance_rate, a.accepted as f64 / 500.0);
    let g5 = configmodel::estimate_acceptance(100, 5, 500, 4).unwrap();
    assert!(g5.accepted <= configmodel::estimate_acceptance(100, 4, 500, 4).unwrap().accepted);
}
