use proptest::prelude::*;

use pcnlab::bounds::{self, Parity};
use pcnlab::configmodel::{self, Pairing};
use pcnlab::independence::{self, Check};
use pcnlab::packing::{self, ChiP};
use pcnlab::{rng, MultiGraph};

fn cubic(n: usize, seed: u64) -> MultiGraph {
    configmodel::random_pairing(n, seed).unwrap().project()
}

fn simple_cubic(n: usize, seed: u64) -> MultiGraph {
    configmodel::sample_girth_conditioned(n, 3, seed, 1_000_000).unwrap().graph
}

fn even(lo: usize, hi: usize) -> impl Strategy<Value = usize> {
    (lo / 2..=hi / 2).prop_map(|h| 2 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairings_cover_points_and_project_to_cubic(n in even(2, 60), seed: u64) {
        let p = configmodel::random_pairing(n, seed).unwrap();
        let mut seen = vec![0u8; 3 * n];
        for (a, b) in p.matches() {
            seen[3 * a.vertex + a.slot as usize] += 1;
            seen[3 * b.vertex + b.slot as usize] += 1;
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        prop_assert!(p.project().is_cubic());
        prop_assert_eq!(Pairing::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn graph_text_round_trip(n in even(2, 40), seed: u64) {
        let g = cubic(n, seed);
        prop_assert_eq!(MultiGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn independence_numbers_are_monotone(n in even(4, 16), seed: u64) {
        let g = cubic(n, seed);
        let sizes = independence::independence_profile(&g, 5).sizes();
        prop_assert!(sizes.windows(2).all(|w| w[1] <= w[0]), "{:?}", sizes);
    }

    #[test]
    fn power_reduction(n in even(4, 20), seed: u64, i in 1usize..=4) {
        let g = cubic(n, seed);
        let direct = independence::max_i_independent(&g, i);
        let via_power = independence::max_i_independent(&g.power(i), 1);
        prop_assert_eq!(direct.size, via_power.size);
        prop_assert_eq!(independence::verify_i_independent(&g, &direct.witness, i).unwrap(), Check::Valid);
    }

    #[test]
    fn edge_count_identity(n in even(4, 80), seed: u64, salt: u64) {
        let g = simple_cubic(n, seed);
        let mut stream = rng::from_seed(salt);
        let mut order: Vec<usize> = (0..n).collect();
        rng::shuffle(&mut stream, &mut order);
        let mut c1 = Vec::new();
        let mut c2 = Vec::new();
        for v in order {
            match rng::below(&mut stream, 3) {
                0 if independence::verify_i_independent(&g, &[c1.as_slice(), &[v]].concat(), 1).unwrap().is_valid() => c1.push(v),
                1 if independence::verify_i_independent(&g, &[c2.as_slice(), &[v]].concat(), 2).unwrap().is_valid() => c2.push(v),
                _ => {}
            }
        }
        let audit = independence::lemma10_audit(&g, &c1, &c2).unwrap();
        prop_assert!(audit.holds);
        prop_assert!((audit.derived_s - audit.s as f64).abs() < 1e-9);
    }

    #[test]
    fn verifier_matches_pairwise_check(n in even(4, 14), seed: u64, colors in proptest::collection::vec(1u32..5, 14)) {
        let g = cubic(n, seed);
        let coloring = packing::PackingColoring::from_colors(colors[..n].iter().copied());
        let dm = g.distances();
        let brute = (0..n).all(|u| (u + 1..n).all(|v| {
            colors[u] != colors[v] || dm.get(u, v).is_none_or(|d| d > colors[u])
        }));
        prop_assert_eq!(packing::verify_packing(&g, &coloring).unwrap().is_empty(), brute);
    }

    #[test]
    fn greedy_packing_is_valid_upper_bound(n in even(4, 12), seed: u64, order_seed: u64) {
        let g = cubic(n, seed);
        let mut order: Vec<usize> = (0..n).collect();
        rng::shuffle(&mut rng::from_seed(order_seed), &mut order);
        let coloring = packing::greedy_packing(&g, &order).unwrap();
        prop_assert!(packing::verify_packing(&g, &coloring).unwrap().is_empty());
        match packing::chi_p(&g, n as u32) {
            ChiP::Exact { value, .. } => prop_assert!(coloring.k() >= value),
            ChiP::GreaterThan(_) => prop_assert!(false, "n colours always suffice"),
        }
    }

    #[test]
    fn heuristic_triple_is_feasible_and_below_optimum(n in even(4, 12), seed: u64, h in 0u64..1000) {
        let g = cubic(n, seed);
        let heuristic = independence::heuristic_union_124(&g, h);
        prop_assert!(heuristic.verify(&g).is_ok());
        let exact = independence::max_union_124(&g);
        prop_assert!(heuristic.total <= exact.total);
        prop_assert!(exact.total >= independence::max_i_independent(&g, 1).size);
    }

    #[test]
    fn rate_functions_positive_on_domain(k in 1u32..=6, t in 0.001f64..0.999) {
        for parity in [Parity::Even, Parity::Odd] {
            let x = t * bounds::admissible_upper(parity, k);
            let v = bounds::rate(parity, x, k).unwrap();
            prop_assert!(v > 0.0 && v.is_finite());
        }
    }
}

#[test]
fn sparse_even_independence_bound_on_girth_samples() {
    // 2j-independent sets have density at most 1/(3 * 2^j - 2) at girth >= 2j + 2.
    for seed in 0..10 {
        let g = configmodel::sample_girth_conditioned(20, 4, seed, 1_000_000).unwrap().graph;
        assert!(4 * independence::max_i_independent(&g, 2).size <= 20);
    }
    for seed in 0..3 {
        let g = configmodel::sample_girth_conditioned(40, 6, seed, 10_000_000).unwrap().graph;
        assert!(10 * independence::max_i_independent(&g, 4).size <= 40);
    }
}
