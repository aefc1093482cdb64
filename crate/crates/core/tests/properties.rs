use eigenratio::edgelist::{parse_edge_list, write_edge_list};
use eigenratio::expander::{c_expander_check, haemers_check};
use eigenratio::generators::{circulant, gnp, random_regular, random_tree, Seed};
use eigenratio::graph::edge_boundary;
use eigenratio::linalg::{health_check, laplacian, laplacian_spectrum, rayleigh};
use eigenratio::low_degree::cut_bound;
use eigenratio::regular::{
    build_pair_vectors, check_lemma41, farthest_edge_pair, k_for_distance, orthogonality_defect, SineSequence,
};
use eigenratio::suite::random_haemers_instance;
use eigenratio::{Graph, VertexSet};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn connected_gnp(n: usize, p: f64, seed: u64) -> Option<Graph> {
    let g = gnp(n, p, Seed(seed)).ok()?;
    (g.m() > 0 && g.is_connected()).then_some(g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectrum_health(n in 2usize..30, p in 0.1f64..0.9, seed in any::<u64>()) {
        let g = gnp(n, p, Seed(seed)).unwrap();
        prop_assume!(g.m() > 0);
        let spec = laplacian_spectrum(&g).unwrap();
        let h = health_check(&g, &spec, None).unwrap();
        prop_assert!(h.ok(), "{h:?}");
        prop_assert!(spec.lambda(1).abs() < 1e-9);
        let zero = spec.multiplicity_near(0.0, 1e-8);
        prop_assert_eq!(zero, eigenratio::graph::components(&g).len());
    }

    #[test]
    fn regular_duality(half in 5usize..20, d in 2usize..6, seed in any::<u64>()) {
        let n = 2 * half;
        prop_assume!(d < n);
        let g = random_regular(n, d, Seed(seed)).unwrap();
        let h = health_check(&g, &laplacian_spectrum(&g).unwrap(), None).unwrap();
        prop_assert!(h.duality_error.unwrap() < 1e-8);
    }

    #[test]
    fn ratio_is_relabeling_invariant(n in 3usize..20, p in 0.2f64..0.9, seed in any::<u64>()) {
        let Some(g) = connected_gnp(n, p, seed) else { return Ok(()) };
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let a = eigenratio::eigenratio(&g).unwrap();
        let b = eigenratio::eigenratio(&g.relabel(&perm).unwrap()).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
        prop_assert!(a > 0.0 && a <= 1.0 + 1e-12);
    }

    #[test]
    fn pair_vectors_are_consistent(half in 20usize..80, seed in any::<u64>()) {
        let g = random_regular(2 * half, 3, Seed(seed)).unwrap();
        let (e, f, dist) = farthest_edge_pair(&g).unwrap();
        let Some(k) = k_for_distance(dist) else { return Ok(()) };
        let k = k.min(2 * half);
        let pair = build_pair_vectors(&g, e, f, k).unwrap();
        prop_assert!(orthogonality_defect(&pair.x) < 1e-10);
        prop_assert!(pair.beta > 0.0);
        prop_assert_eq!(pair.support(), (0..g.n()).filter(|&v| pair.y[v] != 0.0).collect::<Vec<_>>());
        let lap = laplacian(&g);
        let direct = rayleigh(&lap, &pair.x).unwrap();
        prop_assert!((direct - pair.phi_x()).abs() <= 1e-10 * direct.max(1.0));
        if g.is_connected() {
            let c = check_lemma41(&g, e, f, k).unwrap();
            prop_assert!(c.holds(), "{c:?}");
        }
    }

    #[test]
    fn lemma41_on_circulants(n in 30usize..160, d in 1usize..4) {
        let offsets: Vec<usize> = (1..=d).collect();
        let g = circulant(n, &offsets).unwrap();
        let (e, f, dist) = farthest_edge_pair(&g).unwrap();
        let Some(k) = k_for_distance(dist) else { return Ok(()) };
        prop_assert!(check_lemma41(&g, e, f, k).unwrap().holds());
    }

    #[test]
    fn sine_sequence_is_monotone(d in 5usize..40, k in 1usize..=50) {
        let s = SineSequence::new(d, k).unwrap();
        prop_assert!(s.is_monotone());
        prop_assert!(s.ratio_bound_holds());
        prop_assert!(s.recurrence_residual() < 1e-12);
    }

    #[test]
    fn haemers_never_violated(seed in any::<u64>()) {
        let mut rng = Seed(seed).rng();
        let (g, x, y) = random_haemers_instance(&mut rng, 40).unwrap();
        let h = haemers_check(&g, &x, &y).unwrap();
        prop_assert!(h.pass, "{h:?}");
    }

    #[test]
    fn cut_bound_holds(n in 4usize..25, seed in any::<u64>(), mask in any::<u32>()) {
        let t = random_tree(n, Seed(seed)).unwrap();
        let s: VertexSet = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        prop_assume!(!s.is_empty() && s.len() < n);
        let w = cut_bound(&t, &s).unwrap();
        prop_assert!(w.boundary == edge_boundary(&t, &s).unwrap());
        let lambda2 = laplacian_spectrum(&t).unwrap().lambda(2);
        prop_assert!(lambda2 <= w.bound + 1e-9);
    }

    #[test]
    fn expander_verdict_is_relabeling_invariant(n in 4usize..13, p in 0.2f64..0.95, seed in any::<u64>(), c in 1.0f64..4.0) {
        let g = gnp(n, p, Seed(seed)).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 1));
        let a = c_expander_check(&g, c).unwrap();
        let b = c_expander_check(&g.relabel(&perm).unwrap(), c).unwrap();
        prop_assert_eq!((a.cond_a, a.cond_b), (b.cond_a, b.cond_b));
    }

    #[test]
    fn edge_list_round_trip(n in 1usize..30, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = gnp(n, p, Seed(seed)).unwrap();
        prop_assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }
}
