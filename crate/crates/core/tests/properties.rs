use proptest::prelude::*;

use stringsep::congestion::{congestion, decompose_to_paths, Caps, Mode};
use stringsep::cuts::{find_separator, fhl_sweep, ratio_f64};
use stringsep::embedding::{bourgain_sample, lipschitz_violation};
use stringsep::experiments::{all_counts_even, even_subword};
use stringsep::graph::{check_separator, complete, generate, gnp_connected, grid, Family};
use stringsep::metrics::{edge_sparsity_exact, vertex_sparsity_exact, vertex_weight_metric};
use stringsep::Rational;

#[test]
fn generator_edge_counts() {
    for n in 1..15 {
        assert_eq!(complete(n).m(), n * (n - 1) / 2);
        assert_eq!(generate(Family::Complete, &[n], None).unwrap().m(), n * (n - 1) / 2);
    }
    for a in 1..6 {
        for b in 1..6 {
            assert_eq!(grid(a, b).m(), 2 * a * b - a - b);
            assert_eq!(generate(Family::Grid, &[a, b], None).unwrap().m(), 2 * a * b - a - b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn separator_is_always_valid(n in 2usize..16, p in 0.1f64..0.8, seed in any::<u64>()) {
        let g = gnp_connected(n, p, seed).unwrap();
        let r = find_separator(&g, seed).unwrap();
        prop_assert!(check_separator(&g, &r.cut).unwrap().valid);
    }

    #[test]
    fn congestion_sandwich(n in 3usize..9, p in 0.2f64..0.7, seed in any::<u64>()) {
        let g = gnp_connected(n, p, seed).unwrap();
        let e = congestion(&g, Mode::Edge, Caps::UNLIMITED).unwrap();
        let espars = ratio_f64(edge_sparsity_exact(&g).unwrap().0);
        prop_assert!(1.0 / e.congestion <= espars + 1e-9);
        let v = congestion(&g, Mode::Vertex, Caps::UNLIMITED).unwrap();
        if !g.is_complete() {
            let vspars = ratio_f64(vertex_sparsity_exact(&g).unwrap().0);
            prop_assert!(v.congestion >= 1.0 / (4.0 * vspars) - 1e-9);
        }
        for sol in [&e, &v] {
            let phi = decompose_to_paths(&g, sol).unwrap();
            prop_assert_eq!(phi.commodities.len(), n * (n - 1) / 2);
            for c in &phi.commodities {
                let total: f64 = c.paths.iter().map(|(_, w)| w).sum();
                prop_assert!((total - 1.0).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn sweep_bounds(n in 3usize..11, p in 0.2f64..0.7, seed in any::<u64>(), w in prop::collection::vec(0.1f64..3.0, 10)) {
        let g = gnp_connected(n, p, seed).unwrap();
        let s = &w[..n];
        let d = vertex_weight_metric(&g, s).unwrap();
        let f = bourgain_sample(&d, seed).f;
        prop_assume!(f.iter().any(|&x| x != f[0]));
        let r = fhl_sweep(&g, s, &f).unwrap();
        let alpha = r.best.sparsity;
        prop_assert!(ratio_f64(alpha) <= r.bound + 1e-9);
        if !g.is_complete() {
            prop_assert!(alpha >= vertex_sparsity_exact(&g).unwrap().0);
        }
        for st in &r.steps {
            prop_assert!(Rational::from(st.cut.s.len() as i64) >= alpha * Rational::from((st.i * (n - st.i)) as i64));
        }
    }

    #[test]
    fn embeddings_are_deterministic_and_lipschitz(n in 2usize..20, p in 0.1f64..0.6, seed in any::<u64>()) {
        let g = gnp_connected(n, p, seed).unwrap();
        let d = vertex_weight_metric(&g, &vec![1.0; n]).unwrap();
        let e = bourgain_sample(&d, seed);
        prop_assert_eq!(&e, &bourgain_sample(&d, seed));
        prop_assert!(lipschitz_violation(&d, &e.f, 1e-12).is_none());
    }

    #[test]
    fn even_subword_recount(w in prop::collection::vec(0u8..4, 0..30)) {
        match even_subword(&w) {
            Some((s, e)) => prop_assert!(s < e && all_counts_even(&w[s..e])),
            None => prop_assert!(w.len() < 16),
        }
    }
}
