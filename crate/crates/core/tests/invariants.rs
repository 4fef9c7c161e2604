use proptest::prelude::*;

use wsat_core::bounds::{gamma_count_params, gamma_graph_m, gamma_shadow, gamma_subgraph, lb_gamma};
use wsat_core::combinatorics::binom;
use wsat_core::corpus::pattern_corpus;
use wsat_core::count_polymatroid::{poly_rho, CountParams};
use wsat_core::hypergraph::sparseness;
use wsat_core::rational::{self, Rational};
use wsat_core::rhosat::{check_count_poly_feasible, solve_rhosat, SolveMode};
use wsat_core::wsat::{closure, wsat_exact, Family, WsatOptions};
use wsat_core::{Caps, Hypergraph};

fn graphs() -> Vec<Hypergraph> {
    pattern_corpus(2, 2, 5, &Caps::default()).unwrap()
}

fn ceil(x: &Rational) -> i64 {
    x.ceil().to_integer().try_into().unwrap()
}

#[test]
fn graph_gamma_two_matches_subgraph_form() {
    let caps = Caps::default();
    let mut checked = 0;
    for h in graphs().iter().filter(|h| h.n() > 2) {
        let g2 = gamma_graph_m(h, 2, &caps).unwrap().value;
        assert_eq!(g2, gamma_subgraph(h, 2, &caps).unwrap().value, "{h:?}");
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn graph_gamma_monotone_in_m() {
    let caps = Caps::default();
    for h in graphs().iter().filter(|h| h.n() > 2) {
        let g1 = gamma_graph_m(h, 1, &caps).unwrap().value;
        let g2 = gamma_graph_m(h, 2, &caps).unwrap().value;
        assert!(g1 <= g2, "{h:?}: {g1} > {g2}");
    }
}

#[test]
fn subgraph_and_shadow_forms_agree_on_triple_systems() {
    let caps = Caps::default();
    for h in pattern_corpus(3, 3, 5, &caps).unwrap() {
        let s = sparseness(&h);
        if s < 2 {
            continue;
        }
        for level in 2..=s as usize {
            let a = gamma_subgraph(&h, level, &caps).unwrap().value;
            let b = gamma_shadow(&h, level, &caps).unwrap().value;
            assert_eq!(a, b, "{h:?} at s = {level}");
        }
    }
}

#[test]
fn lp_value_sits_between_certificate_and_wsat() {
    let caps = Caps::default();
    let mut compared = 0;
    for h in graphs().into_iter().chain(pattern_corpus(3, 3, 4, &caps).unwrap()) {
        if sparseness(&h) < 2 {
            continue;
        }
        let params = gamma_count_params(&h, &caps).unwrap();
        for n in h.n()..=h.n() + 1 {
            if binom(n as u64, h.r() as u64) > caps.lp_exact_edges as u128 {
                continue;
            }
            let lp = solve_rhosat(&h, n, SolveMode::Exact, &caps).unwrap();
            let value = lp.value.clone().unwrap();
            let fam = Family::single(&h).unwrap();
            let w = wsat_exact(n, &fam, &WsatOptions::default(), &caps).unwrap().value;
            assert!(value <= rational::int(w as i64), "{h:?} n={n}");
            let feas = check_count_poly_feasible(&h, n, &params, 1, &caps).unwrap();
            assert!(feas.feasible, "{h:?} n={n}: {:?}", feas.first_failure);
            if let Some(bound) = &feas.bound {
                assert!(&value >= bound, "{h:?} n={n}: {value} < {bound}");
                assert_eq!(bound, &lb_gamma(&h, n, &caps).unwrap());
            }
            compared += 1;
        }
    }
    assert!(compared > 10);
}

#[test]
fn lb_gamma_ceiling_never_exceeds_wsat() {
    let caps = Caps::default();
    for h in graphs() {
        if sparseness(&h) < 2 {
            continue;
        }
        let fam = Family::single(&h).unwrap();
        for n in h.n()..=6 {
            let w = wsat_exact(n, &fam, &WsatOptions::default(), &caps).unwrap().value as i64;
            assert!(ceil(&lb_gamma(&h, n, &caps).unwrap()) <= w, "{h:?} n={n}");
        }
    }
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Hypergraph> {
    (3..=max_n).prop_flat_map(|n| {
        let pairs: Vec<Vec<usize>> = (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])).collect();
        let k = pairs.len();
        proptest::collection::vec(any::<bool>(), k).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(e, _)| e.clone());
            Hypergraph::new(n, 2, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_graphs_gamma_forms_agree(g in arb_graph(7)) {
        let caps = Caps::default();
        let h = g.compact();
        prop_assume!(h.n() > 2 && sparseness(&h) >= 2);
        let sub = gamma_subgraph(&h, 2, &caps).unwrap().value;
        prop_assert_eq!(&sub, &gamma_shadow(&h, 2, &caps).unwrap().value);
        prop_assert_eq!(&sub, &gamma_graph_m(&h, 2, &caps).unwrap().value);
    }

    #[test]
    fn closure_is_idempotent_and_extensive(g in arb_graph(7)) {
        let caps = Caps::default();
        let fam = Family::single(&Hypergraph::complete(3, 2)).unwrap();
        let c = closure(&g, &fam, &caps).unwrap().closure;
        prop_assert!(g.edges().iter().all(|e| c.edges().contains(e)));
        prop_assert_eq!(closure(&c, &fam, &caps).unwrap().closure, c);
    }

    #[test]
    fn poly_rho_bounded_and_monotone(g in arb_graph(5), a0 in -6i64..=3, a1 in 0i64..=3) {
        let caps = Caps::default();
        let params = CountParams::from_integers(2, &[a0, a1, 0]).unwrap();
        let rho = poly_rho(&g, &params, &caps).unwrap();
        prop_assert!(rho >= rational::int(0));
        prop_assert!(rho <= rational::int(g.num_edges() as i64));
        if let Some((_, rest)) = g.edges().split_last() {
            let smaller = Hypergraph::from_masks(g.n(), 2, rest.to_vec()).unwrap();
            prop_assert!(poly_rho(&smaller, &params, &caps).unwrap() <= rho);
        }
    }
}
