use iwagraph::algebra::rational::{rat, ratio, Rational};
use iwagraph::algebra::Valuation;
use iwagraph::charelem::{char_element_by_orientation, char_element_direct, eval_char_element_checked};
use iwagraph::complexity::{characters, kappa_matrix_tree, product_formula_kappa};
use iwagraph::fixtures;
use iwagraph::graph::{
    enumerate_arborescences, tower_layer, EdgeSpec, Orientation, WeightedGraph, ZVoltage,
};
use iwagraph::invariants::{valuation_sum, valuation_sum_naive};
use proptest::prelude::*;

fn weight() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| ratio(n, d))
}

/// Connected graph: edge `k < m - 1` joins vertex `k + 1` to an earlier one,
/// the rest are arbitrary (loops and multi-edges included).
fn graph(max_vertices: usize, max_extra: usize) -> impl Strategy<Value = WeightedGraph> {
    (1..=max_vertices, 0..=max_extra).prop_flat_map(|(m, extra)| {
        let tree = (1..m).map(|v| (0..v).prop_map(move |u| (u, v))).collect::<Vec<_>>();
        let extras = prop::collection::vec((0..m, 0..m), extra);
        let weights = prop::collection::vec(weight(), m - 1 + extra);
        (tree, extras, weights).prop_map(move |(tree, extras, weights)| {
            let names: Vec<String> = (0..m).map(|i| format!("v{i}")).collect();
            let specs: Vec<EdgeSpec> = tree
                .iter()
                .chain(&extras)
                .zip(&weights)
                .enumerate()
                .map(|(k, (&(a, b), w))| EdgeSpec::new(&format!("e{k}"), &names[a], &names[b], w.clone()))
                .collect();
            WeightedGraph::from_edges(names, &specs).unwrap()
        })
    })
}

fn voltage_graph(d: usize) -> impl Strategy<Value = (WeightedGraph, ZVoltage)> {
    graph(4, 3).prop_flat_map(move |x| {
        let l = x.num_edges();
        (Just(x), prop::collection::vec(prop::collection::vec(-2i64..=2, d), l)).prop_map(|(x, v)| {
            let alpha = ZVoltage::from_orientation(&x, &x.default_orientation(), &v).unwrap();
            (x, alpha)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn matrix_tree_matches_arborescences(x in graph(6, 4)) {
        let oracle = enumerate_arborescences(&x, 0).unwrap();
        prop_assert_eq!(kappa_matrix_tree(&x), oracle.weight_sum);
    }

    #[test]
    fn char_element_vanishes_at_one((x, alpha) in voltage_graph(1)) {
        let q = char_element_direct(&x, &alpha, 2).unwrap();
        prop_assert_eq!(q.poly.eval_at_one(), rat(0));
    }

    #[test]
    fn routes_agree((x, alpha) in voltage_graph(2)) {
        let direct = char_element_direct(&x, &alpha, 3).unwrap();
        let route = char_element_by_orientation(&x, &x.default_orientation(), &alpha, 3).unwrap();
        prop_assert_eq!(route.char_element.poly, direct.poly);
    }

    #[test]
    fn orientation_choice_is_irrelevant((x, alpha) in voltage_graph(1), flips in prop::collection::vec(any::<bool>(), 8)) {
        let s = x.default_orientation();
        let darts: Vec<usize> = s
            .darts()
            .iter()
            .zip(flips.iter().cycle())
            .map(|(&e, &f)| if f { x.inverse(e) } else { e })
            .collect();
        let t = Orientation::new(&x, darts).unwrap();
        let a = char_element_by_orientation(&x, &s, &alpha, 2).unwrap();
        let b = char_element_by_orientation(&x, &t, &alpha, 2).unwrap();
        prop_assert_eq!(a.char_element.poly, b.char_element.poly);
    }

    #[test]
    fn evaluation_matches_h_values((x, alpha) in voltage_graph(1), n in 0u32..=2) {
        let q = char_element_direct(&x, &alpha, 2).unwrap();
        let (g, _) = alpha.reduce(2, n);
        for psi in characters(&g).unwrap() {
            prop_assert!(eval_char_element_checked(&q, &x, &alpha, n, &psi).is_ok());
        }
    }

    #[test]
    fn valuation_sum_routes_agree((x, alpha) in voltage_graph(2), n in 1u32..=2) {
        let q = char_element_direct(&x, &alpha, 2).unwrap();
        if !q.is_zero() {
            match (valuation_sum(&q, n), valuation_sum_naive(&q, n)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "fast {:?} vs naive {:?}", a, b),
            }
        }
    }
}

#[test]
fn product_formula_on_tower_layers() {
    let (x, alpha) = fixtures::bouquet_tower_d2(rat(1), rat(1));
    for n in 0..=2 {
        let (g, beta) = alpha.reduce(2, n);
        let r = product_formula_kappa(&x, &g, &beta).unwrap();
        let layer = tower_layer(&x, &alpha, 2, n).unwrap();
        assert_eq!(r.kappa_direct, kappa_matrix_tree(layer.graph()));
        assert_eq!(r.kappa_direct, r.kappa_product);
    }
}

#[test]
fn triangle_layers_are_cycles() {
    let (x, alpha) = fixtures::triangle_tower(rat(1), rat(1), rat(1));
    for n in 0..=3 {
        let layer = tower_layer(&x, &alpha, 2, n).unwrap();
        let k = kappa_matrix_tree(layer.graph());
        assert_eq!(k, rat(3 << n));
    }
}

#[test]
fn bouquet_layer_valuations() {
    let (x, alpha) = fixtures::bouquet_tower_d1(rat(1), rat(1));
    let q = char_element_direct(&x, &alpha, 2).unwrap();
    let expected = [0, 2, 5, 10, 19];
    for (n, &v) in expected.iter().enumerate() {
        let k = if n <= 3 {
            let layer = tower_layer(&x, &alpha, 2, n as u32).unwrap();
            Valuation::Finite(rat(
                iwagraph::algebra::rational::val_p_rational_i64(&kappa_matrix_tree(layer.graph()), 2).unwrap(),
            ))
        } else {
            // v(kappa_n) = v(kappa_0) - dn + sum of character valuations
            Valuation::Finite(valuation_sum(&q, n as u32).unwrap() - rat(n as i64))
        };
        assert_eq!(k, Valuation::from_i64(v), "n = {n}");
    }
}
