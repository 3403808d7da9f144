//! Named graphs and voltage assignments used throughout the tests and the
//! CLI corpus.

use crate::algebra::rational::{rat, Rational};
use crate::graph::{EdgeSpec, WeightedGraph, ZVoltage};

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// One vertex with one loop per weight; loops are `s1, s2, ...`.
pub fn bouquet(weights: &[Rational]) -> WeightedGraph {
    let edges: Vec<EdgeSpec> = weights
        .iter()
        .enumerate()
        .map(|(i, w)| EdgeSpec::new(&format!("s{}", i + 1), "v", "v", w.clone()))
        .collect();
    WeightedGraph::from_edges(names(&["v"]), &edges).expect("bouquet")
}

/// Bouquet with two loops of weights `a`, `b`.
pub fn bouquet_b2(a: Rational, b: Rational) -> WeightedGraph {
    bouquet(&[a, b])
}

/// Bouquet with four loops.
pub fn bouquet_b4(w: [Rational; 4]) -> WeightedGraph {
    bouquet(&w)
}

/// Triangle `v1, v2, v3` with `W = [[0, b, a], [b, 0, c], [a, c, 0]]`:
/// `s1: v1 -> v2` (weight `b`), `s2: v2 -> v3` (`c`), `s3: v3 -> v1` (`a`).
pub fn triangle_k3(a: Rational, b: Rational, c: Rational) -> WeightedGraph {
    let edges = [
        EdgeSpec::new("s1", "v1", "v2", b),
        EdgeSpec::new("s2", "v2", "v3", c),
        EdgeSpec::new("s3", "v3", "v1", a),
    ];
    WeightedGraph::from_edges(names(&["v1", "v2", "v3"]), &edges).expect("triangle")
}

/// Two vertices joined by one edge.
pub fn single_edge(w: Rational) -> WeightedGraph {
    WeightedGraph::from_edges(names(&["v1", "v2"]), &[EdgeSpec::new("e", "v1", "v2", w)])
        .expect("single edge")
}

/// The cycle `C_n` with unit weights.
pub fn cycle(n: usize) -> WeightedGraph {
    let v: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<EdgeSpec> = (0..n)
        .map(|i| EdgeSpec::new(&format!("e{i}"), &v[i], &v[(i + 1) % n], rat(1)))
        .collect();
    WeightedGraph::from_edges(v, &edges).expect("cycle")
}

/// Unit-weight graph on `m` vertices with the given edge list.
pub fn random_graph(m: usize, edges: &[(usize, usize)]) -> WeightedGraph {
    let v: Vec<String> = (0..m).map(|i| format!("v{i}")).collect();
    let specs: Vec<EdgeSpec> = edges
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| EdgeSpec::new(&format!("e{k}"), &v[a], &v[b], rat(1)))
        .collect();
    WeightedGraph::from_edges(v, &specs).expect("graph")
}

/// Voltage values on the default orientation.
pub fn voltage(x: &WeightedGraph, values: &[&[i64]]) -> ZVoltage {
    let v: Vec<Vec<i64>> = values.iter().map(|v| v.to_vec()).collect();
    ZVoltage::from_orientation(x, &x.default_orientation(), &v).expect("voltage")
}

/// The bouquet tower with `alpha = (1, 1)`.
pub fn bouquet_tower_d1(a: Rational, b: Rational) -> (WeightedGraph, ZVoltage) {
    let x = bouquet_b2(a, b);
    let alpha = voltage(&x, &[&[1], &[1]]);
    (x, alpha)
}

/// The triangle tower with `alpha = (0, 0, 1)`.
pub fn triangle_tower(a: Rational, b: Rational, c: Rational) -> (WeightedGraph, ZVoltage) {
    let x = triangle_k3(a, b, c);
    let alpha = voltage(&x, &[&[0], &[0], &[1]]);
    (x, alpha)
}

/// The two-dimensional bouquet tower with `alpha = ((0, 1), (1, 0))`.
pub fn bouquet_tower_d2(a: Rational, b: Rational) -> (WeightedGraph, ZVoltage) {
    let x = bouquet_b2(a, b);
    let alpha = voltage(&x, &[&[0, 1], &[1, 0]]);
    (x, alpha)
}

/// Four-loop bouquet with `alpha = ((0, 1), (1, 0), (0, 0), (0, 0))`.
pub fn bouquet_b4_tower(w: [Rational; 4]) -> (WeightedGraph, ZVoltage) {
    let x = bouquet_b4(w);
    let alpha = voltage(&x, &[&[0, 1], &[1, 0], &[0, 0], &[0, 0]]);
    (x, alpha)
}
