//! Derived covers `X(G, alpha)` and `Z_p^d`-tower layers.

use crate::algebra::linalg::rank_mod_p;
use crate::algebra::rational::check_prime;
use crate::error::{Error, Result};
use crate::graph::digraph::{Dart, Orientation, WeightedGraph};
use crate::graph::group::FiniteGroup;
use crate::graph::voltage::{FiniteVoltage, ZVoltage};
use std::collections::VecDeque;

/// The derived graph of a voltage assignment with its projection and deck
/// action. Vertex `(v, g)` has index `v |G| + g`, dart `(e, g)` has index
/// `e |G| + g`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    graph: WeightedGraph,
    group: FiniteGroup,
    base_vertices: usize,
    base_darts: usize,
}

impl Cover {
    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn into_graph(self) -> WeightedGraph {
        self.graph
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// `[Y : X] = |G|`.
    pub fn degree(&self) -> usize {
        self.group.order()
    }

    pub fn vertex_projection(&self, v: usize) -> usize {
        v / self.group.order()
    }

    pub fn dart_projection(&self, e: usize) -> usize {
        e / self.group.order()
    }

    pub fn vertex_sheet(&self, v: usize) -> usize {
        v % self.group.order()
    }

    pub fn dart_sheet(&self, e: usize) -> usize {
        e % self.group.order()
    }

    pub fn vertex_at(&self, v: usize, g: usize) -> usize {
        v * self.group.order() + g
    }

    pub fn dart_at(&self, e: usize, g: usize) -> usize {
        e * self.group.order() + g
    }

    /// Deck transformation `(v, h) -> (v, g h)`.
    pub fn deck_vertex(&self, g: usize, v: usize) -> usize {
        self.vertex_at(self.vertex_projection(v), self.group.mul(g, self.vertex_sheet(v)))
    }

    /// Deck transformation `(e, h) -> (e, g h)`.
    pub fn deck_dart(&self, g: usize, e: usize) -> usize {
        self.dart_at(self.dart_projection(e), self.group.mul(g, self.dart_sheet(e)))
    }

    /// The orientation of the cover consisting of all lifts of `s`.
    pub fn lifted_orientation(&self, s: &Orientation) -> Orientation {
        let n = self.group.order();
        let darts = s
            .darts()
            .iter()
            .flat_map(|&e| (0..n).map(move |g| e * n + g))
            .collect();
        Orientation::new(&self.graph, darts).expect("lifted orientation")
    }

    pub fn base_vertices(&self) -> usize {
        self.base_vertices
    }

    pub fn base_darts(&self) -> usize {
        self.base_darts
    }
}

/// Builds `X(G, beta)`: `o((e, g)) = (o(e), g)`, `t((e, g)) = (t(e), g beta(e))`,
/// inverse `(e, g) -> (inverse e, g beta(e))`, weights pulled back.
pub fn derived_cover(x: &WeightedGraph, group: &FiniteGroup, beta: &FiniteVoltage) -> Cover {
    let n = group.order();
    let plain = n == 1;
    let vname = |v: usize, g: usize| {
        if plain {
            x.vertices()[v].clone()
        } else {
            format!("{}@{}", x.vertices()[v], group.name(g))
        }
    };
    let mut vertices = Vec::with_capacity(x.num_vertices() * n);
    for v in 0..x.num_vertices() {
        for g in 0..n {
            vertices.push(vname(v, g));
        }
    }
    let mut darts = Vec::with_capacity(x.num_darts() * n);
    let mut inverse = Vec::with_capacity(x.num_darts() * n);
    for (e, d) in x.darts().iter().enumerate() {
        let b = beta.value(e);
        for g in 0..n {
            let gb = group.mul(g, b);
            darts.push(Dart {
                id: if plain {
                    d.id.clone()
                } else {
                    format!("{}@{}", d.id, group.name(g))
                },
                origin: d.origin * n + g,
                terminus: d.terminus * n + gb,
                weight: d.weight.clone(),
            });
            inverse.push(x.inverse(e) * n + gb);
        }
    }
    Cover {
        graph: WeightedGraph::from_parts(vertices, darts, inverse).expect("consistent sizes"),
        group: group.clone(),
        base_vertices: x.num_vertices(),
        base_darts: x.num_darts(),
    }
}

/// BFS spanning tree from vertex 0: for each vertex the tree dart used to
/// reach it, in discovery order.
fn spanning_tree(x: &WeightedGraph) -> Result<Vec<(usize, Option<usize>)>> {
    if !x.is_connected() {
        return Err(Error::Disconnected("base graph is disconnected".into()));
    }
    let m = x.num_vertices();
    let mut out_darts = vec![vec![]; m];
    for (e, d) in x.darts().iter().enumerate() {
        out_darts[d.origin].push(e);
    }
    let mut seen = vec![false; m];
    seen[0] = true;
    let mut order = vec![(0, None)];
    let mut q = VecDeque::from([0]);
    while let Some(v) = q.pop_front() {
        for &e in &out_darts[v] {
            let t = x.dart(e).terminus;
            if !seen[t] {
                seen[t] = true;
                order.push((t, Some(e)));
                q.push_back(t);
            }
        }
    }
    Ok(order)
}

/// Net voltages `tau(o(e)) beta(e) tau(t(e))^{-1}` of all darts relative to a
/// spanning tree; these generate the image of the closed walks at the root.
pub fn net_voltages(x: &WeightedGraph, group: &FiniteGroup, beta: &FiniteVoltage) -> Result<Vec<usize>> {
    let tree = spanning_tree(x)?;
    let mut tau = vec![group.identity(); x.num_vertices()];
    for &(v, via) in &tree {
        if let Some(e) = via {
            tau[v] = group.mul(tau[x.dart(e).origin], beta.value(e));
        }
    }
    Ok((0..x.num_darts())
        .map(|e| {
            let d = x.dart(e);
            group.mul(group.mul(tau[d.origin], beta.value(e)), group.inv(tau[d.terminus]))
        })
        .collect())
}

/// Whether `X(G, beta)` is connected: the net voltages must generate `G`.
pub fn cover_is_connected(x: &WeightedGraph, group: &FiniteGroup, beta: &FiniteVoltage) -> Result<bool> {
    let nets = net_voltages(x, group, beta)?;
    Ok(group.generated_order(&nets) == group.order())
}

/// Net voltage vectors of a `Z^d` assignment.
pub fn net_voltage_vectors(x: &WeightedGraph, alpha: &ZVoltage) -> Result<Vec<Vec<i64>>> {
    let d = alpha.dims();
    let tree = spanning_tree(x)?;
    let mut tau = vec![vec![0i64; d]; x.num_vertices()];
    for &(v, via) in &tree {
        if let Some(e) = via {
            let o = x.dart(e).origin;
            tau[v] = tau[o].iter().zip(alpha.value(e)).map(|(a, b)| a + b).collect();
        }
    }
    Ok((0..x.num_darts())
        .map(|e| {
            let dd = x.dart(e);
            (0..d)
                .map(|i| tau[dd.origin][i] + alpha.value(e)[i] - tau[dd.terminus][i])
                .collect()
        })
        .collect())
}

/// Whether every layer `X(Gamma_n, alpha_n)` is connected: the net voltage
/// vectors must span `F_p^d`.
pub fn tower_connected(x: &WeightedGraph, alpha: &ZVoltage, p: u64) -> Result<bool> {
    check_prime(p)?;
    let nets = net_voltage_vectors(x, alpha)?;
    Ok(alpha.dims() == 0 || rank_mod_p(&nets, p) == alpha.dims())
}

/// The `n`-th layer `X(Gamma_n, alpha_n)` with `Gamma_n = (Z/p^n)^d`.
pub fn tower_layer(x: &WeightedGraph, alpha: &ZVoltage, p: u64, n: u32) -> Result<Cover> {
    if !tower_connected(x, alpha, p)? {
        return Err(Error::Disconnected(format!(
            "net voltages do not span F_{p}^{}, so the tower layers are disconnected",
            alpha.dims()
        )));
    }
    let (group, beta) = alpha.reduce(p, n);
    Ok(derived_cover(x, &group, &beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::fixtures;
    use crate::graph::digraph::validate_graph;
    use proptest::prelude::*;

    fn z(values: &[&[i64]], x: &WeightedGraph) -> ZVoltage {
        let v: Vec<Vec<i64>> = values.iter().map(|v| v.to_vec()).collect();
        ZVoltage::from_orientation(x, &x.default_orientation(), &v).unwrap()
    }

    fn is_cycle(g: &WeightedGraph, len: usize) -> bool {
        g.num_vertices() == len
            && g.num_edges() == len
            && (0..len).all(|v| g.degree(v) == 2)
            && g.is_connected()
    }

    #[test]
    fn bouquet_double_cover() {
        let x = fixtures::bouquet_b2(rat(1), rat(1));
        let a = z(&[&[1], &[1]], &x);
        let c = tower_layer(&x, &a, 2, 1).unwrap();
        let g = c.graph();
        assert_eq!((g.num_vertices(), g.num_edges()), (2, 4));
        assert!(validate_graph(g).valid);
        assert_eq!(g.weighted_matrix().get(0, 1), &rat(4));
        assert_eq!(g.weighted_matrix().get(0, 0), &rat(0));
    }

    #[test]
    fn triangle_layers_are_cycles() {
        let x = fixtures::triangle_k3(rat(1), rat(1), rat(1));
        let a = z(&[&[0], &[0], &[1]], &x);
        assert!(is_cycle(tower_layer(&x, &a, 2, 1).unwrap().graph(), 6));
        assert!(is_cycle(tower_layer(&x, &a, 2, 2).unwrap().graph(), 12));
    }

    #[test]
    fn torus_first_layer() {
        let x = fixtures::bouquet_b2(rat(1), rat(1));
        let a = z(&[&[0, 1], &[1, 0]], &x);
        assert!(tower_connected(&x, &a, 2).unwrap());
        let g = tower_layer(&x, &a, 2, 1).unwrap().into_graph();
        assert_eq!((g.num_vertices(), g.num_edges()), (4, 8));
        assert!(validate_graph(&g).valid);
    }

    #[test]
    fn layer_zero_and_trivial_group_copy_the_base() {
        let x = fixtures::bouquet_b2(rat(2), rat(3));
        let a = z(&[&[1], &[1]], &x);
        assert_eq!(tower_layer(&x, &a, 2, 0).unwrap().into_graph(), x);
        let t = FiniteGroup::trivial();
        assert_eq!(derived_cover(&x, &t, &FiniteVoltage::trivial(&x, &t)).into_graph(), x);
    }

    #[test]
    fn trivial_voltages_disconnect() {
        let x = fixtures::triangle_k3(rat(1), rat(1), rat(1));
        let g = FiniteGroup::abelian(&[2]).unwrap();
        let beta = FiniteVoltage::trivial(&x, &g);
        assert!(!cover_is_connected(&x, &g, &beta).unwrap());
        assert!(!derived_cover(&x, &g, &beta).graph().is_connected());
        let a = z(&[&[0], &[0], &[0]], &x);
        assert!(tower_layer(&x, &a, 2, 1).is_err());
        let two = WeightedGraph::from_edges(vec!["a".into(), "b".into()], &[]).unwrap();
        assert!(cover_is_connected(&two, &g, &FiniteVoltage::trivial(&two, &g)).is_err());
    }

    #[test]
    fn deck_action_commutes_with_projection() {
        let x = fixtures::bouquet_b4([rat(1), rat(2), rat(3), rat(4)]);
        let q = FiniteGroup::quaternion();
        let s = x.default_orientation();
        let vals = [
            q.identity(),
            q.identity(),
            q.element("i").unwrap(),
            q.element("j").unwrap(),
        ];
        let beta = FiniteVoltage::from_orientation(&x, &s, &q, &vals).unwrap();
        let c = derived_cover(&x, &q, &beta);
        let y = c.graph();
        assert!(validate_graph(y).valid);
        assert_eq!(y.num_darts(), x.num_darts() * 8);
        for g in 0..8 {
            for e in 0..y.num_darts() {
                let h = c.deck_dart(g, e);
                assert_eq!(c.dart_projection(h), c.dart_projection(e));
                assert_eq!(y.dart(h).weight, y.dart(e).weight);
                assert_eq!(y.dart(h).origin, c.deck_vertex(g, y.dart(e).origin));
                assert_eq!(y.dart(h).terminus, c.deck_vertex(g, y.dart(e).terminus));
                assert_eq!(y.inverse(h), c.deck_dart(g, y.inverse(e)));
            }
        }
        // Local bijectivity on out-darts.
        for v in 0..y.num_vertices() {
            let mut proj: Vec<usize> = y.out_darts(v).iter().map(|&e| c.dart_projection(e)).collect();
            proj.sort();
            assert_eq!(proj, x.out_darts(c.vertex_projection(v)));
        }
    }

    #[test]
    fn layers_are_quotients_of_the_next() {
        let x = fixtures::bouquet_b2(rat(1), rat(2));
        let a = z(&[&[0, 1], &[1, 2]], &x);
        let p = 2;
        for n in 0..2u32 {
            let lo = tower_layer(&x, &a, p, n).unwrap();
            let hi = tower_layer(&x, &a, p, n + 1).unwrap();
            let m = p.pow(n);
            let down = |c: &Cover, v: usize, hi_group: &FiniteGroup| {
                let coords = hi_group.coords(c.vertex_sheet(v)).unwrap();
                let reduced: Vec<u64> = coords.iter().map(|k| k % m).collect();
                lo.vertex_at(c.vertex_projection(v), lo.group().from_coords(&reduced).unwrap())
            };
            for (e, d) in hi.graph().darts().iter().enumerate() {
                let base = hi.dart_projection(e);
                let coords = hi.group().coords(hi.dart_sheet(e)).unwrap();
                let reduced: Vec<u64> = coords.iter().map(|k| k % m).collect();
                let le = lo.dart_at(base, lo.group().from_coords(&reduced).unwrap());
                let ld = lo.graph().dart(le);
                assert_eq!(ld.origin, down(&hi, d.origin, hi.group()));
                assert_eq!(ld.terminus, down(&hi, d.terminus, hi.group()));
                assert_eq!(ld.weight, d.weight);
            }
        }
    }

    proptest! {
        #[test]
        fn connectivity_criterion_matches_bfs(
            m in 1usize..5,
            edges in prop::collection::vec((0usize..5, 0usize..5, 0usize..4), 1..6),
            shape in prop::sample::select(vec![vec![2u64], vec![3], vec![4], vec![2, 2]]),
        ) {
            let g = FiniteGroup::abelian(&shape).unwrap();
            let x = fixtures::random_graph(m, &edges.iter().map(|&(a, b, _)| (a % m, b % m)).collect::<Vec<_>>());
            prop_assume!(x.is_connected());
            let s = x.default_orientation();
            let vals: Vec<usize> = edges.iter().map(|&(_, _, k)| k % g.order()).collect();
            let beta = FiniteVoltage::from_orientation(&x, &s, &g, &vals[..s.len()]).unwrap();
            let by_criterion = cover_is_connected(&x, &g, &beta).unwrap();
            prop_assert_eq!(by_criterion, derived_cover(&x, &g, &beta).graph().is_connected());
        }

        #[test]
        fn tower_criterion_matches_bfs(
            edges in prop::collection::vec((0usize..3, 0usize..3, -2i64..3, -2i64..3), 1..5),
            p in prop::sample::select(vec![2u64, 3]),
        ) {
            let x = fixtures::random_graph(3, &edges.iter().map(|&(a, b, _, _)| (a, b)).collect::<Vec<_>>());
            prop_assume!(x.is_connected());
            let vals: Vec<Vec<i64>> = edges.iter().map(|&(_, _, s, t)| vec![s, t]).collect();
            let a = ZVoltage::from_orientation(&x, &x.default_orientation(), &vals).unwrap();
            let crit = tower_connected(&x, &a, p).unwrap();
            for n in 1..=2u32 {
                let (g, beta) = a.reduce(p, n);
                prop_assert_eq!(crit, derived_cover(&x, &g, &beta).graph().is_connected());
            }
        }
    }
}
