//! Brute-force enumeration of spanning arborescences.

use crate::algebra::rational::Rational;
use crate::error::{Error, Result};
use crate::graph::digraph::WeightedGraph;
use num_traits::{One, Zero};

pub const MAX_ORACLE_VERTICES: usize = 12;

/// All spanning arborescences rooted at a vertex and their total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Arborescences {
    pub root: usize,
    /// Each arborescence as its dart list, one dart into every non-root
    /// vertex, ordered by target vertex.
    pub trees: Vec<Vec<usize>>,
    /// Sum over arborescences of the product of dart weights.
    pub weight_sum: Rational,
}

/// Enumerates arborescences with a path from `root` to every vertex.
pub fn enumerate_arborescences(x: &WeightedGraph, root: usize) -> Result<Arborescences> {
    let m = x.num_vertices();
    if m > MAX_ORACLE_VERTICES {
        return Err(Error::TooLarge {
            vertices: m,
            limit: MAX_ORACLE_VERTICES,
        });
    }
    if root >= m {
        return Err(Error::InvalidGraph(format!("root {root} out of range")));
    }
    let targets: Vec<usize> = (0..m).filter(|&v| v != root).collect();
    let in_darts: Vec<Vec<usize>> = (0..m)
        .map(|v| {
            (0..x.num_darts())
                .filter(|&e| x.dart(e).terminus == v && x.dart(e).origin != v)
                .collect()
        })
        .collect();
    let mut parent: Vec<Option<usize>> = vec![None; m];
    let mut chosen = Vec::with_capacity(targets.len());
    let mut out = Arborescences {
        root,
        trees: vec![],
        weight_sum: Rational::zero(),
    };
    search(x, &targets, &in_darts, 0, &mut parent, &mut chosen, &mut out);
    Ok(out)
}

fn search(
    x: &WeightedGraph,
    targets: &[usize],
    in_darts: &[Vec<usize>],
    depth: usize,
    parent: &mut Vec<Option<usize>>,
    chosen: &mut Vec<usize>,
    out: &mut Arborescences,
) {
    if depth == targets.len() {
        let w = chosen
            .iter()
            .fold(Rational::one(), |acc, &e| acc * &x.dart(e).weight);
        out.weight_sum += w;
        out.trees.push(chosen.clone());
        return;
    }
    let v = targets[depth];
    for &e in &in_darts[v] {
        let u = x.dart(e).origin;
        // Reject if following parents from u leads back to v.
        let mut cur = Some(u);
        let mut cycle = false;
        while let Some(c) = cur {
            if c == v {
                cycle = true;
                break;
            }
            cur = parent[c];
        }
        if cycle {
            continue;
        }
        parent[v] = Some(u);
        chosen.push(e);
        search(x, targets, in_darts, depth + 1, parent, chosen, out);
        chosen.pop();
        parent[v] = None;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::fixtures;

    #[test]
    fn triangle_sum() {
        let (a, b, c) = (rat(2), rat(3), rat(5));
        let x = fixtures::triangle_k3(a.clone(), b.clone(), c.clone());
        for root in 0..3 {
            let r = enumerate_arborescences(&x, root).unwrap();
            assert_eq!(r.trees.len(), 3);
            assert_eq!(r.weight_sum, &a * &b + &b * &c + &c * &a);
        }
    }

    #[test]
    fn single_vertex_has_the_empty_arborescence() {
        let x = WeightedGraph::from_edges(vec!["v".into()], &[]).unwrap();
        let r = enumerate_arborescences(&x, 0).unwrap();
        assert_eq!(r.trees, vec![Vec::<usize>::new()]);
        assert_eq!(r.weight_sum, rat(1));
    }

    #[test]
    fn signed_bouquet_cover_has_zero_sum() {
        let x = fixtures::bouquet_b2(rat(1), rat(-1));
        let a = crate::graph::ZVoltage::from_orientation(&x, &x.default_orientation(), &[vec![1], vec![1]]).unwrap();
        let y = crate::graph::tower_layer(&x, &a, 2, 1).unwrap().into_graph();
        assert_eq!(enumerate_arborescences(&y, 0).unwrap().weight_sum, rat(0));
    }

    #[test]
    fn oversized_graphs_rejected() {
        assert!(enumerate_arborescences(&fixtures::cycle(13), 0).is_err());
    }
}
