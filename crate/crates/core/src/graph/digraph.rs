use crate::algebra::linalg::Matrix;
use crate::algebra::rational::{format_rational, Rational};
use crate::error::{Error, Result};
use num_traits::Zero;
use serde::Serialize;
use std::collections::{HashMap, VecDeque};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Dart {
    pub id: String,
    pub origin: usize,
    pub terminus: usize,
    pub weight: Rational,
}

/// One undirected edge of an input graph, given by its forward dart.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub weight: Rational,
    /// Weight of the reverse dart; defaults to `weight`.
    pub weight_rev: Option<Rational>,
}

impl EdgeSpec {
    pub fn new(id: &str, from: &str, to: &str, weight: Rational) -> Self {
        EdgeSpec {
            id: id.into(),
            from: from.into(),
            to: to.into(),
            weight,
            weight_rev: None,
        }
    }
}

/// A finite symmetric digraph with rational dart weights.
///
/// Every dart `e` has an inverse `inverse[e]` with reversed endpoints. Loops
/// and multiple edges are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    vertices: Vec<String>,
    darts: Vec<Dart>,
    inverse: Vec<usize>,
}

/// First violated axiom found by [`validate_graph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoVertices,
    EndpointOutOfRange { dart: String },
    InverseOutOfRange { dart: String },
    InverseFixesDart { dart: String },
    InverseNotInvolution { dart: String },
    EndpointsNotReversed { dart: String },
    AsymmetricWeights {
        row: String,
        col: String,
        forward: String,
        backward: String,
    },
    Disconnected { components: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::EndpointOutOfRange { dart } => {
                write!(f, "dart {dart} has an endpoint outside the vertex set")
            }
            Violation::InverseOutOfRange { dart } => {
                write!(f, "inverse of dart {dart} is not a dart")
            }
            Violation::InverseFixesDart { dart } => write!(f, "dart {dart} is its own inverse"),
            Violation::InverseNotInvolution { dart } => {
                write!(f, "inverse of the inverse of dart {dart} is a different dart")
            }
            Violation::EndpointsNotReversed { dart } => {
                write!(f, "dart {dart} and its inverse do not have reversed endpoints")
            }
            Violation::AsymmetricWeights {
                row,
                col,
                forward,
                backward,
            } => write!(
                f,
                "weighted matrix is not symmetric: W[{row}][{col}] = {forward} but W[{col}][{row}] = {backward}"
            ),
            Violation::Disconnected { components } => {
                write!(f, "graph is disconnected ({components} components)")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violation: Option<Violation>,
}

impl ValidationReport {
    fn from(v: Option<Violation>) -> Self {
        ValidationReport {
            valid: v.is_none(),
            violation: v,
        }
    }
}

impl WeightedGraph {
    /// Builds a graph from explicit darts. Only index ranges are checked;
    /// use [`validate_graph`] for the full axioms.
    pub fn from_parts(vertices: Vec<String>, darts: Vec<Dart>, inverse: Vec<usize>) -> Result<Self> {
        if darts.len() != inverse.len() {
            return Err(Error::InvalidGraph(format!(
                "{} darts but {} inverse entries",
                darts.len(),
                inverse.len()
            )));
        }
        Ok(WeightedGraph {
            vertices,
            darts,
            inverse,
        })
    }

    /// Builds a graph from an edge list. Edge `k` yields the forward dart `k`
    /// (with the edge's id) and the reverse dart `l + k` (id prefixed by `~`).
    pub fn from_edges(vertices: Vec<String>, edges: &[EdgeSpec]) -> Result<Self> {
        let index: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        if index.len() != vertices.len() {
            return Err(Error::InvalidGraph("duplicate vertex names".into()));
        }
        let mut seen = std::collections::HashSet::new();
        let l = edges.len();
        let mut fwd = Vec::with_capacity(l);
        let mut rev = Vec::with_capacity(l);
        for e in edges {
            if !seen.insert(e.id.as_str()) {
                return Err(Error::InvalidGraph(format!("duplicate edge id {}", e.id)));
            }
            let lookup = |name: &str| {
                index.get(name).copied().ok_or_else(|| {
                    Error::InvalidGraph(format!("edge {} uses unknown vertex {name}", e.id))
                })
            };
            let (o, t) = (lookup(&e.from)?, lookup(&e.to)?);
            fwd.push(Dart {
                id: e.id.clone(),
                origin: o,
                terminus: t,
                weight: e.weight.clone(),
            });
            rev.push(Dart {
                id: format!("~{}", e.id),
                origin: t,
                terminus: o,
                weight: e.weight_rev.clone().unwrap_or_else(|| e.weight.clone()),
            });
        }
        let inverse = (0..2 * l).map(|i| if i < l { i + l } else { i - l }).collect();
        fwd.extend(rev);
        Ok(WeightedGraph {
            vertices,
            darts: fwd,
            inverse,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn dart(&self, e: usize) -> &Dart {
        &self.darts[e]
    }

    pub fn inverse(&self, e: usize) -> usize {
        self.inverse[e]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_darts(&self) -> usize {
        self.darts.len()
    }

    /// Number of undirected edges `l`.
    pub fn num_edges(&self) -> usize {
        self.darts.len() / 2
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn dart_index(&self, id: &str) -> Option<usize> {
        self.darts.iter().position(|d| d.id == id)
    }

    /// Darts leaving `v`, in index order.
    pub fn out_darts(&self, v: usize) -> Vec<usize> {
        (0..self.darts.len())
            .filter(|&e| self.darts[e].origin == v)
            .collect()
    }

    /// Number of darts leaving `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.darts.iter().filter(|d| d.origin == v).count()
    }

    /// The same graph with every dart weight replaced.
    pub fn reweighted(&self, mut f: impl FnMut(usize, &Dart) -> Rational) -> Self {
        let darts = self
            .darts
            .iter()
            .enumerate()
            .map(|(i, d)| Dart {
                weight: f(i, d),
                ..d.clone()
            })
            .collect();
        WeightedGraph {
            darts,
            ..self.clone()
        }
    }

    /// `W[i][j]`: total weight of darts from `v_i` to `v_j`.
    pub fn weighted_matrix(&self) -> Matrix<Rational> {
        let m = self.num_vertices();
        let mut w = Matrix::filled(m, m, Rational::zero());
        for d in &self.darts {
            let cur = w.get(d.origin, d.terminus).clone();
            w.set(d.origin, d.terminus, cur + &d.weight);
        }
        w
    }

    /// Diagonal matrix of out-weight sums.
    pub fn degree_matrix(&self) -> Matrix<Rational> {
        let m = self.num_vertices();
        let mut dm = Matrix::filled(m, m, Rational::zero());
        for d in &self.darts {
            let cur = dm.get(d.origin, d.origin).clone();
            dm.set(d.origin, d.origin, cur + &d.weight);
        }
        dm
    }

    pub fn weighted_matrices(&self) -> (Matrix<Rational>, Matrix<Rational>) {
        (self.weighted_matrix(), self.degree_matrix())
    }

    /// `|V| - |E| / 2`.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64
    }

    /// Connected components as a vertex labelling.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let m = self.num_vertices();
        let mut adj = vec![vec![]; m];
        for d in &self.darts {
            if d.origin < m && d.terminus < m {
                adj[d.origin].push(d.terminus);
                adj[d.terminus].push(d.origin);
            }
        }
        let mut label = vec![usize::MAX; m];
        let mut count = 0;
        for s in 0..m {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &w in &adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        q.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    pub fn is_connected(&self) -> bool {
        self.num_vertices() > 0 && self.components().0 == 1
    }

    /// Every dart has the same weight as its inverse.
    pub fn is_strongly_symmetric(&self) -> bool {
        (0..self.darts.len()).all(|e| self.darts[e].weight == self.darts[self.inverse[e]].weight)
    }

    /// The lower-indexed dart of each inverse pair.
    pub fn default_orientation(&self) -> Orientation {
        let darts = (0..self.darts.len())
            .filter(|&e| e < self.inverse[e])
            .collect();
        Orientation::new(self, darts).expect("default orientation is valid")
    }

    /// Checks the graph axioms and fails with the first violation.
    pub fn require_valid(&self) -> Result<()> {
        match validate_graph(self).violation {
            None => Ok(()),
            Some(Violation::Disconnected { components }) => Err(Error::Disconnected(format!(
                "{components} connected components"
            ))),
            Some(v) => Err(Error::InvalidGraph(v.to_string())),
        }
    }
}

/// Checks the involution axioms, symmetry of `W` and connectivity.
pub fn validate_graph(x: &WeightedGraph) -> ValidationReport {
    ValidationReport::from(first_violation(x))
}

fn first_violation(x: &WeightedGraph) -> Option<Violation> {
    let m = x.num_vertices();
    if m == 0 {
        return Some(Violation::NoVertices);
    }
    let n = x.darts.len();
    for (e, d) in x.darts.iter().enumerate() {
        let dart = d.id.clone();
        if d.origin >= m || d.terminus >= m {
            return Some(Violation::EndpointOutOfRange { dart });
        }
        let inv = x.inverse[e];
        if inv >= n {
            return Some(Violation::InverseOutOfRange { dart });
        }
        if inv == e {
            return Some(Violation::InverseFixesDart { dart });
        }
        if x.inverse[inv] != e {
            return Some(Violation::InverseNotInvolution { dart });
        }
        let di = &x.darts[inv];
        if di.origin != d.terminus || di.terminus != d.origin {
            return Some(Violation::EndpointsNotReversed { dart });
        }
    }
    let w = x.weighted_matrix();
    for i in 0..m {
        for j in 0..i {
            if w.get(i, j) != w.get(j, i) {
                return Some(Violation::AsymmetricWeights {
                    row: x.vertices[i].clone(),
                    col: x.vertices[j].clone(),
                    forward: format_rational(w.get(i, j)),
                    backward: format_rational(w.get(j, i)),
                });
            }
        }
    }
    let (components, _) = x.components();
    if components != 1 {
        return Some(Violation::Disconnected { components });
    }
    None
}

/// One dart from each inverse pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    darts: Vec<usize>,
    /// For each dart of the graph: position in `darts` and whether the dart
    /// itself (rather than its inverse) is the chosen one.
    slot: Vec<(usize, bool)>,
}

impl Orientation {
    pub fn new(x: &WeightedGraph, darts: Vec<usize>) -> Result<Self> {
        let n = x.num_darts();
        let mut slot = vec![None; n];
        for (k, &e) in darts.iter().enumerate() {
            if e >= n {
                return Err(Error::InvalidGraph(format!("orientation dart {e} out of range")));
            }
            let inv = x.inverse(e);
            if slot[e].is_some() || slot[inv].is_some() {
                return Err(Error::InvalidGraph(format!(
                    "orientation contains both {} and its inverse, or a repeat",
                    x.dart(e).id
                )));
            }
            slot[e] = Some((k, true));
            slot[inv] = Some((k, false));
        }
        let slot = slot
            .into_iter()
            .enumerate()
            .map(|(e, s)| {
                s.ok_or_else(|| {
                    Error::InvalidGraph(format!("orientation misses the pair of dart {}", x.dart(e).id))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Orientation { darts, slot })
    }

    pub fn darts(&self) -> &[usize] {
        &self.darts
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.slot[e].1
    }

    /// `(k, forward)`: dart `e` is the `k`-th oriented dart or its inverse.
    pub fn slot(&self, e: usize) -> (usize, bool) {
        self.slot[e]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::fixtures;

    #[test]
    fn fixtures_validate() {
        assert!(validate_graph(&fixtures::bouquet_b2(rat(1), rat(1))).valid);
        assert!(validate_graph(&fixtures::triangle_k3(rat(2), rat(3), rat(5))).valid);
    }

    #[test]
    fn asymmetric_triangle_fails() {
        let v: Vec<String> = ["v1", "v2", "v3"].iter().map(|s| s.to_string()).collect();
        let mut e1 = EdgeSpec::new("e1", "v1", "v2", rat(1));
        e1.weight_rev = Some(rat(2));
        let edges = [e1, EdgeSpec::new("e2", "v2", "v3", rat(1)), EdgeSpec::new("e3", "v3", "v1", rat(1))];
        let g = WeightedGraph::from_edges(v, &edges).unwrap();
        let r = validate_graph(&g);
        assert!(!r.valid);
        assert!(matches!(r.violation, Some(Violation::AsymmetricWeights { .. })));
    }

    #[test]
    fn disconnected_fails() {
        let g = WeightedGraph::from_edges(vec!["a".into(), "b".into()], &[]).unwrap();
        assert_eq!(
            validate_graph(&g).violation,
            Some(Violation::Disconnected { components: 2 })
        );
    }

    #[test]
    fn broken_involution_fails() {
        let d = |id: &str, o, t| Dart {
            id: id.into(),
            origin: o,
            terminus: t,
            weight: rat(1),
        };
        let g = WeightedGraph::from_parts(
            vec!["a".into(), "b".into()],
            vec![d("x", 0, 1), d("y", 0, 1)],
            vec![1, 0],
        )
        .unwrap();
        assert!(matches!(
            validate_graph(&g).violation,
            Some(Violation::EndpointsNotReversed { .. })
        ));
        let g = WeightedGraph::from_parts(vec!["a".into()], vec![d("x", 0, 0)], vec![0]).unwrap();
        assert!(matches!(
            validate_graph(&g).violation,
            Some(Violation::InverseFixesDart { .. })
        ));
    }

    #[test]
    fn weighted_matrices_of_fixtures() {
        let (a, b, c) = (rat(2), rat(3), rat(5));
        let k3 = fixtures::triangle_k3(a.clone(), b.clone(), c.clone());
        let (w, d) = k3.weighted_matrices();
        let z = rat(0);
        let expect = Matrix::from_rows(vec![
            vec![z.clone(), b.clone(), a.clone()],
            vec![b.clone(), z.clone(), c.clone()],
            vec![a.clone(), c.clone(), z.clone()],
        ]);
        assert_eq!(w, expect);
        for i in 0..3 {
            let row_sum = w.row(i).iter().fold(rat(0), |s, x| s + x);
            assert_eq!(d.get(i, i), &row_sum);
        }
        let b2 = fixtures::bouquet_b2(rat(3), rat(4));
        let (w, d) = b2.weighted_matrices();
        assert_eq!(w.get(0, 0), &rat(14));
        assert_eq!(d.get(0, 0), &rat(14));
        let single = fixtures::single_edge(rat(3));
        let (w, d) = single.weighted_matrices();
        assert_eq!(w, Matrix::from_rows(vec![vec![rat(0), rat(3)], vec![rat(3), rat(0)]]));
        assert_eq!(d, Matrix::from_rows(vec![vec![rat(3), rat(0)], vec![rat(0), rat(3)]]));
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(fixtures::triangle_k3(rat(1), rat(1), rat(1)).euler_characteristic(), 0);
        assert_eq!(fixtures::bouquet_b2(rat(1), rat(1)).euler_characteristic(), -1);
        let b4 = fixtures::bouquet_b4([rat(1), rat(1), rat(1), rat(1)]);
        assert_eq!(b4.euler_characteristic(), -3);
    }

    #[test]
    fn orientations() {
        let g = fixtures::bouquet_b2(rat(1), rat(1));
        let o = g.default_orientation();
        assert_eq!(o.darts(), &[0, 1]);
        assert_eq!(o.slot(3), (1, false));
        assert!(Orientation::new(&g, vec![0, 2]).is_err());
        assert!(Orientation::new(&g, vec![0]).is_err());
        let alt = Orientation::new(&g, vec![2, 1]).unwrap();
        assert!(alt.contains(2) && !alt.contains(0));
    }
}
