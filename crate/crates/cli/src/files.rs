//! On-disk JSON schemas for graphs and finite-group voltages.

use crate::CliError;
use iwagraph::algebra::rational::{format_rational, parse_rational, Rational};
use iwagraph::graph::{EdgeSpec, FiniteGroup, FiniteVoltage, WeightedGraph, ZVoltage};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// A rational written either as a JSON integer or as a string like `"-3/4"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalField {
    Int(i64),
    Text(String),
}

impl RationalField {
    pub fn value(&self) -> Result<Rational, CliError> {
        match self {
            RationalField::Int(n) => Ok(Rational::from_integer((*n).into())),
            RationalField::Text(s) => Ok(parse_rational(s)?),
        }
    }

    pub fn from_rational(q: &Rational) -> Self {
        RationalField::Text(format_rational(q))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub id: String,
    pub from: String,
    pub to: String,
    pub weight: RationalField,
    /// Weight of the reverse dart when it differs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_rev: Option<RationalField>,
    /// `Z^d`-voltage of the forward dart.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub voltage: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<usize>,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: WeightedGraph,
    pub alpha: Option<ZVoltage>,
    pub prime: Option<u64>,
}

impl GraphFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
    }

    /// Builds the graph; voltages are read when any edge carries one, and
    /// missing voltages are zero.
    pub fn load(&self, dims_override: Option<usize>) -> Result<LoadedGraph, CliError> {
        let mut specs = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let mut s = EdgeSpec::new(&e.id, &e.from, &e.to, e.weight.value()?);
            s.weight_rev = e.weight_rev.as_ref().map(RationalField::value).transpose()?;
            specs.push(s);
        }
        let graph = WeightedGraph::from_edges(self.vertices.clone(), &specs)?;
        let given: Vec<usize> = self.edges.iter().filter_map(|e| e.voltage.as_ref().map(Vec::len)).collect();
        let dims = match (dims_override, self.dims, given.first()) {
            (Some(d), _, _) | (None, Some(d), _) | (None, None, Some(&d)) => Some(d),
            _ => None,
        };
        let alpha = match dims {
            None => None,
            Some(d) => {
                if let Some(bad) = given.iter().find(|&&k| k != d) {
                    return Err(CliError::Schema(format!(
                        "voltage of length {bad} in a file with d = {d}"
                    )));
                }
                let values: Vec<Vec<i64>> = self
                    .edges
                    .iter()
                    .map(|e| e.voltage.clone().unwrap_or_else(|| vec![0; d]))
                    .collect();
                Some(ZVoltage::from_orientation(&graph, &graph.default_orientation(), &values)?)
            }
        };
        Ok(LoadedGraph {
            graph,
            alpha,
            prime: self.prime,
        })
    }

    /// The file describing `x`: one entry per dart of the default
    /// orientation, with the voltage of `alpha` when given.
    pub fn from_graph(x: &WeightedGraph, alpha: Option<&ZVoltage>, prime: Option<u64>) -> Self {
        let s = x.default_orientation();
        let edges = s
            .darts()
            .iter()
            .map(|&e| {
                let d = x.dart(e);
                let back = &x.dart(x.inverse(e)).weight;
                EdgeEntry {
                    id: d.id.clone(),
                    from: x.vertices()[d.origin].clone(),
                    to: x.vertices()[d.terminus].clone(),
                    weight: RationalField::from_rational(&d.weight),
                    weight_rev: (back != &d.weight).then(|| RationalField::from_rational(back)),
                    voltage: alpha.map(|a| a.value(e).to_vec()),
                }
            })
            .collect();
        GraphFile {
            description: None,
            prime,
            dims: alpha.map(|a| a.dims()),
            vertices: x.vertices().to_vec(),
            edges,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupEntry {
    /// `Z/n_1 x ... x Z/n_r`; elements are named `k` or `(a,b,..)`.
    Abelian(Vec<u64>),
    /// Elements `1, -1, i, -i, j, -j, k, -k`.
    Quaternion,
    /// Elements `e, r, r2, r3, s, sr, sr2, sr3`.
    Dihedral8,
    Table {
        elements: Vec<String>,
        /// `table[a][b]` names the product `ab`.
        table: Vec<Vec<String>>,
    },
}

impl GroupEntry {
    pub fn group(&self) -> Result<FiniteGroup, CliError> {
        Ok(match self {
            GroupEntry::Abelian(shape) => FiniteGroup::abelian(shape)?,
            GroupEntry::Quaternion => FiniteGroup::quaternion(),
            GroupEntry::Dihedral8 => FiniteGroup::dihedral8(),
            GroupEntry::Table { elements, table } => {
                let index: BTreeMap<&str, usize> =
                    elements.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
                let rows = table
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|n| {
                                index.get(n.as_str()).copied().ok_or_else(|| {
                                    CliError::Schema(format!("unknown group element {n}"))
                                })
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                FiniteGroup::from_table(elements.clone(), rows)?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub group: GroupEntry,
    /// Element name per edge id; edges not listed get the identity.
    #[serde(default)]
    pub voltage: BTreeMap<String, String>,
}

impl BetaFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
    }

    pub fn load(&self, x: &WeightedGraph) -> Result<(FiniteGroup, FiniteVoltage), CliError> {
        let group = self.group.group()?;
        let s = x.default_orientation();
        for id in self.voltage.keys() {
            if !s.darts().iter().any(|&e| &x.dart(e).id == id) {
                return Err(CliError::Schema(format!("voltage given for unknown edge {id}")));
            }
        }
        let values = s
            .darts()
            .iter()
            .map(|&e| match self.voltage.get(&x.dart(e).id) {
                Some(name) => Ok(group.element(name)?),
                None => Ok(group.identity()),
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let beta = FiniteVoltage::from_orientation(x, &s, &group, &values)?;
        Ok((group, beta))
    }
}
