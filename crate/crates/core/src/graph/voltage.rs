//! Voltage assignments: `alpha(inverse e) = alpha(e)^{-1}` by construction.

use crate::graph::digraph::{Orientation, WeightedGraph};
use crate::graph::group::FiniteGroup;
use crate::error::{Error, Result};

/// A `Z^d`-valued voltage assignment, stored per dart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZVoltage {
    dims: usize,
    values: Vec<Vec<i64>>,
}

impl ZVoltage {
    /// Values on the oriented darts, in orientation order.
    pub fn from_orientation(x: &WeightedGraph, s: &Orientation, values: &[Vec<i64>]) -> Result<Self> {
        if values.len() != s.len() {
            return Err(Error::DimensionMismatch {
                expected: s.len(),
                got: values.len(),
            });
        }
        let dims = values.first().map_or(0, Vec::len);
        if let Some(v) = values.iter().find(|v| v.len() != dims) {
            return Err(Error::DimensionMismatch {
                expected: dims,
                got: v.len(),
            });
        }
        let per_dart = (0..x.num_darts())
            .map(|e| {
                let (k, fwd) = s.slot(e);
                if fwd {
                    values[k].clone()
                } else {
                    values[k].iter().map(|a| -a).collect()
                }
            })
            .collect();
        Ok(ZVoltage {
            dims,
            values: per_dart,
        })
    }

    /// Like [`ZVoltage::from_orientation`], with an explicit `d` so that
    /// edgeless graphs are handled.
    pub fn with_dims(
        x: &WeightedGraph,
        s: &Orientation,
        dims: usize,
        values: &[Vec<i64>],
    ) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.len() != dims) {
            return Err(Error::DimensionMismatch {
                expected: dims,
                got: v.len(),
            });
        }
        let mut z = Self::from_orientation(x, s, values)?;
        z.dims = dims;
        Ok(z)
    }

    /// Values on every dart; checks `alpha(inverse e) = -alpha(e)`.
    pub fn from_darts(x: &WeightedGraph, dims: usize, values: Vec<Vec<i64>>) -> Result<Self> {
        if values.len() != x.num_darts() {
            return Err(Error::DimensionMismatch {
                expected: x.num_darts(),
                got: values.len(),
            });
        }
        for (e, v) in values.iter().enumerate() {
            if v.len() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims,
                    got: v.len(),
                });
            }
            let inv = &values[x.inverse(e)];
            if v.iter().zip(inv).any(|(a, b)| a + b != 0) {
                return Err(Error::InvalidGraph(format!(
                    "voltage on {} is not the inverse of the voltage on its reverse",
                    x.dart(e).id
                )));
            }
        }
        Ok(ZVoltage { dims, values })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn value(&self, e: usize) -> &[i64] {
        &self.values[e]
    }

    pub fn values(&self) -> &[Vec<i64>] {
        &self.values
    }

    /// The composite with `Z^d -> (Z/p^n)^d`.
    pub fn reduce(&self, p: u64, n: u32) -> (FiniteGroup, FiniteVoltage) {
        let m = p.pow(n);
        let group = FiniteGroup::abelian(&vec![m; self.dims]).expect("layer group");
        let values = self
            .values
            .iter()
            .map(|v| {
                let c: Vec<u64> = v.iter().map(|a| a.rem_euclid(m as i64) as u64).collect();
                group.from_coords(&c).expect("abelian group")
            })
            .collect();
        (group, FiniteVoltage { values })
    }

    /// The assignment `alpha o pi` on a graph whose darts project to ours.
    pub fn pull_back(&self, dart_projection: impl Fn(usize) -> usize, num_darts: usize) -> Self {
        ZVoltage {
            dims: self.dims,
            values: (0..num_darts).map(|e| self.values[dart_projection(e)].clone()).collect(),
        }
    }
}

/// A voltage assignment in a finite group, stored per dart as element
/// indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteVoltage {
    values: Vec<usize>,
}

impl FiniteVoltage {
    pub fn from_orientation(
        x: &WeightedGraph,
        s: &Orientation,
        group: &FiniteGroup,
        values: &[usize],
    ) -> Result<Self> {
        if values.len() != s.len() {
            return Err(Error::DimensionMismatch {
                expected: s.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|&g| g >= group.order()) {
            return Err(Error::InvalidGroup("voltage outside the group".into()));
        }
        let per_dart = (0..x.num_darts())
            .map(|e| {
                let (k, fwd) = s.slot(e);
                if fwd {
                    values[k]
                } else {
                    group.inv(values[k])
                }
            })
            .collect();
        Ok(FiniteVoltage { values: per_dart })
    }

    /// Values on every dart; checks `beta(inverse e) = beta(e)^{-1}`.
    pub fn from_darts(x: &WeightedGraph, group: &FiniteGroup, values: Vec<usize>) -> Result<Self> {
        if values.len() != x.num_darts() {
            return Err(Error::DimensionMismatch {
                expected: x.num_darts(),
                got: values.len(),
            });
        }
        for (e, &g) in values.iter().enumerate() {
            if g >= group.order() || values[x.inverse(e)] != group.inv(g) {
                return Err(Error::InvalidGroup(format!(
                    "voltage on dart {} is not inverse to its reverse",
                    x.dart(e).id
                )));
            }
        }
        Ok(FiniteVoltage { values })
    }

    pub fn trivial(x: &WeightedGraph, group: &FiniteGroup) -> Self {
        FiniteVoltage {
            values: vec![group.identity(); x.num_darts()],
        }
    }

    pub fn value(&self, e: usize) -> usize {
        self.values[e]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::fixtures;

    #[test]
    fn inverse_darts_get_inverse_values() {
        let x = fixtures::bouquet_b2(rat(1), rat(1));
        let s = x.default_orientation();
        let a = ZVoltage::from_orientation(&x, &s, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(a.value(2), &[0, -1]);
        assert_eq!(a.value(3), &[-1, 0]);
        let (g, r) = a.reduce(2, 1);
        assert_eq!(g.order(), 4);
        assert_eq!(g.coords(r.value(2)).unwrap(), vec![0, 1]);
        assert!(ZVoltage::from_darts(&x, 1, vec![vec![1], vec![1], vec![1], vec![-1]]).is_err());

        let q = crate::graph::FiniteGroup::quaternion();
        let i = q.element("i").unwrap();
        let b = FiniteVoltage::from_orientation(&x, &s, &q, &[i, q.identity()]).unwrap();
        assert_eq!(b.value(2), q.element("-i").unwrap());
    }
}
