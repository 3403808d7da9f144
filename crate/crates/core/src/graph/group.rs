use crate::error::{Error, Result};

/// A finite group given by its multiplication table.
///
/// Abelian groups built with [`FiniteGroup::abelian`] remember their shape
/// `[n_1, ..., n_r]`; element indices are then row-major coordinates
/// `(c_1, ..., c_r)` with `c_r` varying fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    shape: Option<Vec<u64>>,
}

/// The group a voltage assignment takes values in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    FreeAbelianRank(usize),
    FiniteAbelian(Vec<u64>),
    ExplicitTable(FiniteGroup),
}

impl GroupSpec {
    /// The finite group described, or `None` for `Z^d`.
    pub fn finite_group(&self) -> Result<Option<FiniteGroup>> {
        Ok(match self {
            GroupSpec::FreeAbelianRank(_) => None,
            GroupSpec::FiniteAbelian(shape) => Some(FiniteGroup::abelian(shape)?),
            GroupSpec::ExplicitTable(g) => Some(g.clone()),
        })
    }
}

fn decode_shape(shape: &[u64], mut idx: usize) -> Vec<u64> {
    let mut c = vec![0; shape.len()];
    for i in (0..shape.len()).rev() {
        c[i] = idx as u64 % shape[i];
        idx /= shape[i] as usize;
    }
    c
}

fn encode_shape(shape: &[u64], coords: &[u64]) -> usize {
    coords
        .iter()
        .zip(shape)
        .fold(0usize, |acc, (c, n)| acc * *n as usize + (c % n) as usize)
}

impl FiniteGroup {
    /// `Z/n_1 x ... x Z/n_r`; the empty shape gives the trivial group.
    pub fn abelian(shape: &[u64]) -> Result<Self> {
        if shape.contains(&0) {
            return Err(Error::InvalidGroup("cyclic factor of order 0".into()));
        }
        let order: u64 = shape.iter().product();
        if order > 1 << 16 {
            return Err(Error::InvalidGroup(format!("group of order {order} is too large")));
        }
        let order = order as usize;
        let coords: Vec<Vec<u64>> = (0..order).map(|i| decode_shape(shape, i)).collect();
        let names = coords
            .iter()
            .map(|c| match c.len() {
                0 => "0".to_string(),
                1 => c[0].to_string(),
                _ => format!(
                    "({})",
                    c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                ),
            })
            .collect();
        let table = (0..order)
            .map(|a| {
                (0..order)
                    .map(|b| {
                        let s: Vec<u64> = coords[a].iter().zip(&coords[b]).map(|(x, y)| x + y).collect();
                        encode_shape(shape, &s)
                    })
                    .collect()
            })
            .collect();
        let inverses = (0..order)
            .map(|a| {
                let s: Vec<u64> = coords[a].iter().zip(shape).map(|(x, n)| (n - x) % n).collect();
                encode_shape(shape, &s)
            })
            .collect();
        Ok(FiniteGroup {
            names,
            table,
            identity: 0,
            inverses,
            shape: Some(shape.to_vec()),
        })
    }

    pub fn trivial() -> Self {
        Self::abelian(&[]).expect("trivial group")
    }

    /// Validates a multiplication table: `table[a][b]` is the index of `a b`.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty group".into()));
        }
        let mut uniq = names.clone();
        uniq.sort();
        uniq.dedup();
        if uniq.len() != n {
            return Err(Error::InvalidGroup("duplicate element names".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroup("multiplication table is not square".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("table entry outside the group (closure)".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let inverses = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity && table[b][a] == identity)
                    .ok_or_else(|| Error::InvalidGroup(format!("{} has no inverse", names[a])))
            })
            .collect::<Result<Vec<_>>>()?;
        // Associativity: exhaustive for small groups, a strided sample above.
        let stride = if n <= 64 { 1 } else { n / 64 + 1 };
        for a in (0..n).step_by(stride) {
            for b in 0..n {
                for c in (0..n).step_by(stride) {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative: ({} {}) {} != {} ({} {})",
                            names[a], names[b], names[c], names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            names,
            table,
            identity,
            inverses,
            shape: None,
        })
    }

    /// The quaternion group, ordered `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        // unit index: 0 = 1, 1 = i, 2 = j, 3 = k; element index = 2 * unit + sign
        const UNIT: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (u, neg) = UNIT[a / 2][b / 2];
                        let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
                        2 * u + sign as usize
                    })
                    .collect()
            })
            .collect();
        Self::from_table(names, table).expect("quaternion table is a group")
    }

    /// The dihedral group of order 8, ordered `e, r, r2, r3, s, sr, sr2, sr3`
    /// with `s r s = r^-1`.
    pub fn dihedral8() -> Self {
        let names = ["e", "r", "r2", "r3", "s", "sr", "sr2", "sr3"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (a, b) = (x / 4, x % 4);
                        let (c, d) = (y / 4, y % 4);
                        let rb = if c == 1 { (4 - b) % 4 } else { b };
                        ((a + c) % 2) * 4 + (rb + d) % 4
                    })
                    .collect()
            })
            .collect();
        Self::from_table(names, table).expect("dihedral table is a group")
    }

    /// `self x other`, element `(g, h)` at index `g |H| + h`.
    pub fn direct_product(&self, other: &Self) -> Self {
        let (n, m) = (self.order(), other.order());
        let names = (0..n * m)
            .map(|i| format!("({},{})", self.names[i / m], other.names[i % m]))
            .collect();
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.table[x / m][y / m] * m + other.table[x % m][y % m])
                    .collect()
            })
            .collect();
        let inverses = (0..n * m)
            .map(|x| self.inverses[x / m] * m + other.inverses[x % m])
            .collect();
        let shape = match (&self.shape, &other.shape) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        FiniteGroup {
            names,
            table,
            identity: self.identity * m + other.identity,
            inverses,
            shape,
        }
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidGroup(format!("unknown group element {name:?}")))
    }

    /// Shape `[n_1, ..., n_r]` of an abelian group built from cyclic factors.
    pub fn shape(&self) -> Option<&[u64]> {
        self.shape.as_deref()
    }

    pub fn coords(&self, a: usize) -> Option<Vec<u64>> {
        self.shape.as_ref().map(|s| decode_shape(s, a))
    }

    pub fn from_coords(&self, c: &[u64]) -> Option<usize> {
        self.shape.as_ref().map(|s| encode_shape(s, c))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..a).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// True when the order is a power of `p` (including `p^0`).
    pub fn is_p_group(&self, p: u64) -> bool {
        let mut n = self.order() as u64;
        while n.is_multiple_of(p) {
            n /= p;
        }
        n == 1
    }

    /// Size of the subgroup generated by `gens`.
    pub fn generated_order(&self, gens: &[usize]) -> usize {
        let n = self.order();
        let mut member = vec![false; n];
        member[self.identity] = true;
        let mut stack = vec![self.identity];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.table[x][g];
                if !member[y] {
                    member[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count
    }
}
