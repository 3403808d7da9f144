use crate::algebra::rational::{check_prime, format_rational, parse_rational, Rational};
use crate::error::Result;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// A `p`-adic valuation: a rational or `Infinity` (the valuation of zero).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Rational),
    Infinity,
}

impl Valuation {
    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(q) => Some(q),
            Valuation::Infinity => None,
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Valuation::Finite(crate::algebra::rational::rat(v))
    }
}

impl std::ops::Add for &Valuation {
    type Output = Valuation;
    fn add(self, rhs: &Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        &self + &rhs
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(q) => f.write_str(&format_rational(q)),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            Ok(Valuation::Infinity)
        } else {
            parse_rational(&s)
                .map(Valuation::Finite)
                .map_err(serde::de::Error::custom)
        }
    }
}

/// `v_p(q)`, normalized so that `v_p(p) = 1`.
pub fn val_p_rational(q: &Rational, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    Ok(match crate::algebra::rational::val_p_rational_i64(q, p) {
        Some(v) => Valuation::from_i64(v),
        None => Valuation::Infinity,
    })
}
