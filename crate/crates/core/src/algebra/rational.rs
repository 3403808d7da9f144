//! Rationals and `p`-adic valuations of integers.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Formats as `"n"` or `"n/d"`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `v_p(n)` for nonzero `n`.
pub fn val_p_int(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// `v_p(q)` for nonzero `q`.
pub fn val_p_rational_i64(q: &Rational, p: u64) -> Option<i64> {
    let a = val_p_int(q.numer(), p)? as i64;
    let b = val_p_int(q.denom(), p).unwrap_or(0) as i64;
    Some(a - b)
}

/// `p^e` as a rational, for any integer `e`.
pub fn p_power(p: u64, e: i64) -> Rational {
    let base = BigInt::from(p);
    let mag = num_traits::pow(base, e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

/// The residue of a `p`-integral rational modulo `p`.
pub fn reduce_mod_p(q: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    if (q.denom() % &pb).is_zero() {
        return None;
    }
    let n = q.numer().mod_floor(&pb);
    let d = q.denom().mod_floor(&pb);
    let n: u64 = n.try_into().expect("residue fits");
    let d: u64 = d.try_into().expect("residue fits");
    Some(n * inv_mod(d, p) % p)
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let e = num_integer::Integer::extended_gcd(&(a as i128), &(p as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(p as i128) as u64
}

/// Serde adapters that store rationals as strings.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::super::{format_rational, parse_rational, Rational};
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format_rational(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use super::super::{format_rational, parse_rational, Rational};
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match q {
                Some(q) => s.serialize_some(&format_rational(q)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Option<Rational>, D::Error> {
            let v = Option::<String>::deserialize(d)?;
            v.map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}
