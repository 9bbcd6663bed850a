//! Exact rational scalars.
//!
//! Values are always in lowest terms with a positive denominator; every
//! operation is exact. Formatting follows the text formats used throughout:
//! `p/q`, with `/q` omitted when the denominator is 1 (this is what
//! [`num_rational::BigRational`]'s `Display` produces).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = num_rational::BigRational;

/// Integer-valued rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` in lowest terms. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or `p` with optional sign; the stored value is reduced.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    match s.split_once('/') {
        None => {
            let n: BigInt = s
                .parse()
                .map_err(|_| Error::Parse(format!("invalid integer `{s}`")))?;
            Ok(Rational::from_integer(n))
        }
        Some((p, q)) => {
            let p: BigInt = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid numerator in `{s}`")))?;
            let q: BigInt = q
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid denominator in `{s}`")))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Lowest-terms text form, `/q` omitted when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Scales rational coordinates to a primitive integer vector: multiplies by
/// the lcm of denominators and divides by the gcd of numerators. The sign is
/// preserved (rays are directed; only positive scaling is allowed). Returns
/// `None` for the zero vector.
pub fn primitive_integer_vector(v: &[Rational]) -> Option<Vec<BigInt>> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num_integer::gcd(g, x.abs());
    }
    Some(ints.into_iter().map(|x| x / &g).collect())
}

/// Divides an integer vector by the gcd of its entries, keeping the sign.
/// Returns `None` for the zero vector.
pub fn primitive_of_integers(v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut g = BigInt::zero();
    for x in v {
        g = num_integer::gcd(g, x.abs());
    }
    if g.is_zero() {
        return None;
    }
    if g.is_one() {
        return Some(v.to_vec());
    }
    Some(v.iter().map(|x| x / &g).collect())
}

pub fn integers_to_rationals(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}
