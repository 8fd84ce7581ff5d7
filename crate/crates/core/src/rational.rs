//! Exact rational helpers.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The scalar type of the engine.
pub type Q = num_rational::BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n/d`; panics when `d == 0`.
pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Parses `"p/q"` or `"p"` (optional sign, surrounding whitespace ignored).
pub fn parse(text: &str) -> Result<Q> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Input("empty rational".into()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad(t))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad(t))?;
        if d.is_zero() {
            return Err(Error::Input(alloc::format!("zero denominator in `{t}`")));
        }
        Ok(Q::new(n, d))
    } else {
        Ok(Q::from_integer(BigInt::from_str(t).map_err(|_| bad(t))?))
    }
}

fn bad(t: &str) -> Error {
    Error::Input(alloc::format!("`{t}` is not a rational of the form p/q"))
}

/// Canonical text form: `p/q` in lowest terms, or `p` for integers.
pub fn show(x: &Q) -> String {
    x.to_string()
}

pub fn show_vec(xs: &[Q]) -> String {
    let parts: Vec<String> = xs.iter().map(show).collect();
    alloc::format!("({})", parts.join(","))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

pub fn is_negative(x: &Q) -> bool {
    x.is_negative()
}

pub fn sum<'a>(xs: impl IntoIterator<Item = &'a Q>) -> Q {
    xs.into_iter().fold(Q::zero(), |acc, x| acc + x)
}
