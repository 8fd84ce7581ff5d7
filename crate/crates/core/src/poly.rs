//! Polynomials in the mutant-share parameter `ε`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

/// Coefficients in ascending degree, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct SharePolynomial {
    coeffs: Vec<Q>,
}

/// Sign of a polynomial for every sufficiently small `ε > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl SharePolynomial {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        SharePolynomial { coeffs }
    }

    pub fn zero() -> Self {
        SharePolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        SharePolynomial::new(alloc::vec![c])
    }

    /// The monomial `ε`.
    pub fn eps() -> Self {
        SharePolynomial::monomial(Q::one(), 1)
    }

    pub fn monomial(c: Q, degree: usize) -> Self {
        let mut coeffs = alloc::vec![Q::zero(); degree + 1];
        coeffs[degree] = c;
        SharePolynomial::new(coeffs)
    }

    pub fn coefficients(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient of `ε^k` (zero beyond the degree).
    pub fn coefficient(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, eps: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * eps + c)
    }

    pub fn scale(&self, c: &Q) -> Self {
        SharePolynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn sign_near_zero(&self) -> Sign {
        sign_near_zero(self)
    }
}

/// Sign of the lowest-degree nonzero coefficient; `Zero` iff `p ≡ 0`.
pub fn sign_near_zero(p: &SharePolynomial) -> Sign {
    match p.coeffs.iter().find(|c| !c.is_zero()) {
        None => Sign::Zero,
        Some(c) if c.is_positive() => Sign::Positive,
        Some(_) => Sign::Negative,
    }
}

impl Add for &SharePolynomial {
    type Output = SharePolynomial;
    fn add(self, rhs: &SharePolynomial) -> SharePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        SharePolynomial::new((0..n).map(|k| self.coefficient(k) + rhs.coefficient(k)).collect())
    }
}

impl Sub for &SharePolynomial {
    type Output = SharePolynomial;
    fn sub(self, rhs: &SharePolynomial) -> SharePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        SharePolynomial::new((0..n).map(|k| self.coefficient(k) - rhs.coefficient(k)).collect())
    }
}

impl Mul for &SharePolynomial {
    type Output = SharePolynomial;
    fn mul(self, rhs: &SharePolynomial) -> SharePolynomial {
        if self.is_zero() || rhs.is_zero() {
            return SharePolynomial::zero();
        }
        let mut out = alloc::vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        SharePolynomial::new(out)
    }
}

impl Neg for &SharePolynomial {
    type Output = SharePolynomial;
    fn neg(self) -> SharePolynomial {
        SharePolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for SharePolynomial {
            type Output = SharePolynomial;
            fn $m(self, rhs: SharePolynomial) -> SharePolynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&SharePolynomial> for SharePolynomial {
            type Output = SharePolynomial;
            fn $m(self, rhs: &SharePolynomial) -> SharePolynomial {
                (&self).$m(rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for SharePolynomial {
    type Output = SharePolynomial;
    fn neg(self) -> SharePolynomial {
        -&self
    }
}

impl From<Q> for SharePolynomial {
    fn from(c: Q) -> Self {
        SharePolynomial::constant(c)
    }
}

fn term(c: &Q, k: usize) -> String {
    let var = match k {
        0 => String::new(),
        1 => String::from("ε"),
        _ => format!("ε^{k}"),
    };
    if k == 0 {
        format!("{c}")
    } else if c.is_one() {
        var
    } else if c.denom().is_one() {
        format!("{c}{var}")
    } else {
        format!("({c}){var}")
    }
}

impl fmt::Display for SharePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-{}", term(&-c, k))?;
                } else {
                    write!(f, "{}", term(c, k))?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}", term(&-c, k))?;
            } else {
                write!(f, " + {}", term(c, k))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Shares of the mutants along a one-parameter path: mutant `s` has share
/// `multipliers[s]·ε`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareFamily {
    multipliers: Vec<Q>,
}

impl ShareFamily {
    pub fn new(multipliers: Vec<Q>) -> Result<Self> {
        if multipliers.iter().any(|c| !c.is_positive()) {
            return Err(Error::Input("share multipliers must be positive".into()));
        }
        Ok(ShareFamily { multipliers })
    }

    /// Every one of `r` mutants has share `ε`.
    pub fn equal(r: usize) -> Self {
        ShareFamily {
            multipliers: alloc::vec![Q::one(); r],
        }
    }

    pub fn multipliers(&self) -> &[Q] {
        &self.multipliers
    }

    pub fn len(&self) -> usize {
        self.multipliers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multipliers.is_empty()
    }

    /// Share of mutant `s` as a polynomial.
    pub fn share(&self, s: usize) -> SharePolynomial {
        SharePolynomial::monomial(self.multipliers[s].clone(), 1)
    }

    /// Total mutant share `‖E‖₁`.
    pub fn total(&self) -> SharePolynomial {
        SharePolynomial::monomial(self.multipliers.iter().sum(), 1)
    }

    /// `1 − ‖E‖₁`, the factor applied to incumbent weights.
    pub fn incumbent_factor(&self) -> SharePolynomial {
        &SharePolynomial::constant(Q::one()) - &self.total()
    }

    /// Splits mutant `s` into `parts` equal shares; the copies are appended.
    pub fn split(&self, s: usize, parts: usize) -> Self {
        let mut m = self.multipliers.clone();
        let piece = &m[s] / Q::from_integer((parts as i64).into());
        m[s] = piece.clone();
        for _ in 1..parts {
            m.push(piece.clone());
        }
        ShareFamily { multipliers: m }
    }
}
