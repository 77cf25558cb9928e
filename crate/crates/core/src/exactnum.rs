//! Exact scalar arithmetic.
//!
//! Integers are [`num_bigint::BigInt`] and rationals are
//! [`num_rational::BigRational`], which is always kept in lowest terms with a
//! positive denominator. This module adds the conventions the reductions rely
//! on: the centered fractional part in `(-1/2, 1/2]`, the matching minimal
//! residue, least common denominators, Bezout coefficients, small prime
//! search and integer logarithms, plus [`Surd`] for quantities of the form
//! `r * sqrt(s)`.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{precondition, Error, Result};

pub use num_bigint::BigInt;
pub type Rat = num_rational::BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: &BigInt) -> Rat {
    Rat::from_integer(v.clone())
}

/// Centered fractional part: the unique `f` in `(-1/2, 1/2]` with `x - f` integral.
pub fn frac(x: &Rat) -> Rat {
    x - nearest_int(x)
}

/// The integer `k` with `x - k` in `(-1/2, 1/2]`, i.e. `ceil(x - 1/2)`.
pub fn nearest_int(x: &Rat) -> BigInt {
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    (x - half).ceil().to_integer()
}

pub fn frac_vec(x: &[Rat]) -> Vec<Rat> {
    x.iter().map(frac).collect()
}

/// Residue of `a` modulo `m` with magnitude at most `m/2`; ties go to `+m/2`.
pub fn minimal_residue(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    if !m.is_positive() {
        return precondition(format!("modulus must be positive, got {m}"));
    }
    let r = a.mod_floor(m);
    if (&r * 2u32) > *m {
        Ok(r - m)
    } else {
        Ok(r)
    }
}

/// Least positive `d` with `d * x` integral.
pub fn lcd(x: &[Rat]) -> BigInt {
    x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Extended Euclid: `(g, s, t)` with `g = gcd(a, b) > 0` and `s*a + t*b = g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return precondition("ext_gcd(0, 0) is undefined");
    }
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        Ok((-old_r, -old_s, -old_t))
    } else {
        Ok((old_r, old_s, old_t))
    }
}

/// Non-negative gcd of all entries; zero for an empty or all-zero slice.
pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Coefficients `c` with `sum c_i * values_i = gcd(values)`.
pub fn bezout_all(values: &[BigInt]) -> Result<(BigInt, Vec<BigInt>)> {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(values.len());
    for v in values {
        if g.is_zero() && v.is_zero() {
            coeffs.push(BigInt::zero());
            continue;
        }
        let (ng, s, t) = ext_gcd(&g, v)?;
        for c in coeffs.iter_mut() {
            *c *= &s;
        }
        coeffs.push(t);
        g = ng;
    }
    if g.is_zero() {
        return precondition("bezout coefficients of an all-zero vector");
    }
    Ok((g, coeffs))
}

/// Smallest prime that does not divide `n`.
pub fn least_prime_not_dividing(n: &BigInt) -> Result<BigInt> {
    if n.is_zero() {
        return precondition("every prime divides 0");
    }
    let mut primes: Vec<u64> = Vec::new();
    let mut candidate = 2u64;
    loop {
        if primes.iter().all(|p| !candidate.is_multiple_of(*p)) {
            primes.push(candidate);
            let p = BigInt::from(candidate);
            if !(n % &p).is_zero() {
                return Ok(p);
            }
        }
        candidate += 1;
    }
}

/// Smallest `j >= 0` with `|base|^j >= bound`, by exact comparison.
pub fn ceil_log(base: &BigInt, bound: &Rat) -> Result<u32> {
    let base = base.abs();
    if base < BigInt::from(2) {
        return precondition(format!("ceil_log base must have |base| >= 2, got {base}"));
    }
    if !bound.is_positive() {
        return precondition("ceil_log bound must be positive");
    }
    // |base|^j >= n/d  <=>  |base|^j * d >= n
    let (n, d) = (bound.numer(), bound.denom());
    let mut j = 0u32;
    let mut power = d.clone();
    while power < *n {
        power *= &base;
        j += 1;
    }
    Ok(j)
}

/// Floor of the square root of a non-negative rational.
pub fn floor_sqrt(x: &Rat) -> BigInt {
    assert!(!x.is_negative(), "square root of a negative value");
    x.floor().to_integer().sqrt()
}

/// Bit length of `|v|`.
pub fn bits(v: &BigInt) -> u64 {
    v.bits()
}

pub fn rat_bits(v: &Rat) -> u64 {
    v.numer().bits().max(v.denom().bits())
}

pub fn parse_int(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let (n, d) = (parse_int(n)?, parse_int(d)?);
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// A non-negative real `coeff * sqrt(radicand)` with integral `radicand >= 1`.
///
/// Gaps and ranges that involve `n^(1/2)` are kept in this form so that every
/// comparison reduces to comparing squares of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    pub coeff: Rat,
    pub radicand: BigInt,
}

impl Surd {
    pub fn rational(coeff: Rat) -> Self {
        assert!(!coeff.is_negative(), "surds are non-negative");
        Surd { coeff, radicand: BigInt::one() }
    }

    pub fn new(coeff: Rat, radicand: BigInt) -> Self {
        assert!(!coeff.is_negative(), "surds are non-negative");
        assert!(radicand.is_positive(), "radicand must be positive");
        let mut s = Surd { coeff, radicand };
        s.normalize();
        s
    }

    pub fn integer(v: i64) -> Self {
        Surd::rational(Rat::from_integer(BigInt::from(v)))
    }

    /// `sqrt(n)`.
    pub fn sqrt(n: &BigInt) -> Self {
        Surd::new(Rat::one(), n.clone())
    }

    fn normalize(&mut self) {
        // pull the largest square factor we can find cheaply out of the radicand
        let r = self.radicand.sqrt();
        if &r * &r == self.radicand {
            self.coeff = &self.coeff * Rat::from_integer(r);
            self.radicand = BigInt::one();
        }
        if self.coeff.is_zero() {
            self.radicand = BigInt::one();
        }
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_one()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.coeff)
    }

    /// The exact square, always rational.
    pub fn squared(&self) -> Rat {
        &self.coeff * &self.coeff * Rat::from_integer(self.radicand.clone())
    }

    pub fn mul(&self, other: &Surd) -> Surd {
        Surd::new(&self.coeff * &other.coeff, &self.radicand * &other.radicand)
    }

    pub fn scale(&self, r: &Rat) -> Surd {
        Surd::new(&self.coeff * r, self.radicand.clone())
    }

    /// `1 / self`; panics on zero.
    pub fn recip(&self) -> Surd {
        // 1/(c*sqrt(s)) = sqrt(s) / (c*s)
        let denom = &self.coeff * Rat::from_integer(self.radicand.clone());
        Surd::new(denom.recip(), self.radicand.clone())
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            self.coeff.floor().to_integer()
        } else {
            floor_sqrt(&self.squared())
        }
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        if r.is_negative() {
            return Ordering::Greater;
        }
        self.squared().cmp(&(r * r))
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.coeff.is_one()
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.squared().cmp(&other.squared())
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}*sqrt({})", self.coeff, self.radicand)
        }
    }
}
