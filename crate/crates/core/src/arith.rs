//! Exact rational helpers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qbig(n: BigInt) -> Q {
    Q::from_integer(n)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// (2m-1)!! with (-1)!! = 1.
pub fn double_factorial_odd(m: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = 2 * m - 1;
    while k > 1 {
        acc *= BigInt::from(k);
        k -= 2;
    }
    acc
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn pow_q(x: &Q, e: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Formats as `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

/// Positive residue of `a` modulo `r`.
pub fn modr(a: i64, r: i64) -> i64 {
    a.rem_euclid(r)
}
