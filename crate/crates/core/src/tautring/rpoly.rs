use num::{One, Zero};

use crate::arith::{fmt_q, parse_q, Q};
use crate::error::{Error, Result};

/// Univariate polynomial in `r` with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RPoly {
    coeffs: Vec<Q>,
}

impl RPoly {
    pub fn zero() -> RPoly {
        RPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> RPoly {
        RPoly::from_coeffs(vec![c])
    }

    pub fn r() -> RPoly {
        RPoly::from_coeffs(vec![Q::zero(), Q::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> RPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn constant_term(&self) -> Q {
        self.coeffs.first().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &RPoly) -> RPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RPoly::from_coeffs(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_else(Q::zero) + o.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &RPoly) -> RPoly {
        if self.is_zero() || o.is_zero() {
            return RPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Q) -> RPoly {
        RPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Unique polynomial of degree < `points.len()` through the points (Newton form).
    pub fn interpolate(points: &[(Q, Q)]) -> RPoly {
        let n = points.len();
        let xs: Vec<Q> = points.iter().map(|p| p.0.clone()).collect();
        let mut dd: Vec<Q> = points.iter().map(|p| p.1.clone()).collect();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut acc = RPoly::zero();
        for i in (0..n).rev() {
            acc = acc.mul(&RPoly::from_coeffs(vec![-xs[i].clone(), Q::one()])).add(&RPoly::constant(dd[i].clone()));
        }
        acc
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(fmt_q).collect()
    }

    pub fn from_strings(s: &[String]) -> Result<RPoly> {
        Ok(RPoly::from_coeffs(s.iter().map(|x| parse_q(x)).collect::<Result<_>>()?))
    }
}

impl std::fmt::Display for RPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})*r"),
                _ => format!("({c})*r^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl std::str::FromStr for RPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<RPoly> {
        let v: Vec<String> = s.split(',').map(|x| x.trim().to_string()).collect();
        RPoly::from_strings(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};

    #[test]
    fn interpolation_recovers_polynomial() {
        // (r^2 - 1)/12
        let f = |r: i64| qf(r * r - 1, 12);
        let pts: Vec<(Q, Q)> = (3..7).map(|r| (q(r), f(r))).collect();
        let p = RPoly::interpolate(&pts);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.constant_term(), qf(-1, 12));
        assert_eq!(p.eval(&q(11)), f(11));
    }

    #[test]
    fn eval_and_trim() {
        assert_eq!(RPoly::constant(q(7)).eval(&q(123)), q(7));
        assert_eq!(RPoly::r().scale(&qf(1, 2)).constant_term(), q(0));
        assert_eq!(RPoly::from_coeffs(vec![q(1), q(0), q(0)]).degree(), Some(0));
        assert!(RPoly::from_coeffs(vec![q(0)]).is_zero());
    }
}
