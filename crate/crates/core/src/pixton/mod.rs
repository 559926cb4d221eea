//! Pixton's formula on the Picard stack and its pullback to moduli of stable curves.
//!
//! Coefficients are sums over weightings mod `r`; they are certified to be
//! polynomial in `r` by exact fitting with held-out samples, and the class
//! itself is the constant term.

mod assemble;
mod factor;
mod fit;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::arith::{factorial, pow_q, qbig, qf, Q};
use crate::error::{Error, Result};
use crate::tautring::Space;

pub use assemble::{pixton_raw, specialize_to_moduli};
pub use factor::{c_a, compact_type_theta, dr_cycle, pixton_factorized, separating_divisors};
pub use fit::{fit_pixton, pixton_class, pixton_polynomial, pixton_polynomial_with, Fit, FitFailure, PieceFit, SampleSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum PixtonMode {
    /// Formal classes on the Picard stack (ξ, η decorations, degrees on vertices).
    Pic,
    /// Pulled back along `ω^k` to moduli of stable curves.
    Moduli { k: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub max_edges: usize,
    /// Per-vertex degree bound `|δ(v)| ≤ B` (pic mode only).
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PixtonRequest {
    pub g: u32,
    pub a: Vec<i64>,
    pub c: u32,
    pub mode: PixtonMode,
    pub truncation: Truncation,
}

impl PixtonRequest {
    pub fn new(g: u32, a: Vec<i64>, c: u32, mode: PixtonMode, truncation: Truncation) -> Result<PixtonRequest> {
        let req = PixtonRequest { g, a, c, mode, truncation };
        req.validate()?;
        Ok(req)
    }

    /// Moduli-mode request with the default truncation (all stable graphs of codimension ≤ c).
    pub fn moduli(g: u32, a: Vec<i64>, k: i64, c: u32) -> Result<PixtonRequest> {
        let t = Truncation { max_edges: c as usize, bound: 0 };
        PixtonRequest::new(g, a, c, PixtonMode::Moduli { k }, t)
    }

    pub fn pic(g: u32, a: Vec<i64>, c: u32, max_edges: usize, bound: i64) -> Result<PixtonRequest> {
        PixtonRequest::new(g, a, c, PixtonMode::Pic, Truncation { max_edges, bound })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn d(&self) -> i64 {
        self.a.iter().sum()
    }

    pub fn space(&self) -> Space {
        match self.mode {
            PixtonMode::Pic => Space::pic(self.g, self.n(), self.d()),
            PixtonMode::Moduli { .. } => Space::moduli(self.g, self.n()),
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.g == 1 && n == 0 {
            return Err(Error::invalid("(g,n)", "(g,n) = (1,0) is excluded"));
        }
        if (self.truncation.max_edges as u32) < self.c {
            return Err(Error::Truncation(format!(
                "max_edges = {} cannot reach codimension {}",
                self.truncation.max_edges, self.c
            )));
        }
        match self.mode {
            PixtonMode::Pic => {
                if self.truncation.bound < 0 {
                    return Err(Error::invalid("bound", "must be nonnegative"));
                }
            }
            PixtonMode::Moduli { k } => {
                if 2 * self.g as i64 - 2 + n as i64 <= 0 {
                    return Err(Error::invalid("(g,n)", "moduli mode needs 2g-2+n > 0"));
                }
                if self.d() != k * (2 * self.g as i64 - 2) {
                    return Err(Error::invalid("A", format!("sum of A must equal k(2g-2) = {}", k * (2 * self.g as i64 - 2))));
                }
            }
        }
        Ok(())
    }
}

static THREADS: AtomicUsize = AtomicUsize::new(0);

/// Worker count for graph-sum assembly; 0 means the available parallelism.
pub fn set_threads(n: usize) {
    THREADS.store(n, Ordering::Relaxed);
}

pub fn threads() -> usize {
    match THREADS.load(Ordering::Relaxed) {
        0 => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        n => n,
    }
}

/// Order-preserving parallel map over scoped threads.
pub(crate) fn parallel_map<T: Send, U: Send>(items: Vec<T>, f: impl Fn(T) -> U + Sync) -> Vec<U> {
    let workers = threads().min(items.len());
    if workers <= 1 {
        return items.into_iter().map(f).collect();
    }
    let mut slots: Vec<Option<U>> = (0..items.len()).map(|_| None).collect();
    let queue = Mutex::new(items.into_iter().enumerate());
    let done = Mutex::new(&mut slots);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let next = queue.lock().unwrap().next();
                let Some((i, item)) = next else { break };
                let out = f(item);
                done.lock().unwrap()[i] = Some(out);
            });
        }
    });
    slots.into_iter().map(|x| x.unwrap()).collect()
}

/// Coefficients of `Φ_a(x) = (1 - exp(-(a/2)x))/x` up to `x^order`.
pub fn edge_series(a: &Q, order: usize) -> Vec<Q> {
    (0..=order as u32)
        .map(|m| {
            let sign = if m % 2 == 0 { Q::from_integer(1.into()) } else { Q::from_integer((-1).into()) };
            sign * pow_q(&(a * qf(1, 2)), m + 1) / qbig(factorial(m + 1))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn edge_series_values() {
        assert_eq!(edge_series(&q(2), 0), vec![q(1)]);
        assert_eq!(edge_series(&q(1), 1), vec![qf(1, 2), qf(-1, 8)]);
        assert!(edge_series(&q(0), 4).iter().all(|x| *x == q(0)));
    }

    #[test]
    fn request_validation() {
        assert!(PixtonRequest::moduli(1, vec![1, 0], 0, 1).is_err());
        assert!(PixtonRequest::moduli(2, vec![2], 1, 1).is_ok());
        assert!(matches!(
            PixtonRequest::pic(1, vec![0], 2, 1, 1),
            Err(Error::Truncation(_))
        ));
    }
}
