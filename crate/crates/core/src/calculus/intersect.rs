//! ψ/κ intersection numbers on moduli spaces of stable curves.
//!
//! Pure ψ integrals use string, dilaton and the DVV (Virasoro) recursion;
//! κ classes are traded for an extra marking via `κ_a = π_*ψ_{n+1}^{a+1}`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num::{One, Zero};

use crate::arith::{double_factorial_odd, q, qbig, qf, Q};

type Key = (u32, Vec<u32>);

fn psi_cache() -> &'static Mutex<HashMap<Key, Q>> {
    static C: OnceLock<Mutex<HashMap<Key, Q>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn kappa_cache() -> &'static Mutex<HashMap<(u32, Vec<u32>, Vec<u32>), Q>> {
    static C: OnceLock<Mutex<HashMap<(u32, Vec<u32>, Vec<u32>), Q>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

fn dim(g: u32, n: usize) -> i64 {
    3 * g as i64 - 3 + n as i64
}

/// `∫ ψ_1^{e_1} ⋯ ψ_n^{e_n}` over the moduli space of genus-`g` curves with `n` markings.
pub fn psi_integral(g: u32, exps: &[u32]) -> Q {
    let n = exps.len();
    if !stable(g, n) || exps.iter().map(|&e| e as i64).sum::<i64>() != dim(g, n) {
        return Q::zero();
    }
    let mut key = exps.to_vec();
    key.sort_unstable();
    if let Some(v) = psi_cache().lock().unwrap().get(&(g, key.clone())) {
        return v.clone();
    }
    let v = compute(g, &key);
    psi_cache().lock().unwrap().insert((g, key), v.clone());
    v
}

fn compute(g: u32, e: &[u32]) -> Q {
    let n = e.len();
    if g == 0 && n == 3 {
        return Q::one();
    }
    if g == 1 && n == 1 {
        return qf(1, 24);
    }
    if let Some(j) = e.iter().position(|&x| x == 0) {
        return string_at(g, e, j);
    }
    if let Some(j) = e.iter().position(|&x| x == 1) {
        return dilaton_at(g, e, j);
    }
    dvv_at(g, e, n - 1)
}

fn without(e: &[u32], j: usize) -> Vec<u32> {
    let mut v = e.to_vec();
    v.remove(j);
    v
}

/// String equation at marking `j` (requires `e[j] = 0`).
pub fn string_at(g: u32, e: &[u32], j: usize) -> Q {
    assert_eq!(e[j], 0);
    let rest = without(e, j);
    let mut acc = Q::zero();
    for i in 0..rest.len() {
        if rest[i] > 0 {
            let mut r = rest.clone();
            r[i] -= 1;
            acc += psi_integral(g, &r);
        }
    }
    acc
}

/// Dilaton equation at marking `j` (requires `e[j] = 1`).
pub fn dilaton_at(g: u32, e: &[u32], j: usize) -> Q {
    assert_eq!(e[j], 1);
    let rest = without(e, j);
    q(2 * g as i64 - 2 + rest.len() as i64) * psi_integral(g, &rest)
}

/// DVV recursion with the distinguished marking `j` (requires `e[j] ≥ 1`).
pub fn dvv_at(g: u32, e: &[u32], j: usize) -> Q {
    let k = e[j] as i64 - 1;
    assert!(k >= 0);
    let rest = without(e, j);
    let mut acc = Q::zero();
    for i in 0..rest.len() {
        let d = rest[i] as i64;
        let mut r = rest.clone();
        r[i] = (d + k) as u32;
        let c = Q::new(double_factorial_odd(k + d + 1), double_factorial_odd(d));
        acc += c * psi_integral(g, &r);
    }
    let half = qf(1, 2);
    for a in 0..k {
        let b = k - 1 - a;
        let c = qbig(double_factorial_odd(a + 1) * double_factorial_odd(b + 1)) * &half;
        if g >= 1 {
            let mut r = rest.clone();
            r.push(a as u32);
            r.push(b as u32);
            acc += &c * psi_integral(g - 1, &r);
        }
        let m = rest.len();
        for mask in 0..(1usize << m) {
            let mut left = vec![a as u32];
            let mut right = vec![b as u32];
            for (i, &x) in rest.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.push(x);
                } else {
                    right.push(x);
                }
            }
            for g1 in 0..=g {
                let l = psi_integral(g1, &left);
                if l.is_zero() {
                    continue;
                }
                acc += &c * l * psi_integral(g - g1, &right);
            }
        }
    }
    acc / qbig(double_factorial_odd(k + 2))
}

/// `∫ ψ^{e} κ_{a_1}⋯κ_{a_m}` over the moduli space of genus-`g` curves with `e.len()` markings.
pub fn psi_kappa_integral(g: u32, psi: &[u32], kappas: &[u32]) -> Q {
    let n = psi.len();
    if !stable(g, n) {
        return Q::zero();
    }
    let deg: i64 = psi.iter().map(|&x| x as i64).sum::<i64>() + kappas.iter().map(|&x| x as i64).sum::<i64>();
    if deg != dim(g, n) {
        return Q::zero();
    }
    if kappas.is_empty() {
        return psi_integral(g, psi);
    }
    let mut pk = psi.to_vec();
    pk.sort_unstable();
    let mut kk = kappas.to_vec();
    kk.sort_unstable();
    let key = (g, pk.clone(), kk.clone());
    if let Some(v) = kappa_cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let last = *kk.last().unwrap();
    let rest = &kk[..kk.len() - 1];
    let mut up = pk.clone();
    up.push(last + 1);
    let mut acc = psi_kappa_integral(g, &up, rest);
    let m = rest.len();
    for mask in 1..(1usize << m) {
        let mut merged = last;
        let mut keep = Vec::new();
        for (i, &a) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                merged += a;
            } else {
                keep.push(a);
            }
        }
        keep.push(merged);
        acc -= psi_kappa_integral(g, &pk, &keep);
    }
    kappa_cache().lock().unwrap().insert(key, acc.clone());
    acc
}

/// All sorted exponent vectors with nonzero-dimensional range up to `max_dim`,
/// filled into the table and returned.
pub fn table_entries(max_dim: i64) -> Vec<(u32, Vec<u32>, Q)> {
    let mut out = Vec::new();
    for g in 0..=(max_dim / 3 + 1) as u32 {
        for n in 1..=(max_dim + 3) as usize {
            if !stable(g, n) || dim(g, n) > max_dim || dim(g, n) < 0 {
                continue;
            }
            for e in partitions_into(dim(g, n) as u32, n) {
                let v = psi_integral(g, &e);
                out.push((g, e, v));
            }
        }
    }
    out
}

/// Nondecreasing vectors of length `n` with entries summing to `total`.
fn partitions_into(total: u32, n: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, n: usize, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut x = min;
        while x as u64 * n as u64 <= total as u64 {
            cur.push(x);
            rec(total - x, n - 1, x, cur, out);
            cur.pop();
            x += 1;
        }
    }
    let mut out = Vec::new();
    rec(total, n, 0, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_values() {
        assert_eq!(psi_integral(0, &[0, 0, 0]), q(1));
        assert_eq!(psi_integral(0, &[1, 0, 0, 0]), q(1));
        assert_eq!(psi_integral(1, &[1]), qf(1, 24));
        assert_eq!(psi_integral(0, &[2, 0, 0, 0, 0]), q(1));
        assert_eq!(psi_integral(0, &[1, 1, 0, 0, 0]), q(2));
        assert_eq!(psi_integral(1, &[1, 1]), qf(1, 24));
        assert_eq!(psi_integral(2, &[4]), qf(1, 1152));
        assert_eq!(psi_integral(3, &[7]), qf(1, 82944));
        assert_eq!(psi_integral(0, &[1, 0, 0]), q(0));
    }

    #[test]
    fn kappa_values() {
        assert_eq!(psi_kappa_integral(1, &[0], &[1]), qf(1, 24));
        assert_eq!(psi_kappa_integral(0, &[0, 0, 0, 0], &[1]), q(1));
        assert_eq!(psi_kappa_integral(0, &[0; 5], &[1, 1]), q(5));
        assert_eq!(psi_kappa_integral(0, &[0; 5], &[2]), q(1));
        assert_eq!(psi_kappa_integral(2, &[], &[3]), qf(1, 1152));
    }

    #[test]
    fn dvv_independent_of_marking() {
        let e = [2, 3, 1, 0];
        let base = psi_integral(1, &e);
        assert_eq!(dvv_at(1, &e, 0), base);
        assert_eq!(dvv_at(1, &e, 1), base);
        assert_eq!(dvv_at(1, &e, 2), base);
    }
}
