//! Independent evaluations used to cross-check the engine.
//!
//! `twisted_formula_class` evaluates the original k-twisted formula: leg factors
//! `exp(ã_i² ψ_i)`, vertex factors `exp(-k² κ₁)`, edge factors
//! `(1 - exp(-w w' (ψ+ψ')))/(ψ+ψ')`, vertex targets `k(2g(v) - 2 + n(v))`
//! with legs counted in `n(v)`, weightings by exhaustive search, automorphisms
//! by permutation search. The double ramification cycle is `2^{-g}` times its
//! constant term.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::arith::{binomial, factorial, pow_q, q, qbig, Q};
use crate::error::{Error, Result};
use crate::graphs::{enumerate_stable_graphs, Graph};
use crate::tautring::{Decoration, Eta, RPoly, Space, TautClass};

type Series = BTreeMap<Decoration, Q>;

fn mul_series(x: &Series, y: &Series, max_deg: u32) -> Series {
    let mut out = Series::new();
    for (a, ca) in x {
        for (b, cb) in y {
            let d = a.mul(b);
            if d.degree() <= max_deg {
                *out.entry(d).or_insert_with(Q::zero) += ca * cb;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Automorphisms counted as half-edge permutations fixing legs, commuting
/// with the involution and inducing a genus-preserving vertex bijection.
pub fn brute_force_aut(g: &Graph) -> usize {
    let h = g.num_half_edges();
    let mut perm: Vec<usize> = Vec::with_capacity(h);
    let mut used = vec![false; h];
    fn rec(g: &Graph, perm: &mut Vec<usize>, used: &mut Vec<bool>) -> usize {
        let h = g.num_half_edges();
        if perm.len() == h {
            let mut vmap = vec![usize::MAX; g.num_vertices()];
            for x in 0..h {
                let (u, w) = (g.vertex_of(x), g.vertex_of(perm[x]));
                if vmap[u] != usize::MAX && vmap[u] != w {
                    return 0;
                }
                vmap[u] = w;
            }
            let mut hit = vec![false; g.num_vertices()];
            for (u, &w) in vmap.iter().enumerate() {
                if w == usize::MAX {
                    continue;
                }
                if hit[w] || g.genus(u) != g.genus(w) || g.degree(u) != g.degree(w) {
                    return 0;
                }
                hit[w] = true;
            }
            return 1;
        }
        let x = perm.len();
        let mut total = 0;
        for y in 0..h {
            if used[y] || g.is_leg(x) != g.is_leg(y) || (g.is_leg(x) && x != y) {
                continue;
            }
            let px = g.partner(x);
            if px < x && perm[px] != g.partner(y) {
                continue;
            }
            used[y] = true;
            perm.push(y);
            total += rec(g, perm, used);
            perm.pop();
            used[y] = false;
        }
        total
    }
    rec(g, &mut perm, &mut used)
}

/// Degree-`c` part of the original formula on one graph at modulus `r`,
/// before the `r^{-h1}/|Aut|` weight.
fn graph_sum(g: &Graph, at: &[i64], k: i64, c: u32, r: i64) -> Series {
    let ne = g.num_edges() as u32;
    if ne > c {
        return Series::new();
    }
    let budget = c - ne;
    let mut base: Series = Series::new();
    base.insert(Decoration::trivial(g), Q::one());
    for (i, &a) in at.iter().enumerate() {
        let mut s = Series::new();
        for e in 0..=budget {
            let mut d = Decoration::trivial(g);
            d.psi[g.leg(i)] = e;
            s.insert(d, pow_q(&q(a * a), e) / qbig(factorial(e)));
        }
        base = mul_series(&base, &s, budget);
    }
    for v in 0..g.num_vertices() {
        let mut s = Series::new();
        for e in 0..=budget {
            let mut d = Decoration::trivial(g);
            d.vertex[v].mul_symbol(Eta::kappa(1), e);
            s.insert(d, pow_q(&q(-k * k), e) / qbig(factorial(e)));
        }
        base = mul_series(&base, &s, budget);
    }
    let edges = g.edges();
    let targets: Vec<i64> = (0..g.num_vertices())
        .map(|v| k * (2 * g.genus(v) as i64 - 2 + g.valence(v) as i64))
        .collect();
    let mut total = Series::new();
    let mut w = vec![0i64; g.num_half_edges()];
    for (i, &a) in at.iter().enumerate() {
        w[g.leg(i)] = a.rem_euclid(r);
    }
    let mut free = vec![0i64; edges.len()];
    loop {
        for (j, &(h, h2)) in edges.iter().enumerate() {
            w[h] = free[j];
            w[h2] = (-free[j]).rem_euclid(r);
        }
        let ok = (0..g.num_vertices()).all(|v| {
            let s: i64 = g.half_edges_at(v).iter().map(|&x| w[x]).sum();
            (s - targets[v]).rem_euclid(r) == 0
        });
        if ok {
            let mut acc = base.clone();
            for &(h, h2) in &edges {
                let x = q(w[h] * w[h2]);
                let mut s = Series::new();
                for m in 0..=budget {
                    let coef = if m % 2 == 0 { q(1) } else { q(-1) } * pow_q(&x, m + 1) / qbig(factorial(m + 1));
                    for j in 0..=m {
                        let mut d = Decoration::trivial(g);
                        d.psi[h] = j;
                        d.psi[h2] = m - j;
                        *s.entry(d).or_insert_with(Q::zero) += &coef * qbig(binomial(m, j));
                    }
                }
                acc = mul_series(&acc, &s, budget);
            }
            for (d, x) in acc {
                if d.degree() == budget {
                    *total.entry(d).or_insert_with(Q::zero) += x;
                }
            }
        }
        let mut j = 0;
        loop {
            if j == free.len() {
                total.retain(|_, c| !c.is_zero());
                return total;
            }
            free[j] += 1;
            if free[j] < r {
                break;
            }
            free[j] = 0;
            j += 1;
        }
    }
}

/// The original formula at modulus `r` for `Ã = A + k`, codimension `c`.
pub fn twisted_formula_at(g: u32, a: &[i64], k: i64, c: u32, r: i64) -> Result<TautClass<Q>> {
    let at: Vec<i64> = a.iter().map(|x| x + k).collect();
    let mut out = TautClass::zero(Space::moduli(g, a.len()));
    for gr in enumerate_stable_graphs(g, a.len(), c as usize, None)? {
        let weight = Q::one() / (pow_q(&q(r), gr.h1() as u32) * q(brute_force_aut(&gr) as i64));
        for (d, x) in graph_sum(&gr, &at, k, c, r) {
            out.add_raw(&gr, &d, x * &weight);
        }
    }
    Ok(out)
}

/// `2^{-c}` times the constant term of the original formula, with terms that
/// exceed a vertex dimension (zero classes) removed.
pub fn twisted_formula_class(g: u32, a: &[i64], k: i64, c: u32) -> Result<TautClass<Q>> {
    if a.iter().sum::<i64>() != k * (2 * g as i64 - 2) {
        return Err(Error::invalid("A", "sum of A must equal k(2g-2)"));
    }
    let sa: i64 = a.iter().map(|x| (x + k).abs()).sum();
    let r0 = 3 + sa + k.abs() * (4 * g as i64 + 2 * a.len() as i64 + 4 * c as i64) * (c as i64 + 1);
    let deg = 2 * c as i64;
    let rs: Vec<i64> = (0..=deg + 2).map(|i| r0 + i).collect();
    let samples: Vec<TautClass<Q>> = rs.iter().map(|&r| twisted_formula_at(g, a, k, c, r)).collect::<Result<_>>()?;
    let mut keys: Vec<_> = samples.iter().flat_map(|s| s.terms().keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let scale = Q::one() / pow_q(&q(2), c);
    let mut out = TautClass::zero(Space::moduli(g, a.len()));
    for key in keys {
        let val = |i: usize| samples[i].get(&key).cloned().unwrap_or_else(Q::zero);
        let pts: Vec<(Q, Q)> = (0..=deg as usize).map(|i| (q(rs[i]), val(i))).collect();
        let p = RPoly::interpolate(&pts);
        for i in deg as usize + 1..rs.len() {
            if p.eval(&q(rs[i])) != val(i) {
                return Err(Error::Certification(format!("oracle coefficient not polynomial of degree {deg} at r = {}", rs[i])));
            }
        }
        let gr = &key.graph;
        if (0..gr.num_vertices()).any(|v| key.decoration.vertex_degree(gr, v) as i64 > gr.vertex_dim(v)) {
            continue;
        }
        out.add_term(key, p.constant_term() * &scale);
    }
    Ok(out)
}

/// Coefficients of `S(z) = sinh(z/2)/(z/2)` up to `z^{2m}` (even powers).
fn s_series(m: usize) -> Vec<Q> {
    (0..=m).map(|j| Q::one() / (pow_q(&q(4), j as u32) * qbig(factorial(2 * j as u32 + 1)))).collect()
}

fn mul_even(x: &[Q], y: &[Q]) -> Vec<Q> {
    let m = x.len();
    (0..m).map(|i| (0..=i).map(|j| &x[j] * &y[i - j]).sum()).collect()
}

/// `∫ DR_g(A) ψ_1^{2g-3+n} = [z^{2g}] ∏_{i≥2} S(a_i z) / S(z)` for untwisted `A`.
pub fn one_point_psi_integral(g: u32, a: &[i64]) -> Q {
    let m = g as usize;
    let s = s_series(m);
    let mut inv = vec![Q::zero(); m + 1];
    inv[0] = Q::one();
    for i in 1..=m {
        inv[i] = -(1..=i).map(|j| &s[j] * &inv[i - j]).sum::<Q>();
    }
    let mut acc = inv;
    for &ai in a.iter().skip(1) {
        let sa: Vec<Q> = s.iter().enumerate().map(|(j, c)| c * pow_q(&q(ai * ai), j as u32)).collect();
        acc = mul_even(&acc, &sa);
    }
    acc[m].clone()
}

/// `∫_{M̄_{g,1}} λ_g ψ^{2g-2}`, from the generating series `(z/2)/sin(z/2)`.
pub fn lambda_g_integral(g: u32) -> Q {
    // DR_g(0) = (-1)^g λ_g.
    let x = one_point_psi_integral(g, &[0]);
    if g % 2 == 0 {
        x
    } else {
        -x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;

    #[test]
    fn automorphism_counts() {
        let lp = Graph::from_edges(vec![0], vec![0], &[(0, 0)], &[0]).unwrap();
        assert_eq!(brute_force_aut(&lp), 2);
        let banana = Graph::from_edges(vec![0, 0], vec![0, 0], &[(0, 1), (0, 1), (0, 1)], &[]).unwrap();
        assert_eq!(brute_force_aut(&banana), 12);
    }

    #[test]
    fn known_lambda_integrals() {
        assert_eq!(lambda_g_integral(1), qf(1, 24));
        assert_eq!(lambda_g_integral(2), qf(7, 5760));
    }
}
