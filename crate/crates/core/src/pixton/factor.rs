//! The factorized form: an exponential of divisor classes times the sum over
//! graphs without separating edges, and the compact-type theta class.

use num::{One, Zero};

use super::assemble::{build, canonical_multidegree, Factors};
use super::fit::fit_pieces;
use super::{pixton_class, PixtonMode, PixtonRequest, SampleSpec};
use crate::arith::{factorial, q, qbig, qf, Q};
use crate::calculus::multiply;
use crate::error::{Error, Result};
use crate::graphs::{canonicalize, enumerate_stable_graphs, Graph};
use crate::tautring::{Decoration, Eta, RPoly, Space, TautClass};

/// `c_A = -(δ₁ - Σ_{i∈I₁} a_i)²` for a separating edge.
pub fn c_a(a: &[i64], delta1: i64, side1: &[usize]) -> Q {
    let s: i64 = side1.iter().map(|&i| a[i]).sum();
    -q((delta1 - s) * (delta1 - s))
}

/// Stable one-edge graphs whose edge separates.
pub fn separating_divisors(g: u32, n: usize) -> Result<Vec<Graph>> {
    Ok(enumerate_stable_graphs(g, n, 1, None)?
        .into_iter()
        .filter(|gr| gr.num_edges() == 1 && gr.is_separating(0))
        .collect())
}

fn has_separating_edge(g: &Graph) -> bool {
    (0..g.num_edges()).any(|e| g.is_separating(e))
}

/// `½(-k²κ₁ + Σ(a_i+k)²ψ_i + Σ_Δ c_A(Δ)[Δ])` on moduli of stable curves, with
/// `[Δ] = ξ_{Δ*}1 / |Aut Δ|`. For `n = 0` this is the theta divisor
/// `-½(η + Σ d_Δ²[Δ])` pulled back along `ω^k`.
pub fn compact_type_theta(g: u32, a: &[i64], k: i64) -> Result<TautClass<Q>> {
    let n = a.len();
    let sp = Space::moduli(g, n);
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::invalid("(g,n)", "needs 2g-2+n > 0"));
    }
    let mut x = TautClass::zero(sp);
    let t = Graph::trivial(g, n);
    if sp.dim() >= 1 {
        for (i, &ai) in a.iter().enumerate() {
            let mut d = Decoration::trivial(&t);
            d.psi[t.leg(i)] = 1;
            x.add_raw(&t, &d, qf((ai + k) * (ai + k), 2));
        }
        let mut d = Decoration::trivial(&t);
        d.vertex[0].mul_symbol(Eta::kappa(1), 1);
        x.add_raw(&t, &d, qf(-k * k, 2));
    }
    for gr in separating_divisors(g, n)? {
        let delta1 = canonical_multidegree(&gr, k)[0];
        let side1: Vec<usize> = gr.legs_at(0);
        let aut = canonicalize(&gr).aut_order() as i64;
        x.add_raw(&gr, &Decoration::trivial(&gr), c_a(a, delta1, &side1) / q(2 * aut));
    }
    Ok(x)
}

/// `Σ_{j≤c} x^j / j!`.
fn exp_truncated(x: &TautClass<Q>, c: u32) -> Result<Vec<TautClass<Q>>> {
    let mut out = Vec::new();
    let mut p = TautClass::unit(x.space);
    for j in 0..=c {
        if j > 0 {
            p = multiply(&p, x)?;
        }
        out.push(p.scale(&(Q::one() / qbig(factorial(j)))));
    }
    Ok(out)
}

/// Codimension-`c` part of `exp(X) · Σ_{Γ without separating edges}`, with
/// polynomial coefficients. Its constant term in `r` is Pixton's class.
pub fn pixton_factorized(req: &PixtonRequest) -> Result<TautClass<RPoly>> {
    let PixtonMode::Moduli { k } = req.mode else {
        return Err(Error::UnsupportedDecoration("the factorized form is evaluated in moduli mode only".into()));
    };
    let sp = req.space();
    let gps = build(req, Factors::EdgesOnly, |g| !has_separating_edge(g))?;
    let (nse, _, _, failure) = fit_pieces(req, &gps, &SampleSpec::default());
    if let Some(f) = failure {
        return Err(Error::Certification(f.to_string()));
    }
    let top = nse.terms().values().filter_map(|p| p.degree()).max().unwrap_or(0);
    let theta = compact_type_theta(req.g, &req.a, k)?;
    let exps = exp_truncated(&theta, req.c)?;
    let mut out = TautClass::zero(sp);
    for p in 0..=top {
        let np = nse.map_coeffs(|c| c.coeffs().get(p).cloned().unwrap_or_else(Q::zero));
        if np.is_empty() {
            continue;
        }
        for j in 0..=req.c {
            let part = np.grade(req.c - j);
            if part.is_empty() {
                continue;
            }
            let prod = multiply(&exps[j as usize], &part)?.grade(req.c);
            let mono = RPoly::from_coeffs((0..=p).map(|i| if i == p { Q::one() } else { Q::zero() }).collect());
            for (s, c) in prod.terms() {
                out.add_term(s.clone(), mono.scale(c));
            }
        }
    }
    Ok(out)
}

/// The double ramification cycle `P^g` for `Σ a_i = k(2g-2)`.
pub fn dr_cycle(g: u32, a: &[i64], k: i64) -> Result<TautClass<Q>> {
    pixton_class(&PixtonRequest::moduli(g, a.to_vec(), k, g)?)
}
