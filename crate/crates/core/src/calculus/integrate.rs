//! Degree-wise integration of decorated strata.

use num::{One, Zero};

use super::intersect::psi_kappa_integral;
use super::product::require_moduli;
use crate::arith::Q;
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::tautring::{Decoration, TautClass};

/// `∫ ξ_{Γ*}(γ)`, i.e. the product of vertex integrals (no automorphism factor).
pub fn integrate_stratum(g: &Graph, d: &Decoration) -> Result<Q> {
    if d.has_pic_symbols() {
        return Err(Error::UnsupportedDecoration("only ψ and κ can be integrated".into()));
    }
    let total = g.num_edges() as i64 + d.degree() as i64;
    let dim = 3 * g.total_genus() as i64 - 3 + g.num_legs() as i64;
    if total != dim {
        return Ok(Q::zero());
    }
    let mut acc = Q::one();
    for v in 0..g.num_vertices() {
        let psi: Vec<u32> = g.half_edges_at(v).iter().map(|&h| d.psi[h]).collect();
        let kappas = d.vertex[v].kappas().expect("κ-only monomial");
        acc *= psi_kappa_integral(g.genus(v), &psi, &kappas);
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// Degree of `x` in the top codimension.
pub fn integrate(x: &TautClass<Q>) -> Result<Q> {
    require_moduli(x)?;
    let mut total = Q::zero();
    for (s, c) in x.terms() {
        total += integrate_stratum(&s.graph, &s.decoration)? * c;
    }
    Ok(total)
}
