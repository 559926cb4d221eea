use serde_json::{json, Value};

use super::oracle::{twisted_formula_class, one_point_psi_integral};
use super::{compare, perturb, qjson, CheckReport, Verdict};
use crate::arith::{factorial, qbig, Q};
use crate::calculus::{pair, power, spanning_set};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::pixton::{compact_type_theta, dr_cycle, fit_pixton, pixton_class, pixton_factorized, PixtonRequest, SampleSpec};
use crate::tautring::{Decoration, Space, TautClass};

fn report(name: &str, params: Value, witness: Option<Value>, ok: Verdict, details: Value) -> CheckReport {
    let verdict = if witness.is_some() { Verdict::Fail } else { ok };
    CheckReport { name: name.to_string(), params, verdict, witness, details }
}

/// Every stratum coefficient is a certified polynomial of degree at most `D`.
pub fn check_polynomiality(req: &PixtonRequest, spec: &SampleSpec) -> Result<CheckReport> {
    let fit = fit_pixton(req, spec)?;
    let params = json!({ "request": req, "samples": spec });
    let mut degrees = Vec::new();
    let mut witness = fit.failure.as_ref().map(|f| serde_json::to_value(f).unwrap());
    for (s, p) in fit.class.terms() {
        let deg = p.degree().unwrap_or(0);
        if deg > fit.degree && witness.is_none() {
            witness = Some(json!({ "stratum": s.to_json(), "degree": deg, "bound": fit.degree }));
        }
        degrees.push(json!({ "stratum": s.to_json(), "degree": deg }));
    }
    let max = fit.class.terms().values().filter_map(|p| p.degree()).max().unwrap_or(0);
    Ok(report("polynomiality", params, witness, Verdict::Pass, json!({ "max_degree": max, "degrees": degrees })))
}

/// Pairs `x` with every stratum of complementary codimension. In genus 0 the
/// pairing is perfect and a zero vector certifies `x = 0`; otherwise it is a
/// necessary condition only.
pub fn vanishing_report(name: &str, params: Value, x: &TautClass<Q>, c: u32) -> Result<CheckReport> {
    let sp = x.space;
    let comp = sp.dim() - c as i64;
    let mut witness = None;
    let mut count = 0;
    if comp >= 0 {
        for s in spanning_set(sp.g, sp.n, comp as usize)? {
            let mut y = TautClass::zero(sp);
            y.add_term(s.clone(), Q::from_integer(1.into()));
            let v = pair(x, &y)?;
            count += 1;
            if v != Q::from_integer(0.into()) {
                witness = Some(json!({ "pairing_with": s.to_json(), "value": qjson(&v) }));
                break;
            }
        }
    }
    let scope = if sp.g == 0 { "certified" } else { "necessary-condition" };
    Ok(report(name, params, witness, Verdict::Pass, json!({ "pairings": count, "scope": scope, "terms": x.len() })))
}

/// `P^c = 0` for `c > g`, tested by pairings.
pub fn check_vanishing(g: u32, a: &[i64], k: i64, c: u32, negative_control: bool) -> Result<CheckReport> {
    if c <= g {
        return Err(Error::invalid("c", format!("vanishing needs c > g = {g}")));
    }
    let req = PixtonRequest::moduli(g, a.to_vec(), k, c)?;
    let mut x = pixton_class(&req)?;
    if negative_control {
        x = perturb(&x);
    }
    let params = json!({ "g": g, "n": a.len(), "A": a, "d": req.d(), "k": k, "c": c, "negative_control": negative_control });
    vanishing_report("vanishing", params, &x, c)
}

/// Constant term of the factorized form against the direct graph sum.
pub fn check_factorization(g: u32, a: &[i64], k: i64, c: u32, negative_control: bool) -> Result<CheckReport> {
    let req = PixtonRequest::moduli(g, a.to_vec(), k, c)?;
    let mut f = pixton_factorized(&req)?.constant_term();
    let d = pixton_class(&req)?;
    if negative_control {
        f = perturb(&f);
    }
    let params = json!({ "g": g, "A": a, "k": k, "c": c, "negative_control": negative_control });
    Ok(report("factorization", params, compare(&f, &d), Verdict::Pass, json!({ "terms": d.len() })))
}

fn trees(x: &TautClass<Q>) -> TautClass<Q> {
    x.filter(|s| s.graph.is_tree())
}

/// Trees-only part of `P^g` against `θ^g / g!`.
pub fn check_compact_type(g: u32, a: &[i64], k: i64, negative_control: bool) -> Result<CheckReport> {
    let req = PixtonRequest::moduli(g, a.to_vec(), k, g)?;
    let mut p = trees(&pixton_class(&req)?);
    let theta = compact_type_theta(g, a, k)?;
    let t = trees(&power(&theta, g)?.scale(&(Q::from_integer(1.into()) / qbig(factorial(g)))));
    if negative_control {
        p = perturb(&p);
    }
    let params = json!({ "g": g, "A": a, "k": k, "negative_control": negative_control });
    Ok(report("compact-type", params, compare(&p, &t), Verdict::Pass, json!({ "tree_terms": t.len() })))
}

/// ψ-monomials of total degree `e` on the trivial graph of `(g, n)`.
fn psi_monomials(g: u32, n: usize, e: u32) -> Vec<TautClass<Q>> {
    let t = Graph::trivial(g, n);
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if i == exps.len() {
            if left == 0 {
                f(exps);
            }
            return;
        }
        for x in 0..=left {
            exps[i] = x;
            rec(i + 1, left - x, exps, f);
        }
        exps[i] = 0;
    }
    let sp = Space::moduli(g, n);
    rec(0, e, &mut exps, &mut |ex| {
        let mut d = Decoration::trivial(&t);
        for (i, &x) in ex.iter().enumerate() {
            d.psi[t.leg(i)] = x;
        }
        let mut c = TautClass::zero(sp);
        c.add_raw(&t, &d, Q::from_integer(1.into()));
        out.push(c);
    });
    out
}

/// `DR = 2^{-g} P_g^{g,k}(Ã)`: the engine's DR cycle against the original
/// formula evaluated independently, by ψ-pairings and termwise. For `k = 0`
/// the one-point ψ integral is also compared with its closed form.
pub fn check_conjecture_a(g: u32, a: &[i64], k: i64, negative_control: bool) -> Result<CheckReport> {
    let mut dr = dr_cycle(g, a, k)?;
    if negative_control {
        dr = perturb(&dr);
    }
    let oracle = twisted_formula_class(g, a, k, g)?;
    let sp = dr.space;
    let params = json!({ "g": g, "A": a, "k": k, "A_tilde": a.iter().map(|x| x + k).collect::<Vec<_>>(), "negative_control": negative_control });
    let comp = sp.dim() - g as i64;
    let mut integrals = Vec::new();
    let mut witness = None;
    if comp >= 0 {
        for m in psi_monomials(g, sp.n, comp as u32) {
            let x = pair(&dr, &m)?;
            let y = pair(&oracle, &m)?;
            let key = m.terms().keys().next().unwrap().decoration.psi.clone();
            integrals.push(json!({ "psi": key, "value": qjson(&x), "oracle": qjson(&y) }));
            if x != y && witness.is_none() {
                witness = Some(json!({ "psi": key, "value": qjson(&x), "oracle": qjson(&y) }));
            }
        }
    }
    if witness.is_none() {
        witness = compare(&dr, &oracle);
    }
    if witness.is_none() && k == 0 && sp.n >= 1 && comp >= 0 {
        let e = (2 * g as i64 - 3 + sp.n as i64) as u32;
        if e as i64 == comp {
            let m = psi_monomials(g, sp.n, e).into_iter().find(|m| m.terms().keys().next().unwrap().decoration.psi[0] == e).unwrap();
            let x = pair(&dr, &m)?;
            let closed = one_point_psi_integral(g, a);
            if x != closed {
                witness = Some(json!({ "one_point_integral": qjson(&x), "closed_form": qjson(&closed) }));
            }
        }
    }
    Ok(report("conjecture-a", params, witness, Verdict::Pass, json!({ "integrals": integrals, "terms": dr.len() })))
}
