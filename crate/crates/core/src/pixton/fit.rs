//! Exact polynomial fitting of the `r`-dependence with held-out certification.

use std::fmt;

use serde::Serialize;

use super::assemble::{build, Factors, GraphPieces};
use super::{parallel_map, PixtonRequest};
use crate::arith::{fmt_q, q, Q};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::tautring::{RPoly, TautClass};

/// Sampling plan. With base `R` and degree `D`, the fit uses `r = R..=R+D`,
/// checks `R+D+1`, then every `R+D+h` for `h` in `holdouts`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleSpec {
    /// Defaults to `2c`.
    pub degree: Option<usize>,
    /// Defaults to the per-graph bound `max(2, 1 + Σ|a_i| + max|δ(v)|·|V|)`.
    pub base: Option<i64>,
    pub holdouts: Vec<i64>,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { degree: None, base: None, holdouts: vec![3, 5, 8] }
    }
}

/// A sample the fitted polynomial failed to reproduce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FitFailure {
    pub graph: String,
    pub m: Vec<u32>,
    pub r: i64,
    pub predicted: String,
    pub actual: String,
}

impl fmt::Display for FitFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph {} with edge exponents {:?}: fit predicts {} at r = {}, sample is {}", self.graph, self.m, self.predicted, self.r, self.actual)
    }
}

#[derive(Clone, Debug)]
pub struct PieceFit {
    pub graph: Graph,
    pub m: Vec<u32>,
    pub base: i64,
    pub poly: RPoly,
}

#[derive(Clone, Debug)]
pub struct Fit {
    pub class: TautClass<RPoly>,
    pub pieces: Vec<PieceFit>,
    pub degree: usize,
    pub failure: Option<FitFailure>,
}

fn describe(g: &Graph) -> String {
    serde_json::to_string(&g.to_json()).unwrap()
}

fn fit_graph(gp: &GraphPieces, a: &[i64], degree: usize, spec: &SampleSpec) -> (Vec<PieceFit>, Option<FitFailure>) {
    let base = spec.base.unwrap_or_else(|| gp.base_r(a));
    let fit_rs: Vec<i64> = (base..=base + degree as i64).collect();
    let samples: Vec<Vec<Q>> = fit_rs.iter().map(|&r| gp.sample(a, r)).collect();
    let mut fits: Vec<PieceFit> = gp
        .pieces
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let pts: Vec<(Q, Q)> = fit_rs.iter().zip(&samples).map(|(&r, s)| (q(r), s[i].clone())).collect();
            PieceFit { graph: gp.graph.clone(), m: p.m.clone(), base, poly: RPoly::interpolate(&pts) }
        })
        .collect();
    let checks = std::iter::once(1).chain(spec.holdouts.iter().copied()).map(|h| base + degree as i64 + h);
    for r in checks {
        let s = gp.sample(a, r);
        for (pf, actual) in fits.iter().zip(s) {
            let predicted = pf.poly.eval(&q(r));
            if predicted != actual {
                let failure = FitFailure {
                    graph: describe(&gp.graph),
                    m: pf.m.clone(),
                    r,
                    predicted: fmt_q(&predicted),
                    actual: fmt_q(&actual),
                };
                return (fits, Some(failure));
            }
        }
    }
    fits.retain(|pf| !pf.poly.is_zero());
    (fits, None)
}

pub(crate) fn fit_pieces(req: &PixtonRequest, gps: &[GraphPieces], spec: &SampleSpec) -> (TautClass<RPoly>, Vec<PieceFit>, usize, Option<FitFailure>) {
    let degree = spec.degree.unwrap_or(2 * req.c as usize);
    let results = parallel_map(gps.iter().collect(), |gp| fit_graph(gp, &req.a, degree, spec));
    let mut class = TautClass::zero(req.space());
    let mut pieces = Vec::new();
    let mut failure = None;
    for (gp, (fits, fail)) in gps.iter().zip(results) {
        if failure.is_none() {
            failure = fail;
        }
        for pf in fits {
            let p = gp.pieces.iter().find(|p| p.m == pf.m).unwrap();
            for (s, c) in p.template.terms() {
                class.add_term(s.clone(), pf.poly.scale(c));
            }
            pieces.push(pf);
        }
    }
    (class, pieces, degree, failure)
}

/// Fits every `S_m(r)` and reports the first held-out mismatch, if any.
pub fn fit_pixton(req: &PixtonRequest, spec: &SampleSpec) -> Result<Fit> {
    let gps = build(req, Factors::Full, |_| true)?;
    let (class, pieces, degree, failure) = fit_pieces(req, &gps, spec);
    Ok(Fit { class, pieces, degree, failure })
}

pub fn pixton_polynomial_with(req: &PixtonRequest, spec: &SampleSpec) -> Result<TautClass<RPoly>> {
    let fit = fit_pixton(req, spec)?;
    match fit.failure {
        Some(f) => Err(Error::Certification(f.to_string())),
        None => Ok(fit.class),
    }
}

/// Coefficients of Pixton's class as certified polynomials in `r`.
pub fn pixton_polynomial(req: &PixtonRequest) -> Result<TautClass<RPoly>> {
    pixton_polynomial_with(req, &SampleSpec::default())
}

/// The constant term in `r`.
pub fn pixton_class(req: &PixtonRequest) -> Result<TautClass<Q>> {
    Ok(pixton_polynomial(req)?.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;
    use crate::tautring::{DecoratedStratum, Space};

    fn loop_stratum() -> DecoratedStratum {
        DecoratedStratum::bare(&Graph::from_edges(vec![0], vec![0], &[(0, 0)], &[0]).unwrap())
    }

    #[test]
    fn loop_polynomial() {
        let req = PixtonRequest::moduli(1, vec![0], 0, 1).unwrap();
        let p = pixton_polynomial(&req).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.get(&loop_stratum()).unwrap(), &RPoly::from_coeffs(vec![qf(-1, 24), q(0), qf(1, 24)]));
        let c = pixton_class(&req).unwrap();
        assert_eq!(c.get(&loop_stratum()), Some(&qf(-1, 24)));
    }

    #[test]
    fn undersampled_fit_fails() {
        let req = PixtonRequest::moduli(1, vec![0], 0, 1).unwrap();
        let spec = SampleSpec { degree: Some(0), ..SampleSpec::default() };
        assert!(matches!(pixton_polynomial_with(&req, &spec), Err(Error::Certification(_))));
        assert!(fit_pixton(&req, &spec).unwrap().failure.is_some());
    }

    #[test]
    fn codim_zero_is_unit() {
        let req = PixtonRequest::moduli(0, vec![1, 2, -3, 0], 0, 0).unwrap();
        assert_eq!(pixton_class(&req).unwrap(), TautClass::unit(Space::moduli(0, 4)));
    }

    #[test]
    fn polynomial_agrees_with_raw_samples() {
        let req = PixtonRequest::moduli(1, vec![2, -2], 0, 1).unwrap();
        let p = pixton_polynomial(&req).unwrap();
        for r in [20, 23] {
            let raw = super::super::pixton_raw(&req, r).unwrap();
            assert_eq!(p.substitute_r(&q(r)).first_difference(&raw), None);
        }
    }
}
