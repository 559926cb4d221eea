use std::collections::BTreeMap;
use std::fmt::Debug;

use num::{One, Zero};
use serde_json::{json, Value};

use super::{DecoratedStratum, Decoration, RPoly};
use crate::arith::{fmt_q, parse_q, Q};
use crate::error::{Error, Result};
use crate::graphs::{Graph, GraphJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Formal sums over prestable graphs with multidegree, total degree `d`.
    Pic { d: i64 },
    /// Classes on the moduli space of stable curves.
    Moduli,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    pub g: u32,
    pub n: usize,
    pub mode: Mode,
}

impl Space {
    pub fn moduli(g: u32, n: usize) -> Space {
        Space { g, n, mode: Mode::Moduli }
    }

    pub fn pic(g: u32, n: usize, d: i64) -> Space {
        Space { g, n, mode: Mode::Pic { d } }
    }

    pub fn dim(&self) -> i64 {
        3 * self.g as i64 - 3 + self.n as i64
    }
}

pub trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn from_q(q: Q) -> Self;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl Coeff for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn from_q(q: Q) -> Self {
        q
    }
    fn to_json(&self) -> Value {
        Value::String(fmt_q(self))
    }
    fn from_json(v: &Value) -> Result<Self> {
        v.as_str().ok_or_else(|| Error::Parse("rational coefficient must be a string".into())).and_then(parse_q)
    }
}

impl Coeff for RPoly {
    fn zero() -> Self {
        RPoly::zero()
    }
    fn is_zero(&self) -> bool {
        RPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RPoly::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RPoly::mul(self, o)
    }
    fn from_q(q: Q) -> Self {
        RPoly::constant(q)
    }
    fn to_json(&self) -> Value {
        json!({ "poly": self.to_strings() })
    }
    fn from_json(v: &Value) -> Result<Self> {
        let s: Vec<String> = v
            .get("poly")
            .and_then(|p| serde_json::from_value(p.clone()).ok())
            .ok_or_else(|| Error::Parse("polynomial coefficient must be {\"poly\": [...]}".into()))?;
        RPoly::from_strings(&s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TautClass<R> {
    pub space: Space,
    terms: BTreeMap<DecoratedStratum, R>,
}

impl<R: Coeff> TautClass<R> {
    pub fn zero(space: Space) -> TautClass<R> {
        TautClass { space, terms: BTreeMap::new() }
    }

    /// The fundamental class (trivial graph; degree `d` in pic mode).
    pub fn unit(space: Space) -> TautClass<R> {
        let mut c = TautClass::zero(space);
        let mut g = Graph::trivial(space.g, space.n);
        if let Mode::Pic { d } = space.mode {
            g = g.with_degree(vec![d]).unwrap();
        }
        c.add_term(DecoratedStratum::bare(&g), R::from_q(Q::one()));
        c
    }

    pub fn terms(&self) -> &BTreeMap<DecoratedStratum, R> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, s: &DecoratedStratum) -> Option<&R> {
        self.terms.get(s)
    }

    /// Adds a term already in canonical form.
    pub fn add_term(&mut self, s: DecoratedStratum, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&s) {
            Some(x) => {
                let y = x.add(&c);
                if y.is_zero() {
                    self.terms.remove(&s);
                } else {
                    *x = y;
                }
            }
            None => {
                self.terms.insert(s, c);
            }
        }
    }

    /// Canonicalizes `(g, d)` and adds it.
    pub fn add_raw(&mut self, g: &Graph, d: &Decoration, c: R) {
        if c.is_zero() {
            return;
        }
        self.add_term(DecoratedStratum::new(g, d), c);
    }

    fn check_space(&self, o: &TautClass<R>) -> Result<()> {
        if self.space != o.space {
            return Err(Error::SpaceMismatch(format!("{:?} vs {:?}", self.space, o.space)));
        }
        Ok(())
    }

    pub fn add(&self, o: &TautClass<R>) -> Result<TautClass<R>> {
        self.check_space(o)?;
        let mut out = self.clone();
        for (s, c) in &o.terms {
            out.add_term(s.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, o: &TautClass<R>) -> Result<()> {
        self.check_space(o)?;
        for (s, c) in &o.terms {
            self.add_term(s.clone(), c.clone());
        }
        Ok(())
    }

    pub fn scale(&self, c: &R) -> TautClass<R> {
        let mut out = TautClass::zero(self.space);
        for (s, x) in &self.terms {
            out.add_term(s.clone(), x.mul(c));
        }
        out
    }

    pub fn neg(&self) -> TautClass<R> {
        self.scale(&R::from_q(-Q::one()))
    }

    pub fn sub(&self, o: &TautClass<R>) -> Result<TautClass<R>> {
        self.add(&o.neg())
    }

    pub fn grade(&self, c: u32) -> TautClass<R> {
        self.filter(|s| s.codim() == c)
    }

    pub fn filter(&self, f: impl Fn(&DecoratedStratum) -> bool) -> TautClass<R> {
        TautClass {
            space: self.space,
            terms: self.terms.iter().filter(|(s, _)| f(s)).map(|(s, c)| (s.clone(), c.clone())).collect(),
        }
    }

    pub fn codims(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().map(|s| s.codim()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> TautClass<S> {
        let mut out = TautClass::zero(self.space);
        for (s, c) in &self.terms {
            out.add_term(s.clone(), f(c));
        }
        out
    }

    /// First stratum where the two classes differ, with both coefficients.
    pub fn first_difference(&self, o: &TautClass<R>) -> Option<(DecoratedStratum, R, R)> {
        let keys: std::collections::BTreeSet<&DecoratedStratum> = self.terms.keys().chain(o.terms.keys()).collect();
        for k in keys {
            let a = self.terms.get(k).cloned().unwrap_or_else(R::zero);
            let b = o.terms.get(k).cloned().unwrap_or_else(R::zero);
            if a != b {
                return Some((k.clone(), a, b));
            }
        }
        None
    }

    pub fn to_json(&self) -> Value {
        let (mode, d) = match self.space.mode {
            Mode::Pic { d } => ("pic", d),
            Mode::Moduli => ("moduli", 0),
        };
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(s, c)| {
                json!({
                    "graph": serde_json::to_value(s.graph.to_json()).unwrap(),
                    "decoration": s.decoration.to_json(),
                    "coeff": c.to_json(),
                })
            })
            .collect();
        json!({ "g": self.space.g, "n": self.space.n, "mode": mode, "d": d, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<TautClass<R>> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field {k}")));
        let g = field("g")?.as_u64().ok_or_else(|| Error::Parse("g".into()))? as u32;
        let n = field("n")?.as_u64().ok_or_else(|| Error::Parse("n".into()))? as usize;
        let mode = match field("mode")?.as_str() {
            Some("moduli") => Mode::Moduli,
            Some("pic") => Mode::Pic { d: field("d")?.as_i64().ok_or_else(|| Error::Parse("d".into()))? },
            _ => return Err(Error::Parse("mode must be \"pic\" or \"moduli\"".into())),
        };
        let mut out = TautClass::zero(Space { g, n, mode });
        let terms = field("terms")?.as_array().ok_or_else(|| Error::Parse("terms must be a list".into()))?;
        for t in terms {
            let gj: GraphJson = serde_json::from_value(t.get("graph").cloned().unwrap_or(Value::Null))
                .map_err(|e| Error::Parse(format!("graph: {e}")))?;
            let gr = Graph::from_json(&gj)?;
            if gr.total_genus() != g || gr.num_legs() != n {
                return Err(Error::Parse("term graph does not live on (g,n)".into()));
            }
            let dec = Decoration::from_json(t.get("decoration").unwrap_or(&Value::Null), &gr)?;
            let c = R::from_json(t.get("coeff").unwrap_or(&Value::Null))?;
            out.add_raw(&gr, &dec, c);
        }
        Ok(out)
    }
}

impl TautClass<RPoly> {
    pub fn substitute_r(&self, r0: &Q) -> TautClass<Q> {
        self.map_coeffs(|p| p.eval(r0))
    }

    pub fn constant_term(&self) -> TautClass<Q> {
        self.map_coeffs(|p| p.constant_term())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};
    use crate::tautring::{Eta, VertexMonomial};

    fn sample() -> TautClass<Q> {
        let sp = Space::moduli(1, 1);
        let mut c = TautClass::zero(sp);
        let lp = Graph::from_edges(vec![0], vec![0], &[(0, 0)], &[0]).unwrap();
        c.add_raw(&lp, &Decoration::trivial(&lp), qf(1, 2));
        let t = Graph::trivial(1, 1);
        let mut d = Decoration::trivial(&t);
        d.psi[0] = 1;
        c.add_raw(&t, &d, qf(-1, 3));
        let mut k = Decoration::trivial(&t);
        k.vertex[0] = VertexMonomial::from_pairs([(Eta::kappa(1), 1)]);
        c.add_raw(&t, &k, q(2));
        c
    }

    #[test]
    fn linear_algebra() {
        let c = sample();
        assert!(c.add(&c.neg()).unwrap().is_empty());
        assert!(c.scale(&q(0)).is_empty());
        let mut one = TautClass::zero(c.space);
        let lp = Graph::from_edges(vec![0], vec![0], &[(0, 0)], &[0]).unwrap();
        one.add_raw(&lp, &Decoration::trivial(&lp), qf(1, 2));
        one.add_raw(&lp, &Decoration::trivial(&lp), qf(1, 3));
        assert_eq!(one.len(), 1);
        assert_eq!(one.terms().values().next().unwrap(), &qf(5, 6));
    }

    #[test]
    fn mismatch() {
        let c = sample();
        let other: TautClass<Q> = TautClass::unit(Space::moduli(1, 2));
        assert!(c.add(&other).is_err());
    }

    #[test]
    fn grading() {
        let c = sample();
        assert_eq!(c.codims(), vec![1]);
        assert_eq!(c.grade(1), c);
        assert!(c.grade(0).is_empty());
    }

    #[test]
    fn json_roundtrip() {
        let c = sample();
        let back: TautClass<Q> = TautClass::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        let p = c.map_coeffs(|x| RPoly::from_coeffs(vec![x.clone(), q(1)]));
        let back: TautClass<RPoly> = TautClass::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert_eq!(p.constant_term(), c);
    }
}
