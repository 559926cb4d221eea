//! Ring maps on decorations given by linear images of the generating symbols.

use std::collections::BTreeMap;

use num::{One, Zero};

use super::decoration::{Decoration, Eta};
use crate::arith::Q;
use crate::graphs::Graph;

/// A generator of the decoration monomials of a fixed graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Psi(usize),
    XiLeg(usize),
    XiEdge(usize),
    Vertex(usize, Eta),
}

impl Decoration {
    /// Generators with their exponents.
    pub fn symbols(&self) -> Vec<(Symbol, u32)> {
        let mut out = Vec::new();
        for (h, &e) in self.psi.iter().enumerate() {
            if e > 0 {
                out.push((Symbol::Psi(h), e));
            }
        }
        for (i, &e) in self.xi_leg.iter().enumerate() {
            if e > 0 {
                out.push((Symbol::XiLeg(i), e));
            }
        }
        for (j, &e) in self.xi_edge.iter().enumerate() {
            if e > 0 {
                out.push((Symbol::XiEdge(j), e));
            }
        }
        for (v, m) in self.vertex.iter().enumerate() {
            for &(s, e) in m.pairs() {
                out.push((Symbol::Vertex(v, s), e));
            }
        }
        out
    }

    pub fn mul_gen(&mut self, s: Symbol, e: u32) {
        match s {
            Symbol::Psi(h) => self.psi[h] += e,
            Symbol::XiLeg(i) => self.xi_leg[i] += e,
            Symbol::XiEdge(j) => self.xi_edge[j] += e,
            Symbol::Vertex(v, x) => self.vertex[v].mul_symbol(x, e),
        }
    }
}

/// Expands the image of `d` under the ring map sending each generator `s` to
/// `image(s)`, a linear combination of generators on `target`.
pub fn substitute(target: &Graph, d: &Decoration, image: impl Fn(Symbol) -> Vec<(Symbol, Q)>) -> BTreeMap<Decoration, Q> {
    let mut cur: BTreeMap<Decoration, Q> = BTreeMap::new();
    cur.insert(Decoration::trivial(target), Q::one());
    for (s, e) in d.symbols() {
        let lin = image(s);
        for _ in 0..e {
            let mut next: BTreeMap<Decoration, Q> = BTreeMap::new();
            for (m, c) in &cur {
                for (t, x) in &lin {
                    if x.is_zero() {
                        continue;
                    }
                    let mut m2 = m.clone();
                    m2.mul_gen(*t, 1);
                    *next.entry(m2).or_insert_with(Q::zero) += c * x;
                }
            }
            next.retain(|_, c| !c.is_zero());
            cur = next;
        }
    }
    cur
}
