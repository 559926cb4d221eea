use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graphs::{canonicalize, Automorphism, Graph};

/// Vertex symbol `η_{a,b}` with `a + b ≥ 2`; `κ_m = η_{m+1,0}` and `η = η_{0,2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Eta {
    pub a: u32,
    pub b: u32,
}

impl Eta {
    pub fn kappa(m: u32) -> Eta {
        Eta { a: m + 1, b: 0 }
    }

    pub fn eta() -> Eta {
        Eta { a: 0, b: 2 }
    }

    pub fn codim(&self) -> u32 {
        self.a + self.b - 1
    }

    /// `Some(m)` when this symbol is `κ_m`.
    pub fn as_kappa(&self) -> Option<u32> {
        (self.b == 0).then(|| self.a - 1)
    }

    pub fn symbol(&self) -> String {
        match (self.a, self.b) {
            (a, 0) => format!("kappa_{}", a - 1),
            (0, 2) => "eta".to_string(),
            (a, b) => format!("eta_{a}_{b}"),
        }
    }

    pub fn parse(s: &str) -> Result<Eta> {
        let bad = || Error::Parse(format!("unknown vertex symbol {s:?}"));
        if s == "eta" {
            return Ok(Eta::eta());
        }
        if let Some(m) = s.strip_prefix("kappa_") {
            let m: u32 = m.parse().map_err(|_| bad())?;
            if m == 0 {
                return Err(bad());
            }
            return Ok(Eta::kappa(m));
        }
        if let Some(rest) = s.strip_prefix("eta_") {
            let (a, b) = rest.split_once('_').ok_or_else(bad)?;
            let (a, b): (u32, u32) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if a + b < 2 {
                return Err(bad());
            }
            return Ok(Eta { a, b });
        }
        Err(bad())
    }
}

/// Monomial in vertex symbols, sorted, positive exponents only.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexMonomial(Vec<(Eta, u32)>);

impl VertexMonomial {
    pub fn one() -> VertexMonomial {
        VertexMonomial(Vec::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Eta, u32)>) -> VertexMonomial {
        let mut m = VertexMonomial::one();
        for (s, e) in pairs {
            m.mul_symbol(s, e);
        }
        m
    }

    pub fn pairs(&self) -> &[(Eta, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul_symbol(&mut self, s: Eta, e: u32) {
        if e == 0 {
            return;
        }
        match self.0.binary_search_by(|p| p.0.cmp(&s)) {
            Ok(i) => self.0[i].1 += e,
            Err(i) => self.0.insert(i, (s, e)),
        }
    }

    pub fn mul(&self, o: &VertexMonomial) -> VertexMonomial {
        let mut m = self.clone();
        for &(s, e) in &o.0 {
            m.mul_symbol(s, e);
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(s, e)| s.codim() * e).sum()
    }

    /// Kappa indices with multiplicity, or `None` if a non-κ symbol occurs.
    pub fn kappas(&self) -> Option<Vec<u32>> {
        let mut out = Vec::new();
        for &(s, e) in &self.0 {
            let m = s.as_kappa()?;
            out.extend(std::iter::repeat_n(m, e as usize));
        }
        Some(out)
    }

    pub fn only_kappa(&self) -> bool {
        self.0.iter().all(|(s, _)| s.b == 0)
    }
}

/// Monomial decoration of a graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decoration {
    /// ψ exponent per half-edge (legs included).
    pub psi: Vec<u32>,
    /// ξ exponent per leg, in marking order.
    pub xi_leg: Vec<u32>,
    /// ξ exponent per edge, in the order of `Graph::edges`.
    pub xi_edge: Vec<u32>,
    pub vertex: Vec<VertexMonomial>,
}

impl Decoration {
    pub fn trivial(g: &Graph) -> Decoration {
        Decoration {
            psi: vec![0; g.num_half_edges()],
            xi_leg: vec![0; g.num_legs()],
            xi_edge: vec![0; g.num_edges()],
            vertex: vec![VertexMonomial::one(); g.num_vertices()],
        }
    }

    pub fn fits(&self, g: &Graph) -> bool {
        self.psi.len() == g.num_half_edges()
            && self.xi_leg.len() == g.num_legs()
            && self.xi_edge.len() == g.num_edges()
            && self.vertex.len() == g.num_vertices()
    }

    pub fn degree(&self) -> u32 {
        self.psi.iter().sum::<u32>()
            + self.xi_leg.iter().sum::<u32>()
            + self.xi_edge.iter().sum::<u32>()
            + self.vertex.iter().map(|m| m.degree()).sum::<u32>()
    }

    pub fn is_trivial(&self) -> bool {
        self.degree() == 0
    }

    /// True if ξ or a non-κ vertex symbol occurs.
    pub fn has_pic_symbols(&self) -> bool {
        self.xi_leg.iter().any(|&e| e > 0)
            || self.xi_edge.iter().any(|&e| e > 0)
            || self.vertex.iter().any(|m| !m.only_kappa())
    }

    pub fn mul(&self, o: &Decoration) -> Decoration {
        let add = |a: &[u32], b: &[u32]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Decoration {
            psi: add(&self.psi, &o.psi),
            xi_leg: add(&self.xi_leg, &o.xi_leg),
            xi_edge: add(&self.xi_edge, &o.xi_edge),
            vertex: self.vertex.iter().zip(&o.vertex).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    /// Degree of the ψ/κ/η part living at vertex `v`.
    pub fn vertex_degree(&self, g: &Graph, v: usize) -> u32 {
        g.half_edges_at(v).iter().map(|&h| self.psi[h]).sum::<u32>() + self.vertex[v].degree()
    }

    /// Moves the decoration along vertex and half-edge bijections onto `target`.
    pub fn transport(&self, src: &Graph, target: &Graph, vmap: &[usize], hmap: &[usize]) -> Decoration {
        let mut out = Decoration::trivial(target);
        for h in 0..src.num_half_edges() {
            out.psi[hmap[h]] = self.psi[h];
        }
        out.xi_leg = self.xi_leg.clone();
        for (j, (a, _)) in src.edges().into_iter().enumerate() {
            out.xi_edge[target.edge_index(hmap[a]).unwrap()] = self.xi_edge[j];
        }
        for v in 0..src.num_vertices() {
            out.vertex[vmap[v]] = self.vertex[v].clone();
        }
        out
    }

    fn apply(&self, g: &Graph, aut: &Automorphism) -> Decoration {
        self.transport(g, g, &aut.vertices, &aut.half_edges)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "psi": self.psi,
            "xi": self.xi_leg,
            "xi_edges": self.xi_edge,
            "vertex": self.vertex.iter().map(|m| m.0.iter().map(|(s, e)| json!([s.symbol(), e])).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, g: &Graph) -> Result<Decoration> {
        let mut d = Decoration::trivial(g);
        let arr = |key: &str, len: usize| -> Result<Vec<u32>> {
            match v.get(key) {
                None => Ok(vec![0; len]),
                Some(x) => {
                    let out: Vec<u32> = serde_json::from_value(x.clone()).map_err(|e| Error::Parse(format!("{key}: {e}")))?;
                    if out.len() != len {
                        return Err(Error::Parse(format!("{key}: expected {len} entries")));
                    }
                    Ok(out)
                }
            }
        };
        d.psi = arr("psi", g.num_half_edges())?;
        d.xi_leg = arr("xi", g.num_legs())?;
        d.xi_edge = arr("xi_edges", g.num_edges())?;
        if let Some(vs) = v.get("vertex") {
            let vs: Vec<Vec<(String, u32)>> =
                serde_json::from_value(vs.clone()).map_err(|e| Error::Parse(format!("vertex: {e}")))?;
            if vs.len() != g.num_vertices() {
                return Err(Error::Parse("vertex: one monomial per vertex required".into()));
            }
            for (i, m) in vs.into_iter().enumerate() {
                let mut mono = VertexMonomial::one();
                for (s, e) in m {
                    mono.mul_symbol(Eta::parse(&s)?, e);
                }
                d.vertex[i] = mono;
            }
        }
        Ok(d)
    }
}

/// Canonical decorated graph; the decoration is minimal over automorphisms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedStratum {
    pub graph: Graph,
    pub decoration: Decoration,
}

impl DecoratedStratum {
    pub fn new(g: &Graph, d: &Decoration) -> DecoratedStratum {
        debug_assert!(d.fits(g));
        let cf = canonicalize(g);
        let moved = d.transport(g, &cf.graph, &cf.vertex_map, &cf.half_edge_map);
        let decoration = if cf.automorphisms.len() == 1 {
            moved
        } else {
            cf.automorphisms.iter().map(|a| moved.apply(&cf.graph, a)).min().unwrap()
        };
        DecoratedStratum { graph: cf.graph, decoration }
    }

    pub fn bare(g: &Graph) -> DecoratedStratum {
        DecoratedStratum::new(g, &Decoration::trivial(g))
    }

    pub fn codim(&self) -> u32 {
        self.graph.num_edges() as u32 + self.decoration.degree()
    }

    pub fn aut_order(&self) -> usize {
        canonicalize(&self.graph).aut_order()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "graph": serde_json::to_value(self.graph.to_json()).unwrap(),
            "decoration": self.decoration.to_json(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_roundtrip() {
        for s in [Eta::kappa(1), Eta::kappa(3), Eta::eta(), Eta { a: 1, b: 1 }, Eta { a: 0, b: 3 }] {
            assert_eq!(Eta::parse(&s.symbol()).unwrap(), s);
        }
        assert!(Eta::parse("kappa_0").is_err());
        assert!(Eta::parse("eta_1_0").is_err());
        assert_eq!(Eta { a: 1, b: 1 }.codim(), 1);
    }

    #[test]
    fn loop_decoration_symmetrised() {
        let g = Graph::from_edges(vec![0], vec![0], &[(0, 0)], &[0]).unwrap();
        let mut d1 = Decoration::trivial(&g);
        d1.psi[1] = 1;
        let mut d2 = Decoration::trivial(&g);
        d2.psi[2] = 1;
        assert_eq!(DecoratedStratum::new(&g, &d1), DecoratedStratum::new(&g, &d2));
        assert_eq!(DecoratedStratum::new(&g, &d1).codim(), 2);
    }

    #[test]
    fn transport_follows_relabelling() {
        let a = Graph::from_edges(vec![1, 0], vec![0, 0], &[(0, 1)], &[1, 1]).unwrap();
        let b = Graph::from_edges(vec![0, 1], vec![0, 0], &[(1, 0)], &[0, 0]).unwrap();
        let mut da = Decoration::trivial(&a);
        da.vertex[0] = VertexMonomial::from_pairs([(Eta::kappa(1), 1)]);
        da.psi[2] = 1;
        let mut db = Decoration::trivial(&b);
        db.vertex[1] = VertexMonomial::from_pairs([(Eta::kappa(1), 1)]);
        db.psi[2] = 1;
        assert_eq!(DecoratedStratum::new(&a, &da), DecoratedStratum::new(&b, &db));
    }
}
