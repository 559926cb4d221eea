//! Graph-by-graph assembly.
//!
//! For a fixed graph and a vector `m` of edge exponents, the only dependence on
//! `r` is through `S_m(r) = r^{-h1} Σ_w ∏_e (w(h)w(h'))^{m_e+1}`. Everything
//! else (edge coefficients, ψ binomials, exponential factors, 1/|Aut|) is an
//! `r`-free template class, so a class at any `r` is `Σ S_m(r) · template`.

use num::bigint::BigInt;
use num::{One, Zero};

use super::{parallel_map, PixtonMode, PixtonRequest};
use crate::arith::{binomial, factorial, pow_q, q, qbig, qf, Q};
use crate::error::{Error, Result};
use crate::graphs::{canonicalize, enumerate_prestable_graphs, enumerate_stable_graphs, DegreeSpec, Graph};
use crate::tautring::{substitute, Decoration, Eta, Space, Symbol, TautClass};
use crate::weightings::{for_each_weighting, TreeSolver};

/// Which factors enter the templates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Factors {
    /// Full formula, codimension exactly `c`.
    Full,
    /// Edge factors only, all codimensions up to `c`.
    EdgesOnly,
}

pub(crate) struct Piece {
    pub m: Vec<u32>,
    pub template: TautClass<Q>,
}

pub(crate) struct GraphPieces {
    /// Canonical graph as stored in the output class.
    pub graph: Graph,
    pub targets: Vec<i64>,
    pub pieces: Vec<Piece>,
    solver: TreeSolver,
}

impl GraphPieces {
    /// Smallest sampling modulus: beyond it every leg and tree-edge residue
    /// has a fixed integer representative.
    pub fn base_r(&self, a: &[i64]) -> i64 {
        let sa: i64 = a.iter().map(|x| x.abs()).sum();
        let md = self.targets.iter().map(|x| x.abs()).max().unwrap_or(0);
        (1 + sa + md * self.targets.len() as i64).max(2)
    }

    /// `S_m(r)` for every piece.
    pub fn sample(&self, a: &[i64], r: i64) -> Vec<Q> {
        let edges = self.graph.edges();
        let mut acc = vec![BigInt::zero(); self.pieces.len()];
        let feasible = for_each_weighting(&self.graph, a, &self.targets, r, &self.solver, |w| {
            let prods: Vec<BigInt> = edges.iter().map(|&(h, h2)| BigInt::from(w[h] * w[h2])).collect();
            for (p, slot) in self.pieces.iter().zip(acc.iter_mut()) {
                let mut t = BigInt::one();
                for (x, &m) in prods.iter().zip(&p.m) {
                    t *= num::pow(x.clone(), m as usize + 1);
                }
                *slot += t;
            }
        });
        if !feasible {
            return vec![Q::zero(); self.pieces.len()];
        }
        let scale = pow_q(&q(r), self.graph.h1() as u32);
        acc.into_iter().map(|x| qbig(x) / &scale).collect()
    }
}

/// Ψ-class variables of the exponential with their linear coefficients.
fn exp_variables(req: &PixtonRequest, g: &Graph) -> Vec<(Symbol, Q)> {
    let mut out = Vec::new();
    match req.mode {
        PixtonMode::Pic => {
            for (i, &a) in req.a.iter().enumerate() {
                out.push((Symbol::Psi(g.leg(i)), qf(a * a, 2)));
                out.push((Symbol::XiLeg(i), q(a)));
            }
            for v in 0..g.num_vertices() {
                out.push((Symbol::Vertex(v, Eta::eta()), qf(-1, 2)));
            }
        }
        PixtonMode::Moduli { k } => {
            for (i, &a) in req.a.iter().enumerate() {
                out.push((Symbol::Psi(g.leg(i)), qf((a + k) * (a + k), 2)));
            }
            for v in 0..g.num_vertices() {
                out.push((Symbol::Vertex(v, Eta::kappa(1)), qf(-k * k, 2)));
            }
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Degree-`j` part of `exp(Σ c_s s)` as (decoration, coefficient) pairs.
fn exp_part(g: &Graph, vars: &[(Symbol, Q)], j: u32) -> Vec<(Decoration, Q)> {
    let mut out = Vec::new();
    fn rec(g: &Graph, vars: &[(Symbol, Q)], i: usize, left: u32, d: &mut Decoration, c: Q, out: &mut Vec<(Decoration, Q)>) {
        if i == vars.len() {
            if left == 0 {
                out.push((d.clone(), c));
            }
            return;
        }
        let (s, x) = &vars[i];
        let step = match s {
            Symbol::Vertex(_, e) => e.codim(),
            _ => 1,
        };
        let mut e = 0;
        while e * step <= left {
            let mut d2 = d.clone();
            d2.mul_gen(*s, e);
            let coef = &c * pow_q(x, e) / qbig(factorial(e));
            rec(g, vars, i + 1, left - e * step, &mut d2, coef, out);
            e += 1;
        }
    }
    rec(g, vars, 0, j, &mut Decoration::trivial(g), Q::one(), &mut out);
    out
}

/// `∏_e (ψ_h + ψ_h')^{m_e}` expanded.
fn edge_psi(g: &Graph, m: &[u32]) -> Vec<(Decoration, Q)> {
    let mut cur = vec![(Decoration::trivial(g), Q::one())];
    for (&(h, h2), &me) in g.edges().iter().zip(m) {
        let mut next = Vec::new();
        for (d, c) in &cur {
            for a in 0..=me {
                let mut d2 = d.clone();
                d2.psi[h] += a;
                d2.psi[h2] += me - a;
                next.push((d2, c * qbig(binomial(me, a))));
            }
        }
        cur = next;
    }
    cur
}

/// `∏_e (-1)^{m_e} / (2^{m_e+1} (m_e+1)!)`.
fn edge_coefficient(m: &[u32]) -> Q {
    m.iter().fold(Q::one(), |acc, &me| {
        let sign = if me % 2 == 0 { q(1) } else { q(-1) };
        acc * sign / (pow_q(&q(2), me + 1) * qbig(factorial(me + 1)))
    })
}

/// All `m ∈ ℕ^E` with `Σ m ≤ budget`.
fn edge_exponents(ne: usize, budget: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(i: usize, ne: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == ne {
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(i + 1, ne, left - x, cur, out);
            cur.pop();
        }
    }
    rec(0, ne, budget, &mut Vec::new(), &mut out);
    out
}

fn exceeds_vertex_dims(g: &Graph, d: &Decoration) -> bool {
    (0..g.num_vertices()).any(|v| d.vertex_degree(g, v) as i64 > g.vertex_dim(v))
}

/// Multidegree of `ω^k` on the components of a stable graph.
pub(crate) fn canonical_multidegree(g: &Graph, k: i64) -> Vec<i64> {
    (0..g.num_vertices())
        .map(|v| {
            let edge_he = g.valence(v) - g.legs_at(v).len();
            k * (2 * g.genus(v) as i64 - 2 + edge_he as i64)
        })
        .collect()
}

/// Graphs of the request with their vertex targets, in canonical order.
pub(crate) fn request_graphs(req: &PixtonRequest, max_edges: usize) -> Result<Vec<(Graph, Vec<i64>)>> {
    let n = req.n();
    match req.mode {
        PixtonMode::Pic => {
            let spec = DegreeSpec { d: req.d(), bound: req.truncation.bound };
            let gs = enumerate_prestable_graphs(req.g, n, max_edges, Some(spec))?;
            Ok(gs.into_iter().map(|g| {
                let t = g.degrees().to_vec();
                (g, t)
            }).collect())
        }
        PixtonMode::Moduli { k } => {
            let gs = enumerate_stable_graphs(req.g, n, max_edges, None)?;
            Ok(gs.into_iter().map(|g| {
                let t = canonical_multidegree(&g, k);
                (g, t)
            }).collect())
        }
    }
}

fn graph_pieces(req: &PixtonRequest, graph: Graph, targets: Vec<i64>, factors: Factors) -> GraphPieces {
    let space = req.space();
    let c = req.c;
    let ne = graph.num_edges() as u32;
    let aut = canonicalize(&graph).aut_order();
    let moduli = matches!(req.mode, PixtonMode::Moduli { .. });
    let vars = exp_variables(req, &graph);
    let mut pieces = Vec::new();
    if ne <= c {
        for m in edge_exponents(ne as usize, c - ne) {
            let sm: u32 = m.iter().sum();
            let base = edge_coefficient(&m) / q(aut as i64);
            let mut template = TautClass::zero(space);
            let psi = edge_psi(&graph, &m);
            let exps = match factors {
                Factors::Full => exp_part(&graph, &vars, c - ne - sm),
                Factors::EdgesOnly => vec![(Decoration::trivial(&graph), Q::one())],
            };
            for (d1, c1) in &psi {
                for (d2, c2) in &exps {
                    let d = d1.mul(d2);
                    if moduli && exceeds_vertex_dims(&graph, &d) {
                        continue;
                    }
                    template.add_raw(&graph, &d, &base * c1 * c2);
                }
            }
            if !template.is_empty() {
                pieces.push(Piece { m, template });
            }
        }
    }
    let solver = TreeSolver::new(&graph);
    GraphPieces { graph, targets, pieces, solver }
}

/// Templates for every graph of the request, optionally filtered.
pub(crate) fn build(req: &PixtonRequest, factors: Factors, keep: impl Fn(&Graph) -> bool + Sync) -> Result<Vec<GraphPieces>> {
    let max_edges = req.truncation.max_edges.min(req.c as usize);
    let graphs: Vec<(Graph, Vec<i64>)> = request_graphs(req, max_edges)?.into_iter().filter(|(g, _)| keep(g)).collect();
    let built = parallel_map(graphs, |(g, t)| graph_pieces(req, g, t, factors));
    Ok(built.into_iter().filter(|gp| !gp.pieces.is_empty()).collect())
}

/// The codimension-`c` component of Pixton's formula at a fixed modulus `r`.
pub fn pixton_raw(req: &PixtonRequest, r: i64) -> Result<TautClass<Q>> {
    if r < 1 {
        return Err(Error::invalid("r", "modulus must be positive"));
    }
    let gps = build(req, Factors::Full, |_| true)?;
    let parts = parallel_map(gps.iter().collect(), |gp| {
        let s = gp.sample(&req.a, r);
        let mut out = TautClass::zero(req.space());
        for (p, x) in gp.pieces.iter().zip(s) {
            if !x.is_zero() {
                out.add_assign(&p.template.scale(&x)).unwrap();
            }
        }
        out
    });
    let mut out = TautClass::zero(req.space());
    for p in parts {
        out.add_assign(&p)?;
    }
    Ok(out)
}

/// Pullback of a pic-formal class along `ω^k`: keeps stable graphs carrying the
/// multidegree of `ω^k`, sends `ξ_i ↦ kψ_i`, `η_{a,b} ↦ k^b κ_{a+b-1}` for `a > 0`
/// and `η ↦ k²(κ_1 - Σ_{legs at v} ψ_i)`. Terms exceeding a vertex dimension vanish.
pub fn specialize_to_moduli(x: &TautClass<Q>, k: i64) -> Result<TautClass<Q>> {
    if !matches!(x.space.mode, crate::tautring::Mode::Pic { .. }) {
        return Err(Error::SpaceMismatch("specialization expects a pic-mode class".into()));
    }
    let mut out = TautClass::zero(Space::moduli(x.space.g, x.space.n));
    for (s, c) in x.terms() {
        let g = &s.graph;
        if !g.is_stable() || g.degrees() != canonical_multidegree(g, k).as_slice() {
            continue;
        }
        let d = &s.decoration;
        if d.xi_edge.iter().any(|&e| e > 0) {
            return Err(Error::UnsupportedDecoration("ξ on an edge has no moduli specialization".into()));
        }
        for m in &d.vertex {
            for (e, _) in m.pairs() {
                if e.a == 0 && e.b != 2 {
                    return Err(Error::UnsupportedDecoration(format!("{} has no linear specialization", e.symbol())));
                }
            }
        }
        let bare = g.with_zero_degree();
        let image = |sym: Symbol| -> Vec<(Symbol, Q)> {
            match sym {
                Symbol::XiLeg(i) => vec![(Symbol::Psi(g.leg(i)), q(k))],
                Symbol::Vertex(v, e) if e.a == 0 => {
                    let k2 = q(k * k);
                    let mut l = vec![(Symbol::Vertex(v, Eta::kappa(1)), k2.clone())];
                    for i in g.legs_at(v) {
                        l.push((Symbol::Psi(g.leg(i)), -k2.clone()));
                    }
                    l
                }
                Symbol::Vertex(v, e) if e.b > 0 => {
                    vec![(Symbol::Vertex(v, Eta::kappa(e.a + e.b - 1)), pow_q(&q(k), e.b))]
                }
                other => vec![(other, q(1))],
            }
        };
        for (d2, c2) in substitute(g, d, image) {
            if exceeds_vertex_dims(&bare, &d2) {
                continue;
            }
            out.add_raw(&bare, &d2, c * c2);
        }
    }
    Ok(out)
}
