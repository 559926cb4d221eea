//! Products of decorated strata over generic common degenerations.
//!
//! For strata `A`, `B` and a stable graph `G`, a generic structure is a pair of
//! edge subsets `S_A ∪ S_B = E(G)` with `G/S_A^c ≅ A`, `G/S_B^c ≅ B`, together
//! with the chosen isomorphisms. `Aut(G)` acts freely on structures, so each
//! contributes with weight `1/|Aut(G)|`; shared edges carry `-(ψ_h + ψ_h')`.

use std::collections::BTreeMap;

use num::{One, Zero};

use super::integrate::integrate_stratum;
use super::structures::{table, SubsetInfo, Table};
use crate::arith::{q, Q};
use crate::error::{Error, Result};
use crate::graphs::{automorphisms, canonicalize, Graph};
use crate::tautring::{DecoratedStratum, Decoration, Mode, Space, TautClass};

pub(crate) fn require_moduli(x: &TautClass<Q>) -> Result<()> {
    if x.space.mode != Mode::Moduli {
        return Err(Error::UnsupportedDecoration("ring operations need moduli-stable classes".into()));
    }
    for s in x.terms().keys() {
        if s.decoration.has_pic_symbols() {
            return Err(Error::UnsupportedDecoration(format!(
                "pic-formal symbol in a moduli-stable term on {:?}",
                s.graph.to_json()
            )));
        }
    }
    Ok(())
}

/// `{α ∘ σ : σ ∈ Aut}` with multiplicities.
fn orbit(s: &DecoratedStratum) -> BTreeMap<Decoration, usize> {
    let mut out = BTreeMap::new();
    let g = &s.graph;
    for a in automorphisms(g).iter() {
        let mut d = Decoration::trivial(g);
        for k in 0..g.num_half_edges() {
            d.psi[k] = s.decoration.psi[a.half_edges[k]];
        }
        for u in 0..g.num_vertices() {
            d.vertex[u] = s.decoration.vertex[a.vertices[u]].clone();
        }
        *out.entry(d).or_insert(0) += 1;
    }
    out
}

fn accumulate(map: &mut BTreeMap<Decoration, Q>, d: Decoration, c: Q) {
    let e = map.entry(d).or_insert_with(Q::zero);
    *e += c;
}

/// Pullback of a ψ/κ monomial on the key graph along the contraction `info`.
fn pull(g: &Graph, he: &[Option<usize>], vmap: &[usize], alpha: &Decoration, c: Q) -> Vec<(Decoration, Q)> {
    let mut base = Decoration::trivial(g);
    for h in 0..g.num_half_edges() {
        if let Some(k) = he[h] {
            base.psi[h] = alpha.psi[k];
        }
    }
    let mut cur: BTreeMap<Decoration, Q> = BTreeMap::new();
    cur.insert(base, c);
    for (u, mono) in alpha.vertex.iter().enumerate() {
        let fibre: Vec<usize> = (0..g.num_vertices()).filter(|&w| vmap[w] == u).collect();
        for &(sym, e) in mono.pairs() {
            for _ in 0..e {
                let mut next = BTreeMap::new();
                for (d, x) in &cur {
                    for &w in &fibre {
                        let mut d2 = d.clone();
                        d2.vertex[w].mul_symbol(sym, 1);
                        accumulate(&mut next, d2, x.clone());
                    }
                }
                cur = next;
            }
        }
    }
    cur.into_iter().collect()
}

fn excess(g: &Graph, shared: &[usize]) -> Vec<(Decoration, Q)> {
    let edges = g.edges();
    let mut cur = vec![(Decoration::trivial(g), Q::one())];
    for &e in shared {
        let (a, b) = edges[e];
        let mut next = Vec::with_capacity(cur.len() * 2);
        for (d, c) in cur {
            for h in [a, b] {
                let mut d2 = d.clone();
                d2.psi[h] += 1;
                next.push((d2, -c.clone()));
            }
        }
        cur = next;
    }
    cur
}

fn fits_dimensions(g: &Graph, d: &Decoration) -> bool {
    (0..g.num_vertices()).all(|v| d.vertex_degree(g, v) as i64 <= g.vertex_dim(v))
}

/// Visits every `(G, S_A, S_B)` with `G/S_B^c ≅ b_graph`, passing `G`, `|Aut G|`,
/// the B-side contraction, the shared edges and `a`'s pullback times the excess class.
fn for_each_generic(
    t: &Table,
    a: &DecoratedStratum,
    b_graph: &Graph,
    mut f: impl FnMut(&Graph, usize, &SubsetInfo, &[usize], Vec<(Decoration, Q)>),
) {
    let ea = a.graph.num_edges();
    let eb = b_graph.num_edges();
    let orb = orbit(a);
    let Some(entries) = t.index.get(&a.graph) else { return };
    for &(gi, mask_a) in entries {
        let tg = &t.graphs[gi];
        let ne = tg.graph.num_edges();
        if ne > ea + eb {
            continue;
        }
        let full = (1usize << ne) - 1;
        let comp = full & !mask_a;
        let info_a = &tg.subsets[mask_a];
        let mut pulled_a: Option<Vec<(Decoration, Q)>> = None;
        let mut sub = mask_a;
        loop {
            let mask_b = comp | sub;
            if mask_b.count_ones() as usize == eb && &tg.subsets[mask_b].key == b_graph {
                let pa = pulled_a.get_or_insert_with(|| {
                    let mut acc = BTreeMap::new();
                    for (d, m) in &orb {
                        for (x, c) in pull(&tg.graph, &info_a.he, &info_a.v, d, q(*m as i64)) {
                            accumulate(&mut acc, x, c);
                        }
                    }
                    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
                });
                let shared: Vec<usize> = (0..ne).filter(|&e| (mask_a & mask_b) >> e & 1 == 1).collect();
                let mut combined = Vec::new();
                for (de, ce) in excess(&tg.graph, &shared) {
                    for (da, ca) in pa.iter() {
                        combined.push((da.mul(&de), ca * &ce));
                    }
                }
                f(&tg.graph, tg.aut_order, &tg.subsets[mask_b], &shared, combined);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask_a;
        }
    }
}

/// Expands `a · b` into `(G, decoration, coefficient)` triples on table graphs.
fn product_terms(t: &Table, a: &DecoratedStratum, b: &DecoratedStratum, mut f: impl FnMut(&Graph, &Decoration, Q)) {
    let orb_b = orbit(b);
    for_each_generic(t, a, &b.graph, |g, aut, info_b, _shared, part_a| {
        let inv = Q::new(1.into(), (aut as i64).into());
        let mut pb = BTreeMap::new();
        for (d, m) in &orb_b {
            for (x, c) in pull(g, &info_b.he, &info_b.v, d, q(*m as i64)) {
                accumulate(&mut pb, x, c);
            }
        }
        let mut out: BTreeMap<Decoration, Q> = BTreeMap::new();
        for (da, ca) in &part_a {
            for (db, cb) in &pb {
                let d = da.mul(db);
                if fits_dimensions(g, &d) {
                    accumulate(&mut out, d, ca * cb);
                }
            }
        }
        for (d, c) in out {
            if !c.is_zero() {
                f(g, &d, c * &inv);
            }
        }
    });
}

fn max_edges(x: &TautClass<Q>) -> usize {
    x.terms().keys().map(|s| s.graph.num_edges()).max().unwrap_or(0)
}

pub fn multiply(x: &TautClass<Q>, y: &TautClass<Q>) -> Result<TautClass<Q>> {
    if x.space != y.space {
        return Err(Error::SpaceMismatch(format!("{:?} vs {:?}", x.space, y.space)));
    }
    require_moduli(x)?;
    require_moduli(y)?;
    let sp = x.space;
    let t = table(sp.g, sp.n, max_edges(x) + max_edges(y));
    let mut out = TautClass::zero(sp);
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            if (a.codim() + b.codim()) as i64 > sp.dim() {
                continue;
            }
            let w = ca * cb;
            product_terms(&t, a, b, |g, d, c| out.add_raw(g, d, c * &w));
        }
    }
    Ok(out)
}

/// `x^k`, with `x^0` the unit.
pub fn power(x: &TautClass<Q>, k: u32) -> Result<TautClass<Q>> {
    let mut acc = TautClass::unit(x.space);
    for _ in 0..k {
        acc = multiply(&acc, x)?;
    }
    Ok(acc)
}

/// `∫ x·y`, evaluated without canonicalizing the product terms.
pub fn pair(x: &TautClass<Q>, y: &TautClass<Q>) -> Result<Q> {
    if x.space != y.space {
        return Err(Error::SpaceMismatch(format!("{:?} vs {:?}", x.space, y.space)));
    }
    require_moduli(x)?;
    require_moduli(y)?;
    let sp = x.space;
    let t = table(sp.g, sp.n, max_edges(x) + max_edges(y));
    let mut total = Q::zero();
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            if (a.codim() + b.codim()) as i64 != sp.dim() {
                continue;
            }
            let w = ca * cb;
            let mut err = None;
            product_terms(&t, a, b, |g, d, c| match integrate_stratum(g, d) {
                Ok(v) => total += v * c * &w,
                Err(e) => err = Some(e),
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
    }
    Ok(total)
}

/// Class on `∏_v M̄_{g(v), n(v)}`: each term is one decorated stratum per vertex.
/// Legs of the factor at `v` follow the half-edges at `v` in increasing index order.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductClass {
    pub factors: Vec<(u32, usize)>,
    pub terms: BTreeMap<Vec<DecoratedStratum>, Q>,
}

impl ProductClass {
    pub fn integrate(&self) -> Result<Q> {
        let mut total = Q::zero();
        for (pieces, c) in &self.terms {
            let mut v = c.clone();
            for p in pieces {
                v *= integrate_stratum(&p.graph, &p.decoration)?;
                if v.is_zero() {
                    break;
                }
            }
            total += v;
        }
        Ok(total)
    }

    fn add(&mut self, k: Vec<DecoratedStratum>, c: Q) {
        let e = self.terms.entry(k.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }
}

/// Cuts `G` along the edges kept by `phi` into one decorated stratum per vertex of `gamma`.
fn split_pieces(
    gamma: &Graph,
    g: &Graph,
    d: &Decoration,
    he_to_gamma: &[Option<usize>],
    v_to_gamma: &[usize],
) -> Vec<DecoratedStratum> {
    let mut out = Vec::with_capacity(gamma.num_vertices());
    for v in 0..gamma.num_vertices() {
        let hv = gamma.half_edges_at(v);
        let verts: Vec<usize> = (0..g.num_vertices()).filter(|&w| v_to_gamma[w] == v).collect();
        let local_v = |w: usize| verts.iter().position(|&x| x == w).unwrap();
        let mut leg_vertex = vec![0; hv.len()];
        let mut leg_psi = vec![0; hv.len()];
        let mut edges = Vec::new();
        let mut edge_psi = Vec::new();
        for h in 0..g.num_half_edges() {
            if !verts.contains(&g.vertex_of(h)) {
                continue;
            }
            match he_to_gamma[h] {
                Some(t) => {
                    let i = hv.iter().position(|&x| x == t).unwrap();
                    leg_vertex[i] = local_v(g.vertex_of(h));
                    leg_psi[i] = d.psi[h];
                }
                None => {
                    let p = g.partner(h);
                    if h < p {
                        edges.push((local_v(g.vertex_of(h)), local_v(g.vertex_of(p))));
                        edge_psi.push((d.psi[h], d.psi[p]));
                    }
                }
            }
        }
        let pg = Graph::from_edges(
            verts.iter().map(|&w| g.genus(w)).collect(),
            vec![0; verts.len()],
            &edges,
            &leg_vertex,
        )
        .expect("fibre of a contraction is connected");
        let mut pd = Decoration::trivial(&pg);
        pd.psi[..hv.len()].copy_from_slice(&leg_psi);
        for (j, &(x, y)) in edge_psi.iter().enumerate() {
            pd.psi[hv.len() + 2 * j] = x;
            pd.psi[hv.len() + 2 * j + 1] = y;
        }
        for (i, &w) in verts.iter().enumerate() {
            pd.vertex[i] = d.vertex[w].clone();
        }
        out.push(DecoratedStratum::new(&pg, &pd));
    }
    out
}

/// Pullback of `x` along the gluing map of the stable graph `gamma`.
pub fn pullback_gluing(x: &TautClass<Q>, gamma: &Graph) -> Result<ProductClass> {
    require_moduli(x)?;
    let sp = x.space;
    if !gamma.is_stable() || gamma.total_genus() != sp.g || gamma.num_legs() != sp.n {
        return Err(Error::invalid("gamma", "must be a stable graph of the class's (g,n)"));
    }
    let gamma = gamma.with_zero_degree();
    let cf = canonicalize(&gamma);
    let b = cf.graph.clone();
    let mut inv_he = vec![0; gamma.num_half_edges()];
    for (h, &k) in cf.half_edge_map.iter().enumerate() {
        inv_he[k] = h;
    }
    let mut inv_v = vec![0; gamma.num_vertices()];
    for (v, &k) in cf.vertex_map.iter().enumerate() {
        inv_v[k] = v;
    }
    let auts_b = automorphisms(&b);
    let t = table(sp.g, sp.n, max_edges(x) + b.num_edges());
    let mut out = ProductClass {
        factors: (0..gamma.num_vertices()).map(|v| (gamma.genus(v), gamma.valence(v))).collect(),
        terms: BTreeMap::new(),
    };
    for (a, ca) in x.terms() {
        for_each_generic(&t, a, &b, |g, aut, info_b, _shared, part_a| {
            let inv = Q::new(1.into(), (aut as i64).into()) * ca;
            for tau in auts_b.iter() {
                let he: Vec<Option<usize>> =
                    info_b.he.iter().map(|x| x.map(|k| inv_he[tau.half_edges[k]])).collect();
                let vm: Vec<usize> = info_b.v.iter().map(|&k| inv_v[tau.vertices[k]]).collect();
                for (d, c) in &part_a {
                    if !fits_dimensions(g, d) {
                        continue;
                    }
                    let pieces = split_pieces(&gamma, g, d, &he, &vm);
                    out.add(pieces, c * &inv);
                }
            }
        });
    }
    Ok(out)
}

/// Pushforward along the gluing map of `gamma` (inverse bookkeeping of `pullback_gluing`).
pub fn pushforward_gluing(p: &ProductClass, gamma: &Graph, space: Space) -> Result<TautClass<Q>> {
    if p.factors.len() != gamma.num_vertices() {
        return Err(Error::invalid("gamma", "factor count differs from vertex count"));
    }
    let mut out = TautClass::zero(space);
    for (pieces, c) in &p.terms {
        let mut genus = Vec::new();
        let mut vertex_of = Vec::new();
        let mut involution = Vec::new();
        let mut psi = Vec::new();
        let mut vertex = Vec::new();
        // global half-edge of each half-edge of gamma
        let mut glue = vec![0; gamma.num_half_edges()];
        for (v, piece) in pieces.iter().enumerate() {
            let pg = &piece.graph;
            let (voff, hoff) = (genus.len(), vertex_of.len());
            genus.extend_from_slice(pg.genera());
            vertex.extend(piece.decoration.vertex.iter().cloned());
            for h in 0..pg.num_half_edges() {
                vertex_of.push(pg.vertex_of(h) + voff);
                involution.push(pg.partner(h) + hoff);
                psi.push(piece.decoration.psi[h]);
            }
            for (i, &t) in gamma.half_edges_at(v).iter().enumerate() {
                glue[t] = hoff + pg.leg(i);
            }
        }
        for (a, b) in gamma.edges() {
            involution[glue[a]] = glue[b];
            involution[glue[b]] = glue[a];
        }
        let legs: Vec<usize> = gamma.legs().iter().map(|&l| glue[l]).collect();
        let nv = genus.len();
        let g = Graph::new(genus, vec![0; nv], vertex_of, involution, legs)?;
        let mut d = Decoration::trivial(&g);
        d.psi = psi;
        d.vertex = vertex;
        out.add_raw(&g, &d, c.clone());
    }
    Ok(out)
}

/// `κ_a` on the trivial graph, for building test inputs.
#[cfg(test)]
pub(crate) fn kappa_class(space: Space, a: u32) -> TautClass<Q> {
    let g = Graph::trivial(space.g, space.n);
    let mut d = Decoration::trivial(&g);
    d.vertex[0].mul_symbol(crate::tautring::Eta::kappa(a), 1);
    let mut out = TautClass::zero(space);
    out.add_raw(&g, &d, Q::one());
    out
}
