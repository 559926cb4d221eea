//! Pullback and pushforward along the map forgetting the last marking.

use std::collections::BTreeMap;

use num::{One, Zero};

use super::product::require_moduli;
use crate::arith::{q, Q};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::tautring::{Decoration, Eta, Space, TautClass, VertexMonomial};

fn kappa_list(m: &VertexMonomial) -> Vec<u32> {
    m.kappas().expect("κ-only monomial")
}

fn monomial(kappas: &[u32]) -> VertexMonomial {
    let mut m = VertexMonomial::one();
    for &a in kappas {
        m.mul_symbol(Eta::kappa(a), 1);
    }
    m
}

/// `π^* x` where `π` forgets marking `n` (the new last marking).
pub fn pullback_forgetful(x: &TautClass<Q>) -> Result<TautClass<Q>> {
    require_moduli(x)?;
    let sp = x.space;
    let up = Space::moduli(sp.g, sp.n + 1);
    let mut out = TautClass::zero(up);
    for (s, c) in x.terms() {
        let g = &s.graph;
        let d = &s.decoration;
        let nh = g.num_half_edges();
        let base_vertex_of: Vec<usize> = (0..nh).map(|h| g.vertex_of(h)).collect();
        let base_inv: Vec<usize> = (0..nh).map(|h| g.partner(h)).collect();
        for v in 0..g.num_vertices() {
            // new leg on v itself; κ_a -> κ_a - ψ_new^a
            let mut vo = base_vertex_of.clone();
            vo.push(v);
            let mut inv = base_inv.clone();
            inv.push(nh);
            let mut legs = g.legs().to_vec();
            legs.push(nh);
            let gv = Graph::new(g.genera().to_vec(), vec![0; g.num_vertices()], vo, inv, legs)?;
            let ks = kappa_list(&d.vertex[v]);
            for mask in 0..(1usize << ks.len()) {
                let mut dd = Decoration::trivial(&gv);
                dd.psi[..nh].copy_from_slice(&d.psi);
                dd.vertex = d.vertex.clone();
                let mut keep = Vec::new();
                let mut sign = 1;
                for (j, &a) in ks.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        dd.psi[nh] += a;
                        sign = -sign;
                    } else {
                        keep.push(a);
                    }
                }
                dd.vertex[v] = monomial(&keep);
                out.add_raw(&gv, &dd, c * q(sign));
            }
            // new leg on a bubble carrying h: -ψ_h^{e-1} on the main side
            for h in g.half_edges_at(v) {
                let e = d.psi[h];
                if e == 0 {
                    continue;
                }
                let b = g.num_vertices();
                let (leg, hs, hb) = (nh, nh + 1, nh + 2);
                let mut vo = base_vertex_of.clone();
                vo[h] = b;
                vo.extend([b, v, b]);
                let mut inv = base_inv.clone();
                inv.extend([leg, hb, hs]);
                let mut legs = g.legs().to_vec();
                legs.push(leg);
                let mut genus = g.genera().to_vec();
                genus.push(0);
                let gb = Graph::new(genus, vec![0; b + 1], vo, inv, legs)?;
                let mut dd = Decoration::trivial(&gb);
                dd.psi[..nh].copy_from_slice(&d.psi);
                dd.psi[h] = 0;
                dd.psi[hs] = e - 1;
                dd.vertex[..b].clone_from_slice(&d.vertex);
                out.add_raw(&gb, &dd, -c.clone());
            }
        }
    }
    Ok(out)
}

/// Rebuilds `g` without the half-edges in `drop`, with extra pairings and the given legs.
fn rebuild(
    g: &Graph,
    drop_vertex: Option<usize>,
    drop: &[usize],
    joins: &[(usize, usize)],
    legs: &[usize],
) -> Result<(Graph, Vec<Option<usize>>, Vec<Option<usize>>)> {
    let nh = g.num_half_edges();
    let mut hmap = vec![None; nh];
    let mut k = 0;
    for (h, slot) in hmap.iter_mut().enumerate() {
        if !drop.contains(&h) {
            *slot = Some(k);
            k += 1;
        }
    }
    let mut vmap = vec![None; g.num_vertices()];
    let mut genus = Vec::new();
    for (v, slot) in vmap.iter_mut().enumerate() {
        if Some(v) != drop_vertex {
            *slot = Some(genus.len());
            genus.push(g.genus(v));
        }
    }
    let mut vo = vec![0; k];
    let mut inv = vec![0; k];
    for h in 0..nh {
        if let Some(x) = hmap[h] {
            vo[x] = vmap[g.vertex_of(h)].unwrap();
            inv[x] = hmap[g.partner(h)].unwrap_or(x);
        }
    }
    for &(a, b) in joins {
        let (a, b) = (hmap[a].unwrap(), hmap[b].unwrap());
        inv[a] = b;
        inv[b] = a;
    }
    let legs = legs.iter().map(|&l| hmap[l].unwrap()).collect();
    let nv = genus.len();
    Ok((Graph::new(genus, vec![0; nv], vo, inv, legs)?, hmap, vmap))
}

/// `π_* x` where `π` forgets the last marking.
pub fn pushforward_forgetful(x: &TautClass<Q>) -> Result<TautClass<Q>> {
    require_moduli(x)?;
    let sp = x.space;
    if sp.n == 0 || 2 * sp.g as i64 - 2 + sp.n as i64 - 1 <= 0 {
        return Err(Error::invalid("n", "forgetting a marking must leave a stable space"));
    }
    let down = Space::moduli(sp.g, sp.n - 1);
    let mut out = TautClass::zero(down);
    for (s, c) in x.terms() {
        let g = &s.graph;
        let d = &s.decoration;
        let l = g.leg(sp.n - 1);
        let v = g.vertex_of(l);
        let others: Vec<usize> = g.half_edges_at(v).into_iter().filter(|&h| h != l).collect();
        if g.genus(v) == 0 && others.len() == 2 {
            let trivial = d.vertex[v].is_one() && g.half_edges_at(v).iter().all(|&h| d.psi[h] == 0);
            if !trivial {
                continue;
            }
            let (h1, h2) = (others[0], others[1]);
            let (p1, p2) = (g.partner(h1), g.partner(h2));
            let mut legs: Vec<usize> = g.legs()[..sp.n - 1].to_vec();
            let mut joins = Vec::new();
            match (p1 == h1, p2 == h2) {
                (true, true) => return Err(Error::invalid("class", "unstable contraction")),
                (true, false) => legs.iter_mut().for_each(|x| if *x == h1 { *x = p2 }),
                (false, true) => legs.iter_mut().for_each(|x| if *x == h2 { *x = p1 }),
                (false, false) => joins.push((p1, p2)),
            }
            let (ng, hmap, vmap) = rebuild(g, Some(v), &[l, h1, h2], &joins, &legs)?;
            let mut nd = Decoration::trivial(&ng);
            for h in 0..g.num_half_edges() {
                if let Some(x) = hmap[h] {
                    nd.psi[x] = d.psi[h];
                }
            }
            for w in 0..g.num_vertices() {
                if let Some(x) = vmap[w] {
                    nd.vertex[x] = d.vertex[w].clone();
                }
            }
            out.add_raw(&ng, &nd, c.clone());
            continue;
        }
        let legs: Vec<usize> = g.legs()[..sp.n - 1].to_vec();
        let (ng, hmap, _) = rebuild(g, None, &[l], &[], &legs)?;
        let mut base = Decoration::trivial(&ng);
        for h in 0..g.num_half_edges() {
            if let Some(x) = hmap[h] {
                base.psi[x] = d.psi[h];
            }
        }
        base.vertex = d.vertex.clone();
        let f = d.psi[l];
        let ks = kappa_list(&d.vertex[v]);
        let kappa0 = q(2 * g.genus(v) as i64 - 2 + others.len() as i64);
        let mut acc: BTreeMap<Decoration, Q> = BTreeMap::new();
        for mask in 0..(1usize << ks.len()) {
            let mut keep = Vec::new();
            let mut t = f;
            for (j, &a) in ks.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    t += a;
                } else {
                    keep.push(a);
                }
            }
            if t == 0 {
                continue;
            }
            let mut coeff = Q::one();
            if t == 1 {
                coeff = kappa0.clone();
            } else {
                keep.push(t - 1);
            }
            let mut nd = base.clone();
            nd.vertex[v] = monomial(&keep);
            *acc.entry(nd).or_insert_with(Q::zero) += coeff;
        }
        if f == 0 {
            for &h in &others {
                if d.psi[h] >= 1 {
                    let mut nd = base.clone();
                    nd.psi[hmap[h].unwrap()] -= 1;
                    *acc.entry(nd).or_insert_with(Q::zero) += Q::one();
                }
            }
        }
        for (nd, k) in acc {
            out.add_raw(&ng, &nd, k * c);
        }
    }
    Ok(out)
}
