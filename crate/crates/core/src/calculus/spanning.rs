//! Generating sets of strata classes in a fixed codimension.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::graphs::{enumerate_stable_graphs, Graph};
use crate::tautring::{DecoratedStratum, Decoration, Eta, VertexMonomial};

/// Bare boundary strata with exactly `codim` edges.
pub fn boundary_strata(g: u32, n: usize, codim: usize) -> Result<Vec<DecoratedStratum>> {
    let graphs = enumerate_stable_graphs(g, n, codim, None)?;
    Ok(graphs
        .iter()
        .filter(|gr| gr.num_edges() == codim)
        .map(DecoratedStratum::bare)
        .collect())
}

/// Partitions of `d` as nonincreasing parts, each at least 1.
fn partitions(d: u32, max: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=d.min(max)).rev() {
        for mut rest in partitions(d - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All decorations of degree `d` on `gr` with every vertex within its dimension.
fn decorations(gr: &Graph, d: u32) -> Vec<Decoration> {
    // slots: one per half-edge (ψ) then one per vertex (κ partition)
    let mut out = Vec::new();
    fn rec(gr: &Graph, slot: usize, left: u32, cur: &mut Decoration, out: &mut Vec<Decoration>) {
        let nh = gr.num_half_edges();
        if slot == nh + gr.num_vertices() {
            if left == 0 && (0..gr.num_vertices()).all(|v| cur.vertex_degree(gr, v) as i64 <= gr.vertex_dim(v)) {
                out.push(cur.clone());
            }
            return;
        }
        if slot < nh {
            for e in 0..=left {
                cur.psi[slot] = e;
                rec(gr, slot + 1, left - e, cur, out);
            }
            cur.psi[slot] = 0;
        } else {
            let v = slot - nh;
            for k in 0..=left {
                for p in partitions(k, k) {
                    let mut m = VertexMonomial::one();
                    for a in p {
                        m.mul_symbol(Eta::kappa(a), 1);
                    }
                    cur.vertex[v] = m;
                    rec(gr, slot + 1, left - k, cur, out);
                }
            }
            cur.vertex[v] = VertexMonomial::one();
        }
    }
    let mut cur = Decoration::trivial(gr);
    rec(gr, 0, d, &mut cur, &mut out);
    out
}

/// ψ/κ-decorated strata of total codimension `codim`, up to isomorphism.
pub fn decorated_strata(g: u32, n: usize, codim: usize) -> Result<Vec<DecoratedStratum>> {
    let graphs = enumerate_stable_graphs(g, n, codim, None)?;
    let mut seen = BTreeSet::new();
    for gr in &graphs {
        let d = codim - gr.num_edges();
        for dec in decorations(gr, d as u32) {
            seen.insert(DecoratedStratum::new(gr, &dec));
        }
    }
    Ok(seen.into_iter().collect())
}

/// Generating set used for numerical checks: boundary strata in genus 0
/// (they span and pair perfectly there), all decorated strata otherwise.
pub fn spanning_set(g: u32, n: usize, codim: usize) -> Result<Vec<DecoratedStratum>> {
    if g == 0 {
        boundary_strata(g, n, codim)
    } else {
        decorated_strata(g, n, codim)
    }
}
