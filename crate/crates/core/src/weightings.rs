//! Weightings mod r and integral twists.
//!
//! Both are solved on a spanning tree: non-tree edges are free, tree edges are
//! forced by peeling leaves towards the root. The root condition is the global
//! feasibility condition.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Weighting {
    pub r: i64,
    /// Value per half-edge of the graph, in `0..r`.
    pub w: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightingSet {
    pub feasible: bool,
    pub weightings: Vec<Weighting>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Twist {
    /// Value per half-edge.
    pub i: Vec<i64>,
    /// A level function on vertices certifying the absence of strict cycles.
    pub levels: Vec<i64>,
}

/// Spanning-tree data shared by the mod-r and integral solvers.
#[derive(Clone, Debug)]
pub struct TreeSolver {
    /// Lower half-edge of every non-tree edge.
    free: Vec<usize>,
    /// (vertex, half-edge at vertex towards parent) in leaves-first order.
    peel: Vec<(usize, usize)>,
    half_edges_at: Vec<Vec<usize>>,
    partner: Vec<usize>,
    legs: Vec<usize>,
}

impl TreeSolver {
    pub fn new(g: &Graph) -> TreeSolver {
        let nv = g.num_vertices();
        let half_edges_at: Vec<Vec<usize>> = (0..nv).map(|v| g.half_edges_at(v)).collect();
        let mut seen = vec![false; nv];
        let mut tree_edge = vec![false; g.num_half_edges()];
        let mut order = vec![0];
        let mut parent_he = vec![usize::MAX; nv];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &h in &half_edges_at[u] {
                if g.is_leg(h) {
                    continue;
                }
                let h2 = g.partner(h);
                let w = g.vertex_of(h2);
                if !seen[w] {
                    seen[w] = true;
                    parent_he[w] = h2;
                    tree_edge[h] = true;
                    tree_edge[h2] = true;
                    order.push(w);
                }
            }
        }
        let free = g.edges().into_iter().filter(|&(a, _)| !tree_edge[a]).map(|(a, _)| a).collect();
        let peel = order.iter().rev().filter(|&&v| v != 0).map(|&v| (v, parent_he[v])).collect();
        TreeSolver {
            free,
            peel,
            half_edges_at,
            partner: (0..g.num_half_edges()).map(|h| g.partner(h)).collect(),
            legs: g.legs().to_vec(),
        }
    }

    pub fn num_free(&self) -> usize {
        self.free.len()
    }

    /// Fills `w` from leg values and free edge values; `modulus = None` solves over ℤ.
    fn solve(&self, legs: &[i64], free_vals: &[i64], targets: &[i64], modulus: Option<i64>, w: &mut [i64]) {
        let red = |x: i64| match modulus {
            Some(r) => x.rem_euclid(r),
            None => x,
        };
        let unset = i64::MIN;
        w.iter_mut().for_each(|x| *x = unset);
        for (i, &l) in self.legs.iter().enumerate() {
            w[l] = red(legs[i]);
        }
        for (j, &h) in self.free.iter().enumerate() {
            w[h] = red(free_vals[j]);
            w[self.partner[h]] = red(-free_vals[j]);
        }
        for &(v, h) in &self.peel {
            let mut s = targets[v];
            for &x in &self.half_edges_at[v] {
                if x != h {
                    s -= w[x];
                }
            }
            w[h] = red(s);
            w[self.partner[h]] = red(-s);
        }
    }
}

fn check_lengths(g: &Graph, a: &[i64], targets: &[i64]) -> Result<()> {
    if a.len() != g.num_legs() {
        return Err(Error::invalid("A", format!("expected {} entries, got {}", g.num_legs(), a.len())));
    }
    if targets.len() != g.num_vertices() {
        return Err(Error::invalid("targets", "one value per vertex required"));
    }
    Ok(())
}

/// Calls `f` on every weighting mod `r` with the given vertex targets.
/// Returns false (without calling `f`) when the system is infeasible.
pub fn for_each_weighting(
    g: &Graph,
    a: &[i64],
    targets: &[i64],
    r: i64,
    solver: &TreeSolver,
    mut f: impl FnMut(&[i64]),
) -> bool {
    let total: i64 = targets.iter().sum();
    if (a.iter().sum::<i64>() - total).rem_euclid(r) != 0 {
        return false;
    }
    let k = solver.num_free();
    let mut free = vec![0i64; k];
    let mut w = vec![0i64; g.num_half_edges()];
    loop {
        solver.solve(a, &free, targets, Some(r), &mut w);
        f(&w);
        let mut i = 0;
        loop {
            if i == k {
                return true;
            }
            free[i] += 1;
            if free[i] < r {
                break;
            }
            free[i] = 0;
            i += 1;
        }
    }
}

fn collect(g: &Graph, a: &[i64], targets: &[i64], r: i64) -> Result<WeightingSet> {
    check_lengths(g, a, targets)?;
    if r < 1 {
        return Err(Error::invalid("r", "modulus must be positive"));
    }
    let solver = TreeSolver::new(g);
    let mut weightings = Vec::new();
    let feasible = for_each_weighting(g, a, targets, r, &solver, |w| weightings.push(Weighting { r, w: w.to_vec() }));
    Ok(WeightingSet { feasible, weightings })
}

/// Weightings mod `r` of `Γ_δ` with leg values `A`.
pub fn enumerate_weightings(g: &Graph, a: &[i64], r: i64) -> Result<WeightingSet> {
    collect(g, a, g.degrees(), r)
}

/// Vertex targets `k(2g(v) - 2 + n(v)) + β(v)`.
pub fn twisted_targets(g: &Graph, beta: &[i64], k: i64) -> Vec<i64> {
    (0..g.num_vertices())
        .map(|v| k * (2 * g.genus(v) as i64 - 2 + g.valence(v) as i64) + beta[v])
        .collect()
}

/// Weightings whose vertex condition uses `k(2g(v)-2+n(v)) + β(v)` in place of `δ(v)`.
pub fn enumerate_target_weightings(g: &Graph, beta: &[i64], a: &[i64], r: i64, k: i64) -> Result<WeightingSet> {
    if beta.len() != g.num_vertices() {
        return Err(Error::invalid("beta", "one value per vertex required"));
    }
    collect(g, a, &twisted_targets(g, beta, k), r)
}

/// Level function for `I` if one exists: `ℓ(v(h')) > ℓ(v(h))` when `I(h) > 0`
/// and equal levels across edges with `I = 0`.
pub fn level_function(g: &Graph, i: &[i64]) -> Option<Vec<i64>> {
    let nv = g.num_vertices();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let edges = g.edges();
    for &(a, b) in &edges {
        if i[a] == 0 {
            let (ra, rb) = (find(&mut parent, g.vertex_of(a)), find(&mut parent, g.vertex_of(b)));
            parent[ra] = rb;
        }
    }
    let cls: Vec<usize> = (0..nv).map(|v| find(&mut parent, v)).collect();
    let mut out_arcs = vec![Vec::new(); nv];
    let mut indeg = vec![0usize; nv];
    for &(a, b) in &edges {
        if i[a] == 0 {
            continue;
        }
        let (lo, hi) = if i[a] > 0 { (a, b) } else { (b, a) };
        let (u, w) = (cls[g.vertex_of(lo)], cls[g.vertex_of(hi)]);
        if u == w {
            return None;
        }
        out_arcs[u].push(w);
        indeg[w] += 1;
    }
    let roots: Vec<usize> = (0..nv).filter(|&v| cls[v] == v).collect();
    let mut level = vec![0i64; nv];
    let mut stack: Vec<usize> = roots.iter().copied().filter(|&v| indeg[v] == 0).collect();
    let mut done = 0;
    while let Some(u) = stack.pop() {
        done += 1;
        for &w in &out_arcs[u] {
            level[w] = level[w].max(level[u] + 1);
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    if done != roots.len() {
        return None;
    }
    Some((0..nv).map(|v| level[cls[v]]).collect())
}

/// Direct search: for every half-edge with `I(h) > 0`, is `v(h)` reachable
/// from `v(h')` along half-edges with `I ≥ 0`?
pub fn has_strict_cycle(g: &Graph, i: &[i64]) -> bool {
    let nv = g.num_vertices();
    let mut adj = vec![Vec::new(); nv];
    for h in 0..g.num_half_edges() {
        if !g.is_leg(h) && i[h] >= 0 {
            adj[g.vertex_of(h)].push(g.vertex_of(g.partner(h)));
        }
    }
    for h in 0..g.num_half_edges() {
        if g.is_leg(h) || i[h] <= 0 {
            continue;
        }
        let (start, goal) = (g.vertex_of(g.partner(h)), g.vertex_of(h));
        let mut seen = vec![false; nv];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            if u == goal {
                return true;
            }
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    false
}

pub fn default_twist_bound(g: &Graph, a: &[i64]) -> i64 {
    a.iter().map(|x| x.abs()).sum::<i64>() + g.degrees().iter().map(|x| x.abs()).sum::<i64>()
}

/// All twists with `|I(h)| ≤ bound` and no strict cycle.
pub fn find_twists(g: &Graph, a: &[i64], bound: i64) -> Result<Vec<Twist>> {
    check_lengths(g, a, g.degrees())?;
    if a.iter().sum::<i64>() != g.total_degree() {
        return Err(Error::invalid("A", "sum of A must equal the total degree"));
    }
    if bound < 0 {
        return Err(Error::invalid("bound", "must be nonnegative"));
    }
    let solver = TreeSolver::new(g);
    let k = solver.num_free();
    let mut free = vec![-bound; k];
    let mut w = vec![0i64; g.num_half_edges()];
    let mut out = Vec::new();
    loop {
        solver.solve(a, &free, g.degrees(), None, &mut w);
        if w.iter().all(|x| x.abs() <= bound) {
            if let Some(levels) = level_function(g, &w) {
                out.push(Twist { i: w.clone(), levels });
            }
        }
        let mut j = 0;
        loop {
            if j == k {
                return Ok(out);
            }
            free[j] += 1;
            if free[j] <= bound {
                break;
            }
            free[j] = -bound;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_graph_count() {
        let g = Graph::from_edges(vec![0], vec![0], &[(0, 0)], &[0]).unwrap();
        let ws = enumerate_weightings(&g, &[0], 5).unwrap();
        assert!(ws.feasible);
        assert_eq!(ws.weightings.len(), 5);
    }

    #[test]
    fn two_vertex_edge() {
        let g = Graph::from_edges(vec![1, 1], vec![3, -1], &[(0, 1)], &[0, 1]).unwrap();
        let ws = enumerate_weightings(&g, &[1, 1], 7).unwrap();
        assert_eq!(ws.weightings.len(), 1);
        assert_eq!(&ws.weightings[0].w[2..], &[2, 5]);
    }

    #[test]
    fn infeasible() {
        let g = Graph::from_edges(vec![1, 1], vec![3, -1], &[(0, 1)], &[0, 1]).unwrap();
        let ws = enumerate_weightings(&g, &[1, 0], 7).unwrap();
        assert!(!ws.feasible);
        assert!(ws.weightings.is_empty());
    }

    #[test]
    fn target_variant() {
        let single = Graph::trivial(1, 1);
        assert_eq!(enumerate_target_weightings(&single, &[0], &[1], 5, 1).unwrap().weightings.len(), 1);
        let lp = Graph::from_edges(vec![0], vec![0], &[(0, 0)], &[0]).unwrap();
        assert_eq!(enumerate_target_weightings(&lp, &[0], &[1], 4, 1).unwrap().weightings.len(), 4);
        let g = Graph::from_edges(vec![1, 0], vec![2, -1], &[(0, 1), (1, 1)], &[0, 1]).unwrap();
        let plain = enumerate_weightings(&g, &[3, -2], 6).unwrap();
        let twisted = enumerate_target_weightings(&g, g.degrees(), &[3, -2], 6, 0).unwrap();
        assert_eq!(plain, twisted);
    }

    #[test]
    fn twists_simple() {
        let g = Graph::trivial(2, 2).with_degree(vec![3]).unwrap();
        assert_eq!(find_twists(&g, &[1, 2], 5).unwrap().len(), 1);
        let g = Graph::from_edges(vec![1, 1], vec![3, -1], &[(0, 1)], &[0, 1]).unwrap();
        let t = find_twists(&g, &[1, 1], 5).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].i[2], 2);
    }

    #[test]
    fn twists_banana() {
        // parallel edges need equal signs; (1,0) and mixed signs both close a strict cycle
        let g = Graph::from_edges(vec![0, 0], vec![1, -1], &[(0, 1), (0, 1)], &[]).unwrap();
        assert!(find_twists(&g, &[], 3).unwrap().is_empty());
        let g = Graph::from_edges(vec![0, 0], vec![2, -2], &[(0, 1), (0, 1)], &[]).unwrap();
        let t = find_twists(&g, &[], 3).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!((t[0].i[0], t[0].i[2]), (1, 1));
        assert!(!has_strict_cycle(&g, &t[0].i));
        assert!(has_strict_cycle(&g, &[2, -2, -1, 1]));
    }
}
