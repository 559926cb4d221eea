//! Canonical labelling by colour refinement plus exhaustive search inside cells.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub vertices: Vec<usize>,
    pub half_edges: Vec<usize>,
}

impl Automorphism {
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        // self ∘ other
        Automorphism {
            vertices: other.vertices.iter().map(|&v| self.vertices[v]).collect(),
            half_edges: other.half_edges.iter().map(|&h| self.half_edges[h]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.half_edges.iter().enumerate().all(|(i, &h)| i == h)
            && self.vertices.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Checks that genus, degree, legs and the involution are preserved.
    pub fn preserves(&self, g: &Graph) -> bool {
        (0..g.num_vertices()).all(|v| {
            g.genus(v) == g.genus(self.vertices[v]) && g.degree(v) == g.degree(self.vertices[v])
        }) && (0..g.num_half_edges()).all(|h| {
            let t = self.half_edges[h];
            self.vertices[g.vertex_of(h)] == g.vertex_of(t)
                && self.half_edges[g.partner(h)] == g.partner(t)
        }) && g.legs().iter().all(|&l| self.half_edges[l] == l)
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// Canonical representative in standard layout; doubles as the hashable key.
    pub graph: Graph,
    /// Input vertex -> canonical vertex.
    pub vertex_map: Vec<usize>,
    /// Input half-edge -> canonical half-edge.
    pub half_edge_map: Vec<usize>,
    /// Full automorphism group of the canonical graph.
    pub automorphisms: Arc<Vec<Automorphism>>,
}

impl CanonicalForm {
    pub fn key(&self) -> &Graph {
        &self.graph
    }

    pub fn aut_order(&self) -> usize {
        self.automorphisms.len()
    }

    /// A generating subset of the automorphism group.
    pub fn generators(&self) -> Vec<Automorphism> {
        let mut gens: Vec<Automorphism> = Vec::new();
        let mut group: Vec<Automorphism> = self.automorphisms.iter().filter(|a| a.is_identity()).cloned().collect();
        for a in self.automorphisms.iter() {
            if group.contains(a) {
                continue;
            }
            gens.push(a.clone());
            // closure
            let mut frontier = group.clone();
            frontier.push(a.clone());
            group = frontier.clone();
            while let Some(x) = frontier.pop() {
                for s in &gens {
                    let y = s.compose(&x);
                    if !group.contains(&y) {
                        group.push(y.clone());
                        frontier.push(y);
                    }
                }
            }
        }
        gens
    }
}

fn multiplicities(g: &Graph) -> Vec<Vec<i64>> {
    let nv = g.num_vertices();
    let mut m = vec![vec![0i64; nv]; nv];
    for (a, b) in g.edges() {
        let (u, w) = (g.vertex_of(a), g.vertex_of(b));
        m[u][w] += 1;
        if u != w {
            m[w][u] += 1;
        }
    }
    m
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = sigs.to_vec();
    distinct.sort();
    distinct.dedup();
    sigs.iter().map(|s| distinct.binary_search(s).unwrap()).collect()
}

fn refine(g: &Graph, mult: &[Vec<i64>]) -> Vec<usize> {
    let nv = g.num_vertices();
    let init: Vec<Vec<i64>> = (0..nv)
        .map(|v| {
            let legs = g.legs_at(v);
            let mut s = vec![
                g.genus(v) as i64,
                g.degree(v),
                mult[v][v],
                g.valence(v) as i64,
                legs.len() as i64,
            ];
            s.extend(legs.iter().map(|&i| i as i64));
            s
        })
        .collect();
    let mut colors = rank(&init);
    let mut classes = colors.iter().max().map_or(0, |m| m + 1);
    loop {
        let sigs: Vec<(usize, Vec<(usize, i64)>)> = (0..nv)
            .map(|v| {
                let mut nb: Vec<(usize, i64)> =
                    (0..nv).filter(|&u| u != v && mult[v][u] > 0).map(|u| (colors[u], mult[v][u])).collect();
                nb.sort();
                (colors[v], nb)
            })
            .collect();
        let next = rank(&sigs);
        let k = next.iter().max().map_or(0, |m| m + 1);
        colors = next;
        if k == classes {
            return colors;
        }
        classes = k;
    }
}

struct Search<'a> {
    g: &'a Graph,
    mult: Vec<Vec<i64>>,
    slots: Vec<Vec<usize>>,
    best: Option<Vec<Vec<i64>>>,
    best_orders: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn block(&self, order: &[usize], p: usize) -> Vec<i64> {
        let v = order[p];
        let mut b = vec![self.g.genus(v) as i64, self.g.degree(v)];
        for &u in &order[..=p] {
            b.push(self.mult[u][v]);
        }
        b
    }

    fn run(&mut self, order: &mut Vec<usize>, used: &mut Vec<bool>, prefix: &mut Vec<Vec<i64>>) {
        let p = order.len();
        if p == self.g.num_vertices() {
            let ord = match &self.best {
                None => std::cmp::Ordering::Less,
                Some(best) => prefix.as_slice().cmp(best.as_slice()),
            };
            match ord {
                std::cmp::Ordering::Less => {
                    self.best = Some(prefix.clone());
                    self.best_orders = vec![order.clone()];
                }
                std::cmp::Ordering::Equal => self.best_orders.push(order.clone()),
                std::cmp::Ordering::Greater => {}
            }
            return;
        }
        for i in 0..self.slots[p].len() {
            let v = self.slots[p][i];
            if used[v] {
                continue;
            }
            order.push(v);
            let b = self.block(order, p);
            if let Some(best) = &self.best {
                if prefix.as_slice() == &best[..p] && b > best[p] {
                    order.pop();
                    continue;
                }
            }
            used[v] = true;
            prefix.push(b);
            self.run(order, used, prefix);
            prefix.pop();
            used[v] = false;
            order.pop();
        }
    }
}

/// All vertex orderings minimising the encoding.
fn minimal_orderings(g: &Graph) -> Vec<Vec<usize>> {
    let mult = multiplicities(g);
    let colors = refine(g, &mult);
    let nv = g.num_vertices();
    let mut by_color: Vec<usize> = (0..nv).collect();
    by_color.sort_by_key(|&v| (colors[v], v));
    let slots: Vec<Vec<usize>> = by_color
        .iter()
        .map(|&v| (0..nv).filter(|&u| colors[u] == colors[v]).collect())
        .collect();
    let mut s = Search { g, mult, slots, best: None, best_orders: Vec::new() };
    s.run(&mut Vec::new(), &mut vec![false; nv], &mut Vec::new());
    s.best_orders
}

fn build(g: &Graph, order: &[usize]) -> (Graph, Vec<usize>, Vec<usize>) {
    let nv = g.num_vertices();
    let n = g.num_legs();
    let mut pos = vec![0; nv];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let mut edges: Vec<((usize, usize), usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| {
            let (pa, pb) = (pos[g.vertex_of(a)], pos[g.vertex_of(b)]);
            if pa <= pb {
                ((pa, pb), a, b)
            } else {
                ((pb, pa), b, a)
            }
        })
        .collect();
    edges.sort();
    let mut half_edge_map = vec![0; g.num_half_edges()];
    for i in 0..n {
        half_edge_map[g.leg(i)] = i;
    }
    let mut pairs = Vec::with_capacity(edges.len());
    for (j, &((pa, pb), a, b)) in edges.iter().enumerate() {
        half_edge_map[a] = n + 2 * j;
        half_edge_map[b] = n + 2 * j + 1;
        pairs.push((pa, pb));
    }
    let leg_vertices: Vec<usize> = (0..n).map(|i| pos[g.vertex_of(g.leg(i))]).collect();
    let graph = Graph::from_edges(
        order.iter().map(|&v| g.genus(v)).collect(),
        order.iter().map(|&v| g.degree(v)).collect(),
        &pairs,
        &leg_vertices,
    )
    .expect("relabelling preserves validity");
    (graph, pos, half_edge_map)
}

fn aut_cache() -> &'static Mutex<HashMap<Graph, Arc<Vec<Automorphism>>>> {
    static CACHE: OnceLock<Mutex<HashMap<Graph, Arc<Vec<Automorphism>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

type Relabel = Arc<(Graph, Vec<usize>, Vec<usize>)>;

fn canon_cache() -> &'static Mutex<HashMap<Graph, Relabel>> {
    static CACHE: OnceLock<Mutex<HashMap<Graph, Relabel>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Canonical graph plus vertex and half-edge relabelling, without automorphisms.
pub(crate) fn canonical_relabel(g: &Graph) -> Relabel {
    if let Some(hit) = canon_cache().lock().unwrap().get(g) {
        return hit.clone();
    }
    let orders = minimal_orderings(g);
    let out = Arc::new(build(g, &orders[0]));
    canon_cache().lock().unwrap().insert(g.clone(), out.clone());
    out
}

/// Full automorphism group of a graph in canonical form.
pub fn automorphisms(canonical: &Graph) -> Arc<Vec<Automorphism>> {
    if let Some(hit) = aut_cache().lock().unwrap().get(canonical) {
        return hit.clone();
    }
    let out = Arc::new(compute_automorphisms(canonical));
    aut_cache().lock().unwrap().insert(canonical.clone(), out.clone());
    out
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, m - 1);
            out.push(q);
        }
    }
    out
}

fn compute_automorphisms(g: &Graph) -> Vec<Automorphism> {
    let n = g.num_legs();
    let edges = g.edges();
    let mut blocks: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (j, &(a, b)) in edges.iter().enumerate() {
        blocks.entry((g.vertex_of(a), g.vertex_of(b))).or_default().push(j);
    }
    let mut keys: Vec<(usize, usize)> = blocks.keys().copied().collect();
    keys.sort();
    let mut result = Vec::new();
    for order in minimal_orderings(g) {
        let mut tau = vec![0; g.num_vertices()];
        for (q, &p) in order.iter().enumerate() {
            tau[p] = q;
        }
        // every block contributes (permutation, flips) choices
        let mut partial: Vec<Vec<usize>> = vec![(0..g.num_half_edges()).map(|h| if h < n { h } else { usize::MAX }).collect()];
        for &(p, q) in &keys {
            let src = &blocks[&(p, q)];
            let (tp, tq) = (tau[p], tau[q]);
            let flipped = tp > tq;
            let dst = &blocks[&(tp.min(tq), tp.max(tq))];
            let m = src.len();
            let flip_choices: Vec<Vec<bool>> = if p == q {
                (0..(1usize << m)).map(|mask| (0..m).map(|i| mask >> i & 1 == 1).collect()).collect()
            } else {
                vec![vec![flipped; m]]
            };
            let mut next = Vec::new();
            for base in &partial {
                for perm in permutations(m) {
                    for flips in &flip_choices {
                        let mut h = base.clone();
                        for i in 0..m {
                            let (s, t) = (src[i], dst[perm[i]]);
                            let (s0, s1) = (n + 2 * s, n + 2 * s + 1);
                            let (t0, t1) = (n + 2 * t, n + 2 * t + 1);
                            if flips[i] {
                                h[s0] = t1;
                                h[s1] = t0;
                            } else {
                                h[s0] = t0;
                                h[s1] = t1;
                            }
                        }
                        next.push(h);
                    }
                }
            }
            partial = next;
        }
        for h in partial {
            result.push(Automorphism { vertices: tau.clone(), half_edges: h });
        }
    }
    result
}

pub fn canonicalize(g: &Graph) -> CanonicalForm {
    let rl = canonical_relabel(g);
    let automorphisms = automorphisms(&rl.0);
    CanonicalForm { graph: rl.0.clone(), vertex_map: rl.1.clone(), half_edge_map: rl.2.clone(), automorphisms }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_has_two_automorphisms() {
        let g = Graph::from_edges(vec![0], vec![0], &[(0, 0)], &[0]).unwrap();
        let c = canonicalize(&g);
        assert_eq!(c.aut_order(), 2);
        assert!(c.automorphisms.iter().all(|a| a.preserves(&c.graph)));
        assert_eq!(c.generators().len(), 1);
    }

    #[test]
    fn trivial_and_asymmetric() {
        assert_eq!(canonicalize(&Graph::trivial(2, 0)).aut_order(), 1);
        let g = Graph::from_edges(vec![1, 1], vec![1, -1], &[(0, 1)], &[]).unwrap();
        assert_eq!(canonicalize(&g).aut_order(), 1);
        let sym = Graph::from_edges(vec![1, 1], vec![0, 0], &[(0, 1)], &[]).unwrap();
        assert_eq!(canonicalize(&sym).aut_order(), 2);
    }

    #[test]
    fn banana_with_loops() {
        // two genus-0 vertices, two parallel edges, a loop on each
        let g = Graph::from_edges(vec![0, 0], vec![0, 0], &[(0, 1), (1, 0), (0, 0), (1, 1)], &[]).unwrap();
        let c = canonicalize(&g);
        // swap vertices (2) × permute parallel edges (2) × flip each loop (2·2)
        assert_eq!(c.aut_order(), 16);
        assert!(c.automorphisms.iter().all(|a| a.preserves(&c.graph)));
    }

    #[test]
    fn relabelling_invariance() {
        let a = Graph::from_edges(vec![0, 1, 0], vec![0, 0, 0], &[(0, 1), (1, 2), (2, 2)], &[0, 2]).unwrap();
        let b = Graph::from_edges(vec![0, 1, 0], vec![0, 0, 0], &[(2, 2), (2, 1), (1, 0)], &[0, 2]).unwrap();
        let c = Graph::from_edges(vec![0, 0, 1], vec![0, 0, 0], &[(1, 2), (0, 0), (0, 2)], &[1, 0]).unwrap();
        assert_eq!(canonicalize(&a).graph, canonicalize(&b).graph);
        assert_eq!(canonicalize(&a).graph, canonicalize(&c).graph);
    }

    #[test]
    fn relabel_maps_are_isomorphisms() {
        let g = Graph::from_edges(vec![0, 1, 0], vec![1, 0, -1], &[(2, 1), (1, 0), (0, 0)], &[2, 0, 1]).unwrap();
        let c = canonicalize(&g);
        for h in 0..g.num_half_edges() {
            assert_eq!(c.vertex_map[g.vertex_of(h)], c.graph.vertex_of(c.half_edge_map[h]));
            assert_eq!(c.half_edge_map[g.partner(h)], c.graph.partner(c.half_edge_map[h]));
        }
        for v in 0..g.num_vertices() {
            assert_eq!(g.genus(v), c.graph.genus(c.vertex_map[v]));
            assert_eq!(g.degree(v), c.graph.degree(c.vertex_map[v]));
        }
    }
}
