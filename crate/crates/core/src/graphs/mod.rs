//! Prestable graphs with multidegree, canonical forms and enumeration.
//!
//! Half-edges are indexed `0..H`. Legs are the fixed points of the involution,
//! listed in marking order. Graphs produced by canonicalization use the
//! *standard layout*: leg `i` is half-edge `i`, edge `j` is the pair
//! `(n + 2j, n + 2j + 1)`.

mod canonical;
mod enumerate;

pub use canonical::{automorphisms, canonicalize, Automorphism, CanonicalForm};
pub use enumerate::{
    enumerate_prestable_graphs, enumerate_stable_graphs, multidegrees, DegreeSpec,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    genus: Vec<u32>,
    degree: Vec<i64>,
    vertex_of: Vec<usize>,
    involution: Vec<usize>,
    legs: Vec<usize>,
}

/// Result of contracting a set of edges.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Graph,
    pub vertex_map: Vec<usize>,
    /// `None` for half-edges of contracted edges.
    pub half_edge_map: Vec<Option<usize>>,
}

impl Graph {
    pub fn new(
        genus: Vec<u32>,
        degree: Vec<i64>,
        vertex_of: Vec<usize>,
        involution: Vec<usize>,
        legs: Vec<usize>,
    ) -> Result<Graph> {
        let nv = genus.len();
        let nh = vertex_of.len();
        if nv == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if degree.len() != nv {
            return Err(Error::InvalidGraph("degree length differs from vertex count".into()));
        }
        if involution.len() != nh {
            return Err(Error::InvalidGraph("involution length differs from half-edge count".into()));
        }
        if vertex_of.iter().any(|&v| v >= nv) {
            return Err(Error::InvalidGraph("half-edge attached to missing vertex".into()));
        }
        for h in 0..nh {
            let j = involution[h];
            if j >= nh || involution[j] != h {
                return Err(Error::InvalidGraph(format!("involution broken at half-edge {h}")));
            }
        }
        let fixed: Vec<usize> = (0..nh).filter(|&h| involution[h] == h).collect();
        let mut sorted_legs = legs.clone();
        sorted_legs.sort_unstable();
        if sorted_legs != fixed {
            return Err(Error::InvalidGraph("legs must be exactly the fixed half-edges".into()));
        }
        let g = Graph { genus, degree, vertex_of, involution, legs };
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    /// Standard layout: legs first, then edges as consecutive half-edge pairs.
    pub fn from_edges(
        genus: Vec<u32>,
        degree: Vec<i64>,
        edges: &[(usize, usize)],
        leg_vertices: &[usize],
    ) -> Result<Graph> {
        let n = leg_vertices.len();
        let mut vertex_of = leg_vertices.to_vec();
        let mut involution: Vec<usize> = (0..n).collect();
        for &(a, b) in edges {
            let h = vertex_of.len();
            vertex_of.push(a);
            vertex_of.push(b);
            involution.push(h + 1);
            involution.push(h);
        }
        Graph::new(genus, degree, vertex_of, involution, (0..n).collect())
    }

    /// One vertex of genus `g` carrying all `n` legs.
    pub fn trivial(g: u32, n: usize) -> Graph {
        Graph {
            genus: vec![g],
            degree: vec![0],
            vertex_of: vec![0; n],
            involution: (0..n).collect(),
            legs: (0..n).collect(),
        }
    }

    pub fn with_degree(&self, degree: Vec<i64>) -> Result<Graph> {
        if degree.len() != self.genus.len() {
            return Err(Error::invalid("degree", "one value per vertex required"));
        }
        Ok(Graph { degree, ..self.clone() })
    }

    pub fn with_zero_degree(&self) -> Graph {
        Graph { degree: vec![0; self.genus.len()], ..self.clone() }
    }

    pub fn num_vertices(&self) -> usize {
        self.genus.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.vertex_of.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn num_edges(&self) -> usize {
        (self.num_half_edges() - self.num_legs()) / 2
    }

    pub fn genus(&self, v: usize) -> u32 {
        self.genus[v]
    }

    pub fn genera(&self) -> &[u32] {
        &self.genus
    }

    pub fn degree(&self, v: usize) -> i64 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degree
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    pub fn partner(&self, h: usize) -> usize {
        self.involution[h]
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn leg(&self, i: usize) -> usize {
        self.legs[i]
    }

    pub fn is_leg(&self, h: usize) -> bool {
        self.involution[h] == h
    }

    pub fn marking_of(&self, h: usize) -> Option<usize> {
        self.legs.iter().position(|&l| l == h)
    }

    /// Edges as `(h, h')` with `h < h'`, sorted by `h`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.num_half_edges())
            .filter(|&h| self.involution[h] > h)
            .map(|h| (h, self.involution[h]))
            .collect()
    }

    pub fn edge_index(&self, h: usize) -> Option<usize> {
        if self.is_leg(h) {
            return None;
        }
        let lo = h.min(self.involution[h]);
        Some((0..lo).filter(|&x| self.involution[x] > x).count())
    }

    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.num_half_edges()).filter(|&h| self.vertex_of[h] == v).collect()
    }

    /// Number of half-edges (legs included) at `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.vertex_of.iter().filter(|&&x| x == v).count()
    }

    pub fn legs_at(&self, v: usize) -> Vec<usize> {
        (0..self.num_legs()).filter(|&i| self.vertex_of[self.legs[i]] == v).collect()
    }

    pub fn h1(&self) -> usize {
        self.num_edges() + 1 - self.num_vertices()
    }

    pub fn total_genus(&self) -> u32 {
        self.genus.iter().sum::<u32>() + self.h1() as u32
    }

    pub fn total_degree(&self) -> i64 {
        self.degree.iter().sum()
    }

    pub fn vertex_is_stable(&self, v: usize) -> bool {
        2 * self.genus[v] as i64 - 2 + self.valence(v) as i64 > 0
    }

    pub fn is_stable(&self) -> bool {
        (0..self.num_vertices()).all(|v| self.vertex_is_stable(v))
    }

    /// 3g(v) - 3 + n(v).
    pub fn vertex_dim(&self, v: usize) -> i64 {
        3 * self.genus[v] as i64 - 3 + self.valence(v) as i64
    }

    fn reachable_without(&self, start: usize, skip_edge: Option<usize>) -> Vec<bool> {
        let nv = self.num_vertices();
        let mut adj = vec![Vec::new(); nv];
        for (i, (a, b)) in self.edges().into_iter().enumerate() {
            if Some(i) == skip_edge {
                continue;
            }
            let (u, w) = (self.vertex_of[a], self.vertex_of[b]);
            adj[u].push(w);
            adj[w].push(u);
        }
        let mut seen = vec![false; nv];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    fn is_connected(&self) -> bool {
        self.reachable_without(0, None).into_iter().all(|x| x)
    }

    pub fn is_separating(&self, edge: usize) -> bool {
        let (a, b) = self.edges()[edge];
        let (u, w) = (self.vertex_of[a], self.vertex_of[b]);
        u != w && !self.reachable_without(u, Some(edge))[w]
    }

    /// Vertices on the side of half-edge `h` after cutting its (separating) edge.
    pub fn side_of(&self, h: usize) -> Vec<bool> {
        let e = self.edge_index(h).expect("side_of needs an edge half-edge");
        self.reachable_without(self.vertex_of[h], Some(e))
    }

    pub fn is_tree(&self) -> bool {
        self.h1() == 0
    }

    pub fn contract_edges(&self, edges: &[usize]) -> Contraction {
        let all = self.edges();
        let nv = self.num_vertices();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        let mut contracted = vec![false; self.num_half_edges()];
        for &e in edges {
            let (a, b) = all[e];
            contracted[a] = true;
            contracted[b] = true;
            let ra = find(&mut parent, self.vertex_of[a]);
            let rb = find(&mut parent, self.vertex_of[b]);
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut root_index = vec![usize::MAX; nv];
        let mut vertex_map = vec![0; nv];
        let mut count = 0;
        for v in 0..nv {
            let r = find(&mut parent, v);
            if root_index[r] == usize::MAX {
                root_index[r] = count;
                count += 1;
            }
            vertex_map[v] = root_index[r];
        }
        let mut genus = vec![0u32; count];
        let mut degree = vec![0i64; count];
        let mut members = vec![0i64; count];
        for v in 0..nv {
            genus[vertex_map[v]] += self.genus[v];
            degree[vertex_map[v]] += self.degree[v];
            members[vertex_map[v]] += 1;
        }
        let mut inner = vec![0i64; count];
        for &e in edges {
            inner[vertex_map[self.vertex_of[all[e].0]]] += 1;
        }
        for u in 0..count {
            genus[u] += (inner[u] - members[u] + 1) as u32;
        }
        let mut half_edge_map = vec![None; self.num_half_edges()];
        let mut next = 0;
        for (h, slot) in half_edge_map.iter_mut().enumerate() {
            if !contracted[h] {
                *slot = Some(next);
                next += 1;
            }
        }
        let mut vertex_of = vec![0; next];
        let mut involution = vec![0; next];
        for h in 0..self.num_half_edges() {
            if let Some(nh) = half_edge_map[h] {
                vertex_of[nh] = vertex_map[self.vertex_of[h]];
                involution[nh] = half_edge_map[self.involution[h]].unwrap();
            }
        }
        let legs = self.legs.iter().map(|&l| half_edge_map[l].unwrap()).collect();
        Contraction {
            graph: Graph { genus, degree, vertex_of, involution, legs },
            vertex_map,
            half_edge_map,
        }
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: (0..self.num_vertices())
                .map(|v| VertexJson { genus: self.genus[v], degree: self.degree[v] })
                .collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b)| [self.vertex_of[a], self.vertex_of[b]])
                .collect(),
            legs: self.legs.iter().map(|&l| self.vertex_of[l]).collect(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(
            j.vertices.iter().map(|v| v.genus).collect(),
            j.vertices.iter().map(|v| v.degree).collect(),
            &edges,
            &j.legs,
        )
    }

    /// True when legs are `0..n` and edges are consecutive pairs.
    pub fn has_standard_layout(&self) -> bool {
        let n = self.num_legs();
        self.legs.iter().enumerate().all(|(i, &l)| i == l)
            && (n..self.num_half_edges()).all(|h| self.involution[h] == if (h - n) % 2 == 0 { h + 1 } else { h - 1 })
    }
}

pub fn stability_filter(g: &Graph) -> bool {
    g.is_stable()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub genus: u32,
    #[serde(default)]
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
    pub legs: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_graph() -> Graph {
        Graph::from_edges(vec![0], vec![0], &[(0, 0)], &[0]).unwrap()
    }

    #[test]
    fn invariants() {
        let g = loop_graph();
        assert_eq!(g.h1(), 1);
        assert_eq!(g.total_genus(), 1);
        assert!(g.is_stable());
        assert!(!g.is_separating(0));
        assert!(g.has_standard_layout());
    }

    #[test]
    fn stability() {
        assert!(Graph::trivial(2, 0).is_stable());
        assert!(Graph::trivial(1, 1).is_stable());
        let bad = Graph::from_edges(vec![0, 1], vec![0, 0], &[(0, 1)], &[0]).unwrap();
        assert!(!bad.vertex_is_stable(0));
    }

    #[test]
    fn rejects_disconnected() {
        assert!(Graph::from_edges(vec![1, 1], vec![0, 0], &[], &[]).is_err());
    }

    #[test]
    fn contraction() {
        let g = Graph::from_edges(vec![1, 1], vec![2, -2], &[(0, 1)], &[]).unwrap();
        let c = g.contract_edges(&[0]);
        assert_eq!(c.graph.genera(), &[2]);
        assert_eq!(c.graph.degrees(), &[0]);
        let c = loop_graph().contract_edges(&[0]);
        assert_eq!(c.graph.genera(), &[1]);
        assert_eq!(c.graph.num_edges(), 0);
        let c = loop_graph().contract_edges(&[]);
        assert_eq!(c.graph, loop_graph());
    }

    #[test]
    fn json_roundtrip() {
        let g = Graph::from_edges(vec![0, 1], vec![1, -1], &[(0, 1), (0, 0)], &[0, 0]).unwrap();
        let back = Graph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }
}
