//! Stable graphs of a fixed `(g, n)` together with all their edge contractions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::graphs::{canonicalize, enumerate_stable_graphs, Graph};

/// Contraction of all edges outside `kept`, identified with its canonical form.
#[derive(Clone, Debug)]
pub(crate) struct SubsetInfo {
    pub key: Graph,
    /// Half-edge of the table graph -> half-edge of `key` (`None` when contracted).
    pub he: Vec<Option<usize>>,
    /// Vertex of the table graph -> vertex of `key`.
    pub v: Vec<usize>,
}

#[derive(Debug)]
pub(crate) struct TableGraph {
    pub graph: Graph,
    pub aut_order: usize,
    /// Indexed by bitmask of kept edges.
    pub subsets: Vec<SubsetInfo>,
}

#[derive(Debug)]
pub(crate) struct Table {
    pub graphs: Vec<TableGraph>,
    /// Canonical contracted graph -> (table graph, kept-edge mask).
    pub index: HashMap<Graph, Vec<(usize, usize)>>,
}

fn build(g: u32, n: usize, max_edges: usize) -> Table {
    let graphs = enumerate_stable_graphs(g, n, max_edges, None).unwrap_or_default();
    let mut out = Vec::new();
    let mut index: HashMap<Graph, Vec<(usize, usize)>> = HashMap::new();
    for (gi, gr) in graphs.into_iter().enumerate() {
        let ne = gr.num_edges();
        let mut subsets = Vec::with_capacity(1 << ne);
        for mask in 0..(1usize << ne) {
            let dropped: Vec<usize> = (0..ne).filter(|&e| mask >> e & 1 == 0).collect();
            let c = gr.contract_edges(&dropped);
            let cf = canonicalize(&c.graph);
            let he = c.half_edge_map.iter().map(|x| x.map(|h| cf.half_edge_map[h])).collect();
            let v = c.vertex_map.iter().map(|&x| cf.vertex_map[x]).collect();
            index.entry(cf.graph.clone()).or_default().push((gi, mask));
            subsets.push(SubsetInfo { key: cf.graph, he, v });
        }
        let aut_order = canonicalize(&gr).aut_order();
        out.push(TableGraph { graph: gr, aut_order, subsets });
    }
    Table { graphs: out, index }
}

pub(crate) fn table(g: u32, n: usize, max_edges: usize) -> Arc<Table> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize, usize), Arc<Table>>>> = OnceLock::new();
    let cap = (3 * g as i64 - 3 + n as i64).max(0) as usize;
    let max_edges = max_edges.min(cap);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(g, n, max_edges)) {
        return t.clone();
    }
    let t = Arc::new(build(g, n, max_edges));
    cache.lock().unwrap().insert((g, n, max_edges), t.clone());
    t
}
