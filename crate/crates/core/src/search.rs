//! Reverse-search tree over connected edge sets.
//!
//! Node labels are unique, so a subgraph is identified by its edge set and
//! no isomorphism test is needed. The parent of a connected edge set `S`
//! with more than one edge is `S - e*`, where `e*` is the largest edge whose
//! removal keeps `S` connected. Every connected edge set of the universe
//! then has exactly one path from the root, and every ancestor of a node is
//! a subgraph of it.

use alloc::vec::Vec;

use crate::graph::{is_connected, CertainGraph, Edge, Subgraph};

/// Adjacency view of the union graph that bounds the search.
#[derive(Debug, Clone)]
pub struct Universe {
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Edge>>,
}

impl Universe {
    pub fn new(graph: &CertainGraph) -> Self {
        let mut adjacency = alloc::vec![Vec::new(); graph.num_nodes()];
        let edges: Vec<Edge> = graph.edges().collect();
        for e in &edges {
            adjacency[e.u().index()].push(*e);
            adjacency[e.v().index()].push(*e);
        }
        Universe { edges, adjacency }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
}

fn without(edges: &[Edge], skip: usize) -> Vec<Edge> {
    edges.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, e)| *e).collect()
}

/// Parent of `s` in the reverse-search tree; `None` means the root.
pub fn canonical_parent(s: &Subgraph) -> Option<Subgraph> {
    let edges = s.edges();
    if edges.len() == 1 {
        return None;
    }
    for i in (0..edges.len()).rev() {
        let rest = without(edges, i);
        if is_connected(&rest) {
            return Some(Subgraph::from_canonical(rest));
        }
    }
    unreachable!("a connected edge set always has a removable edge")
}

/// Whether `e` is the canonical edge of `s ∪ {e}`; `s` must be connected,
/// `e ∉ s`, and `e` must touch a node of `s`.
fn is_canonical_extension(s: &Subgraph, e: Edge) -> bool {
    let edges = s.edges();
    let pos = edges.partition_point(|x| *x < e);
    let mut grown = Vec::with_capacity(edges.len() + 1);
    grown.extend_from_slice(&edges[..pos]);
    grown.push(e);
    grown.extend_from_slice(&edges[pos..]);
    // only edges larger than e could outrank it
    for i in (pos + 1..grown.len()).rev() {
        if is_connected(&without(&grown, i)) {
            return false;
        }
    }
    true
}

/// Edges `e` such that `s ∪ {e}` is a child of `s`, ascending.
pub fn extensions(s: &Subgraph, universe: &Universe) -> Vec<Edge> {
    let mut cands: Vec<Edge> = Vec::new();
    for n in s.nodes() {
        if let Some(adj) = universe.adjacency.get(n.index()) {
            cands.extend(adj.iter().copied().filter(|e| !s.contains_edge(e)));
        }
    }
    cands.sort_unstable();
    cands.dedup();
    cands.retain(|&e| is_canonical_extension(s, e));
    cands
}

/// `s ∪ {e}` in canonical order.
pub fn extend(s: &Subgraph, e: Edge) -> Subgraph {
    let mut v = s.edges().to_vec();
    let pos = v.partition_point(|x| *x < e);
    v.insert(pos, e);
    Subgraph::from_canonical(v)
}

/// Children of `s` (or of the root when `s` is `None`), sorted ascending.
pub fn children(s: Option<&Subgraph>, universe: &Universe) -> Vec<Subgraph> {
    match s {
        None => universe.edges.iter().map(|&e| Subgraph::single(e)).collect(),
        Some(s) => extensions(s, universe).into_iter().map(|e| extend(s, e)).collect(),
    }
}

/// Visits the whole tree depth-first, calling `f` on every node; `f`
/// returns whether to descend into that node's subtree.
pub fn walk<F: FnMut(&Subgraph) -> bool>(universe: &Universe, mut f: F) {
    fn rec<F: FnMut(&Subgraph) -> bool>(s: &Subgraph, u: &Universe, f: &mut F) {
        if f(s) {
            for c in children(Some(s), u) {
                rec(&c, u, f);
            }
        }
    }
    for c in children(None, universe) {
        rec(&c, universe, &mut f);
    }
}
