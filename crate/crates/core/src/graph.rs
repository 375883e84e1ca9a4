//! Uncertain and certain graphs over a shared, uniquely-labeled node set.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Index of a node in the dataset-wide node universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Undirected edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: NodeId,
    v: NodeId,
}

impl Edge {
    /// Builds the canonical form of the unordered pair `{a, b}`.
    pub fn new(a: u32, b: u32) -> Result<Self> {
        match a.cmp(&b) {
            core::cmp::Ordering::Less => Ok(Edge { u: NodeId(a), v: NodeId(b) }),
            core::cmp::Ordering::Greater => Ok(Edge { u: NodeId(b), v: NodeId(a) }),
            core::cmp::Ordering::Equal => Err(Error::InvalidSubgraph(format!("self-loop on node {a}"))),
        }
    }

    #[inline]
    pub fn u(&self) -> NodeId {
        self.u
    }

    #[inline]
    pub fn v(&self) -> NodeId {
        self.v
    }

    #[inline]
    pub fn touches(&self, n: NodeId) -> bool {
        self.u == n || self.v == n
    }

    #[inline]
    pub fn max_node(&self) -> NodeId {
        self.v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// Graph whose edges exist independently with probability in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertainGraph {
    num_nodes: usize,
    edges: BTreeMap<Edge, f64>,
}

impl UncertainGraph {
    /// Validates and builds a graph from unordered `(a, b, p)` triples.
    ///
    /// `graph` is only used to label errors.
    pub fn from_triples<I>(graph: usize, num_nodes: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32, f64)>,
    {
        let mut edges = BTreeMap::new();
        for (a, b, p) in triples {
            if a == b {
                return Err(Error::InvalidGraph { graph, field: "edges", reason: format!("self-loop on node {a}") });
            }
            if a as usize >= num_nodes || b as usize >= num_nodes {
                return Err(Error::InvalidGraph {
                    graph,
                    field: "edges",
                    reason: format!("endpoint of ({a},{b}) outside node range 0..{num_nodes}"),
                });
            }
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidGraph {
                    graph,
                    field: "edges",
                    reason: format!("probability out of range (0,1]: {p} on ({a},{b})"),
                });
            }
            let e = Edge::new(a, b)?;
            if edges.insert(e, p).is_some() {
                return Err(Error::InvalidGraph { graph, field: "edges", reason: format!("duplicate edge {e}") });
            }
        }
        Ok(UncertainGraph { num_nodes, edges })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn probability(&self, e: &Edge) -> Option<f64> {
        self.edges.get(e).copied()
    }

    /// Edges in ascending canonical order with their probabilities.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = (Edge, f64)> + '_ {
        self.edges.iter().map(|(e, p)| (*e, *p))
    }
}

/// Deterministic graph; one world of an [`UncertainGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CertainGraph {
    num_nodes: usize,
    edges: BTreeSet<Edge>,
}

impl CertainGraph {
    pub fn new(num_nodes: usize, edges: impl IntoIterator<Item = Edge>) -> Self {
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        debug_assert!(edges.iter().all(|e| e.v.index() < num_nodes));
        CertainGraph { num_nodes, edges }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    /// Edges touching `n`, in ascending order.
    pub fn incident(&self, n: NodeId) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied().filter(move |e| e.touches(n))
    }
}

/// Class label of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn from_sign(v: i64) -> Option<Label> {
        match v {
            1 => Some(Label::Positive),
            -1 => Some(Label::Negative),
            _ => None,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Label::Positive => 1,
            Label::Negative => -1,
        }
    }
}

/// Labeled collection of uncertain graphs sharing one node universe.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    num_nodes: usize,
    ids: Vec<String>,
    graphs: Vec<UncertainGraph>,
    labels: Vec<Label>,
}

impl Dataset {
    pub fn new(num_nodes: usize) -> Self {
        Dataset { num_nodes, ids: Vec::new(), graphs: Vec::new(), labels: Vec::new() }
    }

    pub fn push(&mut self, id: String, label: Label, graph: UncertainGraph) -> Result<()> {
        if graph.num_nodes != self.num_nodes {
            return Err(Error::InvalidGraph {
                graph: self.graphs.len(),
                field: "num_nodes",
                reason: format!("graph has {} nodes, dataset has {}", graph.num_nodes, self.num_nodes),
            });
        }
        self.ids.push(id);
        self.labels.push(label);
        self.graphs.push(graph);
        Ok(())
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graphs(&self) -> &[UncertainGraph] {
        &self.graphs
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn graph(&self, i: usize) -> (&str, Label, &UncertainGraph) {
        (&self.ids[i], self.labels[i], &self.graphs[i])
    }

    /// Positive graphs, in dataset order.
    pub fn pos(&self) -> impl Iterator<Item = &UncertainGraph> + '_ {
        self.with_label(Label::Positive)
    }

    /// Negative graphs, in dataset order.
    pub fn neg(&self) -> impl Iterator<Item = &UncertainGraph> + '_ {
        self.with_label(Label::Negative)
    }

    fn with_label(&self, l: Label) -> impl Iterator<Item = &UncertainGraph> + '_ {
        self.graphs.iter().zip(&self.labels).filter(move |(_, &x)| x == l).map(|(g, _)| g)
    }

    pub fn n_pos(&self) -> usize {
        self.labels.iter().filter(|&&l| l == Label::Positive).count()
    }

    pub fn n_neg(&self) -> usize {
        self.labels.len() - self.n_pos()
    }

    /// Fails unless both classes are present; every scoring operation needs this.
    pub fn require_both_classes(&self) -> Result<()> {
        let (p, n) = (self.n_pos(), self.n_neg());
        if p == 0 || n == 0 {
            return Err(Error::Contract(format!("dataset needs at least one graph per class (n_pos={p}, n_neg={n})")));
        }
        Ok(())
    }

    /// New dataset holding the graphs at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut d = Dataset::new(self.num_nodes);
        for &i in indices {
            d.ids.push(self.ids[i].clone());
            d.labels.push(self.labels[i]);
            d.graphs.push(self.graphs[i].clone());
        }
        d
    }
}

/// Connected, non-empty edge set in canonical (ascending) order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgraph {
    edges: Vec<Edge>,
}

impl Subgraph {
    pub fn new(mut edges: Vec<Edge>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidSubgraph("empty edge set".into()));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubgraph("duplicate edge".into()));
        }
        if !is_connected(&edges) {
            return Err(Error::InvalidSubgraph("edge set is not connected".into()));
        }
        Ok(Subgraph { edges })
    }

    /// Convenience constructor from unordered pairs.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self> {
        let edges = pairs.iter().map(|&(a, b)| Edge::new(a, b)).collect::<Result<Vec<_>>>()?;
        Subgraph::new(edges)
    }

    /// Caller guarantees `edges` is sorted, duplicate-free and connected.
    pub(crate) fn from_canonical(edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(is_connected(&edges));
        Subgraph { edges }
    }

    pub fn single(e: Edge) -> Self {
        Subgraph { edges: alloc::vec![e] }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    /// Sorted, deduplicated node set.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut ns: Vec<NodeId> = self.edges.iter().flat_map(|e| [e.u, e.v]).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    pub fn touches(&self, n: NodeId) -> bool {
        self.edges.iter().any(|e| e.touches(n))
    }

    /// `self ⊆ other` as edge sets.
    pub fn is_subgraph_of(&self, other: &Subgraph) -> bool {
        self.edges.iter().all(|e| other.contains_edge(e))
    }

    pub fn max_node(&self) -> NodeId {
        self.edges.iter().map(|e| e.v).max().expect("non-empty")
    }
}

impl fmt::Display for Subgraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Whether the edge-induced graph of `edges` is connected. Empty sets are not.
pub fn is_connected(edges: &[Edge]) -> bool {
    if edges.is_empty() {
        return false;
    }
    let mut nodes: Vec<NodeId> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
    nodes.sort_unstable();
    nodes.dedup();
    let idx = |n: NodeId| nodes.binary_search(&n).expect("node of edge");
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = nodes.len();
    for e in edges {
        let (a, b) = (find(&mut parent, idx(e.u)), find(&mut parent, idx(e.v)));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components == 1
}

/// `g ⊆ G`: every edge of `g` is present in `G`.
pub fn contains(g: &Subgraph, graph: &CertainGraph) -> bool {
    g.edges.iter().all(|e| graph.has_edge(e))
}

/// Probability that a world of `graph` contains `g`: the product of the
/// probabilities of `g`'s edges, or exactly 0 if one of them is absent.
pub fn containment_probability(g: &Subgraph, graph: &UncertainGraph) -> f64 {
    let mut p = 1.0;
    for e in &g.edges {
        match graph.probability(e) {
            Some(q) => p *= q,
            None => return 0.0,
        }
    }
    p
}

/// Union of every edge present in any graph of the dataset.
pub fn union_graph(d: &Dataset) -> CertainGraph {
    CertainGraph::new(d.num_nodes, d.graphs.iter().flat_map(|g| g.edges.keys().copied()))
}
