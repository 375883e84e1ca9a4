//! Synthetic uncertain-graph datasets with a planted discriminative pattern.
//!
//! Each graph gets uniformly sampled background edges with uniform
//! probabilities; positive and negative graphs then receive every planted
//! edge with class-specific probabilities. Presets mirror the class sizes,
//! node counts, mean edge counts and mean edge probabilities of three
//! resting-state fMRI connectivity datasets.

use alloc::format;
use alloc::string::ToString;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Dataset, Edge, Label, Subgraph, UncertainGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_pos: usize,
    pub n_neg: usize,
    pub num_nodes: usize,
    pub background_edges_per_graph: usize,
    pub background_prob_range: (f64, f64),
    pub planted: Subgraph,
    pub planted_prob_pos: f64,
    pub planted_prob_neg: f64,
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 4] = ["toy", "adhd-like", "adni-like", "hiv-like"];

fn planted_triangle() -> Subgraph {
    Subgraph::from_pairs(&[(0, 1), (0, 2), (1, 2)]).expect("triangle")
}

impl SynthConfig {
    /// 100/100 graphs on 116 nodes, mean edge count ≈ 484.7, mean edge
    /// probability ≈ 0.55.
    pub fn adhd_like(seed: u64) -> Self {
        SynthConfig {
            seed,
            n_pos: 100,
            n_neg: 100,
            num_nodes: 116,
            background_edges_per_graph: 482,
            background_prob_range: (0.3, 0.8),
            planted: planted_triangle(),
            planted_prob_pos: 0.9,
            planted_prob_neg: 0.1,
        }
    }

    /// 18/18 graphs on 90 nodes, mean edge count ≈ 2019.8, mean edge
    /// probability ≈ 0.59.
    pub fn adni_like(seed: u64) -> Self {
        SynthConfig {
            seed,
            n_pos: 18,
            n_neg: 18,
            num_nodes: 90,
            background_edges_per_graph: 2017,
            background_prob_range: (0.34, 0.84),
            planted: planted_triangle(),
            planted_prob_pos: 0.9,
            planted_prob_neg: 0.1,
        }
    }

    /// 25/25 graphs on 90 nodes, mean edge count ≈ 480.5, mean edge
    /// probability ≈ 0.88.
    pub fn hiv_like(seed: u64) -> Self {
        SynthConfig {
            seed,
            n_pos: 25,
            n_neg: 25,
            num_nodes: 90,
            background_edges_per_graph: 478,
            background_prob_range: (0.76, 1.0),
            planted: planted_triangle(),
            planted_prob_pos: 0.9,
            planted_prob_neg: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.n_pos == 0 || self.n_neg == 0 {
            return bad("both classes need at least one graph");
        }
        if self.num_nodes < 2 {
            return bad("need at least two nodes");
        }
        if self.planted.max_node().index() >= self.num_nodes {
            return bad("planted subgraph does not fit the node range");
        }
        let (lo, hi) = self.background_prob_range;
        let in_unit = |p: f64| p > 0.0 && p <= 1.0;
        if !in_unit(lo) || !in_unit(hi) || lo > hi {
            return bad("background probability range must satisfy 0 < lo <= hi <= 1");
        }
        if !in_unit(self.planted_prob_pos) || !in_unit(self.planted_prob_neg) {
            return bad("planted probabilities must lie in (0,1]");
        }
        let pairs = self.num_nodes * (self.num_nodes - 1) / 2;
        if self.background_edges_per_graph > pairs {
            return Err(Error::Config(format!(
                "{} background edges requested but only {pairs} node pairs exist",
                self.background_edges_per_graph
            )));
        }
        Ok(())
    }
}

/// Node pair with the given index in row-major upper-triangle order.
fn pair_at(mut k: usize, n: usize) -> (u32, u32) {
    let mut u = 0;
    while k >= n - 1 - u {
        k -= n - 1 - u;
        u += 1;
    }
    (u as u32, (u + 1 + k) as u32)
}

fn generate_graph(cfg: &SynthConfig, index: usize, label: Label) -> UncertainGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let n = cfg.num_nodes;
    let pairs = n * (n - 1) / 2;
    let (lo, hi) = cfg.background_prob_range;
    let mut edges: alloc::collections::BTreeMap<Edge, f64> =
        index::sample(&mut rng, pairs, cfg.background_edges_per_graph)
            .into_iter()
            .map(|k| {
                let (u, v) = pair_at(k, n);
                (Edge::new(u, v).expect("u < v"), rng.gen_range(lo..=hi))
            })
            .collect();
    let planted_p = match label {
        Label::Positive => cfg.planted_prob_pos,
        Label::Negative => cfg.planted_prob_neg,
    };
    for &e in cfg.planted.edges() {
        edges.insert(e, planted_p);
    }
    UncertainGraph::from_triples(index, n, edges.into_iter().map(|(e, p)| (e.u().0, e.v().0, p)))
        .expect("generated graph is valid")
}

/// Positives first, then negatives; graph `i` is drawn from its own
/// stream of the seeded generator.
pub fn generate(cfg: &SynthConfig) -> Result<Dataset> {
    cfg.validate()?;
    let mut d = Dataset::new(cfg.num_nodes);
    for i in 0..cfg.n_pos + cfg.n_neg {
        let label = if i < cfg.n_pos { Label::Positive } else { Label::Negative };
        d.push(format!("g{i}"), label, generate_graph(cfg, i, label))?;
    }
    Ok(d)
}

/// The four-graph, three-node example with nodes A=0, B=1, C=2.
pub fn toy() -> Dataset {
    type Row = (&'static str, Label, &'static [(u32, u32, f64)]);
    let rows: [Row; 4] = [
        ("G1", Label::Positive, &[(0, 1, 0.8), (1, 2, 0.9), (0, 2, 0.1)]),
        ("G2", Label::Positive, &[(0, 1, 0.9), (1, 2, 0.8), (0, 2, 0.1)]),
        ("G3", Label::Negative, &[(0, 1, 0.1), (1, 2, 0.9)]),
        ("G4", Label::Negative, &[(0, 1, 0.8), (1, 2, 0.1)]),
    ];
    let mut d = Dataset::new(3);
    for (i, (id, label, edges)) in rows.into_iter().enumerate() {
        let g = UncertainGraph::from_triples(i, 3, edges.iter().copied()).expect("fixture");
        d.push(id.to_string(), label, g).expect("fixture");
    }
    d
}

/// Config behind a randomized preset, or `None` for unknown names and the
/// fixed `toy` dataset.
pub fn preset_config(name: &str, seed: u64) -> Option<SynthConfig> {
    match name {
        "adhd-like" => Some(SynthConfig::adhd_like(seed)),
        "adni-like" => Some(SynthConfig::adni_like(seed)),
        "hiv-like" => Some(SynthConfig::hiv_like(seed)),
        _ => None,
    }
}

pub fn preset(name: &str, seed: u64) -> Result<Dataset> {
    if name == "toy" {
        return Ok(toy());
    }
    match preset_config(name, seed) {
        Some(cfg) => generate(&cfg),
        None => Err(Error::Config(format!("unknown preset {name:?}; expected one of {PRESETS:?}"))),
    }
}

/// Small random dataset for exhaustive checks: 2 to `max_graphs` graphs on
/// `num_nodes` nodes, each with 1 to `max_edges` distinct edges. The first
/// graph is positive, the second negative, the rest random. About one edge
/// in ten is certain; the others have probability in [0.05, 0.95].
pub fn random_small(seed: u64, max_graphs: usize, max_edges: usize, num_nodes: usize) -> Result<Dataset> {
    let pairs = num_nodes * num_nodes.saturating_sub(1) / 2;
    if max_graphs < 2 || max_edges == 0 || max_edges > pairs {
        return Err(Error::Config("need max_graphs >= 2 and 1 <= max_edges <= node pairs".to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Dataset::new(num_nodes);
    for i in 0..rng.gen_range(2..=max_graphs) {
        let label = match i {
            0 => Label::Positive,
            1 => Label::Negative,
            _ if rng.gen_bool(0.5) => Label::Positive,
            _ => Label::Negative,
        };
        let k = rng.gen_range(1..=max_edges);
        let triples: alloc::vec::Vec<_> = index::sample(&mut rng, pairs, k)
            .into_iter()
            .map(|x| {
                let (u, v) = pair_at(x, num_nodes);
                let p = if rng.gen_bool(0.1) { 1.0 } else { rng.gen_range(0.05..=0.95) };
                (u, v, p)
            })
            .collect();
        d.push(format!("r{i}"), label, UncertainGraph::from_triples(i, num_nodes, triples)?)?;
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetStats {
    pub graphs: usize,
    pub n_pos: usize,
    pub n_neg: usize,
    pub num_nodes: usize,
    pub mean_edges: f64,
    /// Mean over all edges of all graphs.
    pub mean_edge_prob: f64,
    pub empty: bool,
}

pub fn dataset_stats(d: &Dataset) -> DatasetStats {
    let edges: usize = d.graphs().iter().map(|g| g.num_edges()).sum();
    let prob: f64 = d.graphs().iter().flat_map(|g| g.edges().map(|(_, p)| p)).sum();
    DatasetStats {
        graphs: d.len(),
        n_pos: d.n_pos(),
        n_neg: d.n_neg(),
        num_nodes: d.num_nodes(),
        mean_edges: if d.is_empty() { 0.0 } else { edges as f64 / d.len() as f64 },
        mean_edge_prob: if edges == 0 { 0.0 } else { prob / edges as f64 },
        empty: d.is_empty(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::expected_frequency;
    use alloc::vec::Vec;

    fn small(seed: u64) -> SynthConfig {
        SynthConfig {
            seed,
            n_pos: 6,
            n_neg: 5,
            num_nodes: 10,
            background_edges_per_graph: 12,
            background_prob_range: (0.2, 0.7),
            planted: Subgraph::from_pairs(&[(0, 1), (1, 2)]).unwrap(),
            planted_prob_pos: 0.8,
            planted_prob_neg: 0.3,
        }
    }

    #[test]
    fn pair_indexing_covers_upper_triangle() {
        let n = 7;
        let all: Vec<_> = (0..n * (n - 1) / 2).map(|k| pair_at(k, n)).collect();
        let mut want = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                want.push((u, v));
            }
        }
        assert_eq!(all, want);
    }

    #[test]
    fn deterministic_under_seed() {
        assert_eq!(generate(&small(3)).unwrap(), generate(&small(3)).unwrap());
        assert_ne!(generate(&small(3)).unwrap(), generate(&small(4)).unwrap());
    }

    #[test]
    fn planted_edges_carry_class_probability() {
        let d = generate(&small(9)).unwrap();
        assert_eq!((d.n_pos(), d.n_neg()), (6, 5));
        for i in 0..d.len() {
            let (_, l, g) = d.graph(i);
            let want = if l == Label::Positive { 0.8 } else { 0.3 };
            for e in small(9).planted.edges() {
                assert_eq!(g.probability(e), Some(want));
            }
            assert!(g.num_edges() >= 12 && g.num_edges() <= 14);
            for (e, p) in g.edges() {
                if !small(9).planted.contains_edge(&e) {
                    assert!((0.2..=0.7).contains(&p));
                }
            }
        }
    }

    #[test]
    fn too_many_background_edges() {
        let mut c = small(1);
        c.background_edges_per_graph = 46;
        assert!(generate(&c).is_err());
        c.background_edges_per_graph = 45;
        assert!(generate(&c).is_ok());
    }

    #[test]
    fn no_signal_gives_equal_class_frequency() {
        let mut c = small(5);
        c.planted_prob_neg = c.planted_prob_pos;
        let d = generate(&c).unwrap();
        let pos = d.subset(&(0..6).collect::<Vec<_>>());
        let neg = d.subset(&(6..11).collect::<Vec<_>>());
        let f = |x: &Dataset| expected_frequency(&c.planted, x).unwrap();
        assert!((f(&pos) - f(&neg)).abs() < 1e-15);
    }

    #[test]
    fn planted_signal_is_monotone() {
        let mut prev = 0.0;
        for p in [0.2, 0.4, 0.6, 0.8, 1.0] {
            let mut c = small(11);
            c.planted_prob_pos = p;
            let d = generate(&c).unwrap();
            let pos = d.subset(&(0..6).collect::<Vec<_>>());
            let f = expected_frequency(&c.planted, &pos).unwrap();
            assert!(f >= prev);
            prev = f;
        }
    }

    #[test]
    fn random_small_shape() {
        for seed in 0..50 {
            let d = random_small(seed, 6, 3, 4).unwrap();
            assert!((2..=6).contains(&d.len()));
            assert!(d.n_pos() >= 1 && d.n_neg() >= 1);
            assert!(d.graphs().iter().all(|g| (1..=3).contains(&g.num_edges())));
        }
        assert_eq!(random_small(3, 6, 3, 4).unwrap(), random_small(3, 6, 3, 4).unwrap());
        assert!(random_small(0, 6, 7, 4).is_err());
    }

    #[test]
    fn toy_stats() {
        let s = dataset_stats(&toy());
        assert_eq!((s.graphs, s.n_pos, s.n_neg, s.num_nodes), (4, 2, 2, 3));
        assert!(!s.empty);
        assert!((s.mean_edges - 2.5).abs() < 1e-15);
    }

    #[test]
    fn empty_stats() {
        let s = dataset_stats(&Dataset::new(5));
        assert!(s.empty);
        assert_eq!((s.graphs, s.mean_edges, s.mean_edge_prob), (0, 0.0, 0.0));
    }

    #[test]
    fn presets_match_published_shape() {
        let s = dataset_stats(&preset("adhd-like", 1).unwrap());
        assert_eq!((s.graphs, s.n_pos, s.n_neg, s.num_nodes), (200, 100, 100, 116));
        assert!((s.mean_edges - 484.7).abs() / 484.7 < 0.02, "{}", s.mean_edges);
        assert!((s.mean_edge_prob - 0.55).abs() < 0.02, "{}", s.mean_edge_prob);

        let s = dataset_stats(&preset("hiv-like", 1).unwrap());
        assert_eq!((s.graphs, s.num_nodes), (50, 90));
        assert!((s.mean_edges - 480.48).abs() / 480.48 < 0.02);
        assert!((s.mean_edge_prob - 0.88).abs() < 0.02);

        let s = dataset_stats(&preset("adni-like", 1).unwrap());
        assert_eq!((s.graphs, s.num_nodes), (36, 90));
        assert!((s.mean_edges - 2019.8).abs() / 2019.8 < 0.02);
        assert!((s.mean_edge_prob - 0.59).abs() < 0.02);

        assert!(preset("nope", 1).is_err());
    }
}
