//! Top-t discriminative subgraph mining with branch-and-bound.
//!
//! The search walks the reverse-search tree of [`crate::search`] depth-first.
//! At each node it computes the class-wise support distributions, the joint
//! law and the configured measure, offers the node to a bounded candidate
//! list, and then decides whether the subtree can be skipped:
//!
//! * expected frequency `≤ min_sup` (anti-monotone, so no descendant can
//!   become eligible), and
//! * for `Exp` and `PhiPr`, an upper bound on every descendant's measure
//!   that falls below the current worst candidate `θ`.
//!
//! A feature is only eligible for the candidate list when its expected
//! frequency exceeds `min_sup`, which makes both prunes lossless: pruned and
//! exhaustive runs return the same list.

use alloc::format;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::cmp::Ordering;

use crate::distribution::{
    evaluate_bound, evaluate_measure, joint_distribution, JointSupportDistribution, MeasureKind, MeasureSpec,
    SupportDistribution,
};
use crate::error::{Error, Result};
use crate::graph::{union_graph, Dataset, Edge, Label, Subgraph};
use crate::score::{ExtendedScore, ScoreFunctionSpec, ScoreKind, ScoreTable};
use crate::search::{extend, extensions, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pruning {
    pub frequency: bool,
    pub bound: bool,
}

impl Pruning {
    pub const ALL: Pruning = Pruning { frequency: true, bound: true };
    pub const NONE: Pruning = Pruning { frequency: false, bound: false };
}

impl Default for Pruning {
    fn default() -> Self {
        Pruning::ALL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiningConfig {
    /// Maximum number of features returned (`t`).
    pub top: usize,
    /// Features need expected frequency strictly above this.
    pub min_sup: f64,
    pub measure: MeasureSpec,
    pub score: ScoreFunctionSpec,
    pub max_edges: Option<usize>,
    pub pruning: Pruning,
    /// Keep each feature's joint support law in the output.
    pub retain_joint: bool,
}

impl MiningConfig {
    pub fn new(top: usize, min_sup: f64, measure: MeasureSpec, score: ScoreFunctionSpec) -> Result<Self> {
        let cfg =
            MiningConfig { top, min_sup, measure, score, max_edges: None, pruning: Pruning::ALL, retain_joint: false };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.top == 0 {
            return Err(Error::Config("top must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.min_sup) {
            return Err(Error::Config(format!("min_sup must lie in [0,1], got {}", self.min_sup)));
        }
        if self.max_edges == Some(0) {
            return Err(Error::Config("max_edges must be at least 1".into()));
        }
        if self.score.cap_epsilon.is_nan() || self.score.cap_epsilon < 0.0 {
            return Err(Error::Config("cap_epsilon must be >= 0".into()));
        }
        Ok(())
    }
}

/// Default capping: `ε = 0.01` when the expectation meets a score family
/// that reaches `+∞`, otherwise off.
pub fn default_cap_epsilon(measure: MeasureKind, score: ScoreKind) -> f64 {
    if measure == MeasureKind::Exp && score.can_be_infinite() {
        0.01
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinedFeature {
    pub subgraph: Subgraph,
    pub measure_value: ExtendedScore,
    pub exp_freq: f64,
    pub joint: Option<JointSupportDistribution>,
}

/// Total order of features, best first: larger measure, then fewer edges,
/// then the lexicographically smaller edge list.
pub fn rank_cmp(a: &MinedFeature, b: &MinedFeature) -> Ordering {
    b.measure_value
        .cmp(&a.measure_value)
        .then_with(|| a.subgraph.len().cmp(&b.subgraph.len()))
        .then_with(|| a.subgraph.cmp(&b.subgraph))
}

/// Bounded top-t buffer kept sorted best first.
#[derive(Debug, Clone)]
pub struct CandidateList {
    top: usize,
    items: Vec<MinedFeature>,
}

impl CandidateList {
    pub fn new(top: usize) -> Self {
        CandidateList { top, items: Vec::with_capacity(top.min(1024)) }
    }

    /// `θ`: the worst measure held once the list is full, `-∞` before.
    pub fn threshold(&self) -> ExtendedScore {
        if self.items.len() < self.top {
            ExtendedScore::NEG_INFINITY
        } else {
            self.items.last().map(|f| f.measure_value).unwrap_or(ExtendedScore::NEG_INFINITY)
        }
    }

    /// Inserts `f` if it ranks above the current worst; returns whether it did.
    pub fn offer(&mut self, f: MinedFeature) -> bool {
        if self.items.len() == self.top {
            match self.items.last() {
                Some(worst) if rank_cmp(&f, worst) == Ordering::Less => {
                    self.items.pop();
                }
                _ => return false,
            }
        }
        let pos = self.items.partition_point(|x| rank_cmp(x, &f) == Ordering::Less);
        self.items.insert(pos, f);
        true
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn into_sorted(self) -> Vec<MinedFeature> {
        self.items
    }
}

/// Shared candidate state seen by a traversal. Readers may observe a stale
/// threshold; that only weakens pruning.
pub trait CandidatePool {
    fn threshold(&self) -> ExtendedScore;
    fn offer(&self, f: MinedFeature);
}

/// Single-threaded pool.
#[derive(Debug)]
pub struct LocalPool(RefCell<CandidateList>);

impl LocalPool {
    pub fn new(top: usize) -> Self {
        LocalPool(RefCell::new(CandidateList::new(top)))
    }

    pub fn into_sorted(self) -> Vec<MinedFeature> {
        self.0.into_inner().into_sorted()
    }
}

impl CandidatePool for LocalPool {
    fn threshold(&self) -> ExtendedScore {
        self.0.borrow().threshold()
    }

    fn offer(&self, f: MinedFeature) {
        self.0.borrow_mut().offer(f);
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MiningStats {
    /// Search-tree nodes reached.
    pub visited: u64,
    /// Nodes whose distributions and measure were computed.
    pub evaluated: u64,
    pub pruned_frequency: u64,
    pub pruned_bound: u64,
    /// Cell updates performed by the support recurrence.
    pub dp_ops: u64,
}

impl MiningStats {
    pub fn merge(&mut self, o: &MiningStats) {
        self.visited += o.visited;
        self.evaluated += o.evaluated;
        self.pruned_frequency += o.pruned_frequency;
        self.pruned_bound += o.pruned_bound;
        self.dp_ops += o.dp_ops;
    }
}

#[derive(Debug, Clone)]
pub struct MiningOutcome {
    pub features: Vec<MinedFeature>,
    pub stats: MiningStats,
}

/// Containment probabilities of one subgraph: `(graph index, p)` for every
/// graph where `p > 0`, ascending by graph.
type Containment = Vec<(u32, f64)>;

/// Immutable mining context; one per (dataset, config).
#[derive(Debug)]
pub struct Miner<'a> {
    dataset: &'a Dataset,
    cfg: MiningConfig,
    universe: Universe,
    columns: Vec<Containment>,
    positive: Vec<bool>,
    n_pos: usize,
    n_neg: usize,
    table: ScoreTable,
    envelope: ScoreTable,
}

impl<'a> Miner<'a> {
    pub fn new(dataset: &'a Dataset, cfg: &MiningConfig) -> Result<Self> {
        cfg.validate()?;
        dataset.require_both_classes()?;
        let (n_pos, n_neg) = (dataset.n_pos(), dataset.n_neg());
        let universe = Universe::new(&union_graph(dataset));
        let mut columns = alloc::vec![Vec::new(); universe.num_edges()];
        for (gi, g) in dataset.graphs().iter().enumerate() {
            for (e, p) in g.edges() {
                let k = universe.edges().binary_search(&e).expect("edge in union");
                columns[k].push((gi as u32, p));
            }
        }
        Ok(Miner {
            dataset,
            cfg: cfg.clone(),
            universe,
            columns,
            positive: dataset.labels().iter().map(|&l| l == Label::Positive).collect(),
            n_pos,
            n_neg,
            table: ScoreTable::scores(&cfg.score, n_pos, n_neg)?,
            envelope: ScoreTable::envelope(&cfg.score, n_pos, n_neg)?,
        })
    }

    pub fn config(&self) -> &MiningConfig {
        &self.cfg
    }

    pub fn dataset(&self) -> &Dataset {
        self.dataset
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// The single-edge subgraphs under the root; each roots an independent
    /// subtree.
    pub fn roots(&self) -> &[Edge] {
        self.universe.edges()
    }

    fn column(&self, e: &Edge) -> &Containment {
        let k = self.universe.edges().binary_search(e).expect("edge in union");
        &self.columns[k]
    }

    /// Joint support law from sparse containment probabilities.
    fn joint(&self, c: &Containment, stats: &mut MiningStats) -> JointSupportDistribution {
        let pos = c.iter().filter(|(g, _)| self.positive[*g as usize]).map(|x| x.1);
        let neg = c.iter().filter(|(g, _)| !self.positive[*g as usize]).map(|x| x.1);
        let (pd, o1) = SupportDistribution::from_sparse_counted(pos, self.n_pos);
        let (nd, o2) = SupportDistribution::from_sparse_counted(neg, self.n_neg);
        stats.dp_ops += o1 + o2;
        joint_distribution(&pd, &nd)
    }

    /// Explores the subtree rooted at the single-edge subgraph `root`.
    pub fn explore<P: CandidatePool + ?Sized>(&self, root: Edge, pool: &P) -> MiningStats {
        let mut stats = MiningStats::default();
        let c = self.column(&root).clone();
        self.visit(&Subgraph::single(root), c, pool, &mut stats);
        stats
    }

    fn visit<P: CandidatePool + ?Sized>(&self, g: &Subgraph, c: Containment, pool: &P, stats: &mut MiningStats) {
        stats.visited += 1;
        let exp_freq = c.iter().map(|x| x.1).sum::<f64>() / self.dataset.len() as f64;
        if exp_freq <= self.cfg.min_sup {
            // neither g nor any supergraph is eligible
            if self.cfg.pruning.frequency {
                stats.pruned_frequency += 1;
                return;
            }
        } else {
            stats.evaluated += 1;
            let joint = self.joint(&c, stats);
            let value = evaluate_measure(&self.cfg.measure, &joint, &self.table);
            let bound =
                if self.cfg.pruning.bound { evaluate_bound(&self.cfg.measure, &joint, &self.envelope) } else { None };
            pool.offer(MinedFeature {
                subgraph: g.clone(),
                measure_value: value,
                exp_freq,
                joint: self.cfg.retain_joint.then_some(joint),
            });
            if let Some(ub) = bound {
                if below_threshold(ub, pool.threshold()) {
                    stats.pruned_bound += 1;
                    return;
                }
            }
        }
        if self.cfg.max_edges.is_some_and(|m| g.len() >= m) {
            return;
        }
        for e in extensions(g, &self.universe) {
            let child_c = intersect(&c, self.column(&e));
            self.visit(&extend(g, e), child_c, pool, stats);
        }
    }
}

/// `ub < θ`, with slack for rounding between the bound and the measure.
fn below_threshold(ub: ExtendedScore, theta: ExtendedScore) -> bool {
    if !theta.is_finite() || !ub.is_finite() {
        return ub < theta;
    }
    let t = theta.value();
    ub.value() < t - 1e-12 * libm::fmax(1.0, libm::fabs(t))
}

fn intersect(a: &Containment, b: &Containment) -> Containment {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push((a[i].0, a[i].1 * b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Mines the top-t features single-threaded.
pub fn mine(dataset: &Dataset, cfg: &MiningConfig) -> Result<MiningOutcome> {
    let miner = Miner::new(dataset, cfg)?;
    let pool = LocalPool::new(cfg.top);
    let mut stats = MiningStats::default();
    for &e in miner.roots() {
        stats.merge(&miner.explore(e, &pool));
    }
    Ok(MiningOutcome { features: pool.into_sorted(), stats })
}

/// Reference run with both pruning rules disabled.
pub fn mine_exhaustive(dataset: &Dataset, cfg: &MiningConfig) -> Result<MiningOutcome> {
    let mut cfg = cfg.clone();
    cfg.pruning = Pruning::NONE;
    mine(dataset, &cfg)
}
