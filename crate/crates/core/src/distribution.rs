//! Exact support and score distributions over the possible worlds of a
//! dataset, and the statistical measures that summarize them.
//!
//! Graphs are independent, so the number of graphs containing g is a
//! Poisson-binomial variable per class. It is computed by the recurrence
//!
//! ```text
//! Pr[i, D(k)] = (1 - p_k) · Pr[i, D(k-1)] + p_k · Pr[i-1, D(k-1)]
//! ```
//!
//! with `Pr[0, D(0)] = 1`, where `p_k` is the containment probability of g
//! in the k-th graph. The joint support law is the outer product of the two
//! class marginals.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::{containment_probability, Dataset, Subgraph, UncertainGraph};
use crate::score::{ExtendedScore, ScoreTable};

/// Slack used when comparing accumulated probabilities (median CDF test,
/// mode ties), so that two summation orders of the same mass agree.
pub const PROB_TOL: f64 = 1e-12;

/// `probs[i]` = probability that exactly `i` graphs of the list contain g.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportDistribution {
    probs: Vec<f64>,
}

impl SupportDistribution {
    /// Runs the recurrence over per-graph containment probabilities.
    pub fn from_containment(containment: &[f64]) -> Self {
        Self::from_containment_counted(containment).0
    }

    /// As [`from_containment`](Self::from_containment), also returning the
    /// number of cell updates (one multiply-add pair each) performed.
    ///
    /// Graphs with containment probability 0 leave the distribution
    /// unchanged and are skipped.
    pub fn from_containment_counted(containment: &[f64]) -> (Self, u64) {
        Self::from_sparse_counted(containment.iter().copied(), containment.len())
    }

    /// Runs the recurrence over the nonzero containment probabilities of a
    /// list of `graphs` graphs; omitted graphs have probability 0.
    pub fn from_sparse_counted<I: IntoIterator<Item = f64>>(nonzero: I, graphs: usize) -> (Self, u64) {
        let mut probs = vec![0.0; graphs + 1];
        probs[0] = 1.0;
        let mut seen = 0usize;
        let mut ops = 0u64;
        for p in nonzero {
            debug_assert!((0.0..=1.0).contains(&p));
            if p == 0.0 {
                continue;
            }
            seen += 1;
            debug_assert!(seen <= graphs);
            let q = 1.0 - p;
            for i in (1..=seen).rev() {
                probs[i] = q * probs[i] + p * probs[i - 1];
            }
            probs[0] *= q;
            ops += seen as u64 + 1;
        }
        (SupportDistribution { probs }, ops)
    }

    /// Wraps an explicit probability vector. Entries must be non-negative.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|p| p.is_nan() || *p < 0.0) {
            return Err(Error::Contract("support distribution needs non-negative entries".into()));
        }
        Ok(SupportDistribution { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of graphs the distribution ranges over.
    pub fn graphs(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(i, p)| i as f64 * p).sum()
    }
}

/// Support distribution of `g` over `graphs`, in iteration order.
pub fn support_distribution<'a, I>(g: &Subgraph, graphs: I) -> SupportDistribution
where
    I: IntoIterator<Item = &'a UncertainGraph>,
{
    let c: Vec<f64> = graphs.into_iter().map(|x| containment_probability(g, x)).collect();
    SupportDistribution::from_containment(&c)
}

/// `cells[a][b]` = probability that `a` positive and `b` negative graphs contain g.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSupportDistribution {
    n_pos: usize,
    n_neg: usize,
    cells: Vec<f64>,
}

impl JointSupportDistribution {
    /// Row-major `(n_pos+1) × (n_neg+1)` cells.
    pub fn from_cells(n_pos: usize, n_neg: usize, cells: Vec<f64>) -> Result<Self> {
        if cells.len() != (n_pos + 1) * (n_neg + 1) {
            return Err(Error::Contract(format!(
                "joint needs {} cells, got {}",
                (n_pos + 1) * (n_neg + 1),
                cells.len()
            )));
        }
        Ok(JointSupportDistribution { n_pos, n_neg, cells })
    }

    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    pub fn n_neg(&self) -> usize {
        self.n_neg
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.cells[a * (self.n_neg + 1) + b]
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.cells.chunks(self.n_neg + 1).map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_neg + 1];
        for row in self.cells.chunks(self.n_neg + 1) {
            for (o, c) in out.iter_mut().zip(row) {
                *o += c;
            }
        }
        out
    }

    /// Cells with positive probability as `(a, b, p)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let w = self.n_neg + 1;
        self.cells.iter().enumerate().filter(|(_, &p)| p > 0.0).map(move |(i, &p)| (i / w, i % w, p))
    }
}

/// Outer product of the class marginals.
pub fn joint_distribution(pos: &SupportDistribution, neg: &SupportDistribution) -> JointSupportDistribution {
    let (np, nn) = (pos.graphs(), neg.graphs());
    let mut cells = Vec::with_capacity((np + 1) * (nn + 1));
    for &p in &pos.probs {
        cells.extend(neg.probs.iter().map(|&q| p * q));
    }
    JointSupportDistribution { n_pos: np, n_neg: nn, cells }
}

/// Key under which two scores count as the same atom: equal after rounding
/// to 12 significant decimal digits. Infinities are their own keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScoreKey {
    class: i8,
    exponent: i32,
    mantissa: i64,
}

const SIG_DIGITS: i32 = 12;

pub fn score_key(s: ExtendedScore) -> ScoreKey {
    let x = s.value();
    if x == f64::INFINITY {
        return ScoreKey { class: 2, exponent: 0, mantissa: 0 };
    }
    if x == f64::NEG_INFINITY {
        return ScoreKey { class: -2, exponent: 0, mantissa: 0 };
    }
    if x == 0.0 {
        return ScoreKey { class: 0, exponent: 0, mantissa: 0 };
    }
    let ax = libm::fabs(x);
    let mut e = libm::floor(libm::log10(ax)) as i32;
    let lo = 10i64.pow((SIG_DIGITS - 1) as u32);
    let hi = lo * 10;
    let mut m = libm::round(ax * libm::pow(10.0, (SIG_DIGITS - 1 - e) as f64)) as i64;
    if m >= hi {
        m = libm::round(m as f64 / 10.0) as i64;
        e += 1;
    } else if m < lo {
        e -= 1;
        m = libm::round(ax * libm::pow(10.0, (SIG_DIGITS - 1 - e) as f64)) as i64;
    }
    if x < 0.0 {
        ScoreKey { class: -1, exponent: -e, mantissa: -m }
    } else {
        ScoreKey { class: 1, exponent: e, mantissa: m }
    }
}

/// Grouped `(score, probability)` atoms, ascending by score.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreDistribution {
    atoms: Vec<(ExtendedScore, f64)>,
}

impl ScoreDistribution {
    /// Groups weighted scores by [`score_key`], summing probabilities and
    /// dropping zero-mass entries. Each atom carries the smallest raw score
    /// of its group.
    pub fn from_weighted<I>(items: I) -> Self
    where
        I: IntoIterator<Item = (ExtendedScore, f64)>,
    {
        let mut v: Vec<(ExtendedScore, f64)> = items.into_iter().filter(|(_, p)| *p > 0.0).collect();
        v.sort_by_key(|x| x.0);
        let mut atoms: Vec<(ExtendedScore, f64)> = Vec::new();
        let mut last_key = None;
        for (s, p) in v {
            let k = score_key(s);
            if last_key == Some(k) {
                atoms.last_mut().expect("group open").1 += p;
            } else {
                atoms.push((s, p));
                last_key = Some(k);
            }
        }
        ScoreDistribution { atoms }
    }

    pub fn atoms(&self) -> &[(ExtendedScore, f64)] {
        &self.atoms
    }

    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// Mean score; `+∞` if any atom is `+∞`.
    pub fn expectation(&self) -> ExtendedScore {
        if self.atoms.iter().any(|a| a.0 == ExtendedScore::INFINITY) {
            return ExtendedScore::INFINITY;
        }
        if self.atoms.iter().any(|a| a.0 == ExtendedScore::NEG_INFINITY) {
            return ExtendedScore::NEG_INFINITY;
        }
        ExtendedScore::new(self.atoms.iter().map(|(s, p)| s.value() * p).sum())
    }

    /// Mass on atoms scoring at least `phi`.
    pub fn phi_probability(&self, phi: ExtendedScore) -> f64 {
        self.atoms.iter().filter(|a| a.0 >= phi).map(|a| a.1).sum()
    }
}

/// Score distribution induced by a joint support law.
pub fn score_distribution(joint: &JointSupportDistribution, table: &ScoreTable) -> ScoreDistribution {
    debug_assert_eq!((joint.n_pos, joint.n_neg), (table.n_pos(), table.n_neg()));
    ScoreDistribution::from_weighted(joint.nonzero().map(|(a, b, p)| (table.get(a, b), p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    Exp,
    Median,
    Mode,
    PhiPr,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 4] = [MeasureKind::Exp, MeasureKind::Median, MeasureKind::Mode, MeasureKind::PhiPr];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Exp => "exp",
            MeasureKind::Median => "median",
            MeasureKind::Mode => "mode",
            MeasureKind::PhiPr => "phi-pr",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Whether an upper bound usable for branch-and-bound exists.
    pub fn has_bound(self) -> bool {
        matches!(self, MeasureKind::Exp | MeasureKind::PhiPr)
    }
}

/// Statistical measure of a score distribution; `phi` is set iff `PhiPr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSpec {
    kind: MeasureKind,
    phi: Option<ExtendedScore>,
}

impl MeasureSpec {
    pub fn new(kind: MeasureKind, phi: Option<ExtendedScore>) -> Result<Self> {
        match (kind, phi) {
            (MeasureKind::PhiPr, None) => Err(Error::Config("phi-pr measure requires phi".into())),
            (MeasureKind::PhiPr, Some(_)) => Ok(MeasureSpec { kind, phi }),
            (_, Some(_)) => Err(Error::Config(format!("phi is only valid with phi-pr, not {}", kind.name()))),
            (_, None) => Ok(MeasureSpec { kind, phi }),
        }
    }

    pub fn exp() -> Self {
        MeasureSpec { kind: MeasureKind::Exp, phi: None }
    }

    pub fn median() -> Self {
        MeasureSpec { kind: MeasureKind::Median, phi: None }
    }

    pub fn mode() -> Self {
        MeasureSpec { kind: MeasureKind::Mode, phi: None }
    }

    pub fn phi_pr(phi: impl Into<ExtendedScore>) -> Self {
        MeasureSpec { kind: MeasureKind::PhiPr, phi: Some(phi.into()) }
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn phi(&self) -> Option<ExtendedScore> {
        self.phi
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phi {
            Some(phi) => write!(f, "{}(phi={})", self.kind.name(), phi),
            None => f.write_str(self.kind.name()),
        }
    }
}

/// Probability-weighted mean score. A `+∞` score on a cell with positive
/// mass makes the result `+∞`; zero-mass cells never contribute.
pub fn measure_exp(joint: &JointSupportDistribution, table: &ScoreTable) -> ExtendedScore {
    let mut sum = 0.0;
    let mut pos_inf = false;
    let mut neg_inf = false;
    for (a, b, p) in joint.nonzero() {
        let s = table.get(a, b).value();
        if s == f64::INFINITY {
            pos_inf = true;
        } else if s == f64::NEG_INFINITY {
            neg_inf = true;
        } else {
            sum += p * s;
        }
    }
    // No built-in score reaches -∞, so the mixed case does not arise.
    if pos_inf {
        ExtendedScore::INFINITY
    } else if neg_inf {
        ExtendedScore::NEG_INFINITY
    } else {
        ExtendedScore::new(sum)
    }
}

/// Largest atom whose cumulative probability stays at or below 1/2; the
/// smallest atom when the first one already exceeds 1/2.
pub fn measure_median(dist: &ScoreDistribution) -> ExtendedScore {
    let mut cdf = 0.0;
    let mut best = None;
    for &(s, p) in &dist.atoms {
        cdf += p;
        if cdf <= 0.5 + PROB_TOL {
            best = Some(s);
        } else {
            break;
        }
    }
    best.or_else(|| dist.atoms.first().map(|a| a.0)).unwrap_or(ExtendedScore::ZERO)
}

/// Atom with the largest probability; ties go to the smaller score.
pub fn measure_mode(dist: &ScoreDistribution) -> ExtendedScore {
    let mut best: Option<(ExtendedScore, f64)> = None;
    for &(s, p) in &dist.atoms {
        match best {
            Some((_, bp)) if p <= bp + PROB_TOL => {}
            _ => best = Some((s, p)),
        }
    }
    best.map(|b| b.0).unwrap_or(ExtendedScore::ZERO)
}

/// Probability mass on cells scoring at least `phi`.
pub fn measure_phi_pr(joint: &JointSupportDistribution, table: &ScoreTable, phi: ExtendedScore) -> f64 {
    joint.nonzero().filter(|&(a, b, _)| table.get(a, b) >= phi).map(|(_, _, p)| p).sum()
}

/// Upper bound of the expected score over g and all its supergraphs.
/// `envelope` must come from [`ScoreTable::envelope`] for the same spec.
pub fn ub_exp(joint: &JointSupportDistribution, envelope: &ScoreTable) -> ExtendedScore {
    measure_exp(joint, envelope)
}

/// Upper bound of the φ-probability over g and all its supergraphs.
pub fn ub_phi_pr(joint: &JointSupportDistribution, envelope: &ScoreTable, phi: ExtendedScore) -> f64 {
    measure_phi_pr(joint, envelope, phi)
}

/// Evaluates any measure on a joint support law.
pub fn evaluate_measure(measure: &MeasureSpec, joint: &JointSupportDistribution, table: &ScoreTable) -> ExtendedScore {
    match measure.kind {
        MeasureKind::Exp => measure_exp(joint, table),
        MeasureKind::Median => measure_median(&score_distribution(joint, table)),
        MeasureKind::Mode => measure_mode(&score_distribution(joint, table)),
        MeasureKind::PhiPr => {
            ExtendedScore::new(measure_phi_pr(joint, table, measure.phi.expect("phi-pr carries phi")))
        }
    }
}

/// Branch-and-bound bound for measures that admit one.
pub fn evaluate_bound(
    measure: &MeasureSpec,
    joint: &JointSupportDistribution,
    envelope: &ScoreTable,
) -> Option<ExtendedScore> {
    match measure.kind {
        MeasureKind::Exp => Some(ub_exp(joint, envelope)),
        MeasureKind::PhiPr => Some(ExtendedScore::new(ub_phi_pr(joint, envelope, measure.phi.expect("phi")))),
        MeasureKind::Median | MeasureKind::Mode => None,
    }
}

/// Mean containment probability of g over all graphs of the dataset.
pub fn expected_frequency(g: &Subgraph, d: &Dataset) -> Result<f64> {
    if d.is_empty() {
        return Err(Error::Contract("expected frequency of an empty dataset".into()));
    }
    let s: f64 = d.graphs().iter().map(|x| containment_probability(g, x)).sum();
    Ok(s / d.len() as f64)
}

/// Joint support law of g in the dataset via the class-wise recurrence.
pub fn dataset_joint(g: &Subgraph, d: &Dataset) -> JointSupportDistribution {
    joint_distribution(&support_distribution(g, d.pos()), &support_distribution(g, d.neg()))
}
