//! Brute-force possible-worlds reference.
//!
//! Everything here is computed by enumerating every world of a dataset,
//! which is exponential in the total edge count. It exists to check the
//! distribution module on tiny inputs and shares none of its arithmetic.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::{
    dataset_joint, evaluate_measure, score_key, JointSupportDistribution, MeasureKind, MeasureSpec, PROB_TOL,
};
use crate::error::{Error, Result};
use crate::graph::{contains, union_graph, CertainGraph, Dataset, Edge, Label, Subgraph, UncertainGraph};
use crate::miner::default_cap_epsilon;
use crate::score::{eval_score, ExtendedScore, ScoreFunctionSpec, ScoreKind, ScoreTable};
use crate::search::{extend, extensions, Universe};

pub const DEFAULT_MAX_WORLDS: u128 = 1 << 20;

/// One world of a dataset: a certain graph per uncertain graph.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pub certain_graphs: Vec<CertainGraph>,
    pub probability: f64,
}

/// Number of worlds, `Π 2^|E_i|`, or `None` if it overflows `u128`.
pub fn world_count(d: &Dataset) -> Option<u128> {
    let bits: usize = d.graphs().iter().map(|g| g.num_edges()).sum();
    if bits >= 128 {
        None
    } else {
        Some(1u128 << bits)
    }
}

fn check_budget(d: &Dataset, max_worlds: u128) -> Result<u128> {
    match world_count(d) {
        Some(n) if n <= max_worlds => Ok(n),
        Some(n) => Err(Error::WorldBudget { worlds: n, limit: max_worlds }),
        None => Err(Error::WorldBudget { worlds: u128::MAX, limit: max_worlds }),
    }
}

/// The `2^|E|` worlds of one graph, indexed by edge-subset bitmask over the
/// graph's edges in ascending order.
fn graph_worlds(g: &UncertainGraph) -> Vec<(CertainGraph, f64)> {
    let edges: Vec<(Edge, f64)> = g.edges().collect();
    (0u64..1 << edges.len())
        .map(|mask| {
            let mut prob = 1.0;
            let mut present = Vec::new();
            for (i, &(e, p)) in edges.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    prob *= p;
                    present.push(e);
                } else {
                    prob *= 1.0 - p;
                }
            }
            (CertainGraph::new(g.num_nodes(), present), prob)
        })
        .collect()
}

/// Mixed-radix counter over per-graph world indices; the last graph varies
/// fastest.
struct Odometer {
    radix: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl Odometer {
    fn new(radix: Vec<usize>) -> Self {
        let digits = alloc::vec![0; radix.len()];
        Odometer { radix, digits, done: false }
    }

    fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        self.done = true;
        Some(&self.digits)
    }

    fn advance(&mut self) {
        for i in (0..self.radix.len()).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.radix[i] {
                self.done = false;
                return;
            }
            self.digits[i] = 0;
        }
    }
}

/// Calls `f` once per world with each graph's chosen world index and the
/// world probability.
fn for_each_world<F: FnMut(&[usize], f64)>(options: &[Vec<(CertainGraph, f64)>], mut f: F) {
    let mut odo = Odometer::new(options.iter().map(|o| o.len()).collect());
    while let Some(digits) = odo.next() {
        let p: f64 = digits.iter().zip(options).map(|(&k, o)| o[k].1).product();
        f(digits, p);
        odo.advance();
    }
}

/// Every world of the dataset with its probability.
pub fn enumerate_worlds(d: &Dataset, max_worlds: u128) -> Result<Vec<World>> {
    check_budget(d, max_worlds)?;
    let options: Vec<_> = d.graphs().iter().map(graph_worlds).collect();
    let mut out = Vec::new();
    for_each_world(&options, |digits, p| {
        out.push(World {
            certain_graphs: digits.iter().zip(&options).map(|(&k, o)| o[k].0.clone()).collect(),
            probability: p,
        });
    });
    Ok(out)
}

/// `(n₊ᵍ, n₋ᵍ, probability)` for every world.
fn world_supports(g: &Subgraph, d: &Dataset, max_worlds: u128) -> Result<Vec<(usize, usize, f64)>> {
    check_budget(d, max_worlds)?;
    let options: Vec<Vec<(CertainGraph, f64)>> = d.graphs().iter().map(graph_worlds).collect();
    let hits: Vec<Vec<bool>> = options.iter().map(|o| o.iter().map(|(cg, _)| contains(g, cg)).collect()).collect();
    let labels = d.labels();
    let mut out = Vec::new();
    for_each_world(&options, |digits, p| {
        let (mut a, mut b) = (0, 0);
        for (i, &k) in digits.iter().enumerate() {
            if hits[i][k] {
                match labels[i] {
                    Label::Positive => a += 1,
                    Label::Negative => b += 1,
                }
            }
        }
        out.push((a, b, p));
    });
    Ok(out)
}

/// Joint support law of g by summing world probabilities.
pub fn oracle_joint(g: &Subgraph, d: &Dataset, max_worlds: u128) -> Result<JointSupportDistribution> {
    let (np, nn) = (d.n_pos(), d.n_neg());
    let mut cells = alloc::vec![0.0; (np + 1) * (nn + 1)];
    for (a, b, p) in world_supports(g, d, max_worlds)? {
        cells[a * (nn + 1) + b] += p;
    }
    JointSupportDistribution::from_cells(np, nn, cells)
}

/// Applies a measure to the world-level score multiset, with the same
/// grouping, median fallback and mode tie conventions as the DP path.
pub fn oracle_measure(
    g: &Subgraph,
    d: &Dataset,
    measure: &MeasureSpec,
    score: &ScoreFunctionSpec,
    max_worlds: u128,
) -> Result<ExtendedScore> {
    Ok(oracle_measures(g, d, &[(*measure, *score)], max_worlds)?[0])
}

/// [`oracle_measure`] for several (measure, score) pairs from a single
/// enumeration.
pub fn oracle_measures(
    g: &Subgraph,
    d: &Dataset,
    specs: &[(MeasureSpec, ScoreFunctionSpec)],
    max_worlds: u128,
) -> Result<Vec<ExtendedScore>> {
    d.require_both_classes()?;
    let worlds = world_supports(g, d, max_worlds)?;
    specs.iter().map(|(m, s)| measure_over_worlds(&worlds, d.n_pos(), d.n_neg(), m, s)).collect()
}

fn measure_over_worlds(
    worlds: &[(usize, usize, f64)],
    np: usize,
    nn: usize,
    measure: &MeasureSpec,
    score: &ScoreFunctionSpec,
) -> Result<ExtendedScore> {
    let mut scored: Vec<(ExtendedScore, f64)> = Vec::new();
    for &(a, b, p) in worlds {
        if p > 0.0 {
            scored.push((eval_score(score, a, b, np, nn)?, p));
        }
    }
    Ok(match measure.kind() {
        MeasureKind::Exp => {
            if scored.iter().any(|(s, _)| *s == ExtendedScore::INFINITY) {
                ExtendedScore::INFINITY
            } else {
                ExtendedScore::new(scored.iter().map(|(s, p)| s.value() * p).sum())
            }
        }
        MeasureKind::PhiPr => {
            let phi = measure.phi().expect("phi");
            ExtendedScore::new(scored.iter().filter(|(s, _)| *s >= phi).map(|(_, p)| p).sum())
        }
        MeasureKind::Median | MeasureKind::Mode => {
            scored.sort_by_key(|x| x.0);
            let mut groups: Vec<(ExtendedScore, f64)> = Vec::new();
            for (s, p) in scored {
                match groups.last_mut() {
                    Some(last) if score_key(last.0) == score_key(s) => last.1 += p,
                    _ => groups.push((s, p)),
                }
            }
            if measure.kind() == MeasureKind::Median {
                let mut cdf = 0.0;
                let mut pick = groups[0].0;
                for (s, p) in &groups {
                    cdf += p;
                    if cdf > 0.5 + PROB_TOL {
                        break;
                    }
                    pick = *s;
                }
                pick
            } else {
                let max = groups.iter().map(|g| g.1).fold(0.0, f64::max);
                groups.iter().find(|g| g.1 >= max - PROB_TOL).expect("non-empty").0
            }
        }
    })
}

/// One randomized comparison between the DP path and the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub subgraph: Subgraph,
    pub measure: MeasureSpec,
    pub score: ScoreFunctionSpec,
    pub max_cell_diff: f64,
    pub dp_value: ExtendedScore,
    pub oracle_value: ExtendedScore,
    pub matched: bool,
}

/// Random connected subgraph of the universe: a random root edge grown by
/// up to `universe.num_edges()` random child steps.
fn random_subgraph(u: &Universe, rng: &mut ChaCha8Rng) -> Subgraph {
    let mut g = Subgraph::single(*u.edges().choose(rng).expect("non-empty universe"));
    let steps = rng.gen_range(0..u.num_edges());
    for _ in 0..steps {
        match extensions(&g, u).choose(rng) {
            Some(&e) => g = extend(&g, e),
            None => break,
        }
    }
    g
}

/// Runs `trials` comparisons on `d`, each with a random subgraph of the
/// union graph, a random score function and a random measure. For φ-Pr the
/// threshold is the score of a random support pair so that it is attained.
/// A trial matches when every joint cell agrees within `tol` and the
/// measures agree within `tol` (absolute or relative).
pub fn oracle_check(d: &Dataset, trials: usize, seed: u64, tol: f64, max_worlds: u128) -> Result<Vec<TrialOutcome>> {
    d.require_both_classes()?;
    check_budget(d, max_worlds)?;
    let u = Universe::new(&union_graph(d));
    if u.num_edges() == 0 {
        return Err(Error::Contract("dataset has no edges".into()));
    }
    let (np, nn) = (d.n_pos(), d.n_neg());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let g = random_subgraph(&u, &mut rng);
        let kind = *ScoreKind::ALL.choose(&mut rng).expect("kinds");
        let mkind = *MeasureKind::ALL.choose(&mut rng).expect("measures");
        let score = ScoreFunctionSpec::new(kind, default_cap_epsilon(mkind, kind))?;
        let phi = match mkind {
            MeasureKind::PhiPr => Some(eval_score(&score, rng.gen_range(0..=np), rng.gen_range(0..=nn), np, nn)?),
            _ => None,
        };
        let measure = MeasureSpec::new(mkind, phi)?;
        let dp = dataset_joint(&g, d);
        let oracle = oracle_joint(&g, d, max_worlds)?;
        let mut max_cell_diff: f64 = 0.0;
        for a in 0..=np {
            for b in 0..=nn {
                max_cell_diff = max_cell_diff.max(libm::fabs(dp.get(a, b) - oracle.get(a, b)));
            }
        }
        let dp_value = evaluate_measure(&measure, &dp, &ScoreTable::scores(&score, np, nn)?);
        let oracle_value = oracle_measure(&g, d, &measure, &score, max_worlds)?;
        let matched = max_cell_diff <= tol && dp_value.approx_eq(oracle_value, tol);
        out.push(TrialOutcome { subgraph: g, measure, score, max_cell_diff, dp_value, oracle_value, matched });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn one(label: Label, triples: &[(u32, u32, f64)]) -> Dataset {
        let mut d = Dataset::new(3);
        d.push("g".to_string(), label, UncertainGraph::from_triples(0, 3, triples.iter().copied()).unwrap()).unwrap();
        d
    }

    #[test]
    fn single_edge_worlds() {
        let w = enumerate_worlds(&one(Label::Positive, &[(0, 1, 0.8)]), DEFAULT_MAX_WORLDS).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].certain_graphs[0].num_edges(), 0);
        assert!((w[0].probability - 0.2).abs() < 1e-15);
        assert!((w[1].probability - 0.8).abs() < 1e-15);
    }

    #[test]
    fn toy_first_graph_worlds() {
        let d = one(Label::Positive, &[(0, 1, 0.8), (1, 2, 0.9), (0, 2, 0.1)]);
        let w = enumerate_worlds(&d, DEFAULT_MAX_WORLDS).unwrap();
        assert_eq!(w.len(), 8);
        let full = w.iter().find(|x| x.certain_graphs[0].num_edges() == 3).unwrap();
        assert!((full.probability - 0.072).abs() < 1e-15);
        assert!((w.iter().map(|x| x.probability).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let d = one(Label::Positive, &[(0, 1, 0.8), (1, 2, 0.9), (0, 2, 0.1)]);
        assert_eq!(enumerate_worlds(&d, 4), Err(Error::WorldBudget { worlds: 8, limit: 4 }));
    }

    #[test]
    fn two_half_graphs_give_uniform_joint() {
        let mut d = Dataset::new(2);
        d.push("p".into(), Label::Positive, UncertainGraph::from_triples(0, 2, [(0, 1, 0.5)]).unwrap()).unwrap();
        d.push("n".into(), Label::Negative, UncertainGraph::from_triples(1, 2, [(0, 1, 0.5)]).unwrap()).unwrap();
        let j = oracle_joint(&Subgraph::from_pairs(&[(0, 1)]).unwrap(), &d, DEFAULT_MAX_WORLDS).unwrap();
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!((j.get(a, b) - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn unembeddable_mass_at_origin() {
        let mut d = one(Label::Positive, &[(0, 1, 0.8)]);
        d.push("n".into(), Label::Negative, UncertainGraph::from_triples(1, 3, [(1, 2, 0.3)]).unwrap()).unwrap();
        let j = oracle_joint(&Subgraph::from_pairs(&[(0, 2)]).unwrap(), &d, DEFAULT_MAX_WORLDS).unwrap();
        assert!((j.get(0, 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn oracle_check_on_toy() {
        let d = crate::synth::toy();
        let r = oracle_check(&d, 40, 5, 1e-9, DEFAULT_MAX_WORLDS).unwrap();
        assert_eq!(r.len(), 40);
        assert!(r.iter().all(|t| t.matched), "{:?}", r.iter().find(|t| !t.matched));
        assert_eq!(r, oracle_check(&d, 40, 5, 1e-9, DEFAULT_MAX_WORLDS).unwrap());
    }

    #[test]
    fn trivial_measures() {
        let mut d = one(Label::Positive, &[(0, 1, 0.8)]);
        d.push("n".into(), Label::Negative, UncertainGraph::from_triples(1, 3, [(1, 2, 0.3)]).unwrap()).unwrap();
        let g = Subgraph::from_pairs(&[(0, 2)]).unwrap();
        let conf = ScoreFunctionSpec::uncapped(crate::score::ScoreKind::Confidence);
        // never contained: constant score 0
        assert_eq!(
            oracle_measure(&g, &d, &MeasureSpec::exp(), &conf, DEFAULT_MAX_WORLDS).unwrap(),
            ExtendedScore::ZERO
        );
        let phi = MeasureSpec::phi_pr(ExtendedScore::NEG_INFINITY);
        assert!((oracle_measure(&g, &d, &phi, &conf, DEFAULT_MAX_WORLDS).unwrap().value() - 1.0).abs() < 1e-12);
    }
}
