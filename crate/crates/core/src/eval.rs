//! Containment-probability features and a train/test classification harness.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{containment_probability, Dataset, Label, Subgraph};
use crate::miner::{mine, MiningConfig};

/// Entry `(i, k)` is the probability that graph `i` contains feature `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: Vec<Vec<f64>>,
    labels: Vec<Label>,
}

impl FeatureMatrix {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::Contract(format!("{} rows but {} labels", rows.len(), labels.len())));
        }
        let width = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            if r.len() != width {
                return Err(Error::Contract("ragged feature matrix".into()));
            }
            if r.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(Error::Contract("feature value outside [0,1]".into()));
            }
        }
        Ok(FeatureMatrix { rows, labels })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_features(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }
}

pub fn featurize(d: &Dataset, features: &[Subgraph]) -> Result<FeatureMatrix> {
    if features.is_empty() {
        return Err(Error::Contract("feature list is empty".into()));
    }
    featurize_any(d, features)
}

/// Like [`featurize`] but allows zero columns.
fn featurize_any(d: &Dataset, features: &[Subgraph]) -> Result<FeatureMatrix> {
    for f in features {
        if f.max_node().index() >= d.num_nodes() {
            return Err(Error::InvalidSubgraph(format!(
                "feature {f} uses a node outside the dataset's {} nodes",
                d.num_nodes()
            )));
        }
    }
    let rows = d.graphs().iter().map(|g| features.iter().map(|f| containment_probability(f, g)).collect()).collect();
    Ok(FeatureMatrix { rows, labels: d.labels().to_vec() })
}

/// Full-batch gradient descent on the L2-regularized logistic loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConfig {
    pub lambda: f64,
    pub learning_rate: f64,
    pub max_iterations: usize,
    /// Stop once the gradient's max-norm drops below this.
    pub tolerance: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig { lambda: 0.01, learning_rate: 1.0, max_iterations: 5000, tolerance: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

impl LogisticModel {
    /// The bias is not regularized.
    pub fn train(m: &FeatureMatrix, cfg: &LogisticConfig) -> Self {
        let k = m.num_features();
        let n = m.num_rows().max(1) as f64;
        let mut model = LogisticModel { weights: alloc::vec![0.0; k], bias: 0.0 };
        let mut grad = alloc::vec![0.0; k];
        for _ in 0..cfg.max_iterations {
            grad.iter_mut().for_each(|g| *g = 0.0);
            let mut grad_b = 0.0;
            for (x, &l) in m.rows.iter().zip(&m.labels) {
                let y = if l == Label::Positive { 1.0 } else { 0.0 };
                let r = sigmoid(model.margin(x)) - y;
                grad_b += r;
                for (g, xi) in grad.iter_mut().zip(x) {
                    *g += r * xi;
                }
            }
            let mut norm = libm::fabs(grad_b / n);
            for (g, w) in grad.iter_mut().zip(&model.weights) {
                *g = *g / n + cfg.lambda * w;
                norm = norm.max(libm::fabs(*g));
            }
            if norm < cfg.tolerance {
                break;
            }
            model.bias -= cfg.learning_rate * grad_b / n;
            for (w, g) in model.weights.iter_mut().zip(&grad) {
                *w -= cfg.learning_rate * g;
            }
        }
        model
    }

    pub fn margin(&self, x: &[f64]) -> f64 {
        self.bias + self.weights.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>()
    }

    /// Positive iff the margin is strictly positive.
    pub fn predict(&self, x: &[f64]) -> Label {
        if self.margin(x) > 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

/// Error rate and positive-class F1 of `predicted` against `actual`. F1 is
/// 1 when there are no positives on either side.
pub fn error_and_f1(predicted: &[Label], actual: &[Label]) -> (f64, f64) {
    let (mut tp, mut fp, mut fneg, mut wrong) = (0usize, 0usize, 0usize, 0usize);
    for (p, a) in predicted.iter().zip(actual) {
        match (p, a) {
            (Label::Positive, Label::Positive) => tp += 1,
            (Label::Positive, Label::Negative) => fp += 1,
            (Label::Negative, Label::Positive) => fneg += 1,
            _ => {}
        }
        wrong += usize::from(p != a);
    }
    let err = if actual.is_empty() { 0.0 } else { wrong as f64 / actual.len() as f64 };
    let f1 = if tp + fp + fneg == 0 { 1.0 } else { 2.0 * tp as f64 / (2 * tp + fp + fneg) as f64 };
    (err, f1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Per class, shuffles the graph indices and keeps `round(fraction · n_c)`
/// of them for training, clamped so that each class has at least one
/// training graph and, when it has two or more, at least one test graph.
pub fn stratified_split(d: &Dataset, train_fraction: f64, seed: u64, repeat: u64) -> Split {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(repeat);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for class in [Label::Positive, Label::Negative] {
        let mut idx: Vec<usize> = (0..d.len()).filter(|&i| d.labels()[i] == class).collect();
        if idx.is_empty() {
            continue;
        }
        idx.shuffle(&mut rng);
        let n = idx.len();
        let k = libm::round(train_fraction * n as f64) as usize;
        let k = k.clamp(1, if n >= 2 { n - 1 } else { 1 });
        train.extend_from_slice(&idx[..k]);
        test.extend_from_slice(&idx[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Split { train, test }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepeatResult {
    pub split: Split,
    pub features: Vec<Subgraph>,
    pub error_rate: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub repeats: Vec<RepeatResult>,
    pub mean_error: f64,
    pub std_error: f64,
    pub mean_f1: f64,
    pub std_f1: f64,
}

/// Mean and sample standard deviation (0 for a single value).
fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, libm::sqrt(var))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub repeats: usize,
    pub train_fraction: f64,
    pub seed: u64,
    pub classifier: LogisticConfig,
}

impl EvalConfig {
    pub fn new(repeats: usize, train_fraction: f64, seed: u64) -> Self {
        EvalConfig { repeats, train_fraction, seed, classifier: LogisticConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Config("train fraction must lie in (0,1)".into()));
        }
        Ok(())
    }
}

/// Runs the protocol with the built-in miner.
pub fn evaluate(d: &Dataset, mining: &MiningConfig, cfg: &EvalConfig) -> Result<EvalReport> {
    evaluate_with(d, cfg, |train| Ok(mine(train, mining)?.features.into_iter().map(|f| f.subgraph).collect()))
}

/// Runs `cfg.repeats` rounds of: stratified split, feature selection by
/// `select` on the training graphs only, featurization of both portions,
/// logistic regression, and test-set scoring.
pub fn evaluate_with<F>(d: &Dataset, cfg: &EvalConfig, mut select: F) -> Result<EvalReport>
where
    F: FnMut(&Dataset) -> Result<Vec<Subgraph>>,
{
    d.require_both_classes()?;
    cfg.validate()?;
    let mut repeats = Vec::with_capacity(cfg.repeats);
    for r in 0..cfg.repeats {
        let split = stratified_split(d, cfg.train_fraction, cfg.seed, r as u64);
        let train = d.subset(&split.train);
        let test = d.subset(&split.test);
        let features = select(&train)?;
        let model = LogisticModel::train(&featurize_any(&train, &features)?, &cfg.classifier);
        let xt = featurize_any(&test, &features)?;
        let predicted: Vec<Label> = xt.rows.iter().map(|x| model.predict(x)).collect();
        let (error_rate, f1) = error_and_f1(&predicted, &xt.labels);
        repeats.push(RepeatResult { split, features, error_rate, f1 });
    }
    let errs: Vec<f64> = repeats.iter().map(|r| r.error_rate).collect();
    let f1s: Vec<f64> = repeats.iter().map(|r| r.f1).collect();
    let (mean_error, std_error) = mean_std(&errs);
    let (mean_f1, std_f1) = mean_std(&f1s);
    Ok(EvalReport { repeats, mean_error, std_error, mean_f1, std_f1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::UncertainGraph;
    use crate::synth::toy;
    use alloc::string::ToString;

    #[test]
    fn toy_column() {
        let m = featurize(&toy(), &[Subgraph::from_pairs(&[(0, 1), (1, 2)]).unwrap()]).unwrap();
        let col: Vec<f64> = m.rows().iter().map(|r| r[0]).collect();
        let want = [0.8 * 0.9, 0.9 * 0.8, 0.1 * 0.9, 0.8 * 0.1];
        assert_eq!(col, want);
        assert_eq!(m.num_features(), 1);
    }

    #[test]
    fn absent_and_certain_columns() {
        let mut d = Dataset::new(4);
        for (i, l) in [Label::Positive, Label::Negative].into_iter().enumerate() {
            d.push(i.to_string(), l, UncertainGraph::from_triples(i, 4, [(0, 1, 1.0), (1, 2, 0.4)]).unwrap()).unwrap();
        }
        let m = featurize(&d, &[Subgraph::from_pairs(&[(2, 3)]).unwrap(), Subgraph::from_pairs(&[(0, 1)]).unwrap()])
            .unwrap();
        assert_eq!(m.rows(), &[alloc::vec![0.0, 1.0], alloc::vec![0.0, 1.0]]);
    }

    #[test]
    fn featurize_rejects_bad_input() {
        assert!(featurize(&toy(), &[]).is_err());
        assert!(featurize(&toy(), &[Subgraph::from_pairs(&[(1, 3)]).unwrap()]).is_err());
    }

    #[test]
    fn metrics() {
        use Label::*;
        let (e, f) = error_and_f1(&[Positive, Positive, Negative, Negative], &[Positive, Negative, Positive, Negative]);
        assert_eq!((e, f), (0.5, 0.5));
        assert_eq!(error_and_f1(&[Negative], &[Negative]), (0.0, 1.0));
        assert_eq!(error_and_f1(&[Negative, Negative], &[Positive, Negative]), (0.5, 0.0));
    }

    #[test]
    fn stats() {
        assert_eq!(mean_std(&[0.25]), (0.25, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn logistic_separates_a_clean_feature() {
        let rows = alloc::vec![alloc::vec![0.9], alloc::vec![0.8], alloc::vec![0.1], alloc::vec![0.0]];
        let labels = alloc::vec![Label::Positive, Label::Positive, Label::Negative, Label::Negative];
        let m = FeatureMatrix::new(rows.clone(), labels.clone()).unwrap();
        let model = LogisticModel::train(&m, &LogisticConfig::default());
        let pred: Vec<Label> = rows.iter().map(|x| model.predict(x)).collect();
        assert_eq!(pred, labels);
        assert!(model.weights[0] > 0.0);
    }

    #[test]
    fn split_is_stratified_and_disjoint() {
        let d = crate::synth::generate(&crate::synth::SynthConfig {
            seed: 2,
            n_pos: 10,
            n_neg: 5,
            num_nodes: 6,
            background_edges_per_graph: 4,
            background_prob_range: (0.2, 0.8),
            planted: Subgraph::from_pairs(&[(0, 1)]).unwrap(),
            planted_prob_pos: 0.9,
            planted_prob_neg: 0.1,
        })
        .unwrap();
        let s = stratified_split(&d, 0.8, 7, 0);
        assert_eq!(s.train.len(), 12);
        assert_eq!(s.test.len(), 3);
        assert!(s.train.iter().all(|i| !s.test.contains(i)));
        let pos_train = s.train.iter().filter(|&&i| d.labels()[i] == Label::Positive).count();
        assert_eq!(pos_train, 8);
        assert_eq!(s, stratified_split(&d, 0.8, 7, 0));
        assert_ne!(s, stratified_split(&d, 0.8, 7, 1));
    }

    #[test]
    fn tiny_classes_keep_a_training_graph() {
        let s = stratified_split(&toy(), 0.1, 0, 0);
        assert_eq!((s.train.len(), s.test.len()), (2, 2));
        let s = stratified_split(&toy(), 0.99, 0, 0);
        assert_eq!((s.train.len(), s.test.len()), (2, 2));
    }

    #[test]
    fn evaluate_requires_both_classes() {
        let d = toy().subset(&[0, 1]);
        let cfg = EvalConfig::new(1, 0.5, 0);
        assert!(matches!(evaluate_with(&d, &cfg, |_| Ok(Vec::new())), Err(Error::Contract(_))));
        assert!(evaluate_with(&toy(), &EvalConfig::new(0, 0.5, 0), |_| Ok(Vec::new())).is_err());
        assert!(evaluate_with(&toy(), &EvalConfig::new(1, 1.0, 0), |_| Ok(Vec::new())).is_err());
    }

    #[test]
    fn no_features_gives_bias_only_model() {
        let r = evaluate_with(&toy(), &EvalConfig::new(2, 0.5, 3), |_| Ok(Vec::new())).unwrap();
        assert_eq!(r.repeats.len(), 2);
        // balanced training set: the bias stays at 0 and everything is negative
        for rep in &r.repeats {
            assert_eq!((rep.error_rate, rep.f1), (0.5, 0.0));
        }
    }
}
