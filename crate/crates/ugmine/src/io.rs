//! JSON dataset and feature files, CSV feature matrices.
//!
//! Dataset file:
//!
//! ```json
//! {"num_nodes": 3, "graphs": [{"id": "G1", "label": 1, "edges": [[0, 1, 0.8]]}]}
//! ```
//!
//! Edge pairs may come in either order; they are stored as `u < v`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use ugmine_core::eval::{EvalReport, FeatureMatrix};
use ugmine_core::{Dataset, ExtendedScore, Label, MinedFeature, Subgraph, UncertainGraph};

use crate::Error;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    num_nodes: usize,
    graphs: Vec<RawGraph>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    id: String,
    label: i64,
    edges: Vec<(i64, i64, f64)>,
}

fn bad(graph: usize, field: &'static str, reason: impl Into<String>) -> Error {
    ugmine_core::Error::InvalidGraph { graph, field, reason: reason.into() }.into()
}

pub fn parse_dataset(text: &str) -> Result<Dataset, Error> {
    let raw: RawDataset = serde_json::from_str(text)?;
    let mut d = Dataset::new(raw.num_nodes);
    for (i, g) in raw.graphs.into_iter().enumerate() {
        let label = Label::from_sign(g.label).ok_or_else(|| bad(i, "label", format!("{} is not 1 or -1", g.label)))?;
        let mut triples = Vec::with_capacity(g.edges.len());
        for (u, v, p) in g.edges {
            let node = |x: i64| u32::try_from(x).map_err(|_| bad(i, "edges", format!("node {x} out of range")));
            triples.push((node(u)?, node(v)?, p));
        }
        let ug = UncertainGraph::from_triples(i, raw.num_nodes, triples)?;
        d.push(g.id, label, ug)?;
    }
    Ok(d)
}

/// One graph per line, edges ascending.
pub fn dataset_to_json(d: &Dataset) -> String {
    let mut out = format!("{{\"num_nodes\":{},\"graphs\":[\n", d.num_nodes());
    for i in 0..d.len() {
        let (id, label, g) = d.graph(i);
        let raw = RawGraph {
            id: id.to_string(),
            label: label.sign().into(),
            edges: g.edges().map(|(e, p)| (e.u().0.into(), e.v().0.into(), p)).collect(),
        };
        out.push_str(&serde_json::to_string(&raw).expect("serializable"));
        out.push_str(if i + 1 < d.len() { ",\n" } else { "\n" });
    }
    out.push_str("]}\n");
    out
}

fn score_json(s: ExtendedScore) -> Value {
    if s.is_finite() {
        json!(s.value())
    } else {
        json!(s.to_string())
    }
}

fn edges_json(g: &Subgraph) -> Value {
    Value::Array(g.edges().iter().map(|e| json!([e.u().0, e.v().0])).collect())
}

#[derive(Serialize)]
struct FeatureOut {
    edges: Value,
    measure_value: Value,
    exp_freq: f64,
}

/// JSON array of `{edges, measure_value, exp_freq}`, one feature per line.
/// Infinite measure values are written as the strings `"inf"`/`"-inf"`.
pub fn features_to_json(features: &[MinedFeature]) -> String {
    let mut out = String::from("[\n");
    for (i, f) in features.iter().enumerate() {
        let v = FeatureOut {
            edges: edges_json(&f.subgraph),
            measure_value: score_json(f.measure_value),
            exp_freq: f.exp_freq,
        };
        out.push_str(&serde_json::to_string(&v).expect("serializable"));
        out.push_str(if i + 1 < features.len() { ",\n" } else { "\n" });
    }
    out.push_str("]\n");
    out
}

#[derive(Debug, Deserialize)]
struct RawFeature {
    edges: Vec<(u32, u32)>,
}

/// Reads the subgraphs back from a feature file; other fields are ignored.
pub fn parse_features(text: &str) -> Result<Vec<Subgraph>, Error> {
    let raw: Vec<RawFeature> = serde_json::from_str(text)?;
    raw.into_iter().map(|f| Ok(Subgraph::from_pairs(&f.edges)?)).collect()
}

/// Header `g_0,...,g_{m-1},label`, one row per graph, labels `1`/`-1`.
pub fn export_csv(m: &FeatureMatrix) -> String {
    let mut out = String::new();
    for k in 0..m.num_features() {
        write!(out, "g_{k},").unwrap();
    }
    out.push_str("label\n");
    for (row, label) in m.rows().iter().zip(m.labels()) {
        for x in row {
            write!(out, "{x},").unwrap();
        }
        writeln!(out, "{}", label.sign()).unwrap();
    }
    out
}

#[derive(Serialize)]
struct RepeatOut<'a> {
    error_rate: f64,
    f1: f64,
    train: &'a [usize],
    test: &'a [usize],
    features: Vec<Value>,
}

#[derive(Serialize)]
struct ReportOut<'a> {
    mean_error: f64,
    std_error: f64,
    mean_f1: f64,
    std_f1: f64,
    repeats: Vec<RepeatOut<'a>>,
}

pub fn eval_report_to_json(r: &EvalReport) -> String {
    let v = ReportOut {
        mean_error: r.mean_error,
        std_error: r.std_error,
        mean_f1: r.mean_f1,
        std_f1: r.std_f1,
        repeats: r
            .repeats
            .iter()
            .map(|x| RepeatOut {
                error_rate: x.error_rate,
                f1: x.f1,
                train: &x.split.train,
                test: &x.split.test,
                features: x.features.iter().map(edges_json).collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// Human-readable ranking table.
pub fn features_table(features: &[MinedFeature]) -> String {
    let mut out = format!("{:>4}  {:>14}  {:>10}  edges\n", "rank", "measure", "exp_freq");
    for (i, f) in features.iter().enumerate() {
        let m = if f.measure_value.is_finite() {
            format!("{:.6}", f.measure_value.value())
        } else {
            f.measure_value.to_string()
        };
        writeln!(out, "{:>4}  {:>14}  {:>10.6}  {}", i + 1, m, f.exp_freq, f.subgraph).unwrap();
    }
    out
}
