//! The dynamic program against brute-force world enumeration.

use proptest::prelude::*;
use ugmine_core::distribution::{dataset_joint, evaluate_measure, score_distribution};
use ugmine_core::graph::union_graph;
use ugmine_core::oracle::{oracle_joint, oracle_measures, DEFAULT_MAX_WORLDS};
use ugmine_core::search::{walk, Universe};
use ugmine_core::synth::random_small;
use ugmine_core::{
    Dataset, ExtendedScore, MeasureKind, MeasureSpec, ScoreFunctionSpec, ScoreKind, ScoreTable, Subgraph,
};

fn all_subgraphs(d: &Dataset) -> Vec<Subgraph> {
    let mut out = Vec::new();
    walk(&Universe::new(&union_graph(d)), |s| {
        out.push(s.clone());
        true
    });
    out
}

fn specs(d: &Dataset) -> Vec<(MeasureSpec, ScoreFunctionSpec)> {
    let mut v = Vec::new();
    for kind in ScoreKind::ALL {
        for cap in [0.0, 0.01] {
            let score = ScoreFunctionSpec::new(kind, cap).unwrap();
            let table = ScoreTable::scores(&score, d.n_pos(), d.n_neg()).unwrap();
            v.push((MeasureSpec::exp(), score));
            v.push((MeasureSpec::median(), score));
            v.push((MeasureSpec::mode(), score));
            // a threshold that is attained exactly, and one in between
            let mid = table.get(d.n_pos() / 2, d.n_neg() / 2);
            v.push((MeasureSpec::phi_pr(mid), score));
            v.push((MeasureSpec::phi_pr(ExtendedScore::new(kind.default_phi())), score));
        }
    }
    v
}

fn check_dataset(d: &Dataset) -> Result<(), TestCaseError> {
    for g in all_subgraphs(d).into_iter().take(12) {
        let dp = dataset_joint(&g, d);
        let oracle = oracle_joint(&g, d, DEFAULT_MAX_WORLDS).unwrap();
        prop_assert!((oracle.total() - 1.0).abs() < 1e-9);
        for a in 0..=d.n_pos() {
            for b in 0..=d.n_neg() {
                prop_assert!((dp.get(a, b) - oracle.get(a, b)).abs() <= 1e-9, "{g} cell ({a},{b})");
            }
        }
        let specs = specs(d);
        let want = oracle_measures(&g, d, &specs, DEFAULT_MAX_WORLDS).unwrap();
        for ((m, s), w) in specs.iter().zip(want) {
            let table = ScoreTable::scores(s, d.n_pos(), d.n_neg()).unwrap();
            let got = evaluate_measure(m, &dp, &table);
            prop_assert!(got.approx_eq(w, 1e-9), "{g} {m} {}: dp {got} oracle {w}", s.kind.name());
            prop_assert!((score_distribution(&dp, &table).total() - 1.0).abs() < 1e-9);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dp_matches_world_enumeration(seed in any::<u64>()) {
        let d = random_small(seed, 6, 3, 4).unwrap();
        check_dataset(&d)?;
    }

    #[test]
    fn wider_node_set(seed in any::<u64>()) {
        let d = random_small(seed, 5, 3, 6).unwrap();
        check_dataset(&d)?;
    }
}

#[test]
fn measure_kinds_all_exercised() {
    let d = random_small(1, 6, 3, 4).unwrap();
    let kinds: std::collections::BTreeSet<_> = specs(&d).iter().map(|(m, _)| m.kind().name()).collect();
    assert_eq!(kinds.len(), MeasureKind::ALL.len());
}
