use ugmine::io::{dataset_to_json, features_to_json, parse_dataset, parse_features};
use ugmine::parallel;
use ugmine_core::miner::mine;
use ugmine_core::synth::{generate, preset, random_small, toy, SynthConfig};
use ugmine_core::{MeasureSpec, MiningConfig, ScoreFunctionSpec, ScoreKind, Subgraph};

#[test]
fn datasets_round_trip() {
    for d in [toy(), random_small(7, 6, 3, 5).unwrap(), preset("hiv-like", 3).unwrap()] {
        let text = dataset_to_json(&d);
        let back = parse_dataset(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(dataset_to_json(&back), text);
    }
}

#[test]
fn features_round_trip() {
    let cfg =
        MiningConfig::new(7, 0.0, MeasureSpec::exp(), ScoreFunctionSpec::uncapped(ScoreKind::FrequencyRatio)).unwrap();
    let found = mine(&toy(), &cfg).unwrap().features;
    let text = features_to_json(&found);
    assert!(text.contains("\"inf\""), "{text}");
    let subs = parse_features(&text).unwrap();
    assert_eq!(subs, found.iter().map(|f| f.subgraph.clone()).collect::<Vec<_>>());
}

#[test]
fn parallel_matches_serial() {
    let d = generate(&SynthConfig {
        seed: 1,
        n_pos: 12,
        n_neg: 12,
        num_nodes: 9,
        background_edges_per_graph: 14,
        background_prob_range: (0.3, 0.9),
        planted: Subgraph::from_pairs(&[(0, 1), (1, 2), (2, 3)]).unwrap(),
        planted_prob_pos: 0.8,
        planted_prob_neg: 0.3,
    })
    .unwrap();
    for (m, s) in [
        (MeasureSpec::phi_pr(1.0), ScoreKind::FrequencyRatio),
        (MeasureSpec::exp(), ScoreKind::GTest),
        (MeasureSpec::median(), ScoreKind::Confidence),
    ] {
        let cfg = MiningConfig::new(5, 0.1, m, ScoreFunctionSpec::new(s, 0.01).unwrap()).unwrap();
        let a = parallel::mine(&d, &cfg, 1).unwrap();
        for t in [2, 4, 8] {
            let b = parallel::mine(&d, &cfg, t).unwrap();
            assert_eq!(features_to_json(&a.features), features_to_json(&b.features), "{m} threads {t}");
        }
    }
}
