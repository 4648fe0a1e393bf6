use std::collections::BTreeMap;

use lotforge::catalog::{builtin_catalog, Lexicon, ScenarioId};
use lotforge::metric::Metric;
use lotforge::survey::{
    agreement_report, code_responses, design_means, filter_raters, prefilter_responses,
    scenario_means, top_metrics, CaptureCounts, RatingDataset, RatingRecord, ResponseRecord,
    DEFAULT_EPS,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;

const SCENARIOS: [&str; 3] = ["A1", "B2", "C3"];

/// Every design gets `raters` ratings on every metric.
fn dataset_strategy(max_value: u8) -> impl Strategy<Value = Vec<RatingRecord>> {
    (1usize..=4, 1usize..=5).prop_flat_map(move |(designs_per, raters)| {
        let n = SCENARIOS.len() * designs_per * raters * 8;
        proptest::collection::vec(1..=max_value, n).prop_map(move |values| {
            let mut out = Vec::with_capacity(values.len());
            let mut it = values.into_iter();
            for s in SCENARIOS {
                for d in 0..designs_per {
                    for r in 0..raters {
                        for m in Metric::ALL {
                            out.push(RatingRecord {
                                rater_id: format!("r{r}"),
                                design_id: format!("{s}-{d}"),
                                scenario_id: s.into(),
                                metric: m,
                                value: it.next().unwrap(),
                                is_attention_check: false,
                                expected_value: None,
                                row: 0,
                            });
                        }
                    }
                }
            }
            out
        })
    })
}

fn designated() -> BTreeMap<ScenarioId, std::collections::BTreeSet<Metric>> {
    builtin_catalog().designated_metrics()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn means_match_brute_force(records in dataset_strategy(7)) {
        let ds = RatingDataset::new(records.clone());
        let dm = design_means(&ds).unwrap();
        for (design, mean) in &dm {
            for m in Metric::ALL {
                let vals: Vec<u32> = records
                    .iter()
                    .filter(|r| &r.design_id == design && r.metric == m)
                    .map(|r| u32::from(r.value))
                    .collect();
                let expected = f64::from(vals.iter().sum::<u32>()) / vals.len() as f64;
                prop_assert_eq!(mean.means.get(m), expected);
            }
        }
        let sm = scenario_means(&dm);
        for (id, s) in &sm.scenarios {
            let designs: Vec<_> = dm.values().filter(|d| &d.scenario_id == id).collect();
            prop_assert_eq!(s.n_designs, designs.len());
            for m in Metric::ALL {
                let expected = designs.iter().map(|d| d.means.get(m)).sum::<f64>() / designs.len() as f64;
                prop_assert!((s.means.get(m) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_shift_keeps_rankings(records in dataset_strategy(4), c in 1u8..=3) {
        let base = scenario_means(&design_means(&RatingDataset::new(records.clone())).unwrap());
        let shifted_records: Vec<RatingRecord> = records
            .into_iter()
            .map(|mut r| { r.value += c; r })
            .collect();
        let shifted = scenario_means(&design_means(&RatingDataset::new(shifted_records)).unwrap());
        for (id, s) in &shifted.scenarios {
            for m in Metric::ALL {
                let d = s.means.get(m) - base.scenarios[id].means.get(m) - f64::from(c);
                prop_assert!(d.abs() < 1e-9);
            }
        }
        let (tb, ts) = (top_metrics(&base, DEFAULT_EPS), top_metrics(&shifted, DEFAULT_EPS));
        for (id, t) in &tb {
            prop_assert_eq!(&t.argmax, &ts[id].argmax);
            prop_assert_eq!(&t.top3, &ts[id].top3);
        }
        let a = agreement_report(&base, &designated(), DEFAULT_EPS).unwrap();
        let b = agreement_report(&shifted, &designated(), DEFAULT_EPS).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn row_order_does_not_matter(records in dataset_strategy(7), seed in any::<u64>()) {
        let mut shuffled = records.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let a = scenario_means(&design_means(&RatingDataset::new(records)).unwrap());
        let b = scenario_means(&design_means(&RatingDataset::new(shuffled)).unwrap());
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(
            agreement_report(&a, &designated(), DEFAULT_EPS).unwrap(),
            agreement_report(&b, &designated(), DEFAULT_EPS).unwrap()
        );
    }

    #[test]
    fn filtering_is_idempotent(
        checks in proptest::collection::vec((0usize..6, 1u8..=7, 1u8..=7), 1..20)
    ) {
        let mut records = Vec::new();
        for (k, (n, value, expected)) in checks.iter().enumerate() {
            for _ in 0..*n {
                records.push(RatingRecord {
                    rater_id: format!("r{k}"),
                    design_id: "A1-0".into(),
                    scenario_id: "A1".into(),
                    metric: Metric::Play,
                    value: *value,
                    is_attention_check: true,
                    expected_value: Some(*expected),
                    row: 0,
                });
            }
            records.push(RatingRecord {
                rater_id: format!("r{k}"),
                design_id: "A1-0".into(),
                scenario_id: "A1".into(),
                metric: Metric::Play,
                value: *value,
                is_attention_check: false,
                expected_value: None,
                row: 0,
            });
        }
        let once = filter_raters(&RatingDataset::new(records));
        let twice = filter_raters(&once.dataset);
        prop_assert_eq!(&twice.dataset, &once.dataset);
        prop_assert!(twice.excluded.is_empty());
    }

    #[test]
    fn capture_counts_partition_retained(texts in proptest::collection::vec("[a-z ]{0,60}", 0..40)) {
        let responses: Vec<ResponseRecord> = texts
            .iter()
            .map(|t| ResponseRecord {
                rater_id: "r".into(),
                design_id: "d".into(),
                scenario_id: "A4".into(),
                text: t.clone(),
                row: 0,
            })
            .collect();
        let pre = prefilter_responses(&responses);
        let lexicons: BTreeMap<ScenarioId, Lexicon> = builtin_catalog()
            .scenarios()
            .iter()
            .map(|s| (s.scenario_id.clone(), s.lexicon.clone()))
            .collect();
        let report = code_responses(&pre, &lexicons).unwrap();
        let c = report.get(&ScenarioId::from("A4")).copied().unwrap_or_default();
        prop_assert_eq!(c.retained(), pre.retained.len());
        prop_assert_eq!(c.discarded, pre.discarded.len());
        prop_assert_eq!(c.retained() + c.discarded, responses.len());
    }
}

#[test]
fn synthetic_corpus_counts() {
    // 20 direct, 8 indirect, 19 uncaptured, plus 5 discarded
    let mut texts = Vec::new();
    for k in 0..20 {
        texts.push(format!("we could start a community garden here number {k}"));
    }
    for k in 0..8 {
        texts.push(format!("neighbors growing their own food together {k}"));
    }
    for k in 0..19 {
        texts.push(format!("a calm place to sit and read {k}"));
    }
    for t in [
        "park",
        "nice",
        "garden",
        "shade and nature",
        "comfort, safety",
    ] {
        texts.push(t.to_string());
    }
    let responses: Vec<ResponseRecord> = texts
        .into_iter()
        .map(|text| ResponseRecord {
            rater_id: "r".into(),
            design_id: "d".into(),
            scenario_id: "A4".into(),
            text,
            row: 0,
        })
        .collect();
    let pre = prefilter_responses(&responses);
    let lexicons = builtin_catalog()
        .scenarios()
        .iter()
        .map(|s| (s.scenario_id.clone(), s.lexicon.clone()))
        .collect();
    let report = code_responses(&pre, &lexicons).unwrap();
    assert_eq!(
        report[&ScenarioId::from("A4")],
        CaptureCounts {
            direct: 20,
            indirect: 8,
            uncaptured: 19,
            discarded: 5
        }
    );
}

#[test]
fn a3_and_a4_argmax_sets() {
    let t = top_metrics(&lotforge::survey::reference_means::fixture(), DEFAULT_EPS);
    let a3: Vec<Metric> = t[&ScenarioId::from("A3")].argmax.iter().copied().collect();
    let a4: Vec<Metric> = t[&ScenarioId::from("A4")].argmax.iter().copied().collect();
    assert_eq!(a3, vec![Metric::Sociability]);
    assert_eq!(a4, vec![Metric::Nature, Metric::Sociability]);
}

#[test]
fn single_design_scenarios_equal_their_design() {
    let records: Vec<RatingRecord> = Metric::ALL
        .iter()
        .enumerate()
        .map(|(k, m)| RatingRecord {
            rater_id: "r".into(),
            design_id: "A1-0".into(),
            scenario_id: "A1".into(),
            metric: *m,
            value: (k % 7 + 1) as u8,
            is_attention_check: false,
            expected_value: None,
            row: 0,
        })
        .collect();
    let dm = design_means(&RatingDataset::new(records)).unwrap();
    let sm = scenario_means(&dm);
    assert_eq!(
        sm.scenarios[&ScenarioId::from("A1")].means,
        dm["A1-0"].means
    );
}
