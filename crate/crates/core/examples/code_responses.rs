//! Code free-text answers against the scenario lexicons.
//!
//! ```bash
//! cargo run --example code_responses
//! ```

use std::collections::BTreeMap;

use lotforge::builtin_catalog;
use lotforge::survey::{classify_response, code_responses, prefilter_responses, ResponseRecord};

const ANSWERS: &[(&str, &str)] = &[
    ("A4", "Looks like a community garden where neighbours meet"),
    ("A4", "People planting vegetables and sharing the harvest"),
    ("A4", "a quiet spot to read a book after work"),
    ("A4", "nature, sociability"),
    ("A4", "nice"),
    ("B1", "an open air farmer's market on weekends"),
    ("B1", "stalls selling bread and honey"),
    (
        "C2",
        "kids running around the playground while parents watch",
    ),
];

fn main() -> anyhow::Result<()> {
    let catalog = builtin_catalog();
    let responses: Vec<ResponseRecord> = ANSWERS
        .iter()
        .enumerate()
        .map(|(k, (scenario, text))| ResponseRecord {
            rater_id: format!("r{k}"),
            design_id: format!("{scenario}-01"),
            scenario_id: (*scenario).into(),
            text: (*text).into(),
            row: k as u64 + 2,
        })
        .collect();

    let pre = prefilter_responses(&responses);
    for (r, why) in &pre.discarded {
        println!("discarded ({why:?}): {}", r.text);
    }
    let lexicons: BTreeMap<_, _> = catalog
        .scenarios()
        .iter()
        .map(|s| (s.scenario_id.clone(), s.lexicon.clone()))
        .collect();
    for kept in &pre.retained {
        let lex = &lexicons[&kept.record.scenario_id];
        println!(
            "{:?}: {}",
            classify_response(&kept.record.text, lex),
            kept.record.text
        );
    }
    for (scenario, counts) in code_responses(&pre, &lexicons)? {
        println!("{scenario}: {counts:?}");
    }
    Ok(())
}
