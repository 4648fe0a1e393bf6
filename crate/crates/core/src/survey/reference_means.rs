//! The published per-scenario mean ratings, and a generator for raw rating
//! rows that reproduce them through the full pipeline.
//!
//! The individual survey answers were never released, so the means are the
//! reference. [`synthesize_ratings`] builds integer ratings whose scenario
//! means land within `0.5 / (designs * raters)` of each published cell.

use std::collections::BTreeMap;
use std::io::Read;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    csv_error, header_indices, RatingDataset, RatingRecord, ScenarioMean, ScenarioMeans,
    SurveyError,
};
use crate::catalog::{ScenarioGroup, ScenarioId};
use crate::metric::{Metric, MetricMap};

/// Published means, one row per scenario, columns in metric order.
pub const FIXTURE_CSV: &str = include_str!("../../data/reference_means.csv");

/// Designs rated per scenario in the published study.
pub const DESIGNS_PER_SCENARIO: usize = 28;
/// Ratings collected per design.
pub const RATERS_PER_DESIGN: usize = 5;

/// Reads a `scenario_id,<metric>...` means table.
pub fn parse_means<R: Read>(input: R, n_designs: usize) -> Result<ScenarioMeans, SurveyError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers().map_err(csv_error)?.clone();
    let mut names = vec!["scenario_id"];
    names.extend(Metric::ALL.iter().map(|m| m.id()));
    let idx = header_indices(&headers, &names)?;
    let mut scenarios = BTreeMap::new();
    for result in reader.records() {
        let rec = result.map_err(csv_error)?;
        let row = rec.position().map(|p| p.line()).unwrap_or(0);
        let id = ScenarioId(rec.get(idx[0]).unwrap_or("").to_string());
        let mut means = MetricMap::splat(0.0);
        for (k, m) in Metric::ALL.iter().enumerate() {
            let raw = rec.get(idx[k + 1]).unwrap_or("");
            let v: f64 = raw.parse().map_err(|_| SurveyError::Row {
                row,
                message: format!("{m} `{raw}` is not a number"),
            })?;
            if !(1.0..=7.0).contains(&v) {
                return Err(SurveyError::Row {
                    row,
                    message: format!("{m} {v} outside 1..7"),
                });
            }
            means.set(*m, v);
        }
        scenarios.insert(id, ScenarioMean { means, n_designs });
    }
    if scenarios.is_empty() {
        return Err(SurveyError::Empty);
    }
    Ok(ScenarioMeans { scenarios })
}

/// The published table.
pub fn fixture() -> ScenarioMeans {
    parse_means(FIXTURE_CSV.as_bytes(), DESIGNS_PER_SCENARIO).expect("shipped table parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthOptions {
    pub designs_per_scenario: usize,
    pub raters_per_design: usize,
    /// Extra raters per group who fail two attention checks and give every
    /// metric a 7. Their rows must be filtered out for the means to match.
    pub careless_raters_per_group: usize,
    pub seed: u64,
}

impl Default for SynthOptions {
    fn default() -> Self {
        Self {
            designs_per_scenario: DESIGNS_PER_SCENARIO,
            raters_per_design: RATERS_PER_DESIGN,
            careless_raters_per_group: 3,
            seed: 0,
        }
    }
}

fn attention(
    rater: &str,
    design: &str,
    scenario: &ScenarioId,
    value: u8,
    expected: u8,
) -> RatingRecord {
    RatingRecord {
        rater_id: rater.to_string(),
        design_id: design.to_string(),
        scenario_id: scenario.clone(),
        metric: Metric::Shade,
        value,
        is_attention_check: true,
        expected_value: Some(expected),
        row: 0,
    }
}

/// Integer ratings whose per-scenario means round-trip to `target`.
///
/// Rater `{g}{n:03}` fills rating slot `n` of every scenario in group `g`
/// and answers one attention check per scenario. Rater `{g}000` misses one
/// check and stays in; the careless raters miss two and are excluded.
pub fn synthesize_ratings(
    target: &ScenarioMeans,
    options: &SynthOptions,
) -> Result<RatingDataset, SurveyError> {
    let designs = options.designs_per_scenario;
    let raters = options.raters_per_design;
    if designs == 0 || raters == 0 {
        return Err(SurveyError::Config(
            "designs and raters must be positive".into(),
        ));
    }
    let slots = designs * raters;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut records = Vec::new();
    let mut check_index: BTreeMap<String, usize> = BTreeMap::new();

    for (scenario, sm) in &target.scenarios {
        let group = scenario.group().map(ScenarioGroup::letter).unwrap_or('X');
        for m in Metric::ALL {
            let total = (sm.means.get(m) * slots as f64).round() as usize;
            let base = total / slots;
            let extra = total % slots;
            if !(1..=7).contains(&base) || (base == 7 && extra > 0) {
                return Err(SurveyError::Config(format!(
                    "{scenario} {m} mean outside 1..7"
                )));
            }
            let mut values: Vec<u8> = (0..slots)
                .map(|i| (base + usize::from(i < extra)) as u8)
                .collect();
            values.shuffle(&mut rng);
            for (i, v) in values.into_iter().enumerate() {
                records.push(RatingRecord {
                    rater_id: format!("{group}{i:03}"),
                    design_id: format!("{scenario}-d{:02}", i / raters + 1),
                    scenario_id: scenario.clone(),
                    metric: m,
                    value: v,
                    is_attention_check: false,
                    expected_value: None,
                    row: 0,
                });
            }
        }
        for n in 0..slots {
            let rater = format!("{group}{n:03}");
            let design = format!("{scenario}-d{:02}", n / raters + 1);
            let k = check_index.entry(rater.clone()).or_default();
            let miss = n == 0 && *k == 0;
            *k += 1;
            records.push(attention(
                &rater,
                &design,
                scenario,
                if miss { 3 } else { 6 },
                6,
            ));
        }
        for c in 0..options.careless_raters_per_group {
            let rater = format!("{group}x{c:02}");
            let design = format!("{scenario}-d{:02}", c % designs + 1);
            let k = check_index.entry(rater.clone()).or_default();
            let miss = *k < 2;
            *k += 1;
            records.push(attention(
                &rater,
                &design,
                scenario,
                if miss { 1 } else { 2 },
                2,
            ));
            for m in Metric::ALL {
                records.push(RatingRecord {
                    rater_id: rater.clone(),
                    design_id: design.clone(),
                    scenario_id: scenario.clone(),
                    metric: m,
                    value: 7,
                    is_attention_check: false,
                    expected_value: None,
                    row: 0,
                });
            }
        }
    }
    records.shuffle(&mut rng);
    Ok(RatingDataset { records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_has_twelve_rows() {
        let t = fixture();
        assert_eq!(t.scenarios.len(), 12);
        assert_eq!(t.get(&"C2".into()).unwrap().means.get(Metric::Play), 5.82);
        assert_eq!(t.get(&"A4".into()).unwrap().means.get(Metric::Nature), 5.02);
    }

    #[test]
    fn synthetic_counts() {
        let t = fixture();
        let opts = SynthOptions::default();
        let ds = synthesize_ratings(&t, &opts).unwrap();
        let ratings = 12 * 8 * 28 * 5;
        let checks = 12 * 28 * 5;
        let careless = 12 * 3 * 9;
        assert_eq!(ds.len(), ratings + checks + careless);
    }

    #[test]
    fn out_of_range_target_is_rejected() {
        let mut t = fixture();
        let first = t.scenarios.values_mut().next().unwrap();
        first.means.set(Metric::Shade, 7.5);
        assert!(synthesize_ratings(&t, &SynthOptions::default()).is_err());
    }
}
