use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::Serialize;

use super::{csv_error, header_indices, SurveyError};
use crate::catalog::ScenarioId;
use crate::metric::{Metric, MetricMap};

/// Tolerance used when deciding whether two means tie for the top spot.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Raters failing this many attention checks or more are dropped.
pub const EXCLUSION_THRESHOLD: usize = 2;

const COLUMNS: [&str; 7] = [
    "rater_id",
    "design_id",
    "scenario_id",
    "metric",
    "value",
    "is_attention_check",
    "expected_value",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatingRecord {
    pub rater_id: String,
    pub design_id: String,
    pub scenario_id: ScenarioId,
    pub metric: Metric,
    pub value: u8,
    pub is_attention_check: bool,
    pub expected_value: Option<u8>,
    /// Source line, kept for error messages. Zero for generated rows.
    #[serde(skip)]
    pub row: u64,
}

impl RatingRecord {
    pub fn failed_check(&self) -> bool {
        self.is_attention_check && self.expected_value != Some(self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RatingDataset {
    pub records: Vec<RatingRecord>,
}

impl RatingDataset {
    pub fn new(records: Vec<RatingRecord>) -> Self {
        Self { records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn raters(&self) -> BTreeSet<&str> {
        self.records.iter().map(|r| r.rater_id.as_str()).collect()
    }

    /// Writes the dataset in the same CSV shape [`ingest_ratings`] reads.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SurveyError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(COLUMNS).map_err(csv_error)?;
        for r in &self.records {
            let expected = r.expected_value.map(|v| v.to_string()).unwrap_or_default();
            w.write_record([
                r.rater_id.as_str(),
                r.design_id.as_str(),
                r.scenario_id.as_str(),
                r.metric.id(),
                &r.value.to_string(),
                if r.is_attention_check {
                    "true"
                } else {
                    "false"
                },
                &expected,
            ])
            .map_err(csv_error)?;
        }
        w.flush().map_err(|e| SurveyError::Read(e.to_string()))
    }
}

fn parse_rating(field: &str, what: &str, row: u64) -> Result<u8, SurveyError> {
    let v: i64 = field.trim().parse().map_err(|_| SurveyError::Row {
        row,
        message: format!("{what} `{field}` is not an integer"),
    })?;
    if !(1..=7).contains(&v) {
        return Err(SurveyError::Row {
            row,
            message: format!("{what} {v} outside 1..7"),
        });
    }
    Ok(v as u8)
}

fn parse_bool(field: &str, row: u64) -> Result<bool, SurveyError> {
    match field.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "y" => Ok(true),
        "false" | "0" | "no" | "n" | "" => Ok(false),
        other => Err(SurveyError::Row {
            row,
            message: format!("is_attention_check `{other}` is not a boolean"),
        }),
    }
}

/// Reads ratings CSV. Column order is free; names are case-insensitive.
pub fn ingest_ratings<R: Read>(input: R) -> Result<RatingDataset, SurveyError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers().map_err(csv_error)?.clone();
    let idx = header_indices(&headers, &COLUMNS)?;
    let mut records = Vec::new();
    for result in reader.records() {
        let rec = result.map_err(csv_error)?;
        let row = rec.position().map(|p| p.line()).unwrap_or(0);
        let field = |k: usize| rec.get(idx[k]).unwrap_or("");
        let required = |k: usize| -> Result<String, SurveyError> {
            let v = field(k);
            if v.is_empty() {
                Err(SurveyError::Row {
                    row,
                    message: format!("{} is empty", COLUMNS[k]),
                })
            } else {
                Ok(v.to_string())
            }
        };
        let rater_id = required(0)?;
        let design_id = required(1)?;
        let scenario_id = ScenarioId(required(2)?);
        let metric: Metric = field(3).parse().map_err(|e| SurveyError::Row {
            row,
            message: format!("{e}"),
        })?;
        let value = parse_rating(field(4), "value", row)?;
        let is_attention_check = parse_bool(field(5), row)?;
        let expected_value = match (is_attention_check, field(6)) {
            (true, "") => {
                return Err(SurveyError::Row {
                    row,
                    message: "attention check without expected_value".into(),
                })
            }
            (true, v) => Some(parse_rating(v, "expected_value", row)?),
            (false, "") => None,
            (false, _) => {
                return Err(SurveyError::Row {
                    row,
                    message: "expected_value given on a row that is not an attention check".into(),
                })
            }
        };
        records.push(RatingRecord {
            rater_id,
            design_id,
            scenario_id,
            metric,
            value,
            is_attention_check,
            expected_value,
            row,
        });
    }
    if records.is_empty() {
        return Err(SurveyError::Empty);
    }
    Ok(RatingDataset { records })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Filtered {
    /// Surviving rating rows, attention checks removed.
    pub dataset: RatingDataset,
    /// Sorted ids of excluded raters.
    pub excluded: Vec<String>,
}

/// Drops every row of a rater with at least [`EXCLUSION_THRESHOLD`] failed
/// attention checks, then drops all attention-check rows.
pub fn filter_raters(dataset: &RatingDataset) -> Filtered {
    let mut failures: BTreeMap<&str, usize> = BTreeMap::new();
    for r in dataset.records.iter().filter(|r| r.failed_check()) {
        *failures.entry(&r.rater_id).or_default() += 1;
    }
    let excluded: BTreeSet<&str> = failures
        .into_iter()
        .filter(|(_, n)| *n >= EXCLUSION_THRESHOLD)
        .map(|(id, _)| id)
        .collect();
    let records = dataset
        .records
        .iter()
        .filter(|r| !r.is_attention_check && !excluded.contains(r.rater_id.as_str()))
        .cloned()
        .collect();
    Filtered {
        dataset: RatingDataset { records },
        excluded: excluded.into_iter().map(str::to_string).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignMean {
    pub scenario_id: ScenarioId,
    pub means: MetricMap<f64>,
    pub counts: MetricMap<u32>,
}

pub type DesignMeans = BTreeMap<String, DesignMean>;

/// Mean rating per design and metric. Attention-check rows are ignored.
pub fn design_means(dataset: &RatingDataset) -> Result<DesignMeans, SurveyError> {
    let mut acc: BTreeMap<&str, (&ScenarioId, MetricMap<u64>, MetricMap<u32>)> = BTreeMap::new();
    for r in dataset.records.iter().filter(|r| !r.is_attention_check) {
        let slot = acc
            .entry(&r.design_id)
            .or_insert_with(|| (&r.scenario_id, MetricMap::default(), MetricMap::default()));
        if slot.0 != &r.scenario_id {
            return Err(SurveyError::InconsistentDesign {
                design: r.design_id.clone(),
                first: slot.0.clone(),
                second: r.scenario_id.clone(),
            });
        }
        slot.1
            .set(r.metric, slot.1.get(r.metric) + u64::from(r.value));
        slot.2.set(r.metric, slot.2.get(r.metric) + 1);
    }
    let mut out = DesignMeans::new();
    for (design, (scenario, sums, counts)) in acc {
        let mut means = MetricMap::splat(0.0);
        for m in Metric::ALL {
            let n = counts.get(m);
            if n == 0 {
                return Err(SurveyError::MissingData {
                    design: design.to_string(),
                    metric: m,
                });
            }
            means.set(m, sums.get(m) as f64 / f64::from(n));
        }
        out.insert(
            design.to_string(),
            DesignMean {
                scenario_id: scenario.clone(),
                means,
                counts,
            },
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioMean {
    pub means: MetricMap<f64>,
    pub n_designs: usize,
}

/// `(scenario, metric, mean)`
pub type Cell = (ScenarioId, Metric, f64);

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(transparent)]
pub struct ScenarioMeans {
    pub scenarios: BTreeMap<ScenarioId, ScenarioMean>,
}

impl ScenarioMeans {
    pub fn get(&self, id: &ScenarioId) -> Option<&ScenarioMean> {
        self.scenarios.get(id)
    }

    /// Errors on the first listed scenario with no rated designs.
    pub fn require<'a>(
        &self,
        ids: impl IntoIterator<Item = &'a ScenarioId>,
    ) -> Result<(), SurveyError> {
        for id in ids {
            if !self.scenarios.contains_key(id) {
                return Err(SurveyError::MissingScenario(id.clone()));
            }
        }
        Ok(())
    }

    /// Highest and lowest cell.
    pub fn extremes(&self) -> Option<(Cell, Cell)> {
        let cells = self
            .scenarios
            .iter()
            .flat_map(|(s, sm)| sm.means.iter().map(move |(m, v)| (s.clone(), m, v)));
        let mut max: Option<Cell> = None;
        let mut min: Option<Cell> = None;
        for c in cells {
            if max.as_ref().is_none_or(|x| c.2 > x.2) {
                max = Some(c.clone());
            }
            if min.as_ref().is_none_or(|x| c.2 < x.2) {
                min = Some(c);
            }
        }
        Some((max?, min?))
    }
}

/// Unweighted mean of design means per scenario.
pub fn scenario_means(designs: &DesignMeans) -> ScenarioMeans {
    let mut acc: BTreeMap<&ScenarioId, (MetricMap<f64>, usize)> = BTreeMap::new();
    for d in designs.values() {
        let slot = acc
            .entry(&d.scenario_id)
            .or_insert_with(|| (MetricMap::splat(0.0), 0));
        for (m, v) in d.means.iter() {
            slot.0.set(m, slot.0.get(m) + v);
        }
        slot.1 += 1;
    }
    let scenarios = acc
        .into_iter()
        .map(|(id, (sums, n))| {
            let mut means = sums;
            for m in Metric::ALL {
                means.set(m, sums.get(m) / n as f64);
            }
            (
                id.clone(),
                ScenarioMean {
                    means,
                    n_designs: n,
                },
            )
        })
        .collect();
    ScenarioMeans { scenarios }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopMetrics {
    pub max: f64,
    /// Every metric within `eps` of the maximum.
    pub argmax: BTreeSet<Metric>,
    pub top3: Vec<Metric>,
}

fn rank(means: &MetricMap<f64>, eps: f64) -> TopMetrics {
    let max = means
        .iter()
        .map(|(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let argmax = means
        .iter()
        .filter(|(_, v)| *v >= max - eps)
        .map(|(m, _)| m)
        .collect();
    // repeatedly take the best remaining metric; means within eps of it
    // count as equal and fall back to metric order
    let mut rest: Vec<Metric> = Metric::ALL.to_vec();
    let mut order = Vec::with_capacity(3);
    while order.len() < 3 && !rest.is_empty() {
        let best = rest
            .iter()
            .map(|m| means.get(*m))
            .fold(f64::NEG_INFINITY, f64::max);
        let k = rest
            .iter()
            .position(|m| means.get(*m) >= best - eps)
            .expect("best is attained");
        order.push(rest.remove(k));
    }
    TopMetrics {
        max,
        argmax,
        top3: order,
    }
}

pub fn top_metrics(means: &ScenarioMeans, eps: f64) -> BTreeMap<ScenarioId, TopMetrics> {
    means
        .scenarios
        .iter()
        .map(|(id, sm)| (id.clone(), rank(&sm.means, eps)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementRow {
    pub scenario_id: ScenarioId,
    pub argmax: BTreeSet<Metric>,
    pub designated: BTreeSet<Metric>,
    pub top3: Vec<Metric>,
    pub agrees: bool,
    pub designated_in_top3: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub rows: Vec<AgreementRow>,
    pub agree_count: usize,
    pub total: usize,
}

impl AgreementReport {
    pub fn disagreements(&self) -> Vec<&ScenarioId> {
        self.rows
            .iter()
            .filter(|r| !r.agrees)
            .map(|r| &r.scenario_id)
            .collect()
    }
}

/// A scenario agrees when a highest-rated metric is one of its designated
/// metrics. Every scenario in `means` needs a designated set.
pub fn agreement_report(
    means: &ScenarioMeans,
    designated: &BTreeMap<ScenarioId, BTreeSet<Metric>>,
    eps: f64,
) -> Result<AgreementReport, SurveyError> {
    let mut rows = Vec::new();
    for (id, top) in top_metrics(means, eps) {
        let des = designated
            .get(&id)
            .filter(|d| !d.is_empty())
            .ok_or_else(|| {
                SurveyError::Config(format!("no designated metrics for scenario `{id}`"))
            })?;
        rows.push(AgreementRow {
            agrees: !top.argmax.is_disjoint(des),
            designated_in_top3: top.top3.iter().any(|m| des.contains(m)),
            scenario_id: id,
            argmax: top.argmax,
            designated: des.clone(),
            top3: top.top3,
        });
    }
    let agree_count = rows.iter().filter(|r| r.agrees).count();
    Ok(AgreementReport {
        total: rows.len(),
        agree_count,
        rows,
    })
}
