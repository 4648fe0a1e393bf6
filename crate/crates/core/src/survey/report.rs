use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{
    agreement_report, code_responses, design_means, filter_raters, prefilter_responses,
    scenario_means, top_metrics, AgreementReport, CaptureReport, RatingDataset, ResponseRecord,
    ScenarioMeans, SurveyError, DEFAULT_EPS,
};
use crate::catalog::{Catalog, ScenarioId};
use crate::metric::Metric;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCell {
    pub metric: Metric,
    pub mean: f64,
    /// Among the highest means of the row.
    pub bold: bool,
    /// One of the scenario's designated metrics.
    pub italic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub scenario_id: ScenarioId,
    pub n_designs: usize,
    pub cells: Vec<TableCell>,
}

/// Everything the analysis produces, ready for text or JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub raters: usize,
    pub excluded_raters: Vec<String>,
    pub table: Vec<TableRow>,
    #[serde(skip)]
    pub means: ScenarioMeans,
    pub agreement: AgreementReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capture: Option<CaptureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flagged_responses: Option<usize>,
}

/// Runs the whole rating pipeline, plus response coding when responses are
/// given. Designations and lexicons come from `catalog`.
pub fn analyze(
    ratings: &RatingDataset,
    catalog: &Catalog,
    responses: Option<&[ResponseRecord]>,
) -> Result<AnalysisReport, SurveyError> {
    let raters = ratings.raters().len();
    let filtered = filter_raters(ratings);
    let means = scenario_means(&design_means(&filtered.dataset)?);
    let designated = catalog.designated_metrics();
    let agreement = agreement_report(&means, &designated, DEFAULT_EPS)?;
    let top = top_metrics(&means, DEFAULT_EPS);
    let table = means
        .scenarios
        .iter()
        .map(|(id, sm)| TableRow {
            scenario_id: id.clone(),
            n_designs: sm.n_designs,
            cells: sm
                .means
                .iter()
                .map(|(m, mean)| TableCell {
                    metric: m,
                    mean,
                    bold: top[id].argmax.contains(&m),
                    italic: designated.get(id).is_some_and(|d| d.contains(&m)),
                })
                .collect(),
        })
        .collect();
    let (capture, flagged_responses) = match responses {
        Some(rs) => {
            let pre = prefilter_responses(rs);
            let lexicons: BTreeMap<_, _> = catalog
                .scenarios()
                .iter()
                .map(|s| (s.scenario_id.clone(), s.lexicon.clone()))
                .collect();
            let flagged = pre.retained.iter().filter(|r| r.hard_grammar).count();
            (Some(code_responses(&pre, &lexicons)?), Some(flagged))
        }
        None => (None, None),
    };
    Ok(AnalysisReport {
        raters,
        excluded_raters: filtered.excluded,
        table,
        means,
        agreement,
        capture,
        flagged_responses,
    })
}

fn cell_text(c: &TableCell) -> String {
    let mut s = format!("{:.2}", c.mean);
    if c.bold {
        s = format!("**{s}**");
    }
    if c.italic {
        s = format!("_{s}_");
    }
    s
}

impl AnalysisReport {
    /// Plain-text report. Highest means are wrapped in `**`, designated
    /// metrics in `_`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "raters: {} ({} excluded for failing 2+ attention checks)",
            self.raters,
            self.excluded_raters.len()
        );
        if !self.excluded_raters.is_empty() {
            let _ = writeln!(out, "excluded: {}", self.excluded_raters.join(", "));
        }
        let _ = writeln!(out);
        let _ = write!(out, "{:<9}{:>4}", "scenario", "n");
        for m in Metric::ALL {
            let _ = write!(out, " {:>14}", m.id());
        }
        let _ = writeln!(out);
        for row in &self.table {
            let _ = write!(out, "{:<9}{:>4}", row.scenario_id.as_str(), row.n_designs);
            for c in &row.cells {
                let _ = write!(out, " {:>14}", cell_text(c));
            }
            let _ = writeln!(out);
        }
        let _ = writeln!(out);
        let dis: Vec<&str> = self
            .agreement
            .disagreements()
            .into_iter()
            .map(ScenarioId::as_str)
            .collect();
        let _ = writeln!(
            out,
            "agreement: {}/{} scenarios have a designated metric among the highest means",
            self.agreement.agree_count, self.agreement.total
        );
        if !dis.is_empty() {
            let _ = writeln!(out, "disagreements: {}", dis.join(", "));
        }
        for r in self.agreement.rows.iter().filter(|r| !r.agrees) {
            let top3: Vec<&str> = r.top3.iter().map(|m| m.id()).collect();
            let _ = writeln!(
                out,
                "  {}: top3 {} ({})",
                r.scenario_id,
                top3.join(", "),
                if r.designated_in_top3 {
                    "designated metric in top 3"
                } else {
                    "no designated metric in top 3"
                }
            );
        }
        if let Some(capture) = &self.capture {
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "{:<9}{:>8}{:>10}{:>12}{:>11}",
                "scenario", "direct", "indirect", "uncaptured", "discarded"
            );
            for (id, c) in capture {
                let _ = writeln!(
                    out,
                    "{:<9}{:>8}{:>10}{:>12}{:>11}",
                    id.as_str(),
                    c.direct,
                    c.indirect,
                    c.uncaptured,
                    c.discarded
                );
            }
            if let Some(n) = self.flagged_responses {
                let _ = writeln!(out, "responses flagged for manual reading: {n}");
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_catalog;
    use crate::survey::reference_means::{fixture, synthesize_ratings, SynthOptions};

    #[test]
    fn synthetic_ratings_reproduce_agreement() {
        let ds = synthesize_ratings(&fixture(), &SynthOptions::default()).unwrap();
        let report = analyze(&ds, &builtin_catalog(), None).unwrap();
        assert_eq!(report.agreement.agree_count, 9);
        assert_eq!(report.excluded_raters.len(), 9);
        let text = report.to_text();
        assert!(text.contains("agreement: 9/12"));
        assert!(text.contains("disagreements: A2, C1, C4"));
        assert!(text.contains("_**5.56**_"));
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["agreement"]["agree_count"], 9);
        assert_eq!(json["table"][0]["cells"][2]["bold"], true);
    }
}
