//! Rating analysis: ingest survey rows, drop raters who fail attention
//! checks, average per design and then per scenario, and compare the top
//! rated metrics against the catalog's designated metrics.
//!
//! Free-text responses are handled in [`prefilter_responses`] and
//! [`code_responses`].

mod ratings;
pub mod reference_means;
mod report;
mod responses;

use crate::catalog::ScenarioId;
use crate::metric::Metric;

pub use ratings::{
    agreement_report, design_means, filter_raters, ingest_ratings, scenario_means, top_metrics,
    AgreementReport, AgreementRow, Cell, DesignMean, DesignMeans, Filtered, RatingDataset,
    RatingRecord, ScenarioMean, ScenarioMeans, TopMetrics, DEFAULT_EPS, EXCLUSION_THRESHOLD,
};
pub use report::{analyze, AnalysisReport, TableCell, TableRow};
pub use responses::{
    classify_response, code_responses, ingest_responses, prefilter_responses, Capture,
    CaptureCounts, CaptureReport, DiscardReason, Prefiltered, ResponseRecord, RetainedResponse,
    STOPWORDS,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SurveyError {
    /// `row` is the 1-based line in the input file; the header is line 1.
    #[error("row {row}: {message}")]
    Row { row: u64, message: String },
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("no data rows")]
    Empty,
    #[error("could not read input: {0}")]
    Read(String),
    #[error("no ratings for design `{design}` on {metric}")]
    MissingData { design: String, metric: Metric },
    #[error("scenario `{0}` has no rated designs")]
    MissingScenario(ScenarioId),
    #[error("design `{design}` is listed under both {first} and {second}")]
    InconsistentDesign {
        design: String,
        first: ScenarioId,
        second: ScenarioId,
    },
    #[error("{0}")]
    Config(String),
}

fn csv_error(e: csv::Error) -> SurveyError {
    match e.position() {
        Some(p) => SurveyError::Row {
            row: p.line(),
            message: e.to_string(),
        },
        None => SurveyError::Read(e.to_string()),
    }
}

/// Column positions for a required header, or the first missing name.
fn header_indices(headers: &csv::StringRecord, names: &[&str]) -> Result<Vec<usize>, SurveyError> {
    names
        .iter()
        .map(|n| {
            headers
                .iter()
                .position(|h| h.trim().eq_ignore_ascii_case(n))
                .ok_or_else(|| SurveyError::MissingColumn((*n).to_string()))
        })
        .collect()
}
