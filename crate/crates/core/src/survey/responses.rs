use std::collections::BTreeMap;
use std::io::Read;

use serde::Serialize;

use super::{csv_error, header_indices, SurveyError};
use crate::catalog::{Lexicon, ScenarioId};

const COLUMNS: [&str; 4] = ["rater_id", "design_id", "scenario_id", "text"];

/// Responses shorter than this many whitespace-separated tokens are
/// discarded as too short.
const MIN_TOKENS: usize = 4;

/// Filler words allowed inside a response that only lists metrics.
pub const STOPWORDS: &[&str] = &[
    "a", "access", "also", "an", "and", "are", "as", "at", "be", "good", "great", "for", "has",
    "have", "i", "in", "is", "it", "lots", "more", "much", "of", "or", "plenty", "so", "some",
    "the", "to", "very", "with",
];

const METRIC_WORDS: &[&str] = &[
    "shade",
    "play",
    "comfort",
    "safety",
    "nature",
    "recreation",
    "entertainment",
    "sociability",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResponseRecord {
    pub rater_id: String,
    pub design_id: String,
    pub scenario_id: ScenarioId,
    pub text: String,
    #[serde(skip)]
    pub row: u64,
}

pub fn ingest_responses<R: Read>(input: R) -> Result<Vec<ResponseRecord>, SurveyError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers().map_err(csv_error)?.clone();
    let idx = header_indices(&headers, &COLUMNS)?;
    let mut out = Vec::new();
    for result in reader.records() {
        let rec = result.map_err(csv_error)?;
        let row = rec.position().map(|p| p.line()).unwrap_or(0);
        let field = |k: usize| rec.get(idx[k]).unwrap_or("").to_string();
        for (k, name) in COLUMNS.iter().enumerate().take(3) {
            if field(k).is_empty() {
                return Err(SurveyError::Row {
                    row,
                    message: format!("{name} is empty"),
                });
            }
        }
        out.push(ResponseRecord {
            rater_id: field(0),
            design_id: field(1),
            scenario_id: ScenarioId(field(2)),
            text: field(3),
            row,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscardReason {
    Short,
    MetricList,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetainedResponse {
    pub record: ResponseRecord,
    /// Heavy word repetition in a long answer. Only a hint for a human
    /// reader; flagged responses are still coded.
    pub hard_grammar: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Prefiltered {
    pub retained: Vec<RetainedResponse>,
    pub discarded: Vec<(ResponseRecord, DiscardReason)>,
}

/// Lowercased words with punctuation removed. Apostrophes inside a word are
/// dropped so "farmer's" and "farmers" compare equal.
fn words(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|w| {
            w.chars()
                .filter(|c| c.is_alphanumeric())
                .flat_map(char::to_lowercase)
                .collect::<String>()
        })
        .filter(|w| !w.is_empty())
        .collect()
}

fn is_metric_list(tokens: &[String]) -> bool {
    tokens.iter().any(|t| METRIC_WORDS.contains(&t.as_str()))
        && tokens
            .iter()
            .all(|t| METRIC_WORDS.contains(&t.as_str()) || STOPWORDS.contains(&t.as_str()))
}

fn hard_grammar(tokens: &[String]) -> bool {
    if tokens.len() < 8 {
        return false;
    }
    let distinct: std::collections::BTreeSet<&String> = tokens.iter().collect();
    (distinct.len() as f64) / (tokens.len() as f64) < 0.7
}

/// Splits responses into those worth coding and those discarded as too
/// short or as a bare list of metric names.
pub fn prefilter_responses(responses: &[ResponseRecord]) -> Prefiltered {
    let mut out = Prefiltered::default();
    for r in responses {
        let tokens = words(&r.text);
        if is_metric_list(&tokens) {
            out.discarded.push((r.clone(), DiscardReason::MetricList));
        } else if r.text.split_whitespace().count() < MIN_TOKENS {
            out.discarded.push((r.clone(), DiscardReason::Short));
        } else {
            out.retained.push(RetainedResponse {
                hard_grammar: hard_grammar(&tokens),
                record: r.clone(),
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Capture {
    Direct,
    Indirect,
    Uncaptured,
}

/// Strips one of `ing`, `ed`, `s` while leaving a stem of at least three
/// letters.
fn stem(word: &str) -> &str {
    for suffix in ["ing", "ed"] {
        if let Some(s) = word.strip_suffix(suffix) {
            if s.len() >= 3 {
                return s;
            }
        }
    }
    if !word.ends_with("ss") {
        if let Some(s) = word.strip_suffix('s') {
            if s.len() >= 3 {
                return s;
            }
        }
    }
    word
}

fn normalize_phrase(s: &str) -> String {
    words(s).join(" ")
}

pub fn classify_response(text: &str, lexicon: &Lexicon) -> Capture {
    let norm = format!(" {} ", normalize_phrase(text));
    let direct = lexicon.direct.iter().any(|p| {
        let p = normalize_phrase(p);
        !p.is_empty() && norm.contains(&p)
    });
    if direct {
        return Capture::Direct;
    }
    let stems: Vec<&str> = norm.split_whitespace().map(stem).collect();
    let indirect = lexicon.indirect.iter().any(|term| {
        let term_words = words(term);
        let term_stems: Vec<&str> = term_words.iter().map(|w| stem(w)).collect();
        !term_stems.is_empty()
            && stems
                .windows(term_stems.len())
                .any(|w| w == term_stems.as_slice())
    });
    if indirect {
        Capture::Indirect
    } else {
        Capture::Uncaptured
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CaptureCounts {
    pub direct: usize,
    pub indirect: usize,
    pub uncaptured: usize,
    pub discarded: usize,
}

impl CaptureCounts {
    pub fn retained(&self) -> usize {
        self.direct + self.indirect + self.uncaptured
    }
}

pub type CaptureReport = BTreeMap<ScenarioId, CaptureCounts>;

/// Counts each retained response once per scenario, direct before indirect.
pub fn code_responses(
    prefiltered: &Prefiltered,
    lexicons: &BTreeMap<ScenarioId, Lexicon>,
) -> Result<CaptureReport, SurveyError> {
    let mut report = CaptureReport::new();
    for r in &prefiltered.retained {
        let id = &r.record.scenario_id;
        let lex = lexicons
            .get(id)
            .ok_or_else(|| SurveyError::Config(format!("no lexicon for scenario `{id}`")))?;
        let counts = report.entry(id.clone()).or_default();
        match classify_response(&r.record.text, lex) {
            Capture::Direct => counts.direct += 1,
            Capture::Indirect => counts.indirect += 1,
            Capture::Uncaptured => counts.uncaptured += 1,
        }
    }
    for (r, _) in &prefiltered.discarded {
        report.entry(r.scenario_id.clone()).or_default().discarded += 1;
    }
    Ok(report)
}
