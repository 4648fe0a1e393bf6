//! Pattern-language knowledge base: patterns, placeable elements with their
//! affordances, and the twelve scenario briefs.
//!
//! The catalog is data. [`load_catalog`] accepts any document in the
//! `catalog.v1` shape so a community can add its own patterns and elements
//! without rebuilding; [`builtin_catalog`] returns the shipped baseline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::metric::Metric;

const BUILTIN_DOCUMENT: &str = include_str!("../data/catalog.v1.json");

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Self {
                Self(s.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_string())
            }
        }
    };
}

string_id!(
    /// Slug of a placeable element, e.g. `tree.oak`.
    EntryId
);
string_id!(PatternId);
string_id!(
    /// One of `A1`..`A4`, `B1`..`B4`, `C1`..`C4`.
    ScenarioId
);

impl ScenarioId {
    pub fn group(&self) -> Option<ScenarioGroup> {
        match self.0.chars().next()? {
            'A' => Some(ScenarioGroup::A),
            'B' => Some(ScenarioGroup::B),
            'C' => Some(ScenarioGroup::C),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ScenarioGroup {
    A,
    B,
    C,
}

impl ScenarioGroup {
    pub const ALL: [ScenarioGroup; 3] = [ScenarioGroup::A, ScenarioGroup::B, ScenarioGroup::C];

    pub fn letter(self) -> char {
        match self {
            ScenarioGroup::A => 'A',
            ScenarioGroup::B => 'B',
            ScenarioGroup::C => 'C',
        }
    }

    /// The four scenario ids of the group, in ascending order.
    pub fn scenario_ids(self) -> [ScenarioId; 4] {
        let l = self.letter();
        [1, 2, 3, 4].map(|i| ScenarioId(format!("{l}{i}")))
    }
}

impl fmt::Display for ScenarioGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Greenery,
    Seating,
    Play,
    Structure,
    Market,
    Lighting,
    Animal,
    Garden,
    Art,
    Surface,
}

/// How a category is drawn in plan view.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CategoryStyle {
    pub fill: &'static str,
    pub stroke: &'static str,
    pub glyph: Glyph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Glyph {
    /// The transformed footprint rectangle.
    Footprint,
    /// A circle sized by the canopy (or the footprint when there is none).
    Canopy,
    /// A small disc marking a point element, with its light pool outlined.
    Marker,
}

impl Category {
    pub const ALL: [Category; 10] = [
        Category::Greenery,
        Category::Seating,
        Category::Play,
        Category::Structure,
        Category::Market,
        Category::Lighting,
        Category::Animal,
        Category::Garden,
        Category::Art,
        Category::Surface,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Category::Greenery => "greenery",
            Category::Seating => "seating",
            Category::Play => "play",
            Category::Structure => "structure",
            Category::Market => "market",
            Category::Lighting => "lighting",
            Category::Animal => "animal",
            Category::Garden => "garden",
            Category::Art => "art",
            Category::Surface => "surface",
        }
    }

    pub fn style(self) -> CategoryStyle {
        let (fill, stroke, glyph) = match self {
            Category::Greenery => ("#6aa84f", "#38761d", Glyph::Canopy),
            Category::Seating => ("#b45f06", "#783f04", Glyph::Footprint),
            Category::Play => ("#f1c232", "#bf9000", Glyph::Footprint),
            Category::Structure => ("#999999", "#434343", Glyph::Footprint),
            Category::Market => ("#e06666", "#990000", Glyph::Footprint),
            Category::Lighting => ("#ffe599", "#7f6000", Glyph::Marker),
            Category::Animal => ("#ffffff", "#5b0f00", Glyph::Marker),
            Category::Garden => ("#93c47d", "#274e13", Glyph::Footprint),
            Category::Art => ("#8e7cc3", "#351c75", Glyph::Footprint),
            Category::Surface => ("#d9ead3", "#b7b7b7", Glyph::Footprint),
        };
        CategoryStyle {
            fill,
            stroke,
            glyph,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Affordance tags the metric engine understands. Entries may carry other
/// free-form tags; they are preserved but ignored by scoring.
pub mod tags {
    pub const SHADE_CASTER: &str = "shade-caster";
    pub const STAGE_LIKE: &str = "stage-like";
    pub const GATHERING: &str = "gathering";
    pub const NONTRADITIONAL: &str = "nontraditional";
    /// Rotation carries no meaning (trees, lamps); the replication matcher
    /// ignores rotation differences for these entries.
    pub const RADIAL: &str = "radial";
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pattern {
    pub pattern_id: PatternId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub number: Option<u32>,
    pub name: String,
    pub summary: String,
    #[serde(default)]
    pub related: Vec<PatternId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub entry_id: EntryId,
    pub display_name: String,
    pub category: Category,
    pub footprint_w: f64,
    pub footprint_d: f64,
    pub height: f64,
    #[serde(default)]
    pub canopy_radius: f64,
    #[serde(default)]
    pub light_radius: f64,
    #[serde(default)]
    pub seat_capacity: u32,
    #[serde(default)]
    pub play_capacity: u32,
    #[serde(default)]
    pub adult_activity_capacity: u32,
    #[serde(default)]
    pub green_area: f64,
    #[serde(default)]
    pub tags: BTreeSet<String>,
    #[serde(default)]
    pub patterns: Vec<PatternId>,
}

impl CatalogEntry {
    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(tag)
    }

    pub fn is_shade_caster(&self) -> bool {
        self.has_tag(tags::SHADE_CASTER)
    }

    pub fn is_seating(&self) -> bool {
        self.seat_capacity > 0
    }

    pub fn is_play(&self) -> bool {
        self.play_capacity > 0
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Lexicon {
    /// Phrases matched as case-insensitive substrings.
    pub direct: Vec<String>,
    /// Terms matched against token stems.
    pub indirect: Vec<String>,
    /// True when the terms were authored as a starting point rather than
    /// taken from coded survey responses.
    #[serde(default)]
    pub provisional: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub scenario_id: ScenarioId,
    pub group: ScenarioGroup,
    pub brief: String,
    pub designated_metrics: BTreeSet<Metric>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub designation_note: Option<String>,
    #[serde(default)]
    pub suggested_entries: Vec<EntryId>,
    pub lexicon: Lexicon,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CatalogDocument {
    version: String,
    patterns: Vec<Pattern>,
    entries: Vec<CatalogEntry>,
    scenarios: Vec<Scenario>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("catalog parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("dangling reference `{id}` ({context})")]
    Integrity { id: String, context: String },
    #[error("duplicate {kind} id `{id}`")]
    Duplicate { kind: &'static str, id: String },
    #[error("invalid {kind} `{id}`: {reason}")]
    Invalid {
        kind: &'static str,
        id: String,
        reason: String,
    },
    #[error("{kind} `{id}` not found")]
    NotFound { kind: &'static str, id: String },
}

/// Validated, immutable catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    version: String,
    patterns: Vec<Pattern>,
    entries: Vec<CatalogEntry>,
    scenarios: Vec<Scenario>,
    entry_index: BTreeMap<EntryId, usize>,
    pattern_index: BTreeMap<PatternId, usize>,
}

/// Parses and validates a catalog document.
pub fn load_catalog(document: &str) -> Result<Catalog, CatalogError> {
    let doc: CatalogDocument = serde_json::from_str(document).map_err(|e| CatalogError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Catalog::from_document(doc)
}

/// The shipped baseline catalog.
pub fn builtin_catalog() -> Catalog {
    static BUILTIN: OnceLock<Catalog> = OnceLock::new();
    BUILTIN
        .get_or_init(|| load_catalog(BUILTIN_DOCUMENT).expect("shipped catalog is valid"))
        .clone()
}

/// Raw text of the shipped catalog document.
pub fn builtin_document() -> &'static str {
    BUILTIN_DOCUMENT
}

impl Catalog {
    fn from_document(doc: CatalogDocument) -> Result<Self, CatalogError> {
        let mut pattern_index = BTreeMap::new();
        for (i, p) in doc.patterns.iter().enumerate() {
            if p.pattern_id.0.trim().is_empty() {
                return Err(invalid("pattern", &p.pattern_id.0, "empty id"));
            }
            if pattern_index.insert(p.pattern_id.clone(), i).is_some() {
                return Err(CatalogError::Duplicate {
                    kind: "pattern",
                    id: p.pattern_id.0.clone(),
                });
            }
        }
        for p in &doc.patterns {
            for r in &p.related {
                if !pattern_index.contains_key(r) {
                    return Err(CatalogError::Integrity {
                        id: r.0.clone(),
                        context: format!("related pattern of `{}`", p.pattern_id),
                    });
                }
            }
        }

        let mut entry_index = BTreeMap::new();
        for (i, e) in doc.entries.iter().enumerate() {
            validate_entry(e)?;
            if entry_index.insert(e.entry_id.clone(), i).is_some() {
                return Err(CatalogError::Duplicate {
                    kind: "entry",
                    id: e.entry_id.0.clone(),
                });
            }
            for p in &e.patterns {
                if !pattern_index.contains_key(p) {
                    return Err(CatalogError::Integrity {
                        id: p.0.clone(),
                        context: format!("pattern of entry `{}`", e.entry_id),
                    });
                }
            }
        }

        let mut scenarios = doc.scenarios;
        scenarios.sort_by(|a, b| a.scenario_id.cmp(&b.scenario_id));
        let mut seen = BTreeSet::new();
        for s in &scenarios {
            if !seen.insert(s.scenario_id.clone()) {
                return Err(CatalogError::Duplicate {
                    kind: "scenario",
                    id: s.scenario_id.0.clone(),
                });
            }
            validate_scenario(s)?;
            for e in &s.suggested_entries {
                if !entry_index.contains_key(e) {
                    return Err(CatalogError::Integrity {
                        id: e.0.clone(),
                        context: format!("suggested entry of scenario `{}`", s.scenario_id),
                    });
                }
            }
        }
        let expected: BTreeSet<ScenarioId> = ScenarioGroup::ALL
            .iter()
            .flat_map(|g| g.scenario_ids())
            .collect();
        if seen != expected {
            let missing: Vec<_> = expected.difference(&seen).map(|s| s.0.clone()).collect();
            let extra: Vec<_> = seen.difference(&expected).map(|s| s.0.clone()).collect();
            return Err(invalid(
                "scenario set",
                &doc.version,
                &format!(
                    "expected A1..A4, B1..B4, C1..C4 (missing {missing:?}, unexpected {extra:?})"
                ),
            ));
        }

        Ok(Catalog {
            version: doc.version,
            patterns: doc.patterns,
            entries: doc.entries,
            scenarios,
            entry_index,
            pattern_index,
        })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    /// The twelve scenarios, ordered A1..A4, B1..B4, C1..C4.
    pub fn scenarios(&self) -> &[Scenario] {
        &self.scenarios
    }

    pub fn entry(&self, id: &EntryId) -> Option<&CatalogEntry> {
        self.entry_index.get(id).map(|&i| &self.entries[i])
    }

    pub fn pattern(&self, id: &PatternId) -> Option<&Pattern> {
        self.pattern_index.get(id).map(|&i| &self.patterns[i])
    }

    pub fn scenario(&self, id: &ScenarioId) -> Option<&Scenario> {
        self.scenarios.iter().find(|s| &s.scenario_id == id)
    }

    pub fn scenarios_in_group(&self, group: ScenarioGroup) -> impl Iterator<Item = &Scenario> {
        self.scenarios.iter().filter(move |s| s.group == group)
    }

    /// Designated metrics per scenario, as needed by the agreement analysis.
    pub fn designated_metrics(&self) -> BTreeMap<ScenarioId, BTreeSet<Metric>> {
        self.scenarios
            .iter()
            .map(|s| (s.scenario_id.clone(), s.designated_metrics.clone()))
            .collect()
    }

    /// Every entry exactly once: the scenario's suggestions first in their
    /// listed order, then the rest grouped by category.
    pub fn palette_for_scenario(
        &self,
        scenario_id: &ScenarioId,
    ) -> Result<Vec<&CatalogEntry>, CatalogError> {
        let scenario = self
            .scenario(scenario_id)
            .ok_or_else(|| CatalogError::NotFound {
                kind: "scenario",
                id: scenario_id.0.clone(),
            })?;
        let mut out = Vec::with_capacity(self.entries.len());
        let mut used = BTreeSet::new();
        for id in &scenario.suggested_entries {
            if used.insert(id) {
                if let Some(e) = self.entry(id) {
                    out.push(e);
                }
            }
        }
        let mut rest: Vec<&CatalogEntry> = self
            .entries
            .iter()
            .filter(|e| !used.contains(&e.entry_id))
            .collect();
        rest.sort_by(|a, b| (a.category, &a.entry_id).cmp(&(b.category, &b.entry_id)));
        out.extend(rest);
        Ok(out)
    }

    pub fn entries_for_pattern(
        &self,
        pattern_id: &PatternId,
    ) -> Result<Vec<&CatalogEntry>, CatalogError> {
        if self.pattern(pattern_id).is_none() {
            return Err(CatalogError::NotFound {
                kind: "pattern",
                id: pattern_id.0.clone(),
            });
        }
        Ok(self
            .entries
            .iter()
            .filter(|e| e.patterns.contains(pattern_id))
            .collect())
    }

    /// Serializes back to the catalog document format.
    pub fn encode(&self) -> String {
        let doc = CatalogDocument {
            version: self.version.clone(),
            patterns: self.patterns.clone(),
            entries: self.entries.clone(),
            scenarios: self.scenarios.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("catalog serializes");
        s.push('\n');
        s
    }
}

fn invalid(kind: &'static str, id: &str, reason: &str) -> CatalogError {
    CatalogError::Invalid {
        kind,
        id: id.to_string(),
        reason: reason.to_string(),
    }
}

fn validate_entry(e: &CatalogEntry) -> Result<(), CatalogError> {
    let id = e.entry_id.as_str();
    if id.trim().is_empty() {
        return Err(invalid("entry", id, "empty id"));
    }
    let positive = [
        ("footprint_w", e.footprint_w),
        ("footprint_d", e.footprint_d),
    ];
    for (name, v) in positive {
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid("entry", id, &format!("{name} must be positive")));
        }
    }
    let non_negative = [
        ("height", e.height),
        ("canopy_radius", e.canopy_radius),
        ("light_radius", e.light_radius),
        ("green_area", e.green_area),
    ];
    for (name, v) in non_negative {
        if !(v.is_finite() && v >= 0.0) {
            return Err(invalid("entry", id, &format!("{name} must be >= 0")));
        }
    }
    if e.is_shade_caster() && !(e.canopy_radius > 0.0 && e.height > 0.0) {
        return Err(invalid(
            "entry",
            id,
            "shade-caster requires canopy_radius > 0 and height > 0",
        ));
    }
    Ok(())
}

fn validate_scenario(s: &Scenario) -> Result<(), CatalogError> {
    let id = s.scenario_id.as_str();
    if s.scenario_id.group() != Some(s.group) {
        return Err(invalid("scenario", id, "group does not match id prefix"));
    }
    if s.designated_metrics.is_empty() {
        return Err(invalid("scenario", id, "designated_metrics is empty"));
    }
    let lex = &s.lexicon;
    if let Some(p) = lex
        .direct
        .iter()
        .chain(lex.indirect.iter())
        .find(|p| p.to_lowercase() != **p || p.trim().is_empty())
    {
        return Err(invalid(
            "scenario",
            id,
            &format!("lexicon term `{p}` must be non-empty lowercase"),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtin_json() -> serde_json::Value {
        serde_json::from_str(BUILTIN_DOCUMENT).unwrap()
    }

    #[test]
    fn builtin_has_twelve_scenarios_in_order() {
        let c = builtin_catalog();
        let ids: Vec<_> = c
            .scenarios()
            .iter()
            .map(|s| s.scenario_id.0.as_str())
            .collect();
        assert_eq!(
            ids,
            ["A1", "A2", "A3", "A4", "B1", "B2", "B3", "B4", "C1", "C2", "C3", "C4"]
        );
        for g in ScenarioGroup::ALL {
            assert_eq!(c.scenarios_in_group(g).count(), 4);
        }
    }

    #[test]
    fn scenario_briefs_and_designations() {
        let c = builtin_catalog();
        let a4 = c.scenario(&"A4".into()).unwrap();
        assert_eq!(
            a4.brief,
            "The community would like to use this space for a community garden."
        );
        let c1 = c.scenario(&"C1".into()).unwrap();
        assert_eq!(
            c1.designated_metrics,
            BTreeSet::from([Metric::Shade, Metric::Comfort])
        );
        let c3 = c.scenario(&"C3".into()).unwrap();
        assert_eq!(
            c3.designated_metrics,
            BTreeSet::from([Metric::Comfort, Metric::Safety, Metric::Sociability])
        );
        assert!(c3.designation_note.is_some());
    }

    #[test]
    fn builtin_covers_named_elements() {
        let c = builtin_catalog();
        assert!(c.entries().len() >= 20);
        for id in ["goat", "chicken"] {
            assert_eq!(c.entry(&id.into()).unwrap().category, Category::Animal);
        }
        for id in [
            "market.stall",
            "food.cart",
            "statue",
            "garden.bed.raised",
            "garden.bed.flower",
            "shed.utility",
            "fence.segment",
            "tree.oak",
            "bench.basic",
            "picnic.table",
            "compost.pile",
            "tent",
            "gazebo",
            "playground.gym",
            "swings",
            "lamp.street",
            "grass.patch",
            "path.segment",
            "adventure.mini",
        ] {
            assert!(c.entry(&id.into()).is_some(), "missing {id}");
        }
    }

    #[test]
    fn baseline_affordance_values() {
        let c = builtin_catalog();
        let oak = c.entry(&"tree.oak".into()).unwrap();
        assert_eq!((oak.canopy_radius, oak.height), (3.5, 6.0));
        assert!(oak.is_shade_caster());
        assert_eq!(c.entry(&"bench.basic".into()).unwrap().seat_capacity, 3);
        assert_eq!(c.entry(&"playground.gym".into()).unwrap().play_capacity, 10);
        assert_eq!(c.entry(&"lamp.street".into()).unwrap().light_radius, 8.0);
    }

    #[test]
    fn dangling_pattern_reference_is_named() {
        let mut doc = builtin_json();
        doc["entries"][0]["patterns"] = serde_json::json!(["nope"]);
        let err = load_catalog(&doc.to_string()).unwrap_err();
        match err {
            CatalogError::Integrity { id, .. } => assert_eq!(id, "nope"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_document_is_parse_error() {
        assert!(matches!(load_catalog(""), Err(CatalogError::Parse { .. })));
    }

    #[test]
    fn duplicate_entry_rejected() {
        let mut doc = builtin_json();
        let first = doc["entries"][0].clone();
        doc["entries"].as_array_mut().unwrap().push(first);
        assert!(matches!(
            load_catalog(&doc.to_string()),
            Err(CatalogError::Duplicate { kind: "entry", .. })
        ));
    }

    #[test]
    fn shade_caster_without_canopy_rejected() {
        let mut doc = builtin_json();
        let entries = doc["entries"].as_array_mut().unwrap();
        let oak = entries
            .iter_mut()
            .find(|e| e["entry_id"] == "tree.oak")
            .unwrap();
        oak["canopy_radius"] = serde_json::json!(0.0);
        assert!(matches!(
            load_catalog(&doc.to_string()),
            Err(CatalogError::Invalid { .. })
        ));
    }

    #[test]
    fn missing_scenario_rejected() {
        let mut doc = builtin_json();
        doc["scenarios"].as_array_mut().unwrap().pop();
        assert!(load_catalog(&doc.to_string()).is_err());
    }

    #[test]
    fn uppercase_lexicon_rejected() {
        let mut doc = builtin_json();
        doc["scenarios"][0]["lexicon"]["direct"] = serde_json::json!(["Elderly"]);
        assert!(load_catalog(&doc.to_string()).is_err());
    }

    #[test]
    fn encode_reload_is_identity() {
        let c = builtin_catalog();
        let again = load_catalog(&c.encode()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn a4_palette_leads_with_garden_items() {
        let c = builtin_catalog();
        let palette = c.palette_for_scenario(&"A4".into()).unwrap();
        let head: Vec<_> = palette
            .iter()
            .take(6)
            .map(|e| e.entry_id.as_str())
            .collect();
        for id in [
            "garden.bed.raised",
            "shed.utility",
            "fence.segment",
            "goat",
            "chicken",
        ] {
            assert!(head.contains(&id), "{id} not in {head:?}");
        }
    }

    #[test]
    fn palette_is_a_permutation_of_entries() {
        let c = builtin_catalog();
        for s in c.scenarios() {
            let palette = c.palette_for_scenario(&s.scenario_id).unwrap();
            let mut ids: Vec<_> = palette.iter().map(|e| e.entry_id.clone()).collect();
            assert_eq!(ids.len(), c.entries().len());
            ids.sort();
            ids.dedup();
            assert_eq!(ids.len(), c.entries().len());
        }
    }

    #[test]
    fn b1_palette_ranks_market_stall_before_statue() {
        let c = builtin_catalog();
        let palette = c.palette_for_scenario(&"B1".into()).unwrap();
        let pos = |id: &str| {
            palette
                .iter()
                .position(|e| e.entry_id.as_str() == id)
                .unwrap()
        };
        assert!(pos("market.stall") < pos("statue"));
    }

    #[test]
    fn unknown_scenario_palette() {
        let c = builtin_catalog();
        assert!(matches!(
            c.palette_for_scenario(&"Z9".into()),
            Err(CatalogError::NotFound { .. })
        ));
    }

    #[test]
    fn entries_by_pattern() {
        let c = builtin_catalog();
        let trees = c.entries_for_pattern(&"tree-places".into()).unwrap();
        assert!(trees.iter().any(|e| e.entry_id.as_str() == "tree.oak"));
        let animals: BTreeSet<_> = c
            .entries_for_pattern(&"animals".into())
            .unwrap()
            .iter()
            .map(|e| e.entry_id.0.clone())
            .collect();
        assert_eq!(animals, BTreeSet::from(["chicken".into(), "goat".into()]));
        let empty = c
            .entries_for_pattern(&"independent-regions".into())
            .unwrap();
        assert!(empty.is_empty());
        assert!(c.entries_for_pattern(&"nope".into()).is_err());
    }
}
