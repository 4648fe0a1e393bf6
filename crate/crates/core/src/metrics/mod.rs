//! Deterministic geometric scoring of a scene on the eight livability
//! metrics.
//!
//! Each metric is `1 + 6 * clamp(f / f_sat, 0, 1)` for a feature value `f`
//! derived from the scene's geometry and the catalog's affordances:
//!
//! | metric        | feature `f`                                                        | `f_sat` |
//! |---------------|--------------------------------------------------------------------|---------|
//! | shade         | sample-weighted shaded fraction of the lot                         | 0.5     |
//! | play          | total play capacity                                                | 20      |
//! | comfort       | `0.6 * min(1, seats / 20) + 0.4 * shaded seat fraction`            | 1       |
//! | safety        | `0.5 * coverage / 0.5 + 0.5 * supervised play fraction`            | 1       |
//! | nature        | `(green area / lot area) / 0.3 + 0.05 * min(animals, 4)`           | 1       |
//! | recreation    | total adult activity capacity                                      | 16      |
//! | entertainment | `0.5 * [stage] + 0.5 * [>= 50 m^2 open within 10 m of a stage]`    | 1       |
//! | sociability   | `pairs / 15`                                                       | 1       |
//!
//! Every constant lives in [`ScoreConfig`] and can be overridden from a JSON
//! document. They are calibration knobs, not measurements.

mod coverage;
mod shadow;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, Category, EntryId};
use crate::metric::{Metric, MetricMap};
use crate::scene::{validate_scene, Scene, ValidationIssue};

pub use coverage::{lighting_coverage, sociability_pairs};
pub use shadow::{
    scene_shadows, seating_stats, shaded_fraction, shadow_offset, shadow_polygon, SeatingStats,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(EntryId),
    #[error("entry `{0}` does not cast shade")]
    Affordance(EntryId),
    #[error("scene has {} validation error(s)", .0.iter().filter(|i| i.is_error()).count())]
    InvalidScene(Vec<ValidationIssue>),
    #[error("invalid sun sample: {0}")]
    Sun(String),
    #[error("invalid score config: {0}")]
    Config(String),
}

/// One sun direction. Azimuth is measured clockwise from north.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SunSample {
    pub altitude_deg: f64,
    pub azimuth_deg: f64,
    pub weight: f64,
}

impl SunSample {
    pub fn new(altitude_deg: f64, azimuth_deg: f64, weight: f64) -> Result<Self, MetricError> {
        let s = Self {
            altitude_deg,
            azimuth_deg: azimuth_deg.rem_euclid(360.0),
            weight,
        };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<(), MetricError> {
        if !(self.altitude_deg.is_finite() && self.altitude_deg > 0.0 && self.altitude_deg <= 90.0)
        {
            return Err(MetricError::Sun(format!(
                "altitude {} outside (0, 90]",
                self.altitude_deg
            )));
        }
        if !(self.azimuth_deg.is_finite() && (0.0..360.0).contains(&self.azimuth_deg)) {
            return Err(MetricError::Sun(format!(
                "azimuth {} outside [0, 360)",
                self.azimuth_deg
            )));
        }
        if !(self.weight.is_finite() && self.weight >= 0.0) {
            return Err(MetricError::Sun(format!(
                "weight {} is negative",
                self.weight
            )));
        }
        Ok(())
    }

    /// Parses `"alt,az"` with weight 1.
    pub fn parse_pair(s: &str) -> Result<Self, MetricError> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| MetricError::Sun(format!("expected `alt,az`, got `{s}`")))?;
        let alt: f64 = a
            .trim()
            .parse()
            .map_err(|_| MetricError::Sun(format!("bad altitude `{a}`")))?;
        let az: f64 = b
            .trim()
            .parse()
            .map_err(|_| MetricError::Sun(format!("bad azimuth `{b}`")))?;
        Self::new(alt, az, 1.0)
    }
}

/// Fixed sun directions for a Los Angeles summer day: high noon sun plus
/// mid-morning and mid-afternoon.
pub fn default_sun_samples() -> Vec<SunSample> {
    vec![
        SunSample {
            altitude_deg: 70.0,
            azimuth_deg: 180.0,
            weight: 0.4,
        },
        SunSample {
            altitude_deg: 35.0,
            azimuth_deg: 120.0,
            weight: 0.3,
        },
        SunSample {
            altitude_deg: 35.0,
            azimuth_deg: 240.0,
            weight: 0.3,
        },
    ]
}

fn default_saturation() -> MetricMap<f64> {
    MetricMap([0.5, 20.0, 1.0, 1.0, 1.0, 16.0, 1.0, 1.0])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScoreConfig {
    pub version: String,
    pub sun_samples: Vec<SunSample>,
    /// `f_sat` per metric.
    pub saturation: MetricMap<f64>,
    /// Seat count at which the seat-supply term of comfort saturates.
    pub seat_target: f64,
    /// Weight of seat supply in comfort; shaded seats get the remainder.
    pub comfort_seat_weight: f64,
    /// Lighting coverage that alone yields a full lighting term.
    pub lighting_target: f64,
    /// Meters from a play element to the nearest seat for it to count as
    /// supervised.
    pub supervision_distance: f64,
    /// Green share of the lot that alone saturates nature.
    pub green_target: f64,
    pub animal_bonus: f64,
    pub animal_cap: u32,
    /// Meters between seating centres for them to form a pair.
    pub pair_distance: f64,
    pub gathering_pairs: u32,
    pub pairs_target: f64,
    pub stage_radius: f64,
    pub open_area_min: f64,
    /// Grid pitch for the open-area count, meters.
    pub open_grid: f64,
    /// Grid pitch used by sampling oracles in tests, meters.
    pub grid_resolution: f64,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        Self {
            version: "1".to_string(),
            sun_samples: default_sun_samples(),
            saturation: default_saturation(),
            seat_target: 20.0,
            comfort_seat_weight: 0.6,
            lighting_target: 0.5,
            supervision_distance: 15.0,
            green_target: 0.3,
            animal_bonus: 0.05,
            animal_cap: 4,
            pair_distance: 3.0,
            gathering_pairs: 2,
            pairs_target: 15.0,
            stage_radius: 10.0,
            open_area_min: 50.0,
            open_grid: 1.0,
            grid_resolution: 0.1,
        }
    }
}

impl ScoreConfig {
    /// Reads a config document; omitted keys keep their defaults.
    pub fn from_json(text: &str) -> Result<Self, MetricError> {
        let cfg: ScoreConfig =
            serde_json::from_str(text).map_err(|e| MetricError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), MetricError> {
        if self.sun_samples.is_empty() {
            return Err(MetricError::Config("no sun samples".into()));
        }
        for s in &self.sun_samples {
            s.check()?;
        }
        let total: f64 = self.sun_samples.iter().map(|s| s.weight).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(MetricError::Config(format!(
                "sun sample weights sum to {total}, expected 1"
            )));
        }
        let positive = [
            ("seat_target", self.seat_target),
            ("lighting_target", self.lighting_target),
            ("supervision_distance", self.supervision_distance),
            ("green_target", self.green_target),
            ("animal_bonus", self.animal_bonus),
            ("pair_distance", self.pair_distance),
            ("pairs_target", self.pairs_target),
            ("stage_radius", self.stage_radius),
            ("open_area_min", self.open_area_min),
            ("open_grid", self.open_grid),
            ("grid_resolution", self.grid_resolution),
        ];
        for (name, v) in positive
            .into_iter()
            .chain(self.saturation.iter().map(|(m, v)| (m.id(), v)))
        {
            if !(v.is_finite() && v > 0.0) {
                return Err(MetricError::Config(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.comfort_seat_weight) {
            return Err(MetricError::Config(
                "comfort_seat_weight outside [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Scores on `[1, 7]`, one per metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MetricVector(pub MetricMap<f64>);

impl MetricVector {
    pub fn get(&self, m: Metric) -> f64 {
        self.0.get(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Metric, f64)> + '_ {
        self.0.iter()
    }
}

/// Every intermediate quantity behind a [`MetricVector`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub shaded_fraction: f64,
    pub shaded_fraction_per_sample: Vec<f64>,
    pub seats: u32,
    pub shaded_seat_fraction: f64,
    pub lighting_coverage: f64,
    pub supervised_play_fraction: f64,
    pub play_capacity: u32,
    pub adult_activity_capacity: u32,
    pub green_area: f64,
    pub animal_count: u32,
    pub stage_present: bool,
    pub open_area_near_stage: f64,
    pub sociability_pairs: u32,
    /// Feature value `f` per metric before saturation.
    pub features: MetricMap<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub scores: MetricVector,
    pub breakdown: ScoreBreakdown,
}

fn saturate(f: f64, f_sat: f64) -> f64 {
    1.0 + 6.0 * (f / f_sat).clamp(0.0, 1.0)
}

/// Scores a scene. Scenes with validation errors are rejected with the full
/// issue list.
pub fn score_scene(
    scene: &Scene,
    catalog: &Catalog,
    config: &ScoreConfig,
) -> Result<ScoreReport, MetricError> {
    let issues = validate_scene(scene, catalog);
    if issues.iter().any(ValidationIssue::is_error) {
        return Err(MetricError::InvalidScene(issues));
    }
    config.validate()?;

    let items = coverage::resolved(scene, catalog)?;
    let (per_sample, shaded) = shadow::shaded_fractions(scene, catalog, config)?;
    let seating = seating_stats(scene, catalog, config)?;
    let lighting = lighting_coverage(scene, catalog)?;
    let supervised = coverage::supervised_play_fraction(&items, config);
    let pairs = coverage::sociability_pairs_with(scene, catalog, config)?;
    let open_area = coverage::open_area_near_stage(scene, &items, config);

    let play_capacity: u32 = items.iter().map(|(_, e)| e.play_capacity).sum();
    let adult_capacity: u32 = items.iter().map(|(_, e)| e.adult_activity_capacity).sum();
    let green_area: f64 = items
        .iter()
        .map(|(i, e)| e.green_area * i.pose.scale() * i.pose.scale())
        .sum();
    let animals = items
        .iter()
        .filter(|(_, e)| e.category == Category::Animal)
        .count() as u32;
    let stage_present = items
        .iter()
        .any(|(_, e)| e.has_tag(crate::catalog::tags::STAGE_LIKE));

    let mut features = MetricMap::splat(0.0);
    features.set(Metric::Shade, shaded);
    features.set(Metric::Play, f64::from(play_capacity));
    features.set(
        Metric::Comfort,
        config.comfort_seat_weight * (f64::from(seating.seats) / config.seat_target).min(1.0)
            + (1.0 - config.comfort_seat_weight) * seating.shaded_seat_fraction,
    );
    features.set(
        Metric::Safety,
        0.5 * lighting / config.lighting_target + 0.5 * supervised,
    );
    features.set(
        Metric::Nature,
        (green_area / scene.lot.area()) / config.green_target
            + config.animal_bonus * f64::from(animals.min(config.animal_cap)),
    );
    features.set(Metric::Recreation, f64::from(adult_capacity));
    let stage_term = if stage_present { 0.5 } else { 0.0 };
    let open_term = if stage_present && open_area >= config.open_area_min {
        0.5
    } else {
        0.0
    };
    features.set(Metric::Entertainment, stage_term + open_term);
    features.set(Metric::Sociability, f64::from(pairs) / config.pairs_target);

    let mut scores = MetricMap::splat(1.0);
    for m in Metric::ALL {
        scores.set(m, saturate(features.get(m), config.saturation.get(m)));
    }

    Ok(ScoreReport {
        scores: MetricVector(scores),
        breakdown: ScoreBreakdown {
            shaded_fraction: shaded,
            shaded_fraction_per_sample: per_sample,
            seats: seating.seats,
            shaded_seat_fraction: seating.shaded_seat_fraction,
            lighting_coverage: lighting,
            supervised_play_fraction: supervised,
            play_capacity,
            adult_activity_capacity: adult_capacity,
            green_area,
            animal_count: animals,
            stage_present,
            open_area_near_stage: open_area,
            sociability_pairs: pairs,
            features,
        },
    })
}
