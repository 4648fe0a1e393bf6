//! Scene model: a lot plus the element instances placed on it.
//!
//! All operations take a scene by reference and return a new value; nothing
//! here mutates shared state.

mod codec;
mod matching;
mod validate;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, EntryId, ScenarioId};
use crate::geometry::{Polygon, Rect, Vec2};

pub use codec::{decode_scene, encode_scene, FORMAT_VERSION};
pub use matching::{match_replication, MatchReport, MatchTolerances, MatchedPair};
pub use validate::{validate_scene, Severity, ValidationIssue};

/// Poses and lot dimensions are stored at this resolution (six decimals),
/// which is also the precision of the scene document.
const STEPS_PER_UNIT: f64 = 1e6;

pub const MIN_SCALE: f64 = 0.5;
pub const MAX_SCALE: f64 = 2.0;
pub const MIN_LOT_SIDE: f64 = 5.0;
pub const MAX_LOT_SIDE: f64 = 200.0;
pub const DEFAULT_LOCATION: &str = "Los Angeles, CA";

pub(crate) fn quantize(v: f64) -> f64 {
    // `+ 0.0` folds -0.0 into 0.0 so the encoding never prints "-0.0".
    // Dividing by an exact power of ten yields the double nearest the
    // six-decimal value, which then prints with at most six decimals.
    (v * STEPS_PER_UNIT).round() / STEPS_PER_UNIT + 0.0
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SceneError {
    #[error("lot dimensions {width} x {depth} m outside [{MIN_LOT_SIDE}, {MAX_LOT_SIDE}]")]
    Dimension { width: f64, depth: f64 },
    #[error("invalid pose: {0}")]
    Pose(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(EntryId),
    #[error("`{entry}` at ({x}, {y}) lies entirely outside the lot")]
    Placement { entry: EntryId, x: f64, y: f64 },
    #[error("instance `{0}` not found")]
    NotFound(InstanceId),
    #[error("scene document parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported scene format version `{0}`")]
    Version(String),
    #[error("invalid scene document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InstanceId(pub String);

impl InstanceId {
    pub fn new(s: impl Into<String>) -> Self {
        Self(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for InstanceId {
    fn from(s: &str) -> Self {
        Self(s.to_string())
    }
}

/// Placement of an element: position in meters, counter-clockwise rotation
/// in degrees normalized to `[0, 360)`, and a uniform scale in `[0.5, 2.0]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    position: Vec2,
    rotation_deg: f64,
    scale: f64,
}

impl Pose {
    pub fn new(position: Vec2, rotation_deg: f64, scale: f64) -> Result<Self, SceneError> {
        if !position.is_finite() {
            return Err(SceneError::Pose("position must be finite".into()));
        }
        if !rotation_deg.is_finite() {
            return Err(SceneError::Pose("rotation must be finite".into()));
        }
        if !(scale.is_finite() && (MIN_SCALE..=MAX_SCALE).contains(&scale)) {
            return Err(SceneError::Pose(format!(
                "scale {scale} outside [{MIN_SCALE}, {MAX_SCALE}]"
            )));
        }
        let mut rot = quantize(rotation_deg.rem_euclid(360.0));
        if rot >= 360.0 {
            rot = 0.0;
        }
        Ok(Self {
            position: Vec2::new(quantize(position.x), quantize(position.y)),
            rotation_deg: rot,
            scale: quantize(scale),
        })
    }

    /// Unrotated, unit-scale pose at `(x, y)`.
    pub fn at(x: f64, y: f64) -> Result<Self, SceneError> {
        Self::new(Vec2::new(x, y), 0.0, 1.0)
    }

    pub fn position(&self) -> Vec2 {
        self.position
    }

    pub fn rotation_deg(&self) -> f64 {
        self.rotation_deg
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn with_position(&self, position: Vec2) -> Result<Self, SceneError> {
        Self::new(position, self.rotation_deg, self.scale)
    }

    pub fn with_rotation(&self, rotation_deg: f64) -> Result<Self, SceneError> {
        Self::new(self.position, rotation_deg, self.scale)
    }

    pub fn with_scale(&self, scale: f64) -> Result<Self, SceneError> {
        Self::new(self.position, self.rotation_deg, scale)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LotSpec {
    width: f64,
    depth: f64,
    pub location_tag: String,
}

impl LotSpec {
    pub fn new(width: f64, depth: f64) -> Result<Self, SceneError> {
        Self::with_location(width, depth, DEFAULT_LOCATION)
    }

    pub fn with_location(
        width: f64,
        depth: f64,
        location: impl Into<String>,
    ) -> Result<Self, SceneError> {
        let ok = |v: f64| v.is_finite() && (MIN_LOT_SIDE..=MAX_LOT_SIDE).contains(&v);
        if !(ok(width) && ok(depth)) {
            return Err(SceneError::Dimension { width, depth });
        }
        Ok(Self {
            width: quantize(width),
            depth: quantize(depth),
            location_tag: location.into(),
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn area(&self) -> f64 {
        self.width * self.depth
    }

    pub fn rect(&self) -> Rect {
        Rect::new(Vec2::ZERO, Vec2::new(self.width, self.depth))
    }
}

impl Default for LotSpec {
    /// A 40 m x 30 m infill parcel in Los Angeles.
    fn default() -> Self {
        Self::new(40.0, 30.0).expect("default lot is valid")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementInstance {
    pub instance_id: InstanceId,
    pub entry_id: EntryId,
    pub pose: Pose,
}

/// A design: one lot and the elements placed on it.
///
/// Equality ignores instance order and `revision`, which counts edits made
/// in this process and is not part of the saved document.
#[derive(Debug, Clone)]
pub struct Scene {
    pub lot: LotSpec,
    pub scenario_id: Option<ScenarioId>,
    pub instances: Vec<ElementInstance>,
    pub revision: u64,
}

impl PartialEq for Scene {
    fn eq(&self, other: &Self) -> bool {
        if self.lot != other.lot
            || self.scenario_id != other.scenario_id
            || self.instances.len() != other.instances.len()
        {
            return false;
        }
        let mut a: Vec<&ElementInstance> = self.instances.iter().collect();
        let mut b: Vec<&ElementInstance> = other.instances.iter().collect();
        a.sort_by(|x, y| x.instance_id.cmp(&y.instance_id));
        b.sort_by(|x, y| x.instance_id.cmp(&y.instance_id));
        a == b
    }
}

impl Scene {
    pub fn instance(&self, id: &InstanceId) -> Option<&ElementInstance> {
        self.instances.iter().find(|i| &i.instance_id == id)
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    fn next_instance_id(&self) -> InstanceId {
        let taken: BTreeSet<&str> = self
            .instances
            .iter()
            .map(|i| i.instance_id.as_str())
            .collect();
        let mut n = self.revision + 1;
        loop {
            let candidate = format!("e{n:03}");
            if !taken.contains(candidate.as_str()) {
                return InstanceId(candidate);
            }
            n += 1;
        }
    }
}

/// An empty scene at revision 0.
pub fn create_scene(lot: LotSpec, scenario_id: Option<ScenarioId>) -> Scene {
    Scene {
        lot,
        scenario_id,
        instances: Vec::new(),
        revision: 0,
    }
}

pub fn add_element(
    scene: &Scene,
    entry_id: &EntryId,
    pose: Pose,
    catalog: &Catalog,
) -> Result<(Scene, InstanceId), SceneError> {
    let entry = catalog
        .entry(entry_id)
        .ok_or_else(|| SceneError::UnknownEntry(entry_id.clone()))?;
    let footprint = entry_footprint(entry.footprint_w, entry.footprint_d, &pose);
    if !footprint.overlaps_convex(&scene.lot.rect().to_polygon()) {
        return Err(SceneError::Placement {
            entry: entry_id.clone(),
            x: pose.position.x,
            y: pose.position.y,
        });
    }
    let id = scene.next_instance_id();
    let mut next = scene.clone();
    next.instances.push(ElementInstance {
        instance_id: id.clone(),
        entry_id: entry_id.clone(),
        pose,
    });
    next.revision += 1;
    Ok((next, id))
}

/// Replaces an instance's pose. The pose bounds are enforced when the
/// [`Pose`] is built; lot overlap is left to [`validate_scene`].
pub fn update_pose(
    scene: &Scene,
    instance_id: &InstanceId,
    pose: Pose,
) -> Result<Scene, SceneError> {
    let mut next = scene.clone();
    let inst = next
        .instances
        .iter_mut()
        .find(|i| &i.instance_id == instance_id)
        .ok_or_else(|| SceneError::NotFound(instance_id.clone()))?;
    inst.pose = pose;
    next.revision += 1;
    Ok(next)
}

pub fn remove_element(scene: &Scene, instance_id: &InstanceId) -> Result<Scene, SceneError> {
    let pos = scene
        .instances
        .iter()
        .position(|i| &i.instance_id == instance_id)
        .ok_or_else(|| SceneError::NotFound(instance_id.clone()))?;
    let mut next = scene.clone();
    next.instances.remove(pos);
    next.revision += 1;
    Ok(next)
}

/// The instance's footprint rectangle after scale, rotation and translation,
/// counter-clockwise.
pub fn footprint_polygon(
    instance: &ElementInstance,
    catalog: &Catalog,
) -> Result<Polygon, SceneError> {
    let entry = catalog
        .entry(&instance.entry_id)
        .ok_or_else(|| SceneError::UnknownEntry(instance.entry_id.clone()))?;
    Ok(entry_footprint(
        entry.footprint_w,
        entry.footprint_d,
        &instance.pose,
    ))
}

pub(crate) fn entry_footprint(w: f64, d: f64, pose: &Pose) -> Polygon {
    let (hw, hd) = (w / 2.0, d / 2.0);
    let corners = [
        Vec2::new(-hw, -hd),
        Vec2::new(hw, -hd),
        Vec2::new(hw, hd),
        Vec2::new(-hw, hd),
    ];
    Polygon::new(
        corners
            .iter()
            .map(|c| (*c * pose.scale).rotated(pose.rotation_deg) + pose.position)
            .collect(),
    )
}
