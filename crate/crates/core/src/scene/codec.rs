//! Canonical scene document (JSON, `format_version` "1").
//!
//! Encoding sorts instances by id and emits keys in a fixed order, so equal
//! scenes always produce identical bytes.

use serde::{Deserialize, Serialize};

use super::{quantize, ElementInstance, InstanceId, LotSpec, Pose, Scene, SceneError};
use crate::catalog::{EntryId, ScenarioId};
use crate::geometry::Vec2;

pub const FORMAT_VERSION: &str = "1";

#[derive(Serialize, Deserialize)]
struct SceneDocument {
    format_version: String,
    lot: LotDocument,
    scenario_id: Option<String>,
    instances: Vec<InstanceDocument>,
}

#[derive(Serialize, Deserialize)]
struct LotDocument {
    width: f64,
    depth: f64,
    #[serde(default = "default_location")]
    location: String,
}

fn default_location() -> String {
    super::DEFAULT_LOCATION.to_string()
}

#[derive(Serialize, Deserialize)]
struct InstanceDocument {
    id: String,
    entry: String,
    x: f64,
    y: f64,
    #[serde(default)]
    rot: f64,
    #[serde(default = "unit_scale")]
    scale: f64,
}

fn unit_scale() -> f64 {
    1.0
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: Option<serde_json::Value>,
}

pub fn encode_scene(scene: &Scene) -> String {
    let mut instances: Vec<&ElementInstance> = scene.instances.iter().collect();
    instances.sort_by(|a, b| a.instance_id.cmp(&b.instance_id));
    let doc = SceneDocument {
        format_version: FORMAT_VERSION.to_string(),
        lot: LotDocument {
            width: quantize(scene.lot.width()),
            depth: quantize(scene.lot.depth()),
            location: scene.lot.location_tag.clone(),
        },
        scenario_id: scene.scenario_id.as_ref().map(|s| s.0.clone()),
        instances: instances
            .into_iter()
            .map(|i| {
                let p = i.pose;
                InstanceDocument {
                    id: i.instance_id.0.clone(),
                    entry: i.entry_id.0.clone(),
                    x: quantize(p.position().x),
                    y: quantize(p.position().y),
                    rot: quantize(p.rotation_deg()),
                    scale: quantize(p.scale()),
                }
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("scene document serializes");
    out.push('\n');
    out
}

fn parse_error(e: serde_json::Error) -> SceneError {
    SceneError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses a scene document. Catalog references are not resolved here; run
/// [`super::validate_scene`] for that.
pub fn decode_scene(text: &str) -> Result<Scene, SceneError> {
    let probe: VersionProbe = serde_json::from_str(text).map_err(parse_error)?;
    match probe.format_version {
        Some(serde_json::Value::String(v)) if v == FORMAT_VERSION => {}
        Some(other) => {
            let shown = match other {
                serde_json::Value::String(s) => s,
                v => v.to_string(),
            };
            return Err(SceneError::Version(shown));
        }
        None => return Err(SceneError::Document("missing format_version".into())),
    }
    let doc: SceneDocument = serde_json::from_str(text).map_err(parse_error)?;
    let lot = LotSpec::with_location(doc.lot.width, doc.lot.depth, doc.lot.location)?;
    let instances = doc
        .instances
        .into_iter()
        .map(|i| {
            let pose = Pose::new(Vec2::new(i.x, i.y), i.rot, i.scale)
                .map_err(|e| SceneError::Document(format!("instance `{}`: {e}", i.id)))?;
            Ok(ElementInstance {
                instance_id: InstanceId(i.id),
                entry_id: EntryId(i.entry),
                pose,
            })
        })
        .collect::<Result<Vec<_>, SceneError>>()?;
    Ok(Scene {
        lot,
        scenario_id: doc.scenario_id.map(ScenarioId),
        instances,
        revision: 0,
    })
}
