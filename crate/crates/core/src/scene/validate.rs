use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{entry_footprint, InstanceId, Scene};
use crate::catalog::Catalog;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub severity: Severity,
    pub code: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_id: Option<InstanceId>,
    pub message: String,
}

impl ValidationIssue {
    fn error(code: &str, id: Option<&InstanceId>, message: String) -> Self {
        Self {
            severity: Severity::Error,
            code: code.to_string(),
            instance_id: id.cloned(),
            message,
        }
    }

    fn warning(code: &str, id: Option<&InstanceId>, message: String) -> Self {
        Self {
            severity: Severity::Warning,
            ..Self::error(code, id, message)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl std::fmt::Display for ValidationIssue {
    /// `error unknown-entry e003: ...`
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} {}", self.code)?;
        if let Some(id) = &self.instance_id {
            write!(f, " {id}")?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Checks a scene against a catalog. Issue codes:
///
/// | code               | severity | meaning                                    |
/// |--------------------|----------|--------------------------------------------|
/// | `duplicate-id`     | error    | two instances share an id                  |
/// | `unknown-entry`    | error    | entry id does not resolve in the catalog   |
/// | `off-lot`          | error    | footprint does not overlap the lot at all  |
/// | `partly-off-lot`   | warning  | footprint crosses the lot boundary         |
/// | `unknown-scenario` | warning  | scenario tag does not resolve              |
///
/// Issues are sorted by (severity, code, instance id).
pub fn validate_scene(scene: &Scene, catalog: &Catalog) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();

    let mut counts: BTreeMap<&InstanceId, usize> = BTreeMap::new();
    for inst in &scene.instances {
        *counts.entry(&inst.instance_id).or_default() += 1;
    }
    for (id, n) in counts.into_iter().filter(|(_, n)| *n > 1) {
        issues.push(ValidationIssue::error(
            "duplicate-id",
            Some(id),
            format!("instance id `{id}` is used {n} times"),
        ));
    }

    let lot = scene.lot.rect();
    let lot_poly = lot.to_polygon();
    for inst in &scene.instances {
        let Some(entry) = catalog.entry(&inst.entry_id) else {
            issues.push(ValidationIssue::error(
                "unknown-entry",
                Some(&inst.instance_id),
                format!("entry `{}` is not in the catalog", inst.entry_id),
            ));
            continue;
        };
        let fp = entry_footprint(entry.footprint_w, entry.footprint_d, &inst.pose);
        if !fp.overlaps_convex(&lot_poly) {
            issues.push(ValidationIssue::error(
                "off-lot",
                Some(&inst.instance_id),
                format!("`{}` lies entirely outside the lot", inst.entry_id),
            ));
        } else if !fp.vertices.iter().all(|v| lot.contains(*v)) {
            issues.push(ValidationIssue::warning(
                "partly-off-lot",
                Some(&inst.instance_id),
                format!("`{}` crosses the lot boundary", inst.entry_id),
            ));
        }
    }

    if let Some(sid) = &scene.scenario_id {
        if catalog.scenario(sid).is_none() {
            issues.push(ValidationIssue::warning(
                "unknown-scenario",
                None,
                format!("scenario `{sid}` is not in the catalog"),
            ));
        }
    }

    issues.sort_by(|a, b| {
        (a.severity, &a.code, &a.instance_id).cmp(&(b.severity, &b.code, &b.instance_id))
    });
    issues
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_catalog;
    use crate::scene::{create_scene, ElementInstance, LotSpec, Pose};

    fn inst(id: &str, entry: &str, x: f64, y: f64) -> ElementInstance {
        ElementInstance {
            instance_id: id.into(),
            entry_id: entry.into(),
            pose: Pose::at(x, y).unwrap(),
        }
    }

    #[test]
    fn empty_scene_has_no_issues() {
        let s = create_scene(LotSpec::default(), None);
        assert!(validate_scene(&s, &builtin_catalog()).is_empty());
    }

    #[test]
    fn dangling_entry() {
        let mut s = create_scene(LotSpec::default(), None);
        s.instances.push(inst("x1", "hovercraft", 5.0, 5.0));
        let issues = validate_scene(&s, &builtin_catalog());
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].code, "unknown-entry");
        assert!(issues[0].is_error());
    }

    #[test]
    fn duplicate_ids() {
        let mut s = create_scene(LotSpec::default(), None);
        s.instances.push(inst("x1", "bench.basic", 5.0, 5.0));
        s.instances.push(inst("x1", "bench.basic", 8.0, 5.0));
        let issues = validate_scene(&s, &builtin_catalog());
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].code, "duplicate-id");
    }

    #[test]
    fn ordering_and_warnings() {
        let mut s = create_scene(LotSpec::default(), Some("Z1".into()));
        s.instances.push(inst("b", "bench.basic", 500.0, 5.0));
        s.instances.push(inst("a", "grass.patch", 0.0, 0.0));
        s.instances.push(inst("c", "nope", 1.0, 1.0));
        let issues = validate_scene(&s, &builtin_catalog());
        let codes: Vec<_> = issues.iter().map(|i| i.code.as_str()).collect();
        assert_eq!(
            codes,
            [
                "off-lot",
                "unknown-entry",
                "partly-off-lot",
                "unknown-scenario"
            ]
        );
        assert_eq!(validate_scene(&s, &builtin_catalog()), issues);
    }
}
