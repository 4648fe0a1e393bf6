//! Replication check for the practice gate: does a candidate scene reproduce
//! a target scene closely enough?

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{ElementInstance, InstanceId, Scene, SceneError};
use crate::catalog::{tags, Catalog, EntryId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchTolerances {
    /// Meters.
    pub pos_eps: f64,
    /// Degrees.
    pub rot_eps: f64,
    pub scale_eps: f64,
}

impl Default for MatchTolerances {
    fn default() -> Self {
        Self {
            pos_eps: 1.0,
            rot_eps: 20.0,
            scale_eps: 0.25,
        }
    }
}

impl MatchTolerances {
    pub fn new(pos_eps: f64, rot_eps: f64, scale_eps: f64) -> Result<Self, SceneError> {
        for v in [pos_eps, rot_eps, scale_eps] {
            if !(v.is_finite() && v > 0.0) {
                return Err(SceneError::Pose(format!("tolerance {v} must be positive")));
            }
        }
        Ok(Self {
            pos_eps,
            rot_eps,
            scale_eps,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub target: InstanceId,
    pub candidate: InstanceId,
    pub position_delta: f64,
    pub rotation_delta: f64,
    pub scale_delta: f64,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub passed: bool,
    pub matched_pairs: Vec<MatchedPair>,
    /// Target instances with no counterpart in the candidate.
    pub missing: Vec<InstanceId>,
    /// Candidate instances left over after matching.
    pub extras: Vec<InstanceId>,
}

/// Smallest angle between two headings, in `[0, 180]`.
fn angular_delta(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

/// Pairs target and candidate instances of the same entry greedily: targets
/// are visited in ascending id order and each takes the nearest unmatched
/// candidate (ties broken by candidate id). The candidate must contain
/// exactly the target's multiset of entries; extras fail the match.
pub fn match_replication(
    candidate: &Scene,
    target: &Scene,
    tol: &MatchTolerances,
    catalog: &Catalog,
) -> MatchReport {
    let mut pool: BTreeMap<&EntryId, Vec<&ElementInstance>> = BTreeMap::new();
    for c in &candidate.instances {
        pool.entry(&c.entry_id).or_default().push(c);
    }
    for group in pool.values_mut() {
        group.sort_by(|a, b| a.instance_id.cmp(&b.instance_id));
    }

    let mut targets: Vec<&ElementInstance> = target.instances.iter().collect();
    targets.sort_by(|a, b| a.instance_id.cmp(&b.instance_id));

    let mut taken: BTreeSet<&InstanceId> = BTreeSet::new();
    let mut matched_pairs = Vec::new();
    let mut missing = Vec::new();

    for t in targets {
        let best = pool.get(&t.entry_id).and_then(|group| {
            group
                .iter()
                .filter(|c| !taken.contains(&c.instance_id))
                .map(|c| (c, c.pose.position().distance(t.pose.position())))
                // group is sorted by id, so min_by keeps the lowest id on ties
                .min_by(|a, b| a.1.total_cmp(&b.1))
        });
        let Some((c, dist)) = best else {
            missing.push(t.instance_id.clone());
            continue;
        };
        taken.insert(&c.instance_id);
        let radial = catalog
            .entry(&t.entry_id)
            .is_some_and(|e| e.has_tag(tags::RADIAL));
        let rotation_delta = if radial {
            0.0
        } else {
            angular_delta(t.pose.rotation_deg(), c.pose.rotation_deg())
        };
        let scale_delta = (t.pose.scale() - c.pose.scale()).abs();
        let within_tolerance =
            dist <= tol.pos_eps && rotation_delta <= tol.rot_eps && scale_delta <= tol.scale_eps;
        matched_pairs.push(MatchedPair {
            target: t.instance_id.clone(),
            candidate: c.instance_id.clone(),
            position_delta: dist,
            rotation_delta,
            scale_delta,
            within_tolerance,
        });
    }

    let mut extras: Vec<InstanceId> = candidate
        .instances
        .iter()
        .filter(|c| !taken.contains(&c.instance_id))
        .map(|c| c.instance_id.clone())
        .collect();
    extras.sort();

    let passed =
        missing.is_empty() && extras.is_empty() && matched_pairs.iter().all(|p| p.within_tolerance);
    MatchReport {
        passed,
        matched_pairs,
        missing,
        extras,
    }
}
