//! The practice round: a participant must reproduce a reference scene before
//! starting. Shows what passes and what does not.
//!
//! ```bash
//! cargo run --example practice_gate
//! ```

use lotforge::builtin_catalog;
use lotforge::geometry::Vec2;
use lotforge::scene::{match_replication, remove_element, update_pose, MatchTolerances, Scene};

fn report(label: &str, candidate: &Scene, target: &Scene) {
    let r = match_replication(
        candidate,
        target,
        &MatchTolerances::default(),
        &builtin_catalog(),
    );
    println!(
        "{label:<28} passed={:<5} matched={} missing={:?} extras={:?}",
        r.passed,
        r.matched_pairs.len(),
        r.missing.iter().map(|i| i.as_str()).collect::<Vec<_>>(),
        r.extras.iter().map(|i| i.as_str()).collect::<Vec<_>>(),
    );
}

fn main() -> anyhow::Result<()> {
    let target = lotforge::service::practice_scene();
    report("exact copy", &target, &target);

    let lamp = &target.instances[2];
    let p = lamp.pose.position();
    let near = update_pose(
        &target,
        &lamp.instance_id,
        lamp.pose.with_position(Vec2::new(p.x + 0.3, p.y - 0.2))?,
    )?;
    report("lamp off by 0.36 m", &near, &target);

    let far = update_pose(
        &target,
        &lamp.instance_id,
        lamp.pose.with_position(Vec2::new(p.x + 3.0, p.y))?,
    )?;
    report("lamp off by 3 m", &far, &target);

    let turned = &target.instances[1];
    let rotated = update_pose(
        &target,
        &turned.instance_id,
        turned.pose.with_rotation(180.0)?,
    )?;
    report("bench turned around", &rotated, &target);

    report(
        "goat forgotten",
        &remove_element(&target, &target.instances[5].instance_id)?,
        &target,
    );
    Ok(())
}
