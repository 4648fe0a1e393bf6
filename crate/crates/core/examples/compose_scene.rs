//! Build a small scene step by step, validate it, and print the canonical JSON.
//!
//! ```bash
//! cargo run --example compose_scene
//! ```

use lotforge::builtin_catalog;
use lotforge::geometry::Vec2;
use lotforge::scene::{
    add_element, create_scene, encode_scene, remove_element, update_pose, validate_scene, LotSpec,
    Pose,
};

fn main() -> anyhow::Result<()> {
    let catalog = builtin_catalog();
    let lot = LotSpec::new(30.0, 20.0)?;
    let scene = create_scene(lot, Some("A4".into()));

    let (scene, oak) = add_element(&scene, &"tree.oak".into(), Pose::at(8.0, 12.0)?, &catalog)?;
    let (scene, bench) = add_element(
        &scene,
        &"bench.basic".into(),
        Pose::new(Vec2::new(10.0, 9.0), 90.0, 1.0)?,
        &catalog,
    )?;
    let (scene, _) = add_element(
        &scene,
        &"garden.bed.raised".into(),
        Pose::at(20.0, 6.0)?,
        &catalog,
    )?;
    let (scene, goat) = add_element(&scene, &"goat".into(), Pose::at(25.0, 15.0)?, &catalog)?;

    // nudge the bench under the canopy, then change our minds about the goat
    let pose = scene
        .instance(&bench)
        .expect("just added")
        .pose
        .with_position(Vec2::new(9.0, 10.0))?;
    let scene = update_pose(&scene, &bench, pose)?;
    let scene = remove_element(&scene, &goat)?;

    let issues = validate_scene(&scene, &catalog);
    println!(
        "{} instances, revision {}, {} issues",
        scene.instances.len(),
        scene.revision,
        issues.len()
    );
    for issue in &issues {
        println!("  {issue}");
    }
    println!("oak is {oak}");
    println!("{}", encode_scene(&scene));

    // unknown entries are refused at placement time
    if let Err(e) = add_element(&scene, &"tree.baobab".into(), Pose::at(1.0, 1.0)?, &catalog) {
        println!("refused: {e}");
    }
    Ok(())
}
