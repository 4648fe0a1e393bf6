//! Score a scene file on the eight metrics and show the inputs behind each score.
//!
//! ```bash
//! cargo run --example score_scene
//! cargo run --example score_scene -- path/to/scene.json
//! ```

use lotforge::metrics::{score_scene, ScoreConfig};
use lotforge::scene::decode_scene;
use lotforge::{builtin_catalog, Metric};

fn main() -> anyhow::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/data/fixtures/garden-demo.scene.json"
        )
        .into()
    });
    let scene = decode_scene(&std::fs::read_to_string(&path)?)?;
    let catalog = builtin_catalog();
    let config = ScoreConfig::default();
    let report = score_scene(&scene, &catalog, &config)?;

    println!("{path}");
    for m in Metric::ALL {
        println!(
            "  {:<14}{:>5.2}   f = {:.4}",
            m.id(),
            report.scores.get(m),
            report.breakdown.features.get(m)
        );
    }
    let b = &report.breakdown;
    println!(
        "shaded fraction {:.4} per sun sample {:?}",
        b.shaded_fraction, b.shaded_fraction_per_sample
    );
    println!(
        "seats {}, {:.0}% shaded",
        b.seats,
        100.0 * b.shaded_seat_fraction
    );
    println!(
        "green area {:.1} m2, {} animals",
        b.green_area, b.animal_count
    );
    Ok(())
}
