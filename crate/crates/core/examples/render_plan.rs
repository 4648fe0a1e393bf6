//! Render the practice scene as an SVG plan with shadows and a legend.
//!
//! ```bash
//! cargo run --example render_plan -- plan.svg
//! ```

use lotforge::builtin_catalog;
use lotforge::metrics::SunSample;
use lotforge::render::{render_plan, RenderOptions};

fn main() -> anyhow::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "practice-plan.svg".into());
    let scene = lotforge::service::practice_scene();
    let options = RenderOptions {
        show_shadows: true,
        sun: Some(SunSample::parse_pair("35,240")?),
        legend: true,
    };
    let svg = render_plan(&scene, &builtin_catalog(), &options)?;
    std::fs::write(&out, &svg)?;
    println!("wrote {} bytes to {out}", svg.len());
    Ok(())
}
