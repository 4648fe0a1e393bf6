//! Run the survey analysis on a synthetic ratings file whose design means
//! reproduce the published per-scenario table, including careless raters
//! that the attention checks must remove.
//!
//! ```bash
//! cargo run --example analyze_ratings
//! ```

use lotforge::builtin_catalog;
use lotforge::survey::reference_means::{fixture, synthesize_ratings, SynthOptions};
use lotforge::survey::{analyze, ingest_ratings};

fn main() -> anyhow::Result<()> {
    let synthetic = synthesize_ratings(&fixture(), &SynthOptions::default())?;
    let mut csv = Vec::new();
    synthetic.write_csv(&mut csv)?;
    println!(
        "{} rows, {} raters",
        synthetic.len(),
        synthetic.raters().len()
    );

    // round trip through CSV like a real export would
    let dataset = ingest_ratings(csv.as_slice())?;
    let report = analyze(&dataset, &builtin_catalog(), None)?;
    print!("{}", report.to_text());
    Ok(())
}
