//! Saving a report, verifying it from disk, and what a corrupted report
//! looks like to the verifier.
//!
//! ```text
//! cargo run --release --example verify_report
//! ```

use cubic_census::census::{run_census, verify_report, CensusConfig, CensusReport};
use cubic_census::gf::FieldCtx;
use cubic_census::ledger::predict;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("cubic-census-verify");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("q7.json");

    let ctx = FieldCtx::of_order(7)?;
    run_census(&CensusConfig::sample(&ctx, 20_000, 1))?.save(&path)?;
    println!("wrote {}", path.display());

    let report = CensusReport::load(&path)?;
    let pred = predict(7)?;
    let outcome = verify_report(&report, &pred);
    println!("{outcome}");

    let mut bad = report.clone();
    bad.trace_histogram.insert(5, 1);
    bad.smooth_count += 1;
    let outcome = verify_report(&bad, &pred);
    println!("after inserting a t = 5 surface:");
    for c in outcome.failures() {
        println!("  ({}) {}: expected {}, observed {}", c.id, c.description, c.expected, c.observed);
    }
    Ok(())
}
