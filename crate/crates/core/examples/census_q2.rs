//! The full census over GF(2): every one of the 2^20 - 1 cubic forms up to
//! scaling, checked against the predicted totals.
//!
//! ```text
//! cargo run --release --example census_q2
//! ```

use cubic_census::census::{run_census, verify_report, CensusConfig};
use cubic_census::gf::FieldCtx;
use cubic_census::ledger::predict;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = FieldCtx::of_order(2)?;
    let config = CensusConfig::exhaustive(&ctx).with_lines(true);
    let report = run_census(&config)?;

    println!("classes   {}", report.total_indexed);
    println!("smooth    {}", report.smooth_count);
    println!("point sum {}", report.point_sum);
    println!("average   {}", report.average.map(|a| a.to_string()).unwrap_or_default());
    println!("took      {:.1}s", report.run.duration_secs);
    println!("\n t  surfaces");
    for (t, n) in &report.trace_histogram {
        println!("{t:>2}  {n}");
    }
    println!("\nlines  surfaces");
    for (l, n) in report.line_histogram.as_ref().unwrap() {
        println!("{l:>5}  {n}");
    }

    let outcome = verify_report(&report, &predict(2)?);
    println!("\n{outcome}");
    if !outcome.passed() {
        std::process::exit(1);
    }
    Ok(())
}
