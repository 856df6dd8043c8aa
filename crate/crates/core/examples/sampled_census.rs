//! A seeded sample of random cubic surfaces over GF(q) and the confidence
//! interval for the mean point count, which should cover q^2 + q + 1.
//!
//! ```text
//! cargo run --release --example sampled_census -- 5 200000 42
//! ```

use cubic_census::census::{run_census, CensusConfig};
use cubic_census::gf::FieldCtx;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let q: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5);
    let samples: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(50_000);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(42);

    let ctx = FieldCtx::of_order(q)?;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let report = run_census(&CensusConfig::sample(&ctx, samples, seed).with_partitions(threads))?;
    let stats = report.sample_stats.ok_or("too few smooth surfaces")?;

    let target = (q * q + q + 1) as f64;
    println!("GF({q}), {samples} samples, seed {seed}");
    println!("smooth fraction {:.4}", report.smooth_count as f64 / samples as f64);
    println!(
        "mean points {:.4}, 99% interval [{:.4}, {:.4}], target {target}",
        stats.mean, stats.ci_low, stats.ci_high
    );
    println!("target covered: {}", stats.contains(target));

    let smooth = report.smooth_count as f64;
    println!("\n t  fraction");
    for (t, n) in &report.trace_histogram {
        println!("{t:>2}  {:.5}", *n as f64 / smooth);
    }
    Ok(())
}
