//! Interrupting a census at a chunk boundary and resuming it from the
//! checkpoint file. The resumed report matches an uninterrupted run.
//!
//! ```text
//! cargo run --release --example checkpoint_resume
//! ```

use cubic_census::census::{run_census, run_census_until, CensusConfig, Checkpoint, RunStatus};
use cubic_census::gf::FieldCtx;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("cubic-census-resume");
    std::fs::create_dir_all(&dir)?;
    let checkpoint = dir.join("q4.ckpt");

    let ctx = FieldCtx::of_order(4)?;
    let config = CensusConfig::sample(&ctx, 40_000, 3).with_checkpoint(&checkpoint, 5_000);

    match run_census_until(&config, Some(12_000))? {
        RunStatus::Paused { next_index } => println!("paused before index {next_index}"),
        RunStatus::Complete(_) => unreachable!("stop index is inside the range"),
    }
    let stored = Checkpoint::load(&checkpoint)?;
    println!("checkpoint: next index {}, hash {}", stored.next_index, &stored.config_hash[..16]);

    let resumed = run_census(&config.clone().with_partitions(4).with_resume(&checkpoint))?;
    let straight = run_census(&CensusConfig::sample(&ctx, 40_000, 3))?;
    println!("resumed smooth count  {}", resumed.smooth_count);
    println!("straight smooth count {}", straight.smooth_count);
    println!("reports identical: {}", resumed.canonical_json() == straight.canonical_json());
    Ok(())
}
