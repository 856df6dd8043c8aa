//! The two smoothness tests side by side: a singular-point search over
//! GF(q^d) for d up to 4, and the rank of the Macaulay matrix of the partials.
//! They must agree on every form.
//!
//! ```text
//! cargo run --release --example smoothness_oracles -- 4 20000
//! ```

use std::collections::BTreeMap;
use std::time::Instant;

use cubic_census::census::sample_form;
use cubic_census::gf::FieldCtx;
use cubic_census::smoothness::{SmoothnessEngine, Strategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let q: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(4);
    let n: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5000);
    let ctx = FieldCtx::of_order(q)?;
    let engine = SmoothnessEngine::new(&ctx, Strategy::Search)?;

    let (mut t_search, mut t_rank) = (0.0, 0.0);
    let mut smooth = 0;
    let mut disagreements = 0;
    let mut witness_degrees: BTreeMap<u32, u64> = BTreeMap::new();
    for i in 0..n {
        let f = sample_form(&ctx, 7, i);
        let t = Instant::now();
        let by_search = engine.singular_search(&f)?;
        t_search += t.elapsed().as_secs_f64();
        let t = Instant::now();
        let by_rank = engine.macaulay_test(&f)?;
        t_rank += t.elapsed().as_secs_f64();

        if by_search.smooth != by_rank.smooth {
            disagreements += 1;
            println!("disagreement on {}", f.to_text());
        }
        match by_search.witness {
            Some(w) => {
                assert!(w.recheck(&f));
                *witness_degrees.entry(w.degree).or_default() += 1;
            }
            None => smooth += 1,
        }
    }

    println!("{n} random forms over GF({q}): {smooth} smooth, {disagreements} disagreements");
    println!("singular witnesses by field degree: {witness_degrees:?}");
    println!(
        "mean time per form: search {:.1} us, rank {:.1} us",
        t_search / n as f64 * 1e6,
        t_rank / n as f64 * 1e6
    );
    Ok(())
}
