//! Smoothness, point count, trace of Frobenius and rational lines of one
//! cubic surface.
//!
//! ```text
//! cargo run --example inspect_surface                      # Fermat over GF(2)
//! cargo run --example inspect_surface -- 5 "1,0,0,0,..."   # q and 20 coefficients
//! ```
//!
//! Coefficients follow the monomial order `x0^3, x0^2 x1, x0^2 x2, ..., x3^3`.

use cubic_census::census::trace_from_count;
use cubic_census::forms::{monomials, CubicForm, Incidence};
use cubic_census::gf::FieldCtx;
use cubic_census::smoothness::{SmoothnessEngine, Strategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let q: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let ctx = FieldCtx::of_order(q)?;
    let form = match args.next() {
        Some(text) => CubicForm::parse(&ctx, &text)?,
        None => CubicForm::fermat(&ctx),
    };

    let terms: Vec<String> = form
        .coeffs()
        .iter()
        .zip(monomials(3))
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, e)| {
            let mono: String = e
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(v, &d)| if d == 1 { format!("x{v}") } else { format!("x{v}^{d}") })
                .collect();
            format!("{}*{mono}", ctx.format_elem(*c))
        })
        .collect();
    println!("F = {} over GF({q})", terms.join(" + "));

    let engine = SmoothnessEngine::new(&ctx, Strategy::CrossCheck)?;
    let verdict = engine.is_smooth(&form)?;
    let rank = verdict.rank.expect("cross-check computes the rank");
    println!("smooth: {} (Macaulay rank {}/{})", verdict.smooth, rank.rank, rank.target);
    if let Some(w) = &verdict.witness {
        println!("singular point {} over GF({}^{})", w.point, q, w.degree);
    }

    let incidence = Incidence::new(&ctx, true);
    let points = incidence.count_points(&form)?;
    let lines = incidence.count_lines(&form)?;
    println!("points: {points}");
    println!("lines:  {lines}");
    if verdict.smooth {
        println!("trace:  {}", trace_from_count(points, q)?);
    }
    Ok(())
}
