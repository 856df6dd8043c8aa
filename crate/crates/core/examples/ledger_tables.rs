//! The cohomological bookkeeping: subtype table, spectral page, Poincare
//! polynomials and the point counts they predict.
//!
//! ```text
//! cargo run --example ledger_tables
//! ```

use cubic_census::ledger;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    ledger::self_check()?;

    println!("{:<6} {:>5} {:>5}  cohomology", "type", "dim A", "dim L");
    for r in ledger::subtype_table() {
        let dim = |d: Option<u32>| d.map_or("-".into(), |d| d.to_string());
        println!("{:<6} {:>5} {:>5}  {:?}", r.id, dim(r.dim_a), dim(r.dim_l), r.cohomology);
    }

    let page = ledger::assemble_e1();
    println!("\nE1 page\n{}", page.grid());
    println!("Betti degrees: {:?}", ledger::betti_degrees(&page));
    println!("differentials that could act: {}", page.potential_differentials().len());

    println!("\nP(X_p) = {}", ledger::expected_xp().display("t"));
    println!("P(U_p) = {}", ledger::expected_up().display("t"));
    println!("P(U)   = {}", ledger::poincare_u()?.display("t"));
    println!("P(M)   = {}", ledger::poincare_m().display("t"));
    println!("#M(F_q) = {}", ledger::count_m_factored().display("q"));
    println!("#U(F_q) = {}", ledger::count_u_factored().display("q"));

    println!("\n  q  smooth classes               point sum");
    for q in [2, 4, 5, 7, 8, 11, 13, 16] {
        let p = ledger::predict(q)?;
        println!("{q:>3}  {:<28} {}", p.smooth_count, p.point_sum);
    }
    Ok(())
}
