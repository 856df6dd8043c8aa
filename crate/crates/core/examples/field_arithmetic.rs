//! Arithmetic in GF(16) and the embedding of GF(4) into it.
//!
//! ```text
//! cargo run --example field_arithmetic
//! ```

use cubic_census::gf::{Elem, FieldCtx};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f16 = FieldCtx::of_order(16)?;
    println!("GF(16) = GF(2)[x] / ({:?}), constant term first", f16.modulus());
    println!("generator of the multiplicative group: {}", f16.format_elem(f16.generator()));

    let a = f16.parse_elem("1011")?;
    let b = f16.parse_elem("0110")?;
    println!("a = {}, b = {}", f16.format_elem(a), f16.format_elem(b));
    println!("a + b   = {}", f16.format_elem(f16.add(a, b)));
    println!("a * b   = {}", f16.format_elem(f16.mul(a, b)));
    println!("a / b   = {}", f16.format_elem(f16.div(a, b)?));
    println!("a^15    = {}", f16.format_elem(f16.pow(a, 15)));
    println!("Frob(a) = {}", f16.format_elem(f16.frobenius(a)));
    assert!(f16.inv(Elem::ZERO).is_err());

    // powers of x walk the whole multiplicative group
    let x = f16.x();
    let orbit: Vec<String> = (0..15).map(|e| f16.format_elem(f16.pow(x, e))).collect();
    println!("x^0..x^14: {}", orbit.join(" "));

    let f4 = FieldCtx::of_order(4)?;
    let emb = f4.embedding_into(&f16)?;
    println!("\nGF(4) -> GF(16), x maps to {}", f16.format_elem(emb.root()));
    for e in f4.elements() {
        println!("  {} -> {}", f4.format_elem(e), f16.format_elem(emb.apply(e)));
    }
    Ok(())
}
