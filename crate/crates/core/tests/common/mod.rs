//! Independent oracles shared by the integration tests. Nothing here leans on
//! the crate's fast paths: field products go through schoolbook polynomial
//! multiplication, forms are evaluated monomial by monomial, and lines are
//! found as point sets.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cubic_census::forms::CubicForm;
use cubic_census::gf::{Elem, FieldCtx};

/// Exponent vectors of the cubic monomials in the crate's coefficient order:
/// descending lexicographic.
pub fn cubic_exponents() -> Vec<[u8; 4]> {
    let mut v = Vec::new();
    for a in (0..=3u8).rev() {
        for b in (0..=3 - a).rev() {
            for c in (0..=3 - a - b).rev() {
                v.push([a, b, c, 3 - a - b - c]);
            }
        }
    }
    v
}

/// Product in `GF(p)[x] / (modulus)` on coordinate vectors.
pub fn reference_mul(ctx: &FieldCtx, a: Elem, b: Elem) -> Elem {
    let p = ctx.p() as u64;
    let k = ctx.k() as usize;
    let m = ctx.modulus();
    let (ca, cb) = (ctx.coords(a), ctx.coords(b));
    let mut prod = vec![0u64; 2 * k];
    for i in 0..k {
        for j in 0..k {
            prod[i + j] = (prod[i + j] + ca[i] as u64 * cb[j] as u64) % p;
        }
    }
    for d in (k..2 * k).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        // modulus is monic of degree k, constant term first
        for (i, &mi) in m.iter().enumerate().take(k) {
            prod[d - k + i] = (prod[d - k + i] + (p - c) * mi as u64) % p;
        }
        prod[d] = 0;
    }
    ctx.from_coords(&prod[..k].iter().map(|&c| c as u32).collect::<Vec<_>>())
}

pub fn reference_add(ctx: &FieldCtx, a: Elem, b: Elem) -> Elem {
    let p = ctx.p();
    let c: Vec<u32> = ctx
        .coords(a)
        .iter()
        .zip(ctx.coords(b))
        .map(|(x, y)| (x + y) % p)
        .collect();
    ctx.from_coords(&c)
}

/// Runs the axiom suite exhaustively; the first violation is returned.
pub fn check_field_axioms(ctx: &FieldCtx) -> Result<(), String> {
    let q = ctx.q();
    let m = ctx.modulus();
    if m.len() != ctx.k() as usize + 1 || m[ctx.k() as usize] != 1 {
        return Err(format!("modulus {m:?} is not monic of degree {}", ctx.k()));
    }
    let els: Vec<Elem> = ctx.elements().collect();
    if els.len() as u32 != q {
        return Err(format!("{} elements, expected {q}", els.len()));
    }
    let (zero, one) = (ctx.zero(), ctx.one());
    for &a in &els {
        if ctx.add(a, zero) != a || ctx.mul(a, one) != a || ctx.mul(a, zero) != zero {
            return Err(format!("identity fails at {a:?}"));
        }
        if ctx.add(a, ctx.neg(a)) != zero {
            return Err(format!("additive inverse fails at {a:?}"));
        }
        if !a.is_zero() && ctx.mul(a, ctx.inv(a).unwrap()) != one {
            return Err(format!("multiplicative inverse fails at {a:?}"));
        }
        if ctx.pow(a, q as u64) != a {
            return Err(format!("a^q != a at {a:?}"));
        }
        for &b in &els {
            let s = ctx.add(a, b);
            let p = ctx.mul(a, b);
            if s.0 >= q || p.0 >= q {
                return Err("not closed".into());
            }
            if s != ctx.add(b, a) || p != ctx.mul(b, a) {
                return Err(format!("not commutative at {a:?}, {b:?}"));
            }
            if s != reference_add(ctx, a, b) || p != reference_mul(ctx, a, b) {
                return Err(format!("disagrees with the reference at {a:?}, {b:?}"));
            }
            if ctx.frobenius(s) != ctx.add(ctx.frobenius(a), ctx.frobenius(b)) {
                return Err(format!("Frobenius not additive at {a:?}, {b:?}"));
            }
            for &c in &els {
                if ctx.add(s, c) != ctx.add(a, ctx.add(b, c)) {
                    return Err(format!("addition not associative at {a:?}, {b:?}, {c:?}"));
                }
                if ctx.mul(p, c) != ctx.mul(a, ctx.mul(b, c)) {
                    return Err(format!("multiplication not associative at {a:?}, {b:?}, {c:?}"));
                }
                if ctx.mul(a, ctx.add(b, c)) != ctx.add(p, ctx.mul(a, c)) {
                    return Err(format!("not distributive at {a:?}, {b:?}, {c:?}"));
                }
            }
        }
    }
    Ok(())
}

pub fn eval(form: &CubicForm, x: &[Elem; 4]) -> Elem {
    let ctx = form.ctx();
    let mut acc = ctx.zero();
    for (c, e) in form.coeffs().iter().zip(cubic_exponents()) {
        let mut term = *c;
        for v in 0..4 {
            for _ in 0..e[v] {
                term = ctx.mul(term, x[v]);
            }
        }
        acc = ctx.add(acc, term);
    }
    acc
}

/// Scales so the first nonzero coordinate is 1.
pub fn normalize(ctx: &FieldCtx, x: [Elem; 4]) -> [Elem; 4] {
    let lead = *x.iter().find(|c| !c.is_zero()).expect("nonzero vector");
    let s = ctx.inv(lead).unwrap();
    x.map(|c| ctx.mul(c, s))
}

/// Projective points of `P^3(F_q)`, found by normalizing every nonzero vector.
pub fn all_points(ctx: &FieldCtx) -> Vec<[Elem; 4]> {
    let q = ctx.q();
    let mut set = BTreeSet::new();
    for n in 1..q.pow(4) {
        let x = [n % q, n / q % q, n / q / q % q, n / q / q / q].map(Elem);
        set.insert(normalize(ctx, x).map(|e| e.0));
    }
    set.into_iter().map(|x| x.map(Elem)).collect()
}

pub fn brute_points(form: &CubicForm) -> u64 {
    let ctx = form.ctx();
    let q = ctx.q();
    let zeros = (1..q.pow(4))
        .filter(|&n| {
            let x = [n % q, n / q % q, n / q / q % q, n / q / q / q].map(Elem);
            eval(form, &x).is_zero()
        })
        .count() as u64;
    zeros / (q as u64 - 1)
}

/// Lines of `P^3(F_q)` as sets of normalized points.
pub fn all_lines(ctx: &FieldCtx) -> BTreeSet<Vec<[u32; 4]>> {
    let pts = all_points(ctx);
    let mut lines = BTreeSet::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            lines.insert(span(ctx, a, b));
        }
    }
    lines
}

fn span(ctx: &FieldCtx, a: &[Elem; 4], b: &[Elem; 4]) -> Vec<[u32; 4]> {
    let mut set = BTreeSet::new();
    for s in ctx.elements() {
        for t in ctx.elements() {
            if s.is_zero() && t.is_zero() {
                continue;
            }
            let x: [Elem; 4] = std::array::from_fn(|v| ctx.add(ctx.mul(s, a[v]), ctx.mul(t, b[v])));
            set.insert(normalize(ctx, x).map(|e| e.0));
        }
    }
    set.into_iter().collect()
}

/// A line lies on the surface iff the cubic vanishes at more than three of
/// its points, so the check runs over `F_{q^2}`, where every line has at
/// least five.
pub fn brute_lines(form: &CubicForm) -> u64 {
    let ctx = form.ctx();
    let ext = FieldCtx::of_order(ctx.q() as u64 * ctx.q() as u64).unwrap();
    let emb = ctx.embedding_into(&ext).unwrap();
    let coeffs: Vec<Elem> = form.coeffs().iter().map(|&c| emb.apply(c)).collect();
    let lifted = CubicForm::from_slice(&ext, &coeffs).unwrap();
    let on: Vec<[Elem; 4]> = all_points(ctx)
        .into_iter()
        .filter(|x| eval(form, x).is_zero())
        .collect();
    let mut lines = BTreeSet::new();
    for (i, a) in on.iter().enumerate() {
        for b in &on[i + 1..] {
            let l = span(ctx, a, b);
            if lines.contains(&l) {
                continue;
            }
            let (a2, b2) = (a.map(|c| emb.apply(c)), b.map(|c| emb.apply(c)));
            let contained = ext.elements().all(|s| {
                ext.elements().all(|t| {
                    let x: [Elem; 4] = std::array::from_fn(|v| ext.add(ext.mul(s, a2[v]), ext.mul(t, b2[v])));
                    eval(&lifted, &x).is_zero()
                })
            });
            if contained {
                lines.insert(l);
            }
        }
    }
    lines.len() as u64
}

/// Singular points over `F_{q^d}` by exhaustive search, the form's
/// coefficients carried into the extension.
pub fn brute_singular_over(form: &CubicForm, ext: &FieldCtx) -> bool {
    let emb = form.ctx().embedding_into(ext).unwrap();
    let coeffs: Vec<Elem> = form.coeffs().iter().map(|&c| emb.apply(c)).collect();
    let lifted = CubicForm::from_slice(ext, &coeffs).unwrap();
    let partials = lifted.partials();
    let char3 = ext.p() == 3;
    all_points(ext).iter().any(|x| {
        partials.iter().all(|d| d.eval_coords(x).is_zero()) && (!char3 || eval(&lifted, x).is_zero())
    })
}
