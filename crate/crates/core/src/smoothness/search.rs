//! Search for singular points of `V(F)` over `GF(q^d)`, `d = 1..=depth`.
//!
//! Two implementations give the same answer: [`Searcher::scan`] walks
//! every point of `P^3(GF(q^d))` in canonical order, and [`Searcher::search`]
//! solves the partial-derivative system one fibre `{x0 = a0, x1 = a1}` at a
//! time with resultants in `x3`, so only fibres containing a solution cost
//! more than a handful of polynomial operations. Both return the first
//! singular point in canonical point order at the smallest degree.

use crate::forms::{monomials, CubicForm, Exponents, ProjPoint};
use crate::gf::{Elem, Embedding, FieldCtx, FieldError};

use super::upoly::UPoly;

/// A singular point found by the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Extension degree over the base field of the point's field.
    pub degree: u32,
    pub point: ProjPoint,
    /// `dF/dx_i` at the point, all zero.
    pub partial_values: [Elem; 4],
    /// `F` at the point (zero when the characteristic is 3 or the point is
    /// singular in characteristic not 3, by the Euler relation).
    pub form_value: Elem,
}

impl Witness {
    /// Re-evaluates the defining equations at the witness.
    pub fn recheck(&self, form: &CubicForm) -> bool {
        let ctx = self.point.ctx();
        let Ok(emb) = form.ctx().embedding_into(ctx) else {
            return false;
        };
        let lifted = form.coeffs().map(|c| emb.apply(c));
        let lifted = CubicForm::new(ctx, lifted);
        let x = self.point.coords();
        let partials_vanish = lifted
            .partials()
            .iter()
            .all(|d| d.eval_coords(x).is_zero());
        let needs_form = form.ctx().p() == 3;
        partials_vanish && (!needs_form || lifted.eval_coords(x).is_zero())
    }
}

struct Level {
    degree: u32,
    ctx: FieldCtx,
    embed: Embedding,
}

pub(crate) struct Searcher {
    base: FieldCtx,
    levels: Vec<Level>,
}

/// The equations of the singular locus over the base field.
struct System {
    /// Partials, linearly recombined so that at most the first has an `x3^2`
    /// term. Same common zero set as the original partials.
    quadrics: Vec<[Elem; 10]>,
    /// The form itself, required in characteristic 3.
    cubic: Option<[Elem; 20]>,
}

/// A polynomial in `x3` whose coefficients are polynomials in `x2`.
#[derive(Clone, Copy)]
struct FibrePoly {
    c: [UPoly; 4],
}

impl FibrePoly {
    fn x3_degree(&self) -> Option<usize> {
        (0..4).rev().find(|&i| !self.c[i].is_zero())
    }

    fn at(&self, ctx: &FieldCtx, x2: Elem) -> UPoly {
        let mut out = UPoly::ZERO;
        for (i, c) in self.c.iter().enumerate() {
            out.set_coeff(i, c.eval(ctx, x2));
        }
        out
    }
}

impl Searcher {
    pub(crate) fn new(base: &FieldCtx, depth: u32) -> Result<Searcher, FieldError> {
        let levels = (1..=depth)
            .map(|d| {
                let ctx = FieldCtx::new(base.p(), base.k() * d)?;
                let embed = base.embedding_into(&ctx)?;
                Ok(Level {
                    degree: d,
                    ctx,
                    embed,
                })
            })
            .collect::<Result<Vec<_>, FieldError>>()?;
        Ok(Searcher {
            base: base.clone(),
            levels,
        })
    }

    pub(crate) fn depth(&self) -> u32 {
        self.levels.len() as u32
    }

    fn system(&self, form: &CubicForm) -> System {
        let ctx = &self.base;
        let mut quadrics: Vec<[Elem; 10]> = form
            .partials()
            .iter()
            .map(|d| *d.coeffs())
            .filter(|c| c.iter().any(|x| !x.is_zero()))
            .collect();
        // x3^2 is the last quadratic monomial
        const X3SQ: usize = 9;
        if let Some(piv) = quadrics.iter().position(|q| !q[X3SQ].is_zero()) {
            quadrics.swap(0, piv);
            let inv = ctx.try_inv(quadrics[0][X3SQ]).unwrap();
            let pivot = quadrics[0];
            for q in quadrics.iter_mut().skip(1) {
                let f = ctx.mul(q[X3SQ], inv);
                if !f.is_zero() {
                    for j in 0..10 {
                        q[j] = ctx.sub(q[j], ctx.mul(f, pivot[j]));
                    }
                }
            }
            quadrics.retain(|c| c.iter().any(|x| !x.is_zero()));
            if quadrics.is_empty() || quadrics[0][X3SQ].is_zero() {
                unreachable!("pivot row cannot vanish");
            }
        }
        let cubic = (ctx.p() == 3).then(|| *form.coeffs());
        System { quadrics, cubic }
    }

    fn witness(&self, level: &Level, form: &CubicForm, coords: [Elem; 4]) -> Witness {
        let ctx = &level.ctx;
        let lifted = CubicForm::new(ctx, form.coeffs().map(|c| level.embed.apply(c)));
        let partial_values = lifted.partials().map(|d| d.eval_coords(&coords));
        Witness {
            degree: level.degree,
            point: ProjPoint::new(ctx, coords).expect("nonzero point"),
            partial_values,
            form_value: lifted.eval_coords(&coords),
        }
    }

    /// Literal scan of every point of `P^3(GF(q^d))`.
    pub(crate) fn scan(&self, form: &CubicForm) -> Option<Witness> {
        let p3 = self.base.p() == 3;
        for level in &self.levels {
            let ctx = &level.ctx;
            let lifted = CubicForm::new(ctx, form.coeffs().map(|c| level.embed.apply(c)));
            let partials = lifted.partials();
            for coords in crate::forms::point_coords(ctx.q()) {
                if partials.iter().all(|d| d.eval_coords(&coords).is_zero())
                    && (!p3 || lifted.eval_coords(&coords).is_zero())
                {
                    return Some(self.witness(level, form, coords));
                }
            }
        }
        None
    }

    /// Fibre-wise algebraic search; same result as [`Searcher::scan`].
    pub(crate) fn search(&self, form: &CubicForm) -> Option<Witness> {
        let system = self.system(form);
        for level in &self.levels {
            if let Some(coords) = solve_level(level, &system) {
                return Some(self.witness(level, form, coords));
            }
        }
        None
    }
}

struct LiftedSystem {
    quadrics: Vec<[Elem; 10]>,
    cubic: Option<[Elem; 20]>,
}

fn solve_level(level: &Level, system: &System) -> Option<[Elem; 4]> {
    let ctx = &level.ctx;
    let lift = |c: &[Elem]| c.iter().map(|&x| level.embed.apply(x)).collect::<Vec<_>>();
    let sys = LiftedSystem {
        quadrics: system
            .quadrics
            .iter()
            .map(|q| lift(q).try_into().unwrap())
            .collect(),
        cubic: system.cubic.map(|c| lift(&c).try_into().unwrap()),
    };
    // block [1 : a : x2 : x3]
    for a in ctx.elements() {
        if let Some((x2, x3)) = solve_fibre(ctx, &sys, Elem::ONE, a) {
            return Some([Elem::ONE, a, x2, x3]);
        }
    }
    // block [0 : 1 : x2 : x3]
    if let Some((x2, x3)) = solve_fibre(ctx, &sys, Elem::ZERO, Elem::ONE) {
        return Some([Elem::ZERO, Elem::ONE, x2, x3]);
    }
    // block [0 : 0 : 1 : x3]
    let polys = fibre_polys(ctx, &sys, Elem::ZERO, Elem::ZERO);
    if let Some(x3) = first_common_root(ctx, polys.iter().map(|p| p.at(ctx, Elem::ONE))) {
        return Some([Elem::ZERO, Elem::ZERO, Elem::ONE, x3]);
    }
    // [0 : 0 : 0 : 1]
    let apex = [Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ONE];
    let vanish_q = sys
        .quadrics
        .iter()
        .all(|q| eval_at(ctx, q, monomials(2), &apex).is_zero());
    let vanish_c = sys
        .cubic
        .as_ref()
        .map_or(true, |c| eval_at(ctx, c, monomials(3), &apex).is_zero());
    (vanish_q && vanish_c).then_some(apex)
}

fn eval_at(ctx: &FieldCtx, coeffs: &[Elem], monos: &[Exponents], x: &[Elem; 4]) -> Elem {
    coeffs
        .iter()
        .zip(monos)
        .filter(|(c, _)| !c.is_zero())
        .fold(Elem::ZERO, |acc, (&c, &e)| {
            ctx.add(acc, ctx.mul(c, crate::forms::monomial_value(ctx, e, x)))
        })
}

/// Restricts a form to `x0 = a0, x1 = a1`.
fn restrict(
    ctx: &FieldCtx,
    coeffs: &[Elem],
    monos: &[Exponents],
    pow0: &[Elem; 4],
    pow1: &[Elem; 4],
) -> FibrePoly {
    let mut out = FibrePoly {
        c: [UPoly::ZERO; 4],
    };
    for (&c, e) in coeffs.iter().zip(monos) {
        if c.is_zero() {
            continue;
        }
        let w = ctx.mul(c, ctx.mul(pow0[e[0] as usize], pow1[e[1] as usize]));
        if !w.is_zero() {
            out.c[e[3] as usize].add_to_coeff(ctx, e[2] as usize, w);
        }
    }
    out
}

fn powers(ctx: &FieldCtx, a: Elem) -> [Elem; 4] {
    let a2 = ctx.mul(a, a);
    [Elem::ONE, a, a2, ctx.mul(a2, a)]
}

fn fibre_polys(ctx: &FieldCtx, sys: &LiftedSystem, a0: Elem, a1: Elem) -> Vec<FibrePoly> {
    let (pow0, pow1) = (powers(ctx, a0), powers(ctx, a1));
    let mut polys: Vec<FibrePoly> = sys
        .quadrics
        .iter()
        .map(|q| restrict(ctx, q, monomials(2), &pow0, &pow1))
        .collect();
    if let Some(c) = &sys.cubic {
        polys.push(restrict(ctx, c, monomials(3), &pow0, &pow1));
    }
    polys
}

/// Smallest root common to all the univariate polynomials.
fn first_common_root(ctx: &FieldCtx, polys: impl Iterator<Item = UPoly>) -> Option<Elem> {
    let mut g = UPoly::ZERO;
    for p in polys {
        g = g.gcd(ctx, &p);
        if g.degree() == Some(0) {
            return None;
        }
    }
    g.first_root(ctx)
}

/// First `(x2, x3)` in index order solving the system on the fibre.
fn solve_fibre(ctx: &FieldCtx, sys: &LiftedSystem, a0: Elem, a1: Elem) -> Option<(Elem, Elem)> {
    let polys = fibre_polys(ctx, sys, a0, a1);
    let solve_at = |x2: Elem| first_common_root(ctx, polys.iter().map(|p| p.at(ctx, x2)));

    // A quadric of x3-degree exactly 1 pins x3 = -C/B wherever B(x2) != 0.
    let nq = sys.quadrics.len();
    let pivot = (0..nq).find(|&i| polys[i].x3_degree() == Some(1));
    let mut candidates: Vec<Elem> = match pivot {
        Some(li) => {
            let (c0, b0) = (polys[li].c[0], polys[li].c[1]);
            let neg_c0 = c0.scale(ctx, ctx.neg(Elem::ONE));
            let mut g = UPoly::ZERO;
            for (i, p) in polys.iter().enumerate() {
                if i == li {
                    continue;
                }
                g = g.gcd(ctx, &resultant_with_linear(ctx, p, &neg_c0, &b0));
                if g.degree() == Some(0) {
                    break;
                }
            }
            if g.is_zero() {
                return exhaustive_fibre(ctx, solve_at);
            }
            let mut cands = g.roots(ctx);
            cands.extend(b0.roots(ctx));
            cands
        }
        None => {
            let mut g = UPoly::ZERO;
            for p in &polys {
                if p.x3_degree().map_or(false, |d| d == 0) {
                    g = g.gcd(ctx, &p.c[0]);
                }
            }
            if g.is_zero() {
                return exhaustive_fibre(ctx, solve_at);
            }
            g.roots(ctx)
        }
    };
    candidates.sort_unstable();
    candidates.dedup();
    candidates
        .into_iter()
        .find_map(|x2| solve_at(x2).map(|x3| (x2, x3)))
}

fn exhaustive_fibre(
    ctx: &FieldCtx,
    solve_at: impl Fn(Elem) -> Option<Elem>,
) -> Option<(Elem, Elem)> {
    ctx.elements()
        .find_map(|x2| solve_at(x2).map(|x3| (x2, x3)))
}

/// `sum_j p_j (-C)^j B^{m-j}`, which at any `x2` with `B(x2) != 0` equals
/// `B^m p(x2, -C/B)`. Here `L = B x3 + C`.
fn resultant_with_linear(ctx: &FieldCtx, p: &FibrePoly, neg_c: &UPoly, b: &UPoly) -> UPoly {
    let Some(m) = p.x3_degree() else {
        return UPoly::ZERO;
    };
    let mut c_pow = [UPoly::constant(Elem::ONE); 4];
    let mut b_pow = [UPoly::constant(Elem::ONE); 4];
    for j in 1..=m {
        c_pow[j] = c_pow[j - 1].mul(ctx, neg_c);
        b_pow[j] = b_pow[j - 1].mul(ctx, b);
    }
    let mut acc = UPoly::ZERO;
    for j in 0..=m {
        if p.c[j].is_zero() {
            continue;
        }
        let term = p.c[j].mul(ctx, &c_pow[j]).mul(ctx, &b_pow[m - j]);
        acc = acc.add(ctx, &term);
    }
    acc
}
