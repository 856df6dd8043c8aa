//! Homogeneous forms in four variables, projective points and lines of
//! `P^3(F_q)`, and the counting routines built on them.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::gf::{Elem, FieldCtx, FieldError};

pub const NUM_VARS: usize = 4;
pub const CUBIC_MONOMIALS: usize = 20;
pub const QUADRATIC_MONOMIALS: usize = 10;

/// Exponent vector of a monomial in `x0..x3`.
pub type Exponents = [u8; NUM_VARS];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("operands live in different fields")]
    ContextMismatch,
    #[error("the zero form does not define a surface")]
    ZeroForm,
    #[error("expected {expected} coefficients, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// All monomials of degree `deg`, sorted lexicographically descending by
/// exponent vector: `x0^d` first, `x3^d` last.
pub fn monomials(deg: usize) -> &'static [Exponents] {
    static TABLES: OnceLock<Vec<Vec<Exponents>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| (0..=6).map(build_monomials).collect());
    &tables[deg]
}

fn build_monomials(deg: usize) -> Vec<Exponents> {
    let d = deg as u8;
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            for c in (0..=d - a - b).rev() {
                out.push([a, b, c, d - a - b - c]);
            }
        }
    }
    out
}

/// Position of a monomial in [`monomials`] of its degree.
pub fn monomial_index(e: Exponents) -> usize {
    static INDEX: OnceLock<Vec<u16>> = OnceLock::new();
    let table = INDEX.get_or_init(|| {
        let mut t = vec![u16::MAX; 8 * 8 * 8 * 8];
        for deg in 0..=6 {
            for (i, m) in monomials(deg).iter().enumerate() {
                t[key(*m)] = i as u16;
            }
        }
        t
    });
    table[key(e)] as usize
}

#[inline]
fn key(e: Exponents) -> usize {
    ((e[0] as usize * 8 + e[1] as usize) * 8 + e[2] as usize) * 8 + e[3] as usize
}

/// Value of the monomial `e` at `coords`.
pub fn monomial_value(ctx: &FieldCtx, e: Exponents, coords: &[Elem; 4]) -> Elem {
    let mut acc = Elem::ONE;
    for (v, &x) in coords.iter().enumerate() {
        for _ in 0..e[v] {
            acc = ctx.mul(acc, x);
        }
    }
    acc
}

/// A cubic form `sum c_i M_i` over a finite field, in the pinned monomial order.
#[derive(Clone, PartialEq, Eq)]
pub struct CubicForm {
    ctx: FieldCtx,
    coeffs: [Elem; CUBIC_MONOMIALS],
}

/// A quadratic form, used for the partial derivatives of a cubic.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    ctx: FieldCtx,
    coeffs: [Elem; QUADRATIC_MONOMIALS],
}

impl CubicForm {
    pub fn new(ctx: &FieldCtx, coeffs: [Elem; CUBIC_MONOMIALS]) -> CubicForm {
        CubicForm { ctx: ctx.clone(), coeffs }
    }

    pub fn from_slice(ctx: &FieldCtx, coeffs: &[Elem]) -> Result<CubicForm, FormError> {
        let arr: [Elem; CUBIC_MONOMIALS] =
            coeffs.try_into().map_err(|_| FormError::WrongArity {
                expected: CUBIC_MONOMIALS,
                found: coeffs.len(),
            })?;
        Ok(CubicForm::new(ctx, arr))
    }

    pub fn zero(ctx: &FieldCtx) -> CubicForm {
        CubicForm::new(ctx, [Elem::ZERO; CUBIC_MONOMIALS])
    }

    /// Builds a form from `(coefficient, exponents)` terms, summing repeats.
    pub fn from_terms(ctx: &FieldCtx, terms: &[(i64, Exponents)]) -> CubicForm {
        let mut f = CubicForm::zero(ctx);
        for &(c, e) in terms {
            let i = monomial_index(e);
            f.coeffs[i] = ctx.add(f.coeffs[i], ctx.from_int(c));
        }
        f
    }

    /// `x0^3 + x1^3 + x2^3 + x3^3`.
    pub fn fermat(ctx: &FieldCtx) -> CubicForm {
        CubicForm::from_terms(
            ctx,
            &[(1, [3, 0, 0, 0]), (1, [0, 3, 0, 0]), (1, [0, 0, 3, 0]), (1, [0, 0, 0, 3])],
        )
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Elem; CUBIC_MONOMIALS] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, lambda: Elem) -> CubicForm {
        let coeffs = self.coeffs.map(|c| self.ctx.mul(c, lambda));
        CubicForm::new(&self.ctx, coeffs)
    }

    /// Rescales so the first nonzero coefficient is 1. The zero form is
    /// returned unchanged.
    pub fn normalized(&self) -> CubicForm {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(&lead) => self.scale(self.ctx.try_inv(lead).unwrap()),
            None => self.clone(),
        }
    }

    pub fn evaluate(&self, point: &ProjPoint) -> Result<Elem, FormError> {
        if point.ctx != self.ctx {
            return Err(FormError::ContextMismatch);
        }
        Ok(self.eval_coords(&point.coords))
    }

    /// Evaluates at an affine representative without checks.
    pub fn eval_coords(&self, x: &[Elem; 4]) -> Elem {
        let ctx = &self.ctx;
        let mut acc = Elem::ZERO;
        for (c, &e) in self.coeffs.iter().zip(monomials(3)) {
            if !c.is_zero() {
                acc = ctx.add(acc, ctx.mul(*c, monomial_value(ctx, e, x)));
            }
        }
        acc
    }

    /// Formal partial derivatives with coefficients reduced mod `p`.
    pub fn partials(&self) -> [QuadraticForm; 4] {
        let ctx = &self.ctx;
        std::array::from_fn(|v| {
            let mut coeffs = [Elem::ZERO; QUADRATIC_MONOMIALS];
            for (c, &e) in self.coeffs.iter().zip(monomials(3)) {
                if e[v] == 0 || c.is_zero() {
                    continue;
                }
                let mut d = e;
                d[v] -= 1;
                let i = monomial_index(d);
                coeffs[i] = ctx.add(coeffs[i], ctx.mul(*c, ctx.from_int(e[v] as i64)));
            }
            QuadraticForm { ctx: ctx.clone(), coeffs }
        })
    }

    /// Pulls the form back along a linear substitution: `(F o g)(x) = F(g x)`,
    /// with `g` given row-major.
    pub fn compose_linear(&self, g: &[[Elem; 4]; 4]) -> CubicForm {
        let ctx = &self.ctx;
        // each variable x_i maps to the linear form sum_j g[i][j] y_j
        let mut out = [Elem::ZERO; CUBIC_MONOMIALS];
        for (c, &e) in self.coeffs.iter().zip(monomials(3)) {
            if c.is_zero() {
                continue;
            }
            // expand the product of the three linear factors
            let mut terms: Vec<(Exponents, Elem)> = vec![([0; 4], *c)];
            for (v, &ev) in e.iter().enumerate() {
                for _ in 0..ev {
                    let mut next = Vec::with_capacity(terms.len() * 4);
                    for (m, a) in &terms {
                        for (j, &gij) in g[v].iter().enumerate() {
                            if gij.is_zero() {
                                continue;
                            }
                            let mut m2 = *m;
                            m2[j] += 1;
                            next.push((m2, ctx.mul(*a, gij)));
                        }
                    }
                    terms = next;
                }
            }
            for (m, a) in terms {
                let i = monomial_index(m);
                out[i] = ctx.add(out[i], a);
            }
        }
        CubicForm::new(ctx, out)
    }

    /// Parses 20 comma-separated base-`p` digit strings.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<CubicForm, FormError> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != CUBIC_MONOMIALS {
            return Err(FormError::WrongArity {
                expected: CUBIC_MONOMIALS,
                found: parts.len(),
            });
        }
        let coeffs = parts
            .iter()
            .map(|s| ctx.parse_elem(s))
            .collect::<Result<Vec<_>, _>>()?;
        CubicForm::from_slice(ctx, &coeffs)
    }

    pub fn to_text(&self) -> String {
        self.coeffs
            .iter()
            .map(|&c| self.ctx.format_elem(c))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Debug for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubicForm[{:?}]({})", self.ctx, self.to_text())
    }
}

impl QuadraticForm {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Elem; QUADRATIC_MONOMIALS] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval_coords(&self, x: &[Elem; 4]) -> Elem {
        let ctx = &self.ctx;
        self.coeffs
            .iter()
            .zip(monomials(2))
            .filter(|(c, _)| !c.is_zero())
            .fold(Elem::ZERO, |acc, (c, &e)| {
                ctx.add(acc, ctx.mul(*c, monomial_value(ctx, e, x)))
            })
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self.coeffs.iter().map(|&c| self.ctx.format_elem(c)).collect();
        write!(f, "QuadraticForm[{:?}]({})", self.ctx, text.join(","))
    }
}

/// Checks the Euler relation `sum x_i dF/dx_i = 3F` coefficient-wise.
pub fn euler_identity_holds(form: &CubicForm) -> bool {
    let ctx = form.ctx();
    let mut lhs = [Elem::ZERO; CUBIC_MONOMIALS];
    for (v, partial) in form.partials().iter().enumerate() {
        for (c, &e) in partial.coeffs().iter().zip(monomials(2)) {
            let mut m = e;
            m[v] += 1;
            let i = monomial_index(m);
            lhs[i] = ctx.add(lhs[i], *c);
        }
    }
    let three = ctx.from_int(3);
    lhs.iter()
        .zip(form.coeffs())
        .all(|(l, c)| *l == ctx.mul(three, *c))
}

/// A point of `P^3`, normalized so its first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq)]
pub struct ProjPoint {
    ctx: FieldCtx,
    coords: [Elem; 4],
}

impl ProjPoint {
    /// Normalizes an arbitrary nonzero representative; `None` for the zero vector.
    pub fn new(ctx: &FieldCtx, coords: [Elem; 4]) -> Option<ProjPoint> {
        let lead = *coords.iter().find(|c| !c.is_zero())?;
        let inv = ctx.try_inv(lead)?;
        Some(ProjPoint {
            ctx: ctx.clone(),
            coords: coords.map(|c| ctx.mul(c, inv)),
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coords(&self) -> &[Elem; 4] {
        &self.coords
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|&c| self.ctx.format_elem(c)).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

/// Number of points of `P^3(F_q)`.
pub fn num_points(q: u64) -> u64 {
    q * q * q + q * q + q + 1
}

/// Number of lines of `P^3(F_q)`.
pub fn num_lines(q: u64) -> u64 {
    (q * q + 1) * (q * q + q + 1)
}

/// Normalized coordinate vectors of `P^3(F_q)` in the canonical order:
/// blocks by leading position (`[1:a:b:c]`, `[0:1:b:c]`, `[0:0:1:c]`,
/// `[0:0:0:1]`), lexicographic in element index within a block.
pub fn point_coords(q: u32) -> impl Iterator<Item = [Elem; 4]> {
    (0..4usize).flat_map(move |lead| {
        let free = 3 - lead;
        let count = (q as u64).pow(free as u32);
        (0..count).map(move |mut n| {
            let mut c = [Elem::ZERO; 4];
            c[lead] = Elem::ONE;
            for slot in (lead + 1..4).rev() {
                c[slot] = Elem((n % q as u64) as u32);
                n /= q as u64;
            }
            c
        })
    })
}

/// Every point of `P^3(F_q)` once, in the canonical order.
pub fn enum_points(ctx: &FieldCtx) -> impl Iterator<Item = ProjPoint> + '_ {
    point_coords(ctx.q()).map(move |coords| ProjPoint {
        ctx: ctx.clone(),
        coords,
    })
}

/// A line of `P^3`, stored as the reduced row echelon basis of its 2-plane.
#[derive(Clone, PartialEq, Eq)]
pub struct LineRep {
    ctx: FieldCtx,
    rows: [[Elem; 4]; 2],
}

impl LineRep {
    /// Builds the canonical representative of the span of two vectors;
    /// `None` if they are dependent.
    pub fn through(ctx: &FieldCtx, a: [Elem; 4], b: [Elem; 4]) -> Option<LineRep> {
        let mut m = [a, b];
        let mut row = 0;
        for col in 0..4 {
            if row == 2 {
                break;
            }
            let Some(piv) = (row..2).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, piv);
            let inv = ctx.try_inv(m[row][col])?;
            m[row] = m[row].map(|x| ctx.mul(x, inv));
            for other in 0..2 {
                if other != row && !m[other][col].is_zero() {
                    let f = m[other][col];
                    for j in 0..4 {
                        m[other][j] = ctx.sub(m[other][j], ctx.mul(f, m[row][j]));
                    }
                }
            }
            row += 1;
        }
        (row == 2).then(|| LineRep { ctx: ctx.clone(), rows: m })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn rows(&self) -> &[[Elem; 4]; 2] {
        &self.rows
    }

    /// The point `s v1 + u v2`.
    pub fn point_at(&self, s: Elem, u: Elem) -> Option<ProjPoint> {
        let ctx = &self.ctx;
        let c = std::array::from_fn(|j| {
            ctx.add(ctx.mul(s, self.rows[0][j]), ctx.mul(u, self.rows[1][j]))
        });
        ProjPoint::new(ctx, c)
    }
}

impl fmt::Debug for LineRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[Elem; 4]| {
            r.iter()
                .map(|&c| self.ctx.format_elem(c))
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "Line[({}),({})]", row(&self.rows[0]), row(&self.rows[1]))
    }
}

/// All lines of `P^3(F_q)` once, grouped by pivot columns.
pub fn enum_lines(ctx: &FieldCtx) -> impl Iterator<Item = LineRep> + '_ {
    const PIVOTS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let q = ctx.q() as u64;
    PIVOTS.into_iter().flat_map(move |(i, j)| {
        // free entries: row 0 right of i except column j, row 1 right of j
        let free: Vec<(usize, usize)> = (i + 1..4)
            .filter(|&c| c != j)
            .map(|c| (0, c))
            .chain((j + 1..4).map(|c| (1, c)))
            .collect();
        let count = q.pow(free.len() as u32);
        (0..count).map(move |mut n| {
            let mut rows = [[Elem::ZERO; 4]; 2];
            rows[0][i] = Elem::ONE;
            rows[1][j] = Elem::ONE;
            for &(r, c) in free.iter().rev() {
                rows[r][c] = Elem((n % q) as u32);
                n /= q;
            }
            LineRep {
                ctx: ctx.clone(),
                rows,
            }
        })
    })
}

/// Coefficients `(s^3, s^2 u, s u^2, u^3)` of `F(s v1 + u v2)`.
pub fn restrict_to_line(form: &CubicForm, line: &LineRep) -> Result<[Elem; 4], FormError> {
    if form.ctx != line.ctx {
        return Err(FormError::ContextMismatch);
    }
    let ctx = form.ctx();
    let mut out = [Elem::ZERO; 4];
    for (c, &e) in form.coeffs().iter().zip(monomials(3)) {
        if c.is_zero() {
            continue;
        }
        // binary cubic: product of the linear forms (s v1_i + u v2_i)
        let mut poly = [*c, Elem::ZERO, Elem::ZERO, Elem::ZERO];
        let mut deg = 0;
        for (v, &ev) in e.iter().enumerate() {
            for _ in 0..ev {
                let (a, b) = (line.rows[0][v], line.rows[1][v]);
                let mut next = [Elem::ZERO; 4];
                for t in 0..=deg {
                    next[t] = ctx.add(next[t], ctx.mul(poly[t], a));
                    next[t + 1] = ctx.add(next[t + 1], ctx.mul(poly[t], b));
                }
                poly = next;
                deg += 1;
            }
        }
        for t in 0..4 {
            out[t] = ctx.add(out[t], poly[t]);
        }
    }
    Ok(out)
}

/// Line tables are built only up to this many lines; larger fields restrict
/// the form to each line on the fly.
const LINE_TABLE_LIMIT: u64 = 1 << 20;

/// Precomputed point and line data for one field, for fast repeated counting.
pub struct Incidence {
    ctx: FieldCtx,
    /// Cubic monomial values, `CUBIC_MONOMIALS` per point.
    point_monomials: Vec<Elem>,
    /// Restriction of each cubic monomial to each line: per line, 4 rows of
    /// `CUBIC_MONOMIALS` coefficients.
    line_restrictions: Option<Vec<Elem>>,
    /// GF(2) fast path: per point, the set of monomials equal to 1.
    binary_points: Option<Vec<u32>>,
    binary_lines: Option<Vec<[u32; 4]>>,
}

impl Incidence {
    pub fn new(ctx: &FieldCtx, with_lines: bool) -> Incidence {
        let mut point_monomials = Vec::with_capacity(num_points(ctx.q() as u64) as usize * 20);
        for coords in point_coords(ctx.q()) {
            for &e in monomials(3) {
                point_monomials.push(monomial_value(ctx, e, &coords));
            }
        }
        let tabulate = with_lines && num_lines(ctx.q() as u64) <= LINE_TABLE_LIMIT;
        let line_restrictions = tabulate.then(|| {
            let mut out = Vec::new();
            for line in enum_lines(ctx) {
                let mut rows = vec![Elem::ZERO; 4 * CUBIC_MONOMIALS];
                for m in 0..CUBIC_MONOMIALS {
                    let mut unit = CubicForm::zero(ctx);
                    unit.coeffs[m] = Elem::ONE;
                    let r = restrict_to_line(&unit, &line).expect("same field");
                    for t in 0..4 {
                        rows[t * CUBIC_MONOMIALS + m] = r[t];
                    }
                }
                out.extend(rows);
            }
            out
        });
        let prime2 = ctx.q() == 2;
        let to_mask = |vals: &[Elem]| {
            vals.iter()
                .enumerate()
                .fold(0u32, |m, (i, v)| m | ((v.0 & 1) << i))
        };
        let binary_points =
            prime2.then(|| point_monomials.chunks(CUBIC_MONOMIALS).map(to_mask).collect());
        let binary_lines = match (&line_restrictions, prime2) {
            (Some(lr), true) => Some(
                lr.chunks(4 * CUBIC_MONOMIALS)
                    .map(|rows| std::array::from_fn(|t| to_mask(&rows[t * 20..(t + 1) * 20])))
                    .collect(),
            ),
            _ => None,
        };
        Incidence {
            ctx: ctx.clone(),
            point_monomials,
            line_restrictions,
            binary_points,
            binary_lines,
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Whether line counts come from a precomputed table.
    pub fn has_line_table(&self) -> bool {
        self.line_restrictions.is_some()
    }

    fn check(&self, form: &CubicForm) -> Result<(), FormError> {
        if form.ctx != self.ctx {
            return Err(FormError::ContextMismatch);
        }
        if form.is_zero() {
            return Err(FormError::ZeroForm);
        }
        Ok(())
    }

    pub fn count_points(&self, form: &CubicForm) -> Result<u64, FormError> {
        self.check(form)?;
        if let Some(bp) = &self.binary_points {
            let mask = binary_mask(form);
            return Ok(bp.iter().filter(|&&m| (m & mask).count_ones() % 2 == 0).count() as u64);
        }
        let ctx = &self.ctx;
        let nz: Vec<(usize, Elem)> = form
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, *c))
            .collect();
        Ok(self
            .point_monomials
            .chunks_exact(CUBIC_MONOMIALS)
            .filter(|vals| {
                nz.iter()
                    .fold(Elem::ZERO, |acc, &(i, c)| ctx.add(acc, ctx.mul(c, vals[i])))
                    .is_zero()
            })
            .count() as u64)
    }

    /// Number of lines contained in `V(F)`. Without a line table this walks
    /// every line of `P^3(F_q)`.
    pub fn count_lines(&self, form: &CubicForm) -> Result<u64, FormError> {
        self.check(form)?;
        if let Some(bl) = &self.binary_lines {
            let mask = binary_mask(form);
            return Ok(bl
                .iter()
                .filter(|rows| rows.iter().all(|&r| (r & mask).count_ones() % 2 == 0))
                .count() as u64);
        }
        let Some(lr) = &self.line_restrictions else {
            return Ok(enum_lines(&self.ctx)
                .filter(|l| restrict_to_line(form, l).unwrap().iter().all(|c| c.is_zero()))
                .count() as u64);
        };
        let ctx = &self.ctx;
        Ok(lr
            .chunks_exact(4 * CUBIC_MONOMIALS)
            .filter(|rows| {
                rows.chunks_exact(CUBIC_MONOMIALS).all(|row| {
                    row.iter()
                        .zip(form.coeffs())
                        .fold(Elem::ZERO, |acc, (r, c)| ctx.add(acc, ctx.mul(*r, *c)))
                        .is_zero()
                })
            })
            .count() as u64)
    }
}

fn binary_mask(form: &CubicForm) -> u32 {
    form.coeffs()
        .iter()
        .enumerate()
        .fold(0u32, |m, (i, c)| m | ((c.0 & 1) << i))
}

/// Number of points of `V(F)` in `P^3(F_q)`.
pub fn count_points(form: &CubicForm) -> Result<u64, FormError> {
    if form.is_zero() {
        return Err(FormError::ZeroForm);
    }
    Ok(enum_points(form.ctx())
        .filter(|p| form.eval_coords(p.coords()).is_zero())
        .count() as u64)
}

/// Number of lines of `P^3(F_q)` contained in `V(F)`.
pub fn count_lines(form: &CubicForm) -> Result<u64, FormError> {
    if form.is_zero() {
        return Err(FormError::ZeroForm);
    }
    let mut n = 0;
    for line in enum_lines(form.ctx()) {
        if restrict_to_line(form, &line)?.iter().all(|c| c.is_zero()) {
            n += 1;
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> FieldCtx {
        FieldCtx::of_order(q).unwrap()
    }

    fn x0x1x2(ctx: &FieldCtx) -> CubicForm {
        CubicForm::from_terms(ctx, &[(1, [1, 1, 1, 0])])
    }

    fn x0_cubed(ctx: &FieldCtx) -> CubicForm {
        CubicForm::from_terms(ctx, &[(1, [3, 0, 0, 0])])
    }

    fn pt(ctx: &FieldCtx, c: [u32; 4]) -> ProjPoint {
        ProjPoint::new(ctx, c.map(Elem)).unwrap()
    }

    #[test]
    fn monomial_order_is_pinned() {
        let m3 = monomials(3);
        assert_eq!(m3.len(), 20);
        assert_eq!(m3[0], [3, 0, 0, 0]);
        assert_eq!(m3[1], [2, 1, 0, 0]);
        assert_eq!(m3[5], [1, 1, 1, 0]);
        assert_eq!(m3[9], [1, 0, 0, 2]);
        assert_eq!(m3[14], [0, 1, 1, 1]);
        assert_eq!(m3[19], [0, 0, 0, 3]);
        assert_eq!(monomials(2).len(), 10);
        assert_eq!(monomials(4).len(), 35);
        assert_eq!(monomials(5).len(), 56);
        assert_eq!(monomials(6).len(), 84);
        for d in 0..=6 {
            for (i, &e) in monomials(d).iter().enumerate() {
                assert_eq!(monomial_index(e), i);
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        let f2 = gf(2);
        let fermat = CubicForm::fermat(&f2);
        assert_eq!(fermat.evaluate(&pt(&f2, [1, 1, 0, 0])).unwrap(), Elem::ZERO);
        assert_eq!(
            CubicForm::zero(&f2).evaluate(&pt(&f2, [1, 0, 1, 1])).unwrap(),
            Elem::ZERO
        );
        assert_eq!(x0_cubed(&f2).evaluate(&pt(&f2, [1, 0, 0, 0])).unwrap(), Elem::ONE);
        let f3 = gf(3);
        assert_eq!(
            fermat.evaluate(&pt(&f3, [1, 1, 0, 0])),
            Err(FormError::ContextMismatch)
        );
    }

    #[test]
    fn partials_examples() {
        let f2 = gf(2);
        let d = x0_cubed(&f2).partials();
        let mut expect = [Elem::ZERO; 10];
        expect[monomial_index([2, 0, 0, 0])] = Elem::ONE;
        assert_eq!(d[0].coeffs(), &expect);
        assert!(d[1].is_zero() && d[2].is_zero() && d[3].is_zero());

        let f5 = gf(5);
        let d = x0x1x2(&f5).partials();
        let single = |e: Exponents| {
            let mut c = [Elem::ZERO; 10];
            c[monomial_index(e)] = Elem::ONE;
            c
        };
        assert_eq!(d[0].coeffs(), &single([0, 1, 1, 0]));
        assert_eq!(d[1].coeffs(), &single([1, 0, 1, 0]));
        assert_eq!(d[2].coeffs(), &single([1, 1, 0, 0]));
        assert!(d[3].is_zero());

        // x0^2 x1 over GF(5): 2 x0 x1 * x0 + x0^2 * x1 = 3 x0^2 x1
        let f = CubicForm::from_terms(&f5, &[(1, [2, 1, 0, 0])]);
        assert!(euler_identity_holds(&f));
    }

    #[test]
    fn point_and_line_cardinalities() {
        for q in [2u64, 3, 4, 5] {
            let ctx = gf(q);
            let pts: Vec<_> = enum_points(&ctx).collect();
            assert_eq!(pts.len() as u64, num_points(q));
            let set: std::collections::HashSet<_> = pts.iter().map(|p| *p.coords()).collect();
            assert_eq!(set.len(), pts.len());
            let lines: Vec<_> = enum_lines(&ctx).collect();
            assert_eq!(lines.len() as u64, num_lines(q));
            let set: std::collections::HashSet<_> = lines.iter().map(|l| *l.rows()).collect();
            assert_eq!(set.len(), lines.len());
        }
        assert_eq!(num_points(2), 15);
        assert_eq!(num_points(3), 40);
        assert_eq!(num_points(4), 85);
        assert_eq!(num_lines(2), 35);
        assert_eq!(num_lines(3), 130);
        assert_eq!(num_lines(4), 357);
    }

    #[test]
    fn enumerated_lines_are_canonical() {
        let ctx = gf(3);
        for line in enum_lines(&ctx) {
            let [a, b] = *line.rows();
            assert_eq!(LineRep::through(&ctx, a, b).unwrap(), line);
            // any other basis of the same plane gives the same representative
            let c = std::array::from_fn(|j| ctx.add(a[j], ctx.mul(ctx.from_int(2), b[j])));
            assert_eq!(LineRep::through(&ctx, c, b).unwrap(), line);
        }
    }

    #[test]
    fn counting_examples() {
        let f2 = gf(2);
        assert_eq!(count_points(&CubicForm::fermat(&f2)).unwrap(), 7);
        assert_eq!(count_points(&x0_cubed(&f2)).unwrap(), 7);
        assert_eq!(count_points(&x0x1x2(&f2)).unwrap(), 13);
        assert_eq!(count_points(&CubicForm::zero(&f2)), Err(FormError::ZeroForm));
        assert_eq!(count_lines(&CubicForm::fermat(&f2)).unwrap(), 3);
        assert_eq!(count_lines(&x0_cubed(&f2)).unwrap(), 7);
        assert_eq!(count_lines(&CubicForm::zero(&f2)), Err(FormError::ZeroForm));
    }

    #[test]
    fn restriction_examples() {
        let f2 = gf(2);
        let e = |v: [u32; 4]| v.map(Elem);
        let l = LineRep::through(&f2, e([1, 1, 0, 0]), e([0, 0, 1, 1])).unwrap();
        assert_eq!(restrict_to_line(&CubicForm::fermat(&f2), &l).unwrap(), [Elem::ZERO; 4]);
        let l = LineRep::through(&f2, e([0, 1, 0, 0]), e([0, 0, 1, 0])).unwrap();
        assert_eq!(restrict_to_line(&x0_cubed(&f2), &l).unwrap(), [Elem::ZERO; 4]);
        let l = LineRep::through(&f2, e([1, 0, 0, 0]), e([0, 1, 0, 0])).unwrap();
        assert_eq!(
            restrict_to_line(&x0_cubed(&f2), &l).unwrap(),
            [Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ZERO]
        );
    }

    #[test]
    fn incidence_tables_match_direct_counts() {
        for q in [2u64, 3, 4] {
            let ctx = gf(q);
            let inc = Incidence::new(&ctx, true);
            let forms = [CubicForm::fermat(&ctx), x0_cubed(&ctx), x0x1x2(&ctx)];
            for f in &forms {
                assert_eq!(inc.count_points(f).unwrap(), count_points(f).unwrap());
                assert_eq!(inc.count_lines(f).unwrap(), count_lines(f).unwrap());
            }
        }
    }

    #[test]
    fn text_format() {
        let f4 = gf(4);
        let f = CubicForm::fermat(&f4).scale(f4.x());
        let text = f.to_text();
        assert!(text.starts_with("10,00,"));
        assert_eq!(CubicForm::parse(&f4, &text).unwrap(), f);
        assert!(CubicForm::parse(&f4, "1,0").is_err());
    }
}
