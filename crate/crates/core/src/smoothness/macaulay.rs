//! Smoothness via the rank of a Macaulay matrix.
//!
//! Outside characteristic 3, `V(F)` is smooth iff the four partials have no
//! common projective zero, iff they generate every form of degree 5: the
//! span of `{m * dF/dx_i : deg m = 3}` must have dimension 56. In
//! characteristic 3 the Euler relation no longer recovers `F` from its
//! partials, so `F` joins the system and the test moves to degree 6
//! (`F` times cubic monomials, partials times quartic monomials, 84 targets).
//! Rank does not change under field extension, so computing it over `F_q`
//! decides emptiness over the algebraic closure.

use std::sync::OnceLock;

use crate::forms::{monomial_index, monomials, CubicForm};
use crate::gf::{Elem, FieldCtx};

/// `table[a][b]` = index of `monomials(da)[a] * monomials(db)[b]` in degree `da + db`.
fn product_table(da: usize, db: usize) -> Vec<Vec<u8>> {
    monomials(da)
        .iter()
        .map(|ma| {
            monomials(db)
                .iter()
                .map(|mb| {
                    let e = std::array::from_fn(|v| ma[v] + mb[v]);
                    monomial_index(e) as u8
                })
                .collect()
        })
        .collect()
}

struct Tables {
    cubic_times_quadric: Vec<Vec<u8>>,
    quartic_times_quadric: Vec<Vec<u8>>,
    cubic_times_cubic: Vec<Vec<u8>>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| Tables {
        cubic_times_quadric: product_table(3, 2),
        quartic_times_quadric: product_table(4, 2),
        cubic_times_cubic: product_table(3, 3),
    })
}

/// Rank of the Macaulay system and the dimension it must reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MacaulayRank {
    pub rank: usize,
    pub target: usize,
}

impl MacaulayRank {
    pub fn full(&self) -> bool {
        self.rank == self.target
    }
}

/// Builds the generator vectors: each a coefficient vector over the target
/// degree's monomials.
fn generators(form: &CubicForm) -> (Vec<Vec<Elem>>, usize) {
    let ctx = form.ctx();
    let t = tables();
    let partials = form.partials();
    let char3 = ctx.p() == 3;
    let (target, mult_table) = if char3 {
        (monomials(6).len(), &t.quartic_times_quadric)
    } else {
        (monomials(5).len(), &t.cubic_times_quadric)
    };
    let mut rows = Vec::new();
    for d in partials.iter().filter(|d| !d.is_zero()) {
        for by_mult in mult_table {
            let mut row = vec![Elem::ZERO; target];
            for (c, &dst) in d.coeffs().iter().zip(by_mult) {
                row[dst as usize] = ctx.add(row[dst as usize], *c);
            }
            rows.push(row);
        }
    }
    if char3 {
        for by_mult in &t.cubic_times_cubic {
            let mut row = vec![Elem::ZERO; target];
            for (c, &dst) in form.coeffs().iter().zip(by_mult) {
                row[dst as usize] = ctx.add(row[dst as usize], *c);
            }
            rows.push(row);
        }
    }
    (rows, target)
}

pub(crate) fn macaulay_rank(form: &CubicForm) -> MacaulayRank {
    let ctx = form.ctx();
    if ctx.p() == 2 {
        let target = monomials(5).len();
        let (planes, n) = bit_sliced_generators(form);
        return MacaulayRank {
            rank: rank_char2_planes(ctx, planes, n, target),
            target,
        };
    }
    let (rows, target) = generators(form);
    let rank = if ctx.k() == 1 {
        rank_prime(ctx.p(), &rows, target)
    } else {
        rank_generic(ctx, rows, target)
    };
    MacaulayRank { rank, target }
}

/// Generators in characteristic 2, packed straight into bit planes.
fn bit_sliced_generators(form: &CubicForm) -> (Vec<u64>, usize) {
    let k = form.ctx().k() as usize;
    let t = tables();
    let partials = form.partials();
    let mut planes = Vec::with_capacity(80 * k);
    let mut n = 0;
    for d in partials.iter().filter(|d| !d.is_zero()) {
        for by_mult in &t.cubic_times_quadric {
            for b in 0..k {
                let mut plane = 0u64;
                for (c, &dst) in d.coeffs().iter().zip(by_mult) {
                    plane |= (((c.0 >> b) & 1) as u64) << dst;
                }
                planes.push(plane);
            }
            n += 1;
        }
    }
    (planes, n)
}

/// Gaussian elimination on bit-sliced rows over `GF(2^k)`: plane `b` of a
/// row holds bit `b` of every entry, one entry per bit position.
#[cfg(test)]
fn rank_char2(ctx: &FieldCtx, rows: &[Vec<Elem>], width: usize) -> usize {
    let k = ctx.k() as usize;
    let mut m: Vec<u64> = Vec::with_capacity(rows.len() * k);
    for row in rows {
        for b in 0..k {
            let plane = row
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, e)| acc | (((e.0 >> b) as u64 & 1) << j));
            m.push(plane);
        }
    }
    rank_char2_planes(ctx, m, rows.len(), width)
}

fn rank_char2_planes(ctx: &FieldCtx, mut m: Vec<u64>, n: usize, width: usize) -> usize {
    assert!(width <= 64);
    let k = ctx.k() as usize;
    if k == 1 {
        return rank_gf2(&mut m, width);
    }
    let entry = |m: &[u64], r: usize, col: usize| -> u32 {
        (0..k).fold(0u32, |acc, b| acc | ((((m[r * k + b] >> col) & 1) as u32) << b))
    };
    let mut rank = 0;
    let mut scratch = vec![0u64; k];
    for col in 0..width {
        let bit = 1u64 << col;
        let Some(piv) = (rank..n).find(|&r| m[r * k..(r + 1) * k].iter().any(|p| p & bit != 0))
        else {
            continue;
        };
        if piv != rank {
            for b in 0..k {
                m.swap(piv * k + b, rank * k + b);
            }
        }
        let pivot_inv = ctx.try_inv(Elem(entry(&m, rank, col))).unwrap();
        for r in rank + 1..n {
            let e = entry(&m, r, col);
            if e == 0 {
                continue;
            }
            // row_r -= f * row_pivot, with multiplication by f acting
            // linearly on the bit planes
            let f = ctx.mul(Elem(e), pivot_inv);
            scratch.iter_mut().for_each(|s| *s = 0);
            let mut basis = f;
            for b in 0..k {
                let src = m[rank * k + b];
                for (j, s) in scratch.iter_mut().enumerate() {
                    if (basis.0 >> j) & 1 == 1 {
                        *s ^= src;
                    }
                }
                basis = ctx.mul(basis, Elem(2));
            }
            for b in 0..k {
                m[r * k + b] ^= scratch[b];
            }
        }
        rank += 1;
    }
    rank
}

fn rank_gf2(m: &mut [u64], width: usize) -> usize {
    let mut rank = 0;
    for col in 0..width {
        let bit = 1u64 << col;
        let Some(piv) = m[rank..].iter().position(|r| r & bit != 0) else {
            continue;
        };
        m.swap(rank, rank + piv);
        let pivot = m[rank];
        for r in &mut m[rank + 1..] {
            if *r & bit != 0 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

fn rank_prime(p: u32, rows: &[Vec<Elem>], width: usize) -> usize {
    let mut m: Vec<Vec<u16>> = rows
        .iter()
        .map(|r| r.iter().map(|e| e.0 as u16).collect())
        .collect();
    let inv: Vec<u16> = (0..p)
        .map(|a| {
            (1..p)
                .find(|&b| (a as u64 * b as u64) % p as u64 == 1)
                .unwrap_or(0) as u16
        })
        .collect();
    let mut rank = 0;
    let n = m.len();
    for col in 0..width {
        let Some(piv) = (rank..n).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(piv, rank);
        let s = inv[m[rank][col] as usize] as u32;
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in rest.iter_mut() {
            let e = row[col];
            if e == 0 {
                continue;
            }
            let f = (p - (e as u32 * s) % p) as u16;
            for (x, &y) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x = ((*x as u32 + f as u32 * y as u32) % p) as u16;
            }
        }
        rank += 1;
    }
    rank
}

fn rank_generic(ctx: &FieldCtx, mut m: Vec<Vec<Elem>>, width: usize) -> usize {
    let mut rank = 0;
    let n = m.len();
    for col in 0..width {
        let Some(piv) = (rank..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(piv, rank);
        let s = ctx.try_inv(m[rank][col]).unwrap();
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in rest.iter_mut() {
            let e = row[col];
            if e.is_zero() {
                continue;
            }
            let f = ctx.neg(ctx.mul(e, s));
            for (x, &y) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x = ctx.add(*x, ctx.mul(f, y));
            }
        }
        rank += 1;
    }
    rank
}
