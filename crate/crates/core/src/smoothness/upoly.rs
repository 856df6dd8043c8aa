//! Fixed-capacity univariate polynomials over a finite field, used by the
//! singular-point solver. Capacity covers every degree the solver produces
//! (resultants of degree at most 6).

use crate::gf::{Elem, FieldCtx};

pub(crate) const CAP: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct UPoly {
    c: [Elem; CAP],
    /// Number of coefficients up to and including the leading one; 0 for zero.
    len: usize,
}

impl UPoly {
    pub const ZERO: UPoly = UPoly {
        c: [Elem::ZERO; CAP],
        len: 0,
    };

    pub fn constant(a: Elem) -> UPoly {
        let mut p = UPoly::ZERO;
        p.c[0] = a;
        p.len = usize::from(!a.is_zero());
        p
    }

    pub fn from_coeffs(coeffs: &[Elem]) -> UPoly {
        assert!(coeffs.len() <= CAP);
        let mut p = UPoly::ZERO;
        p.c[..coeffs.len()].copy_from_slice(coeffs);
        p.len = coeffs.len();
        p.trim();
        p
    }

    /// `x - r`
    #[cfg(test)]
    pub fn linear_root(ctx: &FieldCtx, r: Elem) -> UPoly {
        UPoly::from_coeffs(&[ctx.neg(r), Elem::ONE])
    }

    fn trim(&mut self) {
        while self.len > 0 && self.c[self.len - 1].is_zero() {
            self.len -= 1;
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.len == 0
    }

    /// Degree, with `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.len.checked_sub(1)
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> Elem {
        if i < self.len {
            self.c[i]
        } else {
            Elem::ZERO
        }
    }

    pub fn set_coeff(&mut self, i: usize, a: Elem) {
        assert!(i < CAP);
        self.c[i] = a;
        if i >= self.len {
            self.len = i + 1;
        }
        self.trim();
    }

    pub fn add_to_coeff(&mut self, ctx: &FieldCtx, i: usize, a: Elem) {
        let v = ctx.add(self.coeff(i), a);
        self.set_coeff(i, v);
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        self.c[..self.len]
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn add(&self, ctx: &FieldCtx, other: &UPoly) -> UPoly {
        let mut out = UPoly::ZERO;
        let n = self.len.max(other.len);
        for i in 0..n {
            out.c[i] = ctx.add(self.coeff(i), other.coeff(i));
        }
        out.len = n;
        out.trim();
        out
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &UPoly) -> UPoly {
        let mut out = UPoly::ZERO;
        let n = self.len.max(other.len);
        for i in 0..n {
            out.c[i] = ctx.sub(self.coeff(i), other.coeff(i));
        }
        out.len = n;
        out.trim();
        out
    }

    pub fn scale(&self, ctx: &FieldCtx, a: Elem) -> UPoly {
        let mut out = *self;
        for c in &mut out.c[..out.len] {
            *c = ctx.mul(*c, a);
        }
        out.trim();
        out
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::ZERO;
        }
        let len = self.len + other.len - 1;
        assert!(len <= CAP, "polynomial capacity exceeded");
        let mut out = UPoly::ZERO;
        for i in 0..self.len {
            let a = self.c[i];
            if a.is_zero() {
                continue;
            }
            for j in 0..other.len {
                out.c[i + j] = ctx.add(out.c[i + j], ctx.mul(a, other.c[j]));
            }
        }
        out.len = len;
        out.trim();
        out
    }

    /// Remainder modulo a nonzero polynomial.
    pub fn rem(&self, ctx: &FieldCtx, m: &UPoly) -> UPoly {
        let dm = m.degree().expect("division by the zero polynomial");
        let lead_inv = ctx.try_inv(m.c[dm]).unwrap();
        let mut r = *self;
        while r.len > dm {
            let top = r.len - 1;
            let f = ctx.mul(r.c[top], lead_inv);
            let shift = top - dm;
            for j in 0..=dm {
                r.c[shift + j] = ctx.sub(r.c[shift + j], ctx.mul(f, m.c[j]));
            }
            r.trim();
        }
        r
    }

    pub fn monic(&self, ctx: &FieldCtx) -> UPoly {
        match self.degree() {
            Some(d) => self.scale(ctx, ctx.try_inv(self.c[d]).unwrap()),
            None => *self,
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, ctx: &FieldCtx, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (*self, *other);
        while !b.is_zero() {
            let r = a.rem(ctx, &b);
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    /// `x^e mod m` for nonzero `m`.
    pub fn x_pow_mod(ctx: &FieldCtx, mut e: u64, m: &UPoly) -> UPoly {
        let mut base = UPoly::from_coeffs(&[Elem::ZERO, Elem::ONE]).rem(ctx, m);
        let mut acc = UPoly::constant(Elem::ONE).rem(ctx, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base).rem(ctx, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ctx, &base).rem(ctx, m);
            }
        }
        acc
    }

    /// The product of the distinct linear factors of `self` over the field,
    /// i.e. `gcd(self, x^q - x)`. `self` must be nonzero.
    pub fn split_part(&self, ctx: &FieldCtx) -> UPoly {
        match self.degree() {
            Some(0) => UPoly::constant(Elem::ONE),
            Some(1) => self.monic(ctx),
            _ => {
                let xq = UPoly::x_pow_mod(ctx, ctx.q() as u64, self);
                let x = UPoly::from_coeffs(&[Elem::ZERO, Elem::ONE]);
                self.gcd(ctx, &xq.sub(ctx, &x))
            }
        }
    }

    /// Roots in the field, ascending by element index. `self` must be nonzero.
    pub fn roots(&self, ctx: &FieldCtx) -> Vec<Elem> {
        let h = self.split_part(ctx);
        let want = h.degree().unwrap_or(0);
        let mut out = Vec::with_capacity(want);
        if want == 0 {
            return out;
        }
        if want == 1 {
            out.push(ctx.neg(h.c[0]));
            return out;
        }
        for b in ctx.elements() {
            if h.eval(ctx, b).is_zero() {
                out.push(b);
                if out.len() == want {
                    break;
                }
            }
        }
        out
    }

    /// Smallest-index root; for the zero polynomial every element is a root.
    pub fn first_root(&self, ctx: &FieldCtx) -> Option<Elem> {
        if self.is_zero() {
            return Some(Elem::ZERO);
        }
        self.roots(ctx).first().copied()
    }
}
