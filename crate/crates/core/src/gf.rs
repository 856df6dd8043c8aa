//! Arithmetic in small finite fields `GF(p^k)`, `p^k <= 2^16`.
//!
//! Elements are stored as their coordinate vector in the power basis of the
//! modulus, packed into an integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`.
//! Multiplication goes through log/antilog tables built from a schoolbook
//! polynomial product; addition is XOR in characteristic 2, a modular add
//! for prime fields and a table or digit-wise add otherwise.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

/// Fields up to this size get a full addition table when `p` is odd and `k > 1`.
const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("modulus {0:?} is reducible over GF({1})")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot embed GF({from}) into GF({to})")]
    IncompatibleFields { from: u64, to: u64 },
    #[error("invalid field element literal {0:?}")]
    BadLiteral(String),
}

/// A field element: the packed coordinate vector of its power-basis
/// representation. Only meaningful together with the [`FieldCtx`] it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

enum AddRule {
    Xor,
    Prime,
    Table(Vec<u16>),
    Digits,
}

struct FieldInner {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, `k + 1` coefficients from the constant term up.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(q-1)`.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: AddRule,
    generator: u32,
}

/// An immutable, cheaply clonable handle to a finite field.
#[derive(Clone)]
pub struct FieldCtx(Arc<FieldInner>);

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p(), self.k())
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldCtx {}

/// Built-in moduli, constant term first.
fn builtin_modulus(p: u32, k: u32) -> Option<Vec<u32>> {
    let m: &[u32] = match (p, k) {
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (2, 8) => &[1, 1, 0, 1, 1, 0, 0, 0, 1],
        (3, 2) => &[1, 0, 1],
        (3, 4) => &[2, 1, 0, 0, 1],
        (5, 2) => &[1, 1, 1],
        (7, 2) => &[1, 0, 1],
        _ => return None,
    };
    Some(m.to_vec())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q` into `(p, k)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p as u32, k))
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), FieldCtx>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), FieldCtx>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn check_size(p: u32, k: u32) -> Result<u32, FieldError> {
    if !is_prime(p as u64) {
        return Err(FieldError::UnsupportedField(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(FieldError::UnsupportedField("extension degree must be positive".into()));
    }
    let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_FIELD_SIZE);
    q.map(|q| q as u32)
        .ok_or_else(|| FieldError::UnsupportedField(format!("{p}^{k} exceeds 2^16")))
}

impl FieldCtx {
    /// Returns `GF(p^k)` with the built-in modulus, or the lexicographically
    /// first monic irreducible of degree `k` when the table has no entry.
    /// Contexts are cached per `(p, k)`.
    pub fn new(p: u32, k: u32) -> Result<FieldCtx, FieldError> {
        check_size(p, k)?;
        if let Some(ctx) = cache().lock().unwrap().get(&(p, k)) {
            return Ok(ctx.clone());
        }
        let modulus = match builtin_modulus(p, k) {
            Some(m) => m,
            None if k == 1 => vec![0, 1],
            None => first_irreducible(p, k),
        };
        let ctx = FieldCtx::with_modulus(p, &modulus)?;
        Ok(cache().lock().unwrap().entry((p, k)).or_insert(ctx).clone())
    }

    /// Returns the field of order `q`.
    pub fn of_order(q: u64) -> Result<FieldCtx, FieldError> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| FieldError::UnsupportedField(format!("{q} is not a prime power")))?;
        FieldCtx::new(p, k)
    }

    /// Builds `GF(p^k)` from an explicit monic modulus (constant term first),
    /// verifying irreducibility.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<FieldCtx, FieldError> {
        if modulus.len() < 2 {
            return Err(FieldError::UnsupportedField("modulus must have degree >= 1".into()));
        }
        let k = (modulus.len() - 1) as u32;
        let q = check_size(p, k)?;
        let modulus: Vec<u32> = modulus.iter().map(|c| c % p).collect();
        if modulus[k as usize] != 1 {
            return Err(FieldError::UnsupportedField("modulus must be monic".into()));
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(FieldError::ReducibleModulus(modulus, p));
        }
        Ok(FieldCtx(Arc::new(FieldInner::build(p, k, q, modulus))))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.0.k
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The primitive element used for the log tables.
    pub fn generator(&self) -> Elem {
        Elem(self.0.generator)
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Image of the integer `n` in the prime subfield.
    #[inline]
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The class of `x` in the power basis (`0` for prime fields).
    pub fn x(&self) -> Elem {
        if self.0.k == 1 {
            Elem(0)
        } else {
            Elem(self.0.p)
        }
    }

    pub fn from_coords(&self, coords: &[u32]) -> Elem {
        assert_eq!(coords.len(), self.0.k as usize);
        let mut v = 0;
        for &c in coords.iter().rev() {
            v = v * self.0.p + c % self.0.p;
        }
        Elem(v)
    }

    /// Coordinates in the power basis, constant term first.
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        let mut v = a.0;
        (0..self.0.k)
            .map(|_| {
                let c = v % self.0.p;
                v /= self.0.p;
                c
            })
            .collect()
    }

    /// Every element, in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.0;
        Elem(match &f.add {
            AddRule::Xor => a.0 ^ b.0,
            AddRule::Prime => {
                let s = a.0 + b.0;
                if s >= f.p {
                    s - f.p
                } else {
                    s
                }
            }
            AddRule::Table(t) => t[(a.0 * f.q + b.0) as usize] as u32,
            AddRule::Digits => digit_add(a.0, b.0, f.p, f.k),
        })
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let f = &*self.0;
        Elem(f.exp[(f.log[a.index()] + f.log[b.index()]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        self.try_inv(a).ok_or(FieldError::DivisionByZero)
    }

    #[inline]
    pub fn try_inv(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        let f = &*self.0;
        let order = f.q - 1;
        Some(Elem(f.exp[((order - f.log[a.index()]) % order) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let f = &*self.0;
        let order = (f.q - 1) as u64;
        let l = (f.log[a.index()] as u64 * (e % order)) % order;
        Elem(f.exp[l as usize])
    }

    /// The absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.0.p as u64)
    }

    /// Parses the text form: `k` base-`p` digits, most significant first.
    /// Prime fields also accept a decimal residue, the only option past `p = 36`.
    pub fn parse_elem(&self, s: &str) -> Result<Elem, FieldError> {
        let s = s.trim();
        let bad = || FieldError::BadLiteral(s.to_string());
        if self.0.k == 1 && (s.len() > 1 || self.0.p > 36) {
            return s
                .parse::<u32>()
                .ok()
                .filter(|&v| v < self.0.p && s.bytes().all(|b| b.is_ascii_digit()))
                .map(Elem)
                .ok_or_else(bad);
        }
        if s.chars().count() != self.0.k as usize {
            return Err(bad());
        }
        let mut v = 0u32;
        for ch in s.chars() {
            let d = ch.to_digit(36).filter(|&d| d < self.0.p).ok_or_else(bad)?;
            v = v * self.0.p + d;
        }
        Ok(Elem(v))
    }

    pub fn format_elem(&self, a: Elem) -> String {
        if self.0.k == 1 && self.0.p > 36 {
            return a.0.to_string();
        }
        self.coords(a)
            .iter()
            .rev()
            .map(|&d| std::char::from_digit(d, 36).unwrap_or('?'))
            .collect()
    }

    /// Builds the embedding of `self` into `target`, where the degree of
    /// `target` is a multiple of ours.
    pub fn embedding_into(&self, target: &FieldCtx) -> Result<Embedding, FieldError> {
        let incompatible = || FieldError::IncompatibleFields {
            from: self.q() as u64,
            to: target.q() as u64,
        };
        if self.p() != target.p() || target.k() % self.k() != 0 {
            return Err(incompatible());
        }
        // Smallest-index root of our modulus in the target field.
        let root = target
            .elements()
            .find(|&r| {
                let mut acc = Elem::ZERO;
                for &c in self.modulus().iter().rev() {
                    acc = target.add(target.mul(acc, r), target.from_int(c as i64));
                }
                acc.is_zero()
            })
            .ok_or_else(incompatible)?;
        let image = self
            .elements()
            .map(|a| {
                let mut acc = Elem::ZERO;
                for &c in self.coords(a).iter().rev() {
                    acc = target.add(target.mul(acc, root), target.from_int(c as i64));
                }
                acc
            })
            .collect();
        Ok(Embedding {
            source: self.clone(),
            target: target.clone(),
            root,
            image,
        })
    }
}

/// A fixed ring homomorphism `GF(p^k) -> GF(p^{kd})`, tabulated.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FieldCtx,
    target: FieldCtx,
    root: Elem,
    image: Vec<Elem>,
}

impl Embedding {
    pub fn source(&self) -> &FieldCtx {
        &self.source
    }

    pub fn target(&self) -> &FieldCtx {
        &self.target
    }

    /// Image of the class of `x`, a root of the source modulus.
    pub fn root(&self) -> Elem {
        self.root
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.image[a.index()]
    }
}

/// Convenience wrapper for [`FieldCtx::embedding_into`] applied to one element.
pub fn embed(a: Elem, source: &FieldCtx, target: &FieldCtx) -> Result<Elem, FieldError> {
    Ok(source.embedding_into(target)?.apply(a))
}

fn digit_add(mut a: u32, mut b: u32, p: u32, k: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    for _ in 0..k {
        let d = (a % p + b % p) % p;
        out += d * place;
        place *= p;
        a /= p;
        b /= p;
    }
    out
}

fn digit_neg(mut a: u32, p: u32, k: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    for _ in 0..k {
        out += ((p - a % p) % p) * place;
        place *= p;
        a /= p;
    }
    out
}

impl FieldInner {
    fn build(p: u32, k: u32, q: u32, modulus: Vec<u32>) -> FieldInner {
        let refmul = |a: u32, b: u32| reference_mul(a, b, p, &modulus);
        let order = q - 1;
        let prime_factors = distinct_prime_factors(order);
        let generator = (1..q)
            .find(|&g| {
                order == 1
                    || prime_factors
                        .iter()
                        .all(|&r| reference_pow(g, (order / r) as u64, p, &modulus) != 1)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for i in 0..order {
            exp[i as usize] = acc;
            exp[(i + order) as usize] = acc;
            log[acc as usize] = i;
            acc = refmul(acc, generator);
        }
        let neg = (0..q).map(|a| digit_neg(a, p, k)).collect();
        let add = if p == 2 {
            AddRule::Xor
        } else if k == 1 {
            AddRule::Prime
        } else if q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b, p, k) as u16;
                }
            }
            AddRule::Table(t)
        } else {
            AddRule::Digits
        };
        FieldInner {
            p,
            k,
            q,
            modulus,
            exp,
            log,
            neg,
            add,
            generator,
        }
    }
}

fn distinct_prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Schoolbook product of packed elements reduced by `modulus`.
pub(crate) fn reference_mul(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    let k = modulus.len() - 1;
    let unpack = |mut v: u32| -> Vec<u32> {
        (0..k)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    };
    let (a, b) = (unpack(a), unpack(b));
    let mut prod = vec![0u32; 2 * k];
    for i in 0..k {
        for j in 0..k {
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
        }
    }
    fp_poly::reduce_in_place(&mut prod, modulus, p);
    prod.iter().take(k).rev().fold(0, |acc, &c| acc * p + c)
}

fn reference_pow(mut base: u32, mut e: u64, p: u32, modulus: &[u32]) -> u32 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = reference_mul(acc, base, p, modulus);
        }
        base = reference_mul(base, base, p, modulus);
        e >>= 1;
    }
    acc
}

/// Lexicographically first monic irreducible of degree `k`, ordering the
/// lower coefficients as a base-`p` number with the constant term least
/// significant.
fn first_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    (0..count)
        .map(|mut n| {
            let mut m: Vec<u32> = (0..k)
                .map(|_| {
                    let c = (n % p as u64) as u32;
                    n /= p as u64;
                    c
                })
                .collect();
            m.push(1);
            m
        })
        .find(|m| fp_poly::is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Dense polynomials over a prime field, constant term first. Only what the
/// irreducibility check needs.
pub(crate) mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    /// Reduces `a` modulo the monic polynomial `m`, leaving `deg m` coefficients.
    pub fn reduce_in_place(a: &mut Vec<u32>, m: &[u32], p: u32) {
        let k = m.len() - 1;
        for i in (k..a.len()).rev() {
            let c = a[i];
            if c != 0 {
                for j in 0..=k {
                    let t = (c * m[j]) % p;
                    a[i - k + j] = (a[i - k + j] + p - t) % p;
                }
            }
        }
        a.truncate(k);
        a.resize(k, 0);
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0u32; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        reduce_in_place(&mut out, m, p);
        out
    }

    pub fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let k = m.len() - 1;
        let mut acc = vec![0u32; k];
        acc[0] = 1 % p;
        if k == 0 {
            return acc;
        }
        let mut b = base.to_vec();
        reduce_in_place(&mut b, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    fn inv_mod_p(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let lead_inv = inv_mod_p(*b.last().unwrap(), p);
            let db = b.len() - 1;
            while a.len() > db {
                let c = a.last().copied().unwrap() * lead_inv % p;
                let shift = a.len() - 1 - db;
                for (j, &bj) in b.iter().enumerate() {
                    a[shift + j] = (a[shift + j] + p - c * bj % p) % p;
                }
                trim(&mut a);
                if a.is_empty() {
                    break;
                }
            }
            std::mem::swap(&mut a, &mut b);
        }
        a
    }

    /// Rabin-style test: `m` (monic, degree `k`) is irreducible iff it shares
    /// no factor with `x^{p^i} - x` for `i <= k/2`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let k = m.len() - 1;
        if k == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut frob = x.clone();
        for _ in 1..=k / 2 {
            frob = pow_mod(&frob, p as u64, m, p);
            let mut diff = frob.clone();
            diff.resize(k.max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(m, &diff, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<FieldCtx> {
        [2u64, 3, 4, 5, 7, 8, 9, 16]
            .iter()
            .map(|&q| FieldCtx::of_order(q).unwrap())
            .collect()
    }

    #[test]
    fn prime_field_gf2() {
        let f = FieldCtx::new(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.add(Elem::ONE, Elem::ONE), Elem::ZERO);
    }

    #[test]
    fn gf4_by_explicit_modulus() {
        // x^2 + x + 1 has no root in GF(2): 0 -> 1, 1 -> 1.
        let f = FieldCtx::with_modulus(2, &[1, 1, 1]).unwrap();
        let g = f.x();
        assert_eq!(f.mul(g, g), f.add(g, Elem::ONE));
        assert_eq!(f.inv(g).unwrap(), f.add(g, Elem::ONE));
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(matches!(
            FieldCtx::with_modulus(2, &[1, 0, 1]),
            Err(FieldError::ReducibleModulus(..))
        ));
        // (x^2+x+1)^2 = x^4+x^2+1 has no root in GF(2) but is reducible.
        assert!(matches!(
            FieldCtx::with_modulus(2, &[1, 0, 1, 0, 1]),
            Err(FieldError::ReducibleModulus(..))
        ));
        // degree 5 = 2 + 3 with no linear factor
        // (x^2+x+1)(x^3+x+1) = x^5+x^4+1
        assert!(matches!(
            FieldCtx::with_modulus(2, &[1, 0, 0, 0, 1, 1]),
            Err(FieldError::ReducibleModulus(..))
        ));
    }

    #[test]
    fn unsupported_sizes() {
        assert!(matches!(FieldCtx::new(2, 17), Err(FieldError::UnsupportedField(_))));
        assert!(matches!(FieldCtx::new(4, 1), Err(FieldError::UnsupportedField(_))));
        assert!(FieldCtx::new(2, 16).is_ok());
    }

    #[test]
    fn builtin_table_entries_are_irreducible() {
        for (p, k) in [(2, 2), (2, 3), (2, 4), (2, 8), (3, 2), (3, 4), (5, 2), (7, 2)] {
            let m = builtin_modulus(p, k).unwrap();
            assert!(fp_poly::is_irreducible(&m, p), "GF({p}^{k}) modulus {m:?}");
            assert_eq!(FieldCtx::new(p, k).unwrap().modulus(), &m[..]);
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in small_fields() {
            let all: Vec<Elem> = f.elements().collect();
            assert_eq!(all.len() as u32, f.q());
            for &a in &all {
                assert_eq!(f.add(a, Elem::ZERO), a);
                assert_eq!(f.mul(a, Elem::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                assert_eq!(f.pow(a, f.q() as u64), a);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                }
                for &b in &all {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(
                        f.mul(a, b).0,
                        reference_mul(a.0, b.0, f.p(), f.modulus()),
                        "{f:?}"
                    );
                    for &c in &all {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_a_ring_map_of_order_k() {
        for f in small_fields() {
            for a in f.elements() {
                let mut b = a;
                for _ in 0..f.k() {
                    b = f.frobenius(b);
                }
                assert_eq!(b, a);
                for c in f.elements() {
                    assert_eq!(f.frobenius(f.mul(a, c)), f.mul(f.frobenius(a), f.frobenius(c)));
                    assert_eq!(f.frobenius(f.add(a, c)), f.add(f.frobenius(a), f.frobenius(c)));
                }
            }
        }
    }

    #[test]
    fn division_by_zero() {
        let f = FieldCtx::new(5, 1).unwrap();
        assert_eq!(f.inv(Elem::ZERO), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn embedding_gf4_into_gf16() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let f16 = FieldCtx::new(2, 4).unwrap();
        let e = f4.embedding_into(&f16).unwrap();
        let g = e.apply(f4.x());
        let val = f16.add(f16.add(f16.mul(g, g), g), Elem::ONE);
        assert!(val.is_zero());
        assert_eq!(e.apply(Elem::ZERO), Elem::ZERO);
        assert_eq!(e.apply(Elem::ONE), Elem::ONE);
    }

    #[test]
    fn embeddings_are_injective_homomorphisms() {
        for (p, k, d) in [(2, 1, 4), (2, 2, 2), (2, 2, 4), (3, 1, 2), (5, 1, 3), (3, 2, 2)] {
            let src = FieldCtx::new(p, k).unwrap();
            let dst = FieldCtx::new(p, k * d).unwrap();
            let e = src.embedding_into(&dst).unwrap();
            let mut seen = std::collections::HashSet::new();
            for a in src.elements() {
                assert!(seen.insert(e.apply(a)));
                // frobenius^k on the source is the identity, on the image too
                let mut b = e.apply(a);
                for _ in 0..k {
                    b = dst.frobenius(b);
                }
                assert_eq!(b, e.apply(a));
                for b in src.elements() {
                    assert_eq!(e.apply(src.add(a, b)), dst.add(e.apply(a), e.apply(b)));
                    assert_eq!(e.apply(src.mul(a, b)), dst.mul(e.apply(a), e.apply(b)));
                }
            }
        }
    }

    #[test]
    fn incompatible_embedding() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let f8 = FieldCtx::new(2, 3).unwrap();
        assert!(matches!(
            f4.embedding_into(&f8),
            Err(FieldError::IncompatibleFields { .. })
        ));
    }

    #[test]
    fn literals_round_trip() {
        let f = FieldCtx::new(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse_elem(&f.format_elem(a)).unwrap(), a);
        }
        assert_eq!(f.parse_elem("10").unwrap(), f.x());
        assert!(f.parse_elem("3").is_err());
        assert!(f.parse_elem("13").is_err());
    }

    #[test]
    fn large_fields_build() {
        for (p, k) in [(2, 16), (5, 4), (3, 8), (7, 4), (251, 1)] {
            let f = FieldCtx::new(p, k).unwrap();
            let a = Elem(f.q() - 1);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
        }
    }
}
