//! Cohomological bookkeeping for the space of smooth cubic surfaces.
//!
//! The subtype table feeds the `E^1` page of the spectral sequence for the
//! Borel-Moore homology of the singular cubics through a marked point;
//! Alexander duality turns it into Betti numbers of the smooth ones, and the
//! resulting Poincare polynomials become point-count polynomials by the
//! Grothendieck-Lefschetz trace formula.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::gf::prime_power;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LedgerError {
    #[error("ledger inconsistency: {0}")]
    Inconsistency(String),
    #[error("class list gives a negative exponent q^{0}")]
    NonPolynomialResult(i64),
    #[error("characteristic 3 is excluded from the predictions (q = {0})")]
    UnsupportedCharacteristic(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

/// A polynomial with integer coefficients in one variable, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> IntPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> IntPoly {
        IntPoly::default()
    }

    pub fn one() -> IntPoly {
        IntPoly::new(vec![1])
    }

    /// `c * x^e`
    pub fn monomial(c: i64, e: usize) -> IntPoly {
        let mut v = vec![0; e + 1];
        v[e] = c;
        IntPoly::new(v)
    }

    /// `1 + x^e`
    pub fn one_plus(e: usize) -> IntPoly {
        IntPoly::one().add(&IntPoly::monomial(1, e))
    }

    /// `sum c_i x^{e_i}` from `(e_i, c_i)` pairs.
    pub fn from_terms(terms: &[(usize, i64)]) -> IntPoly {
        terms
            .iter()
            .fold(IntPoly::zero(), |acc, &(e, c)| acc.add(&IntPoly::monomial(c, e)))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, e: usize) -> i64 {
        self.coeffs.get(e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn product<'a>(factors: impl IntoIterator<Item = &'a IntPoly>) -> IntPoly {
        factors.into_iter().fold(IntPoly::one(), |acc, f| acc.mul(f))
    }

    /// Quotient and remainder by a divisor with leading coefficient `+-1`.
    pub fn div_rem(&self, d: &IntPoly) -> Option<(IntPoly, IntPoly)> {
        let dd = d.degree()?;
        let lead = d.coeffs[dd];
        if lead.abs() != 1 {
            return None;
        }
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Some((IntPoly::zero(), self.clone()));
        }
        let mut q = vec![0; r.len() - dd];
        for i in (0..q.len()).rev() {
            let f = r[i + dd] * lead;
            q[i] = f;
            for (j, c) in d.coeffs.iter().enumerate() {
                r[i + j] -= f * c;
            }
        }
        Some((IntPoly::new(q), IntPoly::new(r)))
    }

    /// Exact quotient, if `d` divides `self`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        match self.div_rem(d)? {
            (q, r) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, other: &IntPoly) -> bool {
        other.div_exact(self).is_some()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &c| acc * x + BigInt::from(c))
    }

    /// Renders with the given variable name, highest degree first.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            let body = match e {
                0 => mag.to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if mag != 1 && e > 0 {
                out.push_str(&format!("{mag}{body}"));
            } else {
                out.push_str(&body);
            }
        }
        out
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({})", self.display("t"))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display("t"))
    }
}

/// A polynomial kept as a product of factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    pub factors: Vec<IntPoly>,
}

impl Factored {
    pub fn expand(&self) -> IntPoly {
        IntPoly::product(&self.factors)
    }

    pub fn display(&self, var: &str) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.factors.len() {
            let f = &self.factors[i];
            let run = self.factors[i..].iter().take_while(|g| *g == f).count();
            out += &match f.coeffs().iter().filter(|&&c| c != 0).count() {
                1 => f.display(var),
                _ if var == "t" => format!("({})", ascending(f, var)),
                _ => format!("({})", f.display(var)),
            };
            if run > 1 {
                out += &format!("^{run}");
            }
            i += run;
        }
        out
    }
}

/// Lowest degree first, the way `1 + t^3` is usually written.
fn ascending(p: &IntPoly, var: &str) -> String {
    let mut parts = Vec::new();
    for (e, &c) in p.coeffs().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mono = match e {
            0 => c.unsigned_abs().to_string(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        let mono = if e > 0 && c.unsigned_abs() != 1 {
            format!("{}{mono}", c.unsigned_abs())
        } else {
            mono
        };
        parts.push((c < 0, mono));
    }
    let mut out = String::new();
    for (i, (neg, m)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&m);
    }
    out
}

/// Shape of a singular locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocusKind {
    /// `n` distinct points.
    Points(u8),
    Line,
    Conic,
    LinePair,
    Plane,
    ThreeConcurrentLines,
    ConicAndPoint,
    /// All of `P^3`.
    Everything,
}

/// One subtype of singular locus relative to the marked point `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubtypeRecord {
    pub id: &'static str,
    pub locus: LocusKind,
    /// Complex dimension of the space `A_i` of loci of this subtype.
    pub dim_a: Option<u32>,
    /// Complex dimension of the space of cubics through `p` singular on the locus.
    pub dim_l: Option<u32>,
    /// `(m, rank H^m(A_i; sign local system))`; empty when it vanishes.
    pub cohomology: Vec<(u32, u32)>,
    pub note: &'static str,
}

impl SubtypeRecord {
    /// Filtration degree `16 - dim L`.
    pub fn deg(&self) -> Option<u32> {
        self.dim_l.map(|l| 16 - l)
    }

    pub fn n_points(&self) -> Option<u32> {
        match self.locus {
            LocusKind::Points(n) => Some(n as u32),
            _ => None,
        }
    }

    pub fn contributes(&self) -> bool {
        !self.cohomology.is_empty()
    }
}

fn rec(
    id: &'static str,
    locus: LocusKind,
    dims: Option<(u32, u32)>,
    cohomology: &[(u32, u32)],
    note: &'static str,
) -> SubtypeRecord {
    SubtypeRecord {
        id,
        locus,
        dim_a: dims.map(|d| d.0),
        dim_l: dims.map(|d| d.1),
        cohomology: cohomology.to_vec(),
        note,
    }
}

/// Every subtype with its dimensions and twisted cohomology.
pub fn subtype_table() -> Vec<SubtypeRecord> {
    use LocusKind::*;
    const ONE_POINT: &[(u32, u32)] = &[(0, 1)];
    const PLANE_LIKE: &[(u32, u32)] = &[(0, 1), (2, 1), (4, 1)];
    const SHIFTED: &[(u32, u32)] = &[(2, 1), (4, 1), (6, 1)];
    const TOP: &[(u32, u32)] = &[(6, 1)];
    vec![
        rec("Ia", Points(1), Some((0, 16)), ONE_POINT, "P = p"),
        rec("Ib", Points(1), Some((3, 15)), PLANE_LIKE, "P != p"),
        rec("IIa", Points(2), Some((3, 12)), PLANE_LIKE, "P = p"),
        rec("IIb", Points(2), Some((4, 12)), &[], "P, Q collinear with p"),
        rec("IIc", Points(2), Some((6, 11)), SHIFTED, "P, Q not collinear with p"),
        rec("IVa", Points(3), Some((6, 8)), SHIFTED, "P = p"),
        rec("IVb", Points(3), Some((7, 8)), &[], "P, Q collinear with p"),
        rec("IVc", Points(3), Some((8, 7)), &[], "coplanar with p, no two collinear with p"),
        rec("IVd", Points(3), Some((9, 7)), TOP, "not coplanar with p"),
        rec("VIIa", Points(4), Some((9, 4)), TOP, "P = p"),
        rec("VIIb", Points(4), Some((10, 4)), &[], "P, Q collinear with p"),
        rec("VIIc", Points(4), Some((11, 3)), &[], "P, Q, R coplanar with p"),
        rec("VIId", Points(4), Some((12, 3)), &[], "no three coplanar with p"),
        rec("III", Line, None, &[], "curve locus"),
        rec("V", Conic, None, &[], "curve locus"),
        rec("VI", LinePair, None, &[], "curve locus"),
        rec("VIII", Plane, None, &[], "positive-dimensional locus"),
        rec("IX", ThreeConcurrentLines, None, &[], "curve locus"),
        rec("X", ConicAndPoint, None, &[], "curve locus"),
        rec("XI", Everything, Some((0, 0)), &[], "only the zero form; homology vanishes"),
    ]
}

/// Where an `E^1` entry comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageEntry {
    pub p: i32,
    pub q: i32,
    pub rank: u32,
    pub subtype: &'static str,
    /// Degree `m` of the class in `H^m(A_i)`.
    pub source_degree: u32,
}

impl PageEntry {
    pub fn total(&self) -> i32 {
        self.p + self.q
    }
}

/// Nonzero entries of a spectral sequence page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralPage {
    pub entries: Vec<PageEntry>,
}

impl SpectralPage {
    pub fn rank_at(&self, p: i32, q: i32) -> u32 {
        self.entries
            .iter()
            .filter(|e| e.p == p && e.q == q)
            .map(|e| e.rank)
            .sum()
    }

    pub fn total_rank(&self) -> u32 {
        self.entries.iter().map(|e| e.rank).sum()
    }

    pub fn positions(&self) -> Vec<(i32, i32)> {
        let mut v: Vec<_> = self.entries.iter().map(|e| (e.p, e.q)).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn column(&self, p: i32) -> impl Iterator<Item = &PageEntry> {
        self.entries.iter().filter(move |e| e.p == p)
    }

    /// Pairs `(source, target)` of nonzero entries that some `d^r`,
    /// `E_{p,q} -> E_{p-r,q+r-1}` with `r >= 1`, could connect.
    pub fn potential_differentials(&self) -> Vec<(&PageEntry, &PageEntry)> {
        let mut out = Vec::new();
        for s in &self.entries {
            for t in &self.entries {
                let r = s.p - t.p;
                if r >= 1 && t.q == s.q + r - 1 {
                    out.push((s, t));
                }
            }
        }
        out
    }

    /// The `e^1` page: `e_{p,q} = E_{p, q + 2(16 - p)}`.
    pub fn reindexed(&self) -> SpectralPage {
        SpectralPage {
            entries: self
                .entries
                .iter()
                .map(|e| PageEntry {
                    q: e.q - 2 * (16 - e.p),
                    ..e.clone()
                })
                .collect(),
        }
    }

    /// Aligned text grid, `p` across and `q` down (descending).
    pub fn grid(&self) -> String {
        let ps: Vec<i32> = {
            let mut v: Vec<i32> = self.entries.iter().map(|e| e.p).collect();
            v.sort();
            v.dedup();
            v
        };
        let (qmin, qmax) = self
            .entries
            .iter()
            .fold((i32::MAX, i32::MIN), |(lo, hi), e| (lo.min(e.q), hi.max(e.q)));
        let mut out = format!("{:>5} |", "q\\p");
        for p in &ps {
            out.push_str(&format!("{p:>4}"));
        }
        out.push('\n');
        out.push_str(&"-".repeat(7 + 4 * ps.len()));
        out.push('\n');
        for q in (qmin..=qmax).rev() {
            out.push_str(&format!("{q:>5} |"));
            for &p in &ps {
                match self.rank_at(p, q) {
                    0 => out.push_str(&format!("{:>4}", ".")),
                    r => out.push_str(&format!("{r:>4}")),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Places each class of each contributing subtype on the `E^1` page:
/// column `16 - dim L`, total degree `2 dim L + (n - 1) + (2 dim A - m)`.
pub fn assemble_e1() -> SpectralPage {
    let mut entries = Vec::new();
    for r in subtype_table().iter().filter(|r| r.contributes()) {
        let (Some(n), Some(dim_a), Some(dim_l)) = (r.n_points(), r.dim_a, r.dim_l) else {
            continue;
        };
        let p = (16 - dim_l) as i32;
        for &(m, rank) in &r.cohomology {
            let total = (2 * dim_l + (n - 1) + (2 * dim_a - m)) as i32;
            entries.push(PageEntry {
                p,
                q: total - p,
                rank,
                subtype: r.id,
                source_degree: m,
            });
        }
    }
    entries.sort_by_key(|e| (e.p, e.q));
    SpectralPage { entries }
}

/// `(1 + t)(1 + t^3)(1 + t^5)^2`
pub fn expected_xp() -> Factored {
    Factored {
        factors: vec![
            IntPoly::one_plus(1),
            IntPoly::one_plus(3),
            IntPoly::one_plus(5),
            IntPoly::one_plus(5),
        ],
    }
}

/// `(1 + t^3)(1 + t^5)^2`
pub fn expected_up() -> Factored {
    Factored {
        factors: expected_xp().factors[1..].to_vec(),
    }
}

/// `(1 + t^3)(1 + t^5)(1 + t^7)`
pub fn poincare_m() -> Factored {
    Factored {
        factors: vec![IntPoly::one_plus(3), IntPoly::one_plus(5), IntPoly::one_plus(7)],
    }
}

/// `1 + t^2 + t^4`
pub fn projective_plane() -> IntPoly {
    IntPoly::from_terms(&[(0, 1), (2, 1), (4, 1)])
}

/// Reduced Betti numbers of the smooth cubics through `p`: degree
/// `37 - (p + q)` for each entry, assuming the sequence degenerates at `E^1`.
pub fn betti_degrees(page: &SpectralPage) -> Vec<u32> {
    let mut v: Vec<u32> = page
        .entries
        .iter()
        .flat_map(|e| std::iter::repeat((37 - e.total()) as u32).take(e.rank as usize))
        .collect();
    v.sort();
    v
}

pub fn poincare_xp() -> Result<IntPoly, LedgerError> {
    let page = assemble_e1();
    let mut p = IntPoly::one();
    for d in betti_degrees(&page) {
        p = p.add(&IntPoly::monomial(1, d as usize));
    }
    let expected = expected_xp().expand();
    if p != expected {
        return Err(LedgerError::Inconsistency(format!(
            "page gives {p}, expected {expected}"
        )));
    }
    Ok(p)
}

pub fn poincare_up() -> Result<IntPoly, LedgerError> {
    let xp = poincare_xp()?;
    let up = xp
        .div_exact(&IntPoly::one_plus(1))
        .ok_or_else(|| LedgerError::Inconsistency(format!("1 + t does not divide {xp}")))?;
    if up != expected_up().expand() {
        return Err(LedgerError::Inconsistency(format!("quotient {up} is not (1+t^3)(1+t^5)^2")));
    }
    Ok(up)
}

/// The two shapes the Leray-Serre argument allows for `P(U)`.
pub fn poincare_u_candidates() -> [Factored; 2] {
    [
        Factored {
            factors: vec![
                IntPoly::one_plus(3),
                IntPoly::one_plus(5),
                IntPoly::one_plus(7),
                projective_plane(),
            ],
        },
        Factored {
            factors: vec![
                IntPoly::one_plus(3),
                IntPoly::one_plus(5),
                IntPoly::one_plus(5),
                IntPoly::from_terms(&[(0, 1), (2, 1), (4, 1), (6, 1)]),
            ],
        },
    ]
}

/// Selects the candidate divisible by `1 + t^7`.
pub fn poincare_u() -> Result<Factored, LedgerError> {
    let seven = IntPoly::one_plus(7);
    let passing: Vec<Factored> = poincare_u_candidates()
        .into_iter()
        .filter(|c| seven.divides(&c.expand()))
        .collect();
    match passing.len() {
        1 => Ok(passing.into_iter().next().unwrap()),
        n => Err(LedgerError::Inconsistency(format!(
            "{n} candidates for P(U) are divisible by 1 + t^7"
        ))),
    }
}

/// `P(U) = P(M) (1 + t^2 + t^4)`: the cohomology of `U` is accounted for by
/// `M` and a `P^2` fibre, leaving nothing for the fundamental class.
pub fn vfund_vanishing_check(pu: &IntPoly) -> bool {
    *pu == poincare_m().expand().mul(&projective_plane())
}

/// One class of a pure Tate cohomology ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TateClass {
    pub degree: u32,
    pub weight: u32,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TateClassList {
    pub classes: Vec<TateClass>,
}

impl TateClassList {
    pub fn point() -> TateClassList {
        TateClassList {
            classes: vec![TateClass {
                degree: 0,
                weight: 0,
                multiplicity: 1,
            }],
        }
    }

    /// Exterior algebra on odd generators `(degree, weight)`.
    pub fn exterior(generators: &[(u32, u32)]) -> TateClassList {
        let mut classes = Vec::new();
        for mask in 0u32..1 << generators.len() {
            let (d, w) = generators
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold((0, 0), |(d, w), (_, g)| (d + g.0, w + g.1));
            classes.push(TateClass {
                degree: d,
                weight: w,
                multiplicity: 1,
            });
        }
        TateClassList { classes }.collected()
    }

    /// Truncated polynomial algebra `1, x, ..., x^top` on an even generator.
    pub fn truncated(generator: (u32, u32), top: u32) -> TateClassList {
        TateClassList {
            classes: (0..=top)
                .map(|i| TateClass {
                    degree: i * generator.0,
                    weight: i * generator.1,
                    multiplicity: 1,
                })
                .collect(),
        }
    }

    pub fn tensor(&self, other: &TateClassList) -> TateClassList {
        let mut classes = Vec::new();
        for a in &self.classes {
            for b in &other.classes {
                classes.push(TateClass {
                    degree: a.degree + b.degree,
                    weight: a.weight + b.weight,
                    multiplicity: a.multiplicity * b.multiplicity,
                });
            }
        }
        TateClassList { classes }.collected()
    }

    /// Merges equal bidegrees and sorts.
    fn collected(self) -> TateClassList {
        let mut m: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for c in self.classes {
            *m.entry((c.degree, c.weight)).or_default() += c.multiplicity;
        }
        TateClassList {
            classes: m
                .into_iter()
                .filter(|(_, n)| *n > 0)
                .map(|((degree, weight), multiplicity)| TateClass {
                    degree,
                    weight,
                    multiplicity,
                })
                .collect(),
        }
    }

    pub fn poincare(&self) -> IntPoly {
        self.classes.iter().fold(IntPoly::zero(), |acc, c| {
            acc.add(&IntPoly::monomial(c.multiplicity as i64, c.degree as usize))
        })
    }
}

/// `alpha_3, alpha_5, alpha_7` of weights 2, 3, 4.
pub fn classes_m() -> TateClassList {
    TateClassList::exterior(&[(3, 2), (5, 3), (7, 4)])
}

/// `H*(M)` tensored with `1, eta, eta^2`, `eta` of degree 2 and weight 1.
pub fn classes_u() -> TateClassList {
    classes_m().tensor(&TateClassList::truncated((2, 1), 2))
}

pub const DIM_M: u32 = 19;
pub const DIM_U: u32 = 21;

/// `q^dim * sum (-1)^i mult q^{-k}` over the classes.
pub fn point_count_poly(classes: &TateClassList, dim: u32) -> Result<IntPoly, LedgerError> {
    let mut by_exp: BTreeMap<i64, i64> = BTreeMap::new();
    for c in &classes.classes {
        let sign = if c.degree % 2 == 0 { 1 } else { -1 };
        *by_exp.entry(dim as i64 - c.weight as i64).or_default() += sign * c.multiplicity as i64;
    }
    let mut terms = Vec::new();
    for (e, c) in by_exp {
        if c == 0 {
            continue;
        }
        if e < 0 {
            return Err(LedgerError::NonPolynomialResult(e));
        }
        terms.push((e as usize, c));
    }
    Ok(IntPoly::from_terms(&terms))
}

/// `q^10 (q^2 - 1)(q^3 - 1)(q^4 - 1)`
pub fn count_m_factored() -> Factored {
    let qm1 = |e| IntPoly::from_terms(&[(e, 1), (0, -1)]);
    Factored {
        factors: vec![IntPoly::monomial(1, 10), qm1(2), qm1(3), qm1(4)],
    }
}

/// `q^10 (q^2 + q + 1)(q^4 - 1)(q^3 - 1)(q^2 - 1)`
pub fn count_u_factored() -> Factored {
    let mut f = count_m_factored();
    f.factors.insert(1, IntPoly::new(vec![1, 1, 1]));
    f
}

pub const ADMISSIBLE_TRACES: [i64; 9] = [-3, -2, -1, 0, 1, 2, 3, 4, 6];

/// What a census over `F_q` should observe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub q: u64,
    #[serde(serialize_with = "as_decimal")]
    pub smooth_count: BigInt,
    #[serde(serialize_with = "as_decimal")]
    pub point_sum: BigInt,
    /// `q^2 + q + 1` as an exact fraction `num / den`.
    pub average: (u64, u64),
    pub admissible_traces: Vec<i64>,
    pub t6_allowed: bool,
    /// Set when the prediction is extrapolated into characteristic 3.
    pub experimental: bool,
}

fn as_decimal<S: serde::Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Evaluates the counting polynomials at `q`. Characteristic 3 is refused.
pub fn predict(q: u64) -> Result<Prediction, LedgerError> {
    let (p, _) = prime_power(q).ok_or(LedgerError::NotPrimePower(q))?;
    if p == 3 {
        return Err(LedgerError::UnsupportedCharacteristic(q));
    }
    predict_unchecked(q)
}

/// As [`predict`], but also evaluates in characteristic 3, flagged experimental.
pub fn predict_unchecked(q: u64) -> Result<Prediction, LedgerError> {
    let (p, _) = prime_power(q).ok_or(LedgerError::NotPrimePower(q))?;
    let x = BigInt::from(q);
    let m = point_count_poly(&classes_m(), DIM_M)?;
    let u = point_count_poly(&classes_u(), DIM_U)?;
    Ok(Prediction {
        q,
        smooth_count: m.eval(&x),
        point_sum: u.eval(&x),
        average: (q * q + q + 1, 1),
        admissible_traces: ADMISSIBLE_TRACES.to_vec(),
        t6_allowed: !matches!(q, 2 | 3 | 5),
        experimental: p == 3,
    })
}

/// Sanity identities tying the pieces together; the first failure is returned.
pub fn self_check() -> Result<(), LedgerError> {
    let page = assemble_e1();
    if page.entries.len() != 15 || page.total_rank() != 15 {
        return Err(LedgerError::Inconsistency(format!(
            "E1 page has {} entries of total rank {}",
            page.entries.len(),
            page.total_rank()
        )));
    }
    if page.column(16).next().is_some() {
        return Err(LedgerError::Inconsistency("column 16 is not empty".into()));
    }
    poincare_up()?;
    let pu = poincare_u()?.expand();
    if !vfund_vanishing_check(&pu) {
        return Err(LedgerError::Inconsistency("P(U) != P(M)(1 + t^2 + t^4)".into()));
    }
    if classes_u().poincare() != pu || classes_m().poincare() != poincare_m().expand() {
        return Err(LedgerError::Inconsistency(
            "class lists disagree with the Poincare polynomials".into(),
        ));
    }
    let m = point_count_poly(&classes_m(), DIM_M)?;
    let u = point_count_poly(&classes_u(), DIM_U)?;
    if m != count_m_factored().expand() || u != count_u_factored().expand() {
        return Err(LedgerError::Inconsistency("counting polynomials disagree".into()));
    }
    if u != m.mul(&IntPoly::new(vec![1, 1, 1])) {
        return Err(LedgerError::Inconsistency("#U != #M (q^2 + q + 1)".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_round_trip() {
        let a = IntPoly::new(vec![1, -2, 0, 3]);
        let b = IntPoly::one_plus(2);
        let (q, r) = a.mul(&b).add(&IntPoly::new(vec![1])).div_rem(&b).unwrap();
        assert_eq!(q, a);
        assert_eq!(r, IntPoly::one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(IntPoly::new(vec![-1, 0, 2]).display("q"), "2q^2 - 1");
        assert_eq!(expected_up().display("t"), "(1 + t^3)(1 + t^5)^2");
        assert_eq!(count_m_factored().display("q"), "q^10(q^2 - 1)(q^3 - 1)(q^4 - 1)");
    }

    #[test]
    fn ledger_is_consistent() {
        self_check().unwrap();
    }
}
