//! Sparse multivariate polynomials over a [`Ring`] and polynomial maps
//! `K^d -> K^d`.
//!
//! Semantics are formal: `x^p` is never reduced to `x`, and two polynomials
//! are equal only when their canonical term lists coincide. Terms are kept in
//! descending graded-lex order (total degree first, then exponent sequences
//! compared lexicographically with `x1` most significant).

mod affine;
pub(crate) mod format;
mod map;
mod packed;

pub use affine::{AffineForm, AffineMap};
pub use format::{parse_stablemap, write_stablemap};
pub use map::{binomial, CoordDensity, DensityReport, PolyMap};

use std::cmp::Ordering;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElem};

/// Exponent vector of length `d`, with its total degree cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u16,
    exps: Box<[u8]>,
}

impl Monomial {
    pub fn new(exps: impl Into<Box<[u8]>>) -> Self {
        let exps = exps.into();
        let degree = exps.iter().map(|&e| e as u16).sum();
        Monomial { degree, exps }
    }

    pub fn one(dim: usize) -> Self {
        Monomial {
            degree: 0,
            exps: vec![0; dim].into_boxed_slice(),
        }
    }

    pub fn var(dim: usize, i: usize) -> Self {
        let mut exps = vec![0; dim];
        exps[i] = 1;
        Monomial {
            degree: 1,
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    /// Degree-3 product of three distinct variables.
    pub fn is_squarefree_cubic(&self) -> bool {
        self.degree == 3 && self.exps.iter().all(|&e| e <= 1)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in `d` variables with coefficients in `ring`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    dim: usize,
    terms: Vec<(Monomial, RingElem)>,
}

impl Poly {
    pub fn zero(ring: Ring, dim: usize) -> Self {
        Poly {
            ring,
            dim,
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: Ring, dim: usize, c: RingElem) -> Self {
        let c = ring.reduce(c);
        let terms = if c == 0 {
            Vec::new()
        } else {
            vec![(Monomial::one(dim), c)]
        };
        Poly { ring, dim, terms }
    }

    /// The coordinate function `x_{i+1}` (zero-based index).
    pub fn var(ring: Ring, dim: usize, i: usize) -> Self {
        assert!(i < dim, "variable index {i} out of range for dimension {dim}");
        Poly {
            ring,
            dim,
            terms: vec![(Monomial::var(dim, i), 1 % ring.modulus())],
        }
    }

    /// Builds a canonical polynomial from arbitrary terms: like monomials are
    /// collected, coefficients reduced, zeros dropped.
    pub fn from_terms<I>(ring: Ring, dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u8>, RingElem)>,
    {
        let mut acc = TermAccumulator::new(ring, dim);
        for (exps, c) in terms {
            if exps.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: exps.len(),
                });
            }
            acc.add(&exps, ring.reduce(c));
        }
        Ok(acc.into_poly())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Monomial, RingElem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Total degree of the leading term; 0 for constants and the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.first().map_or(0, |(m, _)| m.degree())
    }

    pub fn constant_term(&self) -> RingElem {
        match self.terms.last() {
            Some((m, c)) if m.degree == 0 => *c,
            _ => 0,
        }
    }

    fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(
                self.ring.to_string(),
                other.ring.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        Ok(self.merge(other, true))
    }

    // Both inputs are sorted descending, so a single merge pass keeps the
    // result canonical.
    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let ring = self.ring;
        let rhs = |c: RingElem| if negate { ring.neg(c) } else { c };
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    terms.push((ma.clone(), *ca));
                    i += 1;
                }
                Ordering::Less => {
                    terms.push((mb.clone(), rhs(*cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ring.add(*ca, rhs(*cb));
                    if c != 0 {
                        terms.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend(self.terms[i..].iter().cloned());
        terms.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), rhs(*c))));
        Poly {
            ring,
            dim: self.dim,
            terms,
        }
    }

    pub fn neg(&self) -> Poly {
        let ring = self.ring;
        Poly {
            ring,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), ring.neg(*c)))
                .collect(),
        }
    }

    /// Multiplies by a ring constant. Terms whose coefficient vanishes are
    /// dropped (e.g. `128 * 2 = 0` in `Z_256`).
    pub fn scale(&self, k: RingElem) -> Poly {
        let ring = self.ring;
        let k = ring.reduce(k);
        Poly {
            ring,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let v = ring.mul(*c, k);
                    (v != 0).then(|| (m.clone(), v))
                })
                .collect(),
        }
    }

    pub fn add_constant(&self, k: RingElem) -> Poly {
        self.merge(&Poly::constant(self.ring, self.dim, k), false)
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let total = self.degree() + other.degree();
        if total > u8::MAX as usize {
            return Err(Error::DegreeOverflow(total));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.ring, self.dim));
        }
        if let Some(p) = packed::mul(self, other) {
            return Ok(p);
        }
        let mut acc = TermAccumulator::with_capacity(
            self.ring,
            self.dim,
            self.terms.len().saturating_mul(other.terms.len()).min(1 << 20),
        );
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.add_product(ma.exponents(), mb.exponents(), self.ring.mul(*ca, *cb));
            }
        }
        Ok(acc.into_poly())
    }

    /// Evaluates at a point. Powers are tabulated once per call; each term
    /// then scans its exponent vector.
    pub fn eval(&self, point: &[RingElem]) -> RingElem {
        let powers = PowerTable::new(self.ring, point, self.degree());
        self.eval_with(&powers)
    }

    fn eval_with(&self, powers: &PowerTable) -> RingElem {
        let ring = self.ring;
        let mut sum = 0;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in m.exps.iter().enumerate() {
                if e != 0 {
                    t = ring.mul(t, powers.get(i, e));
                }
            }
            sum = ring.add(sum, t);
        }
        sum
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{m:?}")?;
        }
        Ok(())
    }
}

/// `v_i^e` for every coordinate and every exponent up to the maximum degree.
pub(crate) struct PowerTable {
    stride: usize,
    table: Vec<RingElem>,
}

impl PowerTable {
    pub(crate) fn new(ring: Ring, point: &[RingElem], max_exp: usize) -> Self {
        let stride = max_exp + 1;
        let mut table = Vec::with_capacity(point.len() * stride);
        for &v in point {
            let v = ring.reduce(v);
            let mut p = ring.reduce(1);
            for _ in 0..stride {
                table.push(p);
                p = ring.mul(p, v);
            }
        }
        PowerTable { stride, table }
    }

    #[inline]
    fn get(&self, i: usize, e: u8) -> RingElem {
        self.table[i * self.stride + e as usize]
    }
}

/// Hash-based collector of `(exponents, coefficient)` pairs used by every
/// operation that produces terms out of order.
pub(crate) struct TermAccumulator {
    ring: Ring,
    dim: usize,
    map: FxHashMap<Box<[u8]>, RingElem>,
    scratch: Vec<u8>,
}

impl TermAccumulator {
    pub(crate) fn new(ring: Ring, dim: usize) -> Self {
        Self::with_capacity(ring, dim, 0)
    }

    pub(crate) fn with_capacity(ring: Ring, dim: usize, cap: usize) -> Self {
        let mut map = FxHashMap::default();
        map.reserve(cap);
        TermAccumulator {
            ring,
            dim,
            map,
            scratch: vec![0; dim],
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, exps: &[u8], c: RingElem) {
        if c == 0 {
            return;
        }
        let ring = self.ring;
        match self.map.get_mut(exps) {
            Some(slot) => *slot = ring.add(*slot, c),
            None => {
                self.map.insert(exps.into(), c);
            }
        }
    }

    #[inline]
    pub(crate) fn add_product(&mut self, a: &[u8], b: &[u8], c: RingElem) {
        if c == 0 {
            return;
        }
        let mut scratch = std::mem::take(&mut self.scratch);
        for ((s, x), y) in scratch.iter_mut().zip(a).zip(b) {
            *s = x + y;
        }
        self.add(&scratch, c);
        self.scratch = scratch;
    }

    pub(crate) fn add_poly(&mut self, p: &Poly, k: RingElem) {
        let ring = self.ring;
        for (m, c) in &p.terms {
            self.add(m.exponents(), ring.mul(*c, k));
        }
    }

    pub(crate) fn into_poly(self) -> Poly {
        let mut terms: Vec<(Monomial, RingElem)> = self
            .map
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(e, c)| (Monomial::new(e), c))
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly {
            ring: self.ring,
            dim: self.dim,
            terms,
        }
    }
}
