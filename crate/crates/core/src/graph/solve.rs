//! Forward-pass solving of the incidence relations, shared by numeric
//! vertices (ring elements) and symbolic ones (polynomials).

use super::layout::{Layout, Relation};
use crate::error::Result;
use crate::poly::Poly;
use crate::ring::{Ring, RingElem};

pub(crate) trait Arith {
    type V: Clone;
    fn add(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn add_const(&self, a: &Self::V, c: RingElem) -> Self::V;
}

impl Arith for Ring {
    type V = RingElem;
    fn add(&self, a: &RingElem, b: &RingElem) -> Result<RingElem> {
        Ok(Ring::add(self, *a, *b))
    }
    fn sub(&self, a: &RingElem, b: &RingElem) -> Result<RingElem> {
        Ok(Ring::sub(self, *a, *b))
    }
    fn mul(&self, a: &RingElem, b: &RingElem) -> Result<RingElem> {
        Ok(Ring::mul(self, *a, *b))
    }
    fn add_const(&self, a: &RingElem, c: RingElem) -> RingElem {
        Ring::add(self, *a, self.reduce(c))
    }
}

/// Polynomial coordinates; the ring lives in the polynomials themselves.
pub(crate) struct Symbolic;

impl Arith for Symbolic {
    type V = Poly;
    fn add(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        a.add(b)
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        a.sub(b)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        a.mul(b)
    }
    fn add_const(&self, a: &Poly, c: RingElem) -> Poly {
        a.add_constant(a.ring().reduce(c))
    }
}

fn product<A: Arith>(ar: &A, rel: Relation, p: &[A::V], l: &[A::V]) -> Result<A::V> {
    match rel {
        Relation::LineFirst(a) => ar.mul(&l[0], &p[a]),
        Relation::PointFirst(a) => ar.mul(&l[a], &p[0]),
    }
}

/// The line incident to point `p` with first coordinate `l1`.
pub(crate) fn line_through<A: Arith>(
    ar: &A,
    layout: &Layout,
    p: &[A::V],
    l1: A::V,
) -> Result<Vec<A::V>> {
    let mut l = Vec::with_capacity(p.len());
    l.push(l1);
    for j in 1..p.len() {
        let rhs = product(ar, layout.relation(j), p, &l)?;
        l.push(ar.add(&p[j], &rhs)?);
    }
    Ok(l)
}

/// The point incident to line `l` with first coordinate `p1`.
pub(crate) fn point_on<A: Arith>(
    ar: &A,
    layout: &Layout,
    l: &[A::V],
    p1: A::V,
) -> Result<Vec<A::V>> {
    let mut p = Vec::with_capacity(l.len());
    p.push(p1);
    for j in 1..l.len() {
        let rhs = product(ar, layout.relation(j), &p, l)?;
        p.push(ar.sub(&l[j], &rhs)?);
    }
    Ok(p)
}
