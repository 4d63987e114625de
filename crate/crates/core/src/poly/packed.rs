//! Exponent vectors packed four bits per variable. While every exponent stays
//! below 16, multiplying monomials is limb-wise addition of their keys.

use std::hash::Hash;
use std::rc::Rc;

use rustc_hash::FxHashMap;

use super::{Monomial, Poly, PolyMap};
use crate::ring::{Ring, RingElem};

const NIBBLES: usize = 16;
/// Largest total degree a packed computation may reach.
pub(crate) const MAX_DEGREE: usize = 15;
const MAX_DIM: usize = 8 * NIBBLES;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Key<const W: usize>([u64; W]);

impl<const W: usize> Key<W> {
    const ONE: Self = Key([0; W]);

    fn pack(exps: &[u8]) -> Self {
        let mut k = [0u64; W];
        for (i, &e) in exps.iter().enumerate() {
            k[i / NIBBLES] |= (e as u64) << (4 * (i % NIBBLES));
        }
        Key(k)
    }

    fn unpack(&self, dim: usize) -> Monomial {
        let exps: Vec<u8> = (0..dim)
            .map(|i| ((self.0[i / NIBBLES] >> (4 * (i % NIBBLES))) & 0xf) as u8)
            .collect();
        Monomial::new(exps)
    }

    #[inline]
    fn times(self, other: Self) -> Self {
        let mut k = self.0;
        for (a, b) in k.iter_mut().zip(other.0) {
            *a += b;
        }
        Key(k)
    }

    /// Highest variable with a nonzero exponent, and the key with that
    /// exponent lowered by one.
    fn split_last(self) -> Option<(usize, Self)> {
        let limb = (0..W).rev().find(|&w| self.0[w] != 0)?;
        let nib = (63 - self.0[limb].leading_zeros() as usize) / 4;
        let mut k = self.0;
        k[limb] -= 1 << (4 * nib);
        Some((limb * NIBBLES + nib, Key(k)))
    }
}

type Terms<const W: usize> = Vec<(Key<W>, RingElem)>;

fn pack_terms<const W: usize>(p: &Poly) -> Terms<W> {
    p.terms.iter().map(|(m, c)| (Key::pack(m.exponents()), *c)).collect()
}

fn unpack_terms<const W: usize>(ring: Ring, dim: usize, acc: impl IntoIterator<Item = (Key<W>, RingElem)>) -> Poly {
    let mut terms: Vec<(Monomial, RingElem)> = acc
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(k, c)| (k.unpack(dim), c))
        .collect();
    terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    Poly { ring, dim, terms }
}

#[inline]
fn accumulate<const W: usize>(ring: Ring, acc: &mut FxHashMap<Key<W>, RingElem>, k: Key<W>, c: RingElem) {
    let slot = acc.entry(k).or_insert(0);
    *slot = ring.add(*slot, c);
}

fn mul_terms<const W: usize>(ring: Ring, a: &Terms<W>, b: &Terms<W>) -> Terms<W> {
    let mut acc: FxHashMap<Key<W>, RingElem> = FxHashMap::default();
    acc.reserve((a.len() * b.len()).min(1 << 20));
    for &(ka, ca) in a {
        for &(kb, cb) in b {
            let c = ring.mul(ca, cb);
            if c != 0 {
                accumulate(ring, &mut acc, ka.times(kb), c);
            }
        }
    }
    acc.into_iter().filter(|&(_, c)| c != 0).collect()
}

/// Limbs needed for `dim` variables, if the packed path applies.
fn words(dim: usize, degree: usize) -> Option<usize> {
    if degree > MAX_DEGREE || dim > MAX_DIM {
        return None;
    }
    Some(match dim.div_ceil(NIBBLES) {
        0 | 1 => 1,
        2 => 2,
        3 | 4 => 4,
        _ => 8,
    })
}

macro_rules! dispatch {
    ($w:expr, $f:ident ( $($arg:expr),* )) => {
        match $w {
            1 => $f::<1>($($arg),*),
            2 => $f::<2>($($arg),*),
            4 => $f::<4>($($arg),*),
            _ => $f::<8>($($arg),*),
        }
    };
}

/// Product of two polynomials, or `None` when the result does not fit.
pub(super) fn mul(a: &Poly, b: &Poly) -> Option<Poly> {
    let w = words(a.dim, a.degree() + b.degree())?;
    Some(dispatch!(w, mul_w(a, b)))
}

fn mul_w<const W: usize>(a: &Poly, b: &Poly) -> Poly {
    let product = mul_terms(a.ring, &pack_terms::<W>(a), &pack_terms::<W>(b));
    unpack_terms(a.ring, a.dim, product)
}

/// `outer ∘ inner`, or `None` when the intermediate degree does not fit.
pub(super) fn compose(outer: &PolyMap, inner: &PolyMap) -> Option<Vec<Poly>> {
    let w = words(outer.dim(), outer.degree() * inner.degree().max(1))?;
    Some(dispatch!(w, compose_w(outer, inner)))
}

struct Images<const W: usize> {
    ring: Ring,
    inner: Vec<Rc<Terms<W>>>,
    memo: FxHashMap<Key<W>, Rc<Terms<W>>>,
}

impl<const W: usize> Images<W> {
    /// Image of a monomial, built from the image of its prefix with the last
    /// variable lowered, so prefixes are shared across all outer terms.
    fn get(&mut self, key: Key<W>) -> Rc<Terms<W>> {
        if let Some(t) = self.memo.get(&key) {
            return Rc::clone(t);
        }
        let image = match key.split_last() {
            None => Rc::new(vec![(Key::ONE, 1 % self.ring.modulus())]),
            Some((j, lower)) if lower == Key::ONE => Rc::clone(&self.inner[j]),
            Some((j, lower)) => {
                let prefix = self.get(lower);
                Rc::new(mul_terms(self.ring, &prefix, &self.inner[j]))
            }
        };
        self.memo.insert(key, Rc::clone(&image));
        image
    }
}

fn compose_w<const W: usize>(outer: &PolyMap, inner: &PolyMap) -> Vec<Poly> {
    let ring = outer.ring();
    let mut images = Images::<W> {
        ring,
        inner: inner.coords().iter().map(|p| Rc::new(pack_terms(p))).collect(),
        memo: FxHashMap::default(),
    };
    outer
        .coords()
        .iter()
        .map(|f| {
            let mut acc: FxHashMap<Key<W>, RingElem> = FxHashMap::default();
            for (m, c) in f.terms() {
                let image = images.get(Key::pack(m.exponents()));
                for &(k, d) in image.iter() {
                    let t = ring.mul(*c, d);
                    if t != 0 {
                        accumulate(ring, &mut acc, k, t);
                    }
                }
            }
            unpack_terms(ring, outer.dim(), acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_round_trip_and_multiply() {
        let exps: Vec<u8> = (0..40).map(|i| (i % 4) as u8).collect();
        let k = Key::<4>::pack(&exps);
        assert_eq!(k.unpack(40), Monomial::new(exps.clone()));
        let sq = k.times(k).unpack(40);
        assert!(sq.exponents().iter().zip(&exps).all(|(&a, &b)| a == 2 * b));
        let (j, lower) = k.split_last().unwrap();
        assert_eq!(j, 39);
        assert_eq!(lower.unpack(40).exponents()[39], 2);
        assert!(Key::<2>::ONE.split_last().is_none());
    }

    #[test]
    fn limits() {
        assert_eq!(words(16, 9), Some(1));
        assert_eq!(words(17, 9), Some(2));
        assert_eq!(words(40, 9), Some(4));
        assert_eq!(words(128, 3), Some(8));
        assert_eq!(words(129, 3), None);
        assert_eq!(words(8, 16), None);
    }
}
