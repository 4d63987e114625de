use std::rc::Rc;

use rustc_hash::FxHashMap;

use super::{packed, Monomial, Poly, PowerTable, TermAccumulator};
use crate::error::{Error, Result};
use crate::ring::{Ring, RingElem};

/// A polynomial transformation `x -> (f_1(x), ..., f_d(x))` of `K^d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMap {
    ring: Ring,
    dim: usize,
    coords: Vec<Poly>,
}

impl PolyMap {
    pub fn new(ring: Ring, coords: Vec<Poly>) -> Result<Self> {
        let dim = coords.len();
        for p in &coords {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: p.dim(),
                });
            }
            if p.ring() != ring {
                return Err(Error::RingMismatch(ring.to_string(), p.ring().to_string()));
            }
        }
        Ok(PolyMap { ring, dim, coords })
    }

    pub fn identity(ring: Ring, dim: usize) -> Self {
        PolyMap {
            ring,
            dim,
            coords: (0..dim).map(|i| Poly::var(ring, dim, i)).collect(),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Poly> {
        self.coords
    }

    pub fn term_count(&self) -> usize {
        self.coords.iter().map(Poly::len).sum()
    }

    /// Maximum total degree over all coordinates; 0 for constant maps.
    pub fn degree(&self) -> usize {
        self.coords.iter().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        *self == PolyMap::identity(self.ring, self.dim)
    }

    fn check_compatible(&self, other: &PolyMap) -> Result<()> {
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

    pub fn eval(&self, v: &[RingElem]) -> Result<Vec<RingElem>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: v.len(),
            });
        }
        let powers = PowerTable::new(self.ring, v, self.degree());
        Ok(self.coords.iter().map(|p| p.eval_with(&powers)).collect())
    }

    /// `self ∘ inner`: substitutes the coordinates of `inner` into `self`, so
    /// `inner` acts first. The result is fully expanded and collected.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        self.check_compatible(inner)?;
        let bound = self.degree() * inner.degree().max(1);
        if bound > u8::MAX as usize {
            return Err(Error::DegreeOverflow(bound));
        }
        let coords = match packed::compose(self, inner) {
            Some(coords) => coords,
            None => self.compose_unpacked(inner)?,
        };
        Ok(PolyMap {
            ring: self.ring,
            dim: self.dim,
            coords,
        })
    }

    fn compose_unpacked(&self, inner: &PolyMap) -> Result<Vec<Poly>> {
        let mut subst = Substitution::new(inner);
        let mut coords = Vec::with_capacity(self.dim);
        for outer in &self.coords {
            let mut acc = TermAccumulator::new(self.ring, self.dim);
            for (m, c) in outer.terms() {
                let image = subst.image(m)?;
                acc.add_poly(&image, *c);
            }
            coords.push(acc.into_poly());
        }
        Ok(coords)
    }

    /// `self^k` by square-and-multiply. `k = 0` gives the identity.
    pub fn power(&self, k: u64) -> Result<PolyMap> {
        self.power_inspect(k, |_| Ok(()))
    }

    /// Square-and-multiply with a hook called on every intermediate map.
    pub(crate) fn power_inspect<F>(&self, mut k: u64, mut inspect: F) -> Result<PolyMap>
    where
        F: FnMut(&PolyMap) -> Result<()>,
    {
        let mut result: Option<PolyMap> = None;
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                let next = match &result {
                    None => base.clone(),
                    Some(r) => base.compose(r)?,
                };
                inspect(&next)?;
                result = Some(next);
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base)?;
                inspect(&base)?;
            }
        }
        Ok(result.unwrap_or_else(|| PolyMap::identity(self.ring, self.dim)))
    }

    /// Counts of squarefree cubic terms `x_i x_j x_k` against `C(d, 3)`.
    pub fn density(&self) -> DensityReport {
        let slots = binomial(self.dim as u64, 3);
        let coords: Vec<CoordDensity> = self
            .coords
            .iter()
            .map(|p| {
                let squarefree_cubic = p
                    .terms()
                    .iter()
                    .filter(|(m, _)| m.is_squarefree_cubic())
                    .count();
                CoordDensity {
                    squarefree_cubic,
                    terms: p.len(),
                    ratio: ratio(squarefree_cubic as u64, slots),
                }
            })
            .collect();
        let total_cubic: u64 = coords.iter().map(|c| c.squarefree_cubic as u64).sum();
        DensityReport {
            dim: self.dim,
            slots,
            total_terms: self.term_count(),
            total_squarefree_cubic: total_cubic as usize,
            ratio: ratio(total_cubic, slots * self.dim as u64),
            coords,
        }
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordDensity {
    pub squarefree_cubic: usize,
    pub terms: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub dim: usize,
    /// `C(d, 3)`
    pub slots: u64,
    pub total_terms: usize,
    pub total_squarefree_cubic: usize,
    /// Aggregate squarefree-cubic count over `d * C(d, 3)`.
    pub ratio: f64,
    pub coords: Vec<CoordDensity>,
}

/// Memoized images of monomials under a substitution. A monomial's image is
/// built from the image of the monomial with its last variable lowered by
/// one, so prefixes are shared across all terms of the outer map.
struct Substitution<'a> {
    inner: &'a PolyMap,
    memo: FxHashMap<Monomial, Rc<Poly>>,
}

impl<'a> Substitution<'a> {
    fn new(inner: &'a PolyMap) -> Self {
        Substitution {
            inner,
            memo: FxHashMap::default(),
        }
    }

    fn image(&mut self, m: &Monomial) -> Result<Rc<Poly>> {
        if let Some(p) = self.memo.get(m) {
            return Ok(Rc::clone(p));
        }
        let ring = self.inner.ring;
        let dim = self.inner.dim;
        let image = match m.exponents().iter().rposition(|&e| e != 0) {
            None => Poly::constant(ring, dim, 1),
            Some(j) => {
                let mut lower = m.exponents().to_vec();
                lower[j] -= 1;
                let lower = Monomial::new(lower);
                if lower.degree() == 0 {
                    self.inner.coords[j].clone()
                } else {
                    let prefix = self.image(&lower)?;
                    prefix.mul(&self.inner.coords[j])?
                }
            }
        };
        let image = Rc::new(image);
        self.memo.insert(m.clone(), Rc::clone(&image));
        Ok(image)
    }
}
