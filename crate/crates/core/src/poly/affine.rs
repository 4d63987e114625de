use rand::Rng;

use super::{Poly, PolyMap};
use crate::error::{Error, Result};
use crate::ring::{Ring, RingElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffineForm {
    Dense,
    /// Unit diagonal, off-diagonal entries confined to the first row.
    FirstRow,
}

/// `x -> A x + c` with `A` invertible over the ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    ring: Ring,
    matrix: Vec<Vec<RingElem>>,
    shift: Vec<RingElem>,
    form: AffineForm,
}

impl AffineMap {
    pub fn identity(ring: Ring, dim: usize) -> Self {
        AffineMap::first_row(ring, &vec![0; dim.saturating_sub(1)], vec![0; dim])
            .expect("identity is well formed")
    }

    /// Dense constructor; rejects matrices whose determinant is not regular.
    pub fn dense(ring: Ring, matrix: Vec<Vec<RingElem>>, shift: Vec<RingElem>) -> Result<Self> {
        let dim = shift.len();
        if matrix.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: matrix.len(),
            });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: row.len(),
            });
        }
        let matrix: Vec<Vec<RingElem>> = matrix
            .into_iter()
            .map(|r| r.into_iter().map(|a| ring.reduce(a)).collect())
            .collect();
        if !ring.is_regular(determinant(ring, &matrix)) {
            return Err(Error::SingularMatrix);
        }
        Ok(AffineMap {
            ring,
            matrix,
            shift: shift.into_iter().map(|a| ring.reduce(a)).collect(),
            form: AffineForm::Dense,
        })
    }

    /// `A = I + e_1 w^T` where `w = (0, tail...)`. The determinant is 1, so
    /// this never fails for a well-sized `tail`.
    pub fn first_row(ring: Ring, tail: &[RingElem], shift: Vec<RingElem>) -> Result<Self> {
        let dim = shift.len();
        if tail.len() + 1 != dim.max(1) {
            return Err(Error::DimensionMismatch {
                expected: dim.saturating_sub(1),
                actual: tail.len(),
            });
        }
        let mut matrix = vec![vec![0; dim]; dim];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 1;
        }
        for (j, &w) in tail.iter().enumerate() {
            matrix[0][j + 1] = ring.reduce(w);
        }
        Ok(AffineMap {
            ring,
            matrix,
            shift: shift.into_iter().map(|a| ring.reduce(a)).collect(),
            form: AffineForm::FirstRow,
        })
    }

    /// First-row form with every off-diagonal first-row entry nonzero and a
    /// zero shift.
    pub fn random_first_row<R: Rng + ?Sized>(ring: Ring, dim: usize, rng: &mut R) -> Self {
        let tail: Vec<RingElem> = (1..dim)
            .map(|_| rng.random_range(1..ring.modulus()))
            .collect();
        AffineMap::first_row(ring, &tail, vec![0; dim]).expect("sizes agree")
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn form(&self) -> AffineForm {
        self.form
    }

    pub fn matrix(&self) -> &[Vec<RingElem>] {
        &self.matrix
    }

    pub fn shift(&self) -> &[RingElem] {
        &self.shift
    }

    pub fn determinant(&self) -> RingElem {
        match self.form {
            AffineForm::FirstRow => 1,
            AffineForm::Dense => determinant(self.ring, &self.matrix),
        }
    }

    /// `A v + c`. Linear in `d` for the first-row form.
    pub fn apply(&self, v: &[RingElem]) -> Result<Vec<RingElem>> {
        let dim = self.dim();
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: v.len(),
            });
        }
        let r = self.ring;
        let out = match self.form {
            AffineForm::FirstRow => {
                let mut out: Vec<RingElem> =
                    v.iter().zip(&self.shift).map(|(&x, &c)| r.add(x, c)).collect();
                if dim > 0 {
                    let extra = self.matrix[0][1..]
                        .iter()
                        .zip(&v[1..])
                        .fold(0, |acc, (&a, &x)| r.add(acc, r.mul(a, x)));
                    out[0] = r.add(out[0], extra);
                }
                out
            }
            AffineForm::Dense => self
                .matrix
                .iter()
                .zip(&self.shift)
                .map(|(row, &c)| {
                    row.iter()
                        .zip(v)
                        .fold(c, |acc, (&a, &x)| r.add(acc, r.mul(a, x)))
                })
                .collect(),
        };
        Ok(out)
    }

    /// The degree-1 polynomial map with the same action.
    pub fn to_map(&self) -> PolyMap {
        let ring = self.ring;
        let dim = self.dim();
        let coords = self
            .matrix
            .iter()
            .zip(&self.shift)
            .map(|(row, &c)| {
                let mut terms: Vec<(Vec<u8>, RingElem)> = row
                    .iter()
                    .enumerate()
                    .filter(|&(_, &a)| a != 0)
                    .map(|(j, &a)| {
                        let mut e = vec![0u8; dim];
                        e[j] = 1;
                        (e, a)
                    })
                    .collect();
                terms.push((vec![0u8; dim], c));
                Poly::from_terms(ring, dim, terms).expect("sizes agree")
            })
            .collect();
        PolyMap::new(ring, coords).expect("coordinates share ring and dimension")
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let r = self.ring;
        let dim = self.dim();
        let (matrix, form) = match self.form {
            AffineForm::FirstRow => {
                let mut m = self.matrix.clone();
                for a in m[0].iter_mut().skip(1) {
                    *a = r.neg(*a);
                }
                (m, AffineForm::FirstRow)
            }
            AffineForm::Dense => (invert(r, &self.matrix)?, AffineForm::Dense),
        };
        // A^{-1}(y - c) = A^{-1} y - A^{-1} c
        let linear = AffineMap {
            ring: r,
            matrix,
            shift: vec![0; dim],
            form,
        };
        let back = linear.apply(&self.shift)?;
        Ok(AffineMap {
            shift: back.into_iter().map(|a| r.neg(a)).collect(),
            ..linear
        })
    }
}

/// Row reduction over `Z_m` using only unimodular operations (swaps and
/// adding multiples of one row to another). Within each column a Euclidean
/// descent replaces the usual pivot search, because in a ring like `Z_6` an
/// invertible matrix can have no unit entry in a column.
///
/// Returns the determinant and, if requested and the determinant is regular,
/// the inverse.
fn reduce(
    ring: Ring,
    matrix: &[Vec<RingElem>],
    want_inverse: bool,
) -> (RingElem, Option<Vec<Vec<RingElem>>>) {
    let n = matrix.len();
    let mut a: Vec<Vec<RingElem>> = matrix.to_vec();
    let mut inv: Vec<Vec<RingElem>> = (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut det = ring.reduce(1);
    // two rows of the same matrix are read and written
    #[allow(clippy::needless_range_loop)]
    let row_sub = |rows: &mut Vec<Vec<RingElem>>, target: usize, src: usize, q: RingElem| {
        for k in 0..n {
            let t = ring.mul(q, rows[src][k]);
            rows[target][k] = ring.sub(rows[target][k], t);
        }
    };
    for c in 0..n {
        loop {
            let pivot = (c..n)
                .filter(|&r| a[r][c] != 0)
                .min_by_key(|&r| a[r][c]);
            let Some(p) = pivot else {
                return (0, None);
            };
            if p != c {
                a.swap(p, c);
                inv.swap(p, c);
                det = ring.neg(det);
            }
            let mut done = true;
            for r in c + 1..n {
                if a[r][c] != 0 {
                    let q = a[r][c] / a[c][c];
                    row_sub(&mut a, r, c, q);
                    row_sub(&mut inv, r, c, q);
                    done &= a[r][c] == 0;
                }
            }
            if done {
                break;
            }
        }
        det = ring.mul(det, a[c][c]);
    }
    if !want_inverse || !ring.is_regular(det) {
        return (det, None);
    }
    for c in (0..n).rev() {
        let p_inv = ring.inv(a[c][c]).expect("pivots of a regular determinant are units");
        for k in 0..n {
            a[c][k] = ring.mul(a[c][k], p_inv);
            inv[c][k] = ring.mul(inv[c][k], p_inv);
        }
        for r in 0..c {
            let q = a[r][c];
            if q != 0 {
                row_sub(&mut a, r, c, q);
                row_sub(&mut inv, r, c, q);
            }
        }
    }
    (det, Some(inv))
}

pub(crate) fn determinant(ring: Ring, matrix: &[Vec<RingElem>]) -> RingElem {
    reduce(ring, matrix, false).0
}

fn invert(ring: Ring, matrix: &[Vec<RingElem>]) -> Result<Vec<Vec<RingElem>>> {
    reduce(ring, matrix, true).1.ok_or(Error::SingularMatrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_is_identity_map() {
        let r = Ring::residue(256).unwrap();
        assert!(AffineMap::identity(r, 5).to_map().is_identity());
    }

    #[test]
    fn first_row_inverse_negates_row() {
        let r = Ring::residue(256).unwrap();
        let a = AffineMap::first_row(r, &[3, 5, 7], vec![0; 4]).unwrap();
        let b = a.inverse().unwrap();
        assert_eq!(b.form(), AffineForm::FirstRow);
        assert_eq!(b.matrix()[0], vec![1, 253, 251, 249]);
        let composed = b.to_map().compose(&a.to_map()).unwrap();
        assert!(composed.is_identity());
        assert_eq!(a.determinant(), 1);
    }

    #[test]
    fn singular_over_z4() {
        let r = Ring::residue(4).unwrap();
        // det = 1*2 - 0*1 = 2, a zero divisor
        let err = AffineMap::dense(r, vec![vec![1, 1], vec![0, 2]], vec![0, 0]);
        assert_eq!(err, Err(Error::SingularMatrix));
    }

    #[test]
    fn dense_inverse_without_unit_column_entries() {
        // over Z_6 the first column holds only zero divisors, det = 4 - 9 = 1
        let r = Ring::residue(6).unwrap();
        let a = AffineMap::dense(r, vec![vec![2, 3], vec![3, 2]], vec![1, 4]).unwrap();
        let b = a.inverse().unwrap();
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(b.apply(&a.apply(&[x, y]).unwrap()).unwrap(), vec![x, y]);
            }
        }
    }

    #[test]
    fn random_dense_inverses_compose_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = Ring::residue(256).unwrap();
        let mut found = 0;
        while found < 20 {
            let d = 4;
            let m: Vec<Vec<u64>> = (0..d)
                .map(|_| (0..d).map(|_| r.sample(&mut rng)).collect())
                .collect();
            let shift: Vec<u64> = (0..d).map(|_| r.sample(&mut rng)).collect();
            let Ok(a) = AffineMap::dense(r, m, shift) else {
                continue;
            };
            found += 1;
            let b = a.inverse().unwrap();
            assert!(b.to_map().compose(&a.to_map()).unwrap().is_identity());
            assert!(a.to_map().compose(&b.to_map()).unwrap().is_identity());
        }
    }

    #[test]
    fn apply_agrees_with_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = Ring::prime_field(127).unwrap();
        let a = AffineMap::random_first_row(r, 6, &mut rng);
        assert!(a.matrix()[0][1..].iter().all(|&w| w != 0));
        let v: Vec<u64> = (0..6).map(|_| r.sample(&mut rng)).collect();
        assert_eq!(a.apply(&v).unwrap(), a.to_map().eval(&v).unwrap());
    }
}
