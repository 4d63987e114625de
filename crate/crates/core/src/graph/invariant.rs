//! The component invariants `a_2, ..., a_t` with `t = floor((n + 2) / 4)`.

use super::layout::{index_of, CoordLabel};
use super::{DGraph, Side, Vertex};
use crate::error::{Error, Result};
use crate::ring::{Ring, RingElem};

const MIN_DIM: usize = 6;

/// Number of invariants `a_2..a_t` carried by vertices of `D(n, K)`.
pub fn invariant_count(n: usize) -> usize {
    ((n + 2) / 4).saturating_sub(1)
}

/// Reads `u_{i,j}` (or `u'_{i,i}`) with the boundary conventions; names with
/// no defined value read as 0, as do truncated coordinates.
fn value(ring: Ring, side: Side, u: &[RingElem], i: i64, j: i64, prime: bool) -> RingElem {
    match (i, j, prime) {
        (0, 0, false) => return ring.neg(1),
        (0, 0, true) => return 1 % ring.modulus(),
        (0, 1, false) => return if side == Side::Point { u[0] } else { 0 },
        (1, 0, false) => return if side == Side::Line { u[0] } else { 0 },
        _ => {}
    }
    if i < 1 || j < 1 {
        return 0;
    }
    let label = if prime {
        CoordLabel::Prime(i as u32)
    } else {
        CoordLabel::Pair(i as u32, j as u32)
    };
    match index_of(label) {
        Some(idx) if idx < u.len() => u[idx],
        _ => 0,
    }
}

/// `a_r = sum_{i=0..r} (u_{ii} u'_{r-i,r-i} - u_{i,i+1} u_{r-i,r-i-1})`
fn a_r(ring: Ring, side: Side, u: &[RingElem], r: i64) -> RingElem {
    let mut acc = 0;
    for i in 0..=r {
        let k = r - i;
        let diag = ring.mul(value(ring, side, u, i, i, false), value(ring, side, u, k, k, true));
        let off = ring.mul(value(ring, side, u, i, i + 1, false), value(ring, side, u, k, k - 1, false));
        acc = ring.add(acc, ring.sub(diag, off));
    }
    acc
}

impl DGraph {
    fn require_invariants(&self) -> Result<()> {
        if self.n() < MIN_DIM {
            return Err(Error::DimensionTooSmall {
                min: MIN_DIM,
                actual: self.n(),
            });
        }
        Ok(())
    }

    /// `(a_2, ..., a_t)` of a point or line.
    pub fn invariant_vector(&self, v: &Vertex) -> Result<Vec<RingElem>> {
        self.require_invariants()?;
        let u = self.canonical(v)?;
        let t = (self.n() + 2) / 4;
        Ok((2..=t as i64).map(|r| a_r(self.ring, v.side, &u, r)).collect())
    }

    /// Takes every coordinate of `free` except the `(i,i)'` ones, which are
    /// solved in increasing `i` so the result shares the invariants of
    /// `anchor`. `a_r` contains `u'_{rr}` only through `u_00 u'_rr = -u'_rr`,
    /// so no division is needed and any ring works.
    pub fn parametrize_component_vertex(&self, anchor: &Vertex, free: &Vertex) -> Result<Vertex> {
        let target = self.invariant_vector(anchor)?;
        let mut u = self.canonical(free)?;
        let side = anchor.side;
        for (k, &want) in target.iter().enumerate() {
            let r = k as i64 + 2;
            let idx = index_of(CoordLabel::Prime(r as u32)).expect("(r,r)' is a coordinate");
            u[idx] = 0;
            let rest = a_r(self.ring, side, &u, r);
            u[idx] = self.ring.sub(rest, want);
        }
        Ok(Vertex { side, coords: u })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn counts() {
        assert_eq!(invariant_count(5), 0);
        assert_eq!(invariant_count(6), 1);
        assert_eq!(invariant_count(9), 1);
        assert_eq!(invariant_count(10), 2);
    }

    #[test]
    fn zero_point_in_small_graph() {
        let g = DGraph::new(Ring::prime_field(3).unwrap(), 6).unwrap();
        assert_eq!(g.invariant_vector(&Vertex::point(vec![0; 6])).unwrap(), vec![0]);
        let small = DGraph::new(Ring::prime_field(3).unwrap(), 5).unwrap();
        assert!(matches!(
            small.invariant_vector(&Vertex::point(vec![0; 5])),
            Err(Error::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn invariant_is_constant_along_edges() {
        let r = Ring::prime_field(127).unwrap();
        let g = DGraph::new(r, 14).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let p = g.random_vertex(Side::Point, &mut rng);
            let l = g.neighbor(&p, r.sample(&mut rng)).unwrap();
            assert_eq!(g.invariant_vector(&p).unwrap(), g.invariant_vector(&l).unwrap());
        }
    }

    #[test]
    fn every_first_invariant_value_is_attained() {
        let r = Ring::prime_field(3).unwrap();
        let g = DGraph::new(r, 6).unwrap();
        let mut seen = [false; 3];
        for x in 0..3u64.pow(6) {
            let coords: Vec<u64> = (0..6).map(|j| x / 3u64.pow(j) % 3).collect();
            seen[g.invariant_vector(&Vertex::point(coords)).unwrap()[0] as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn parametrized_vertices_share_invariants() {
        let r = Ring::residue(256).unwrap();
        let g = DGraph::new(r, 17).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for side in [Side::Point, Side::Line] {
            for _ in 0..50 {
                let anchor = g.random_vertex(side, &mut rng);
                let free = g.random_vertex(side, &mut rng);
                let w = g.parametrize_component_vertex(&anchor, &free).unwrap();
                assert_eq!(g.invariant_vector(&w).unwrap(), g.invariant_vector(&anchor).unwrap());
            }
        }
        let zero = Vertex::point(vec![0; 17]);
        assert_eq!(g.parametrize_component_vertex(&zero, &zero).unwrap(), zero);
    }
}
