use std::collections::VecDeque;

use super::{Flag, FlagGraph, FlagSide};
use crate::error::{Error, Result};
use crate::graph::ORACLE_VERTEX_LIMIT;
use crate::poly::PolyMap;
use crate::ring::{Ring, RingElem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderProbe {
    /// Orbit length of each sample, `None` when it exceeded the budget.
    pub orbits: Vec<Option<u64>>,
    /// The order is at least this large.
    pub lower_bound: u64,
    /// Exact order from a full enumeration of `K^d`, when small enough and
    /// representable.
    pub exact: Option<u128>,
}

/// Iterates `g` on each sample until it returns. An orbit that does not
/// close within `max_iter` steps still proves the order exceeds `max_iter`.
pub fn order_probe(g: &PolyMap, samples: &[Vec<RingElem>], max_iter: u64) -> Result<OrderProbe> {
    let mut orbits = Vec::with_capacity(samples.len());
    let mut lower_bound = 1;
    for v in samples {
        let start: Vec<RingElem> = v.iter().map(|&x| g.ring().reduce(x)).collect();
        let mut x = g.eval(&start)?;
        let mut len = 1;
        while x != start && len <= max_iter {
            x = g.eval(&x)?;
            len += 1;
        }
        if x == start {
            orbits.push(Some(len));
            lower_bound = lower_bound.max(len);
        } else {
            orbits.push(None);
            lower_bound = lower_bound.max(max_iter + 1);
        }
    }
    let exact = exact_order(g)?;
    if let Some(e) = exact {
        lower_bound = lower_bound.max(u64::try_from(e).unwrap_or(u64::MAX));
    }
    Ok(OrderProbe {
        orbits,
        lower_bound,
        exact,
    })
}

/// Order of `g` as a permutation of `K^d`: lcm of all cycle lengths.
fn exact_order(g: &PolyMap) -> Result<Option<u128>> {
    let q = g.ring().modulus();
    let Some(size) = q.checked_pow(g.dim() as u32).filter(|&s| s <= ORACLE_VERTEX_LIMIT) else {
        return Ok(None);
    };
    let size = size as usize;
    let decode = |mut idx: usize| -> Vec<RingElem> {
        (0..g.dim())
            .map(|_| {
                let d = idx as u64 % q;
                idx /= q as usize;
                d
            })
            .collect()
    };
    let encode = |v: &[RingElem]| v.iter().rev().fold(0usize, |acc, &c| acc * q as usize + c as usize);
    let mut seen = vec![false; size];
    let mut order: u128 = 1;
    for s in 0..size {
        if seen[s] {
            continue;
        }
        let mut len: u128 = 0;
        let mut idx = s;
        while !seen[idx] {
            seen[idx] = true;
            len += 1;
            idx = encode(&g.eval(&decode(idx))?);
        }
        if idx != s {
            // not a permutation
            return Ok(None);
        }
        let Some(next) = (order / gcd128(order, len)).checked_mul(len) else {
            return Ok(None);
        };
        order = next;
    }
    Ok(Some(order))
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableReport {
    /// `(k, deg g^k)` for `k = 1..=kmax`.
    pub degrees: Vec<(u64, usize)>,
    /// Whether every non-identity power has degree at most 3.
    pub passed: bool,
}

/// Degrees of `g, g^2, ..., g^kmax`, each power built from the previous one.
pub fn stable_power_check(g: &PolyMap, kmax: u64) -> Result<StableReport> {
    let mut degrees = Vec::with_capacity(kmax as usize);
    let mut passed = true;
    let mut power = g.clone();
    for k in 1..=kmax {
        if k > 1 {
            power = g.compose(&power)?;
        }
        let d = power.degree();
        if d > 3 && !power.is_identity() {
            passed = false;
        }
        degrees.push((k, d));
    }
    Ok(StableReport { degrees, passed })
}

/// Shortest directed cycle in the flag graph, searching every flag. In
/// restricted mode the colours are the regular elements, otherwise all
/// nonzero elements.
pub fn dd_cycle_oracle(n: usize, ring: Ring, restricted: bool) -> Result<Option<usize>> {
    let fg = FlagGraph::new(ring, n, restricted)?;
    let q = ring.modulus();
    let per_side = q
        .checked_pow(fg.dim() as u32)
        .filter(|&m| m.saturating_mul(2) <= ORACLE_VERTEX_LIMIT)
        .ok_or(Error::TooLarge(q.saturating_pow(fg.dim() as u32).saturating_mul(2)))?
        as usize;
    let colours: Vec<RingElem> = ring
        .elements()
        .filter(|&c| c != 0 && (!restricted || ring.is_regular(c)))
        .collect();

    let decode = |mut idx: usize| -> Vec<RingElem> {
        (0..fg.dim())
            .map(|_| {
                let d = idx as u64 % q;
                idx /= q as usize;
                d
            })
            .collect()
    };
    let encode = |v: &[RingElem]| v.iter().rev().fold(0usize, |acc, &c| acc * q as usize + c as usize);

    let mut out: Vec<Vec<u32>> = Vec::with_capacity(2 * per_side);
    for idx in 0..2 * per_side {
        let (side, base, other) = if idx < per_side {
            (FlagSide::F1, 0, per_side)
        } else {
            (FlagSide::F2, per_side, 0)
        };
        let flag = Flag {
            side,
            data: decode(idx - base),
        };
        let mut next = Vec::with_capacity(colours.len());
        for &c in &colours {
            let f = fg.flag_step(&flag, c)?;
            next.push((other + encode(&f.data)) as u32);
        }
        out.push(next);
    }

    let mut best = usize::MAX;
    let mut dist = vec![u32::MAX; out.len()];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..out.len() {
        for &t in &touched {
            dist[t] = u32::MAX;
        }
        touched.clear();
        queue.clear();
        dist[s] = 0;
        touched.push(s);
        queue.push_back(s);
        'bfs: while let Some(u) = queue.pop_front() {
            if dist[u] as usize + 1 >= best {
                break;
            }
            for &w in &out[u] {
                let w = w as usize;
                if w == s {
                    best = best.min(dist[u] as usize + 1);
                    break 'bfs;
                }
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    touched.push(w);
                    queue.push_back(w);
                }
            }
        }
    }
    Ok((best != usize::MAX).then_some(best))
}
