//! Brute-force checks on a fully materialized `D(k, K)`.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use super::solve::line_through;
use super::{DGraph, Side, Vertex};
use crate::error::{Error, Result};
use crate::ring::{Ring, RingElem};

/// Largest vertex count the oracles will materialize.
pub const ORACLE_VERTEX_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub is_bipartite: bool,
    /// Common number of distinct neighbours, if all vertices agree.
    pub regular_degree: Option<usize>,
    /// Each vertex has exactly one neighbour per colour, seen from both sides.
    pub rainbow: bool,
    /// `None` for a forest.
    pub girth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub components: usize,
    pub fibers: usize,
    /// Fibers of the invariant vector meeting more than one component.
    pub split_fibers: usize,
    /// Components meeting more than one fiber.
    pub mixed_components: usize,
}

impl ComponentReport {
    pub fn coincide(&self) -> bool {
        self.split_fibers == 0 && self.mixed_components == 0
    }
}

/// Points are indices `0..N`, lines `N..2N`, with `N = |K|^k` and
/// coordinates read as little-endian base-`|K|` digits.
pub struct GraphOracle {
    graph: DGraph,
    per_side: usize,
    adj: Vec<Vec<u32>>,
    rainbow: bool,
}

impl GraphOracle {
    pub fn build(ring: Ring, k: usize) -> Result<Self> {
        let graph = DGraph::new(ring, k)?;
        let q = ring.modulus();
        let per_side = q
            .checked_pow(graph.n() as u32)
            .filter(|&m| m.saturating_mul(2) <= ORACLE_VERTEX_LIMIT)
            .ok_or(Error::TooLarge(q.saturating_pow(graph.n() as u32).saturating_mul(2)))?
            as usize;

        let mut oracle = GraphOracle {
            graph,
            per_side,
            adj: vec![Vec::with_capacity(q as usize); 2 * per_side],
            rainbow: true,
        };
        let layout = oracle.graph.layout().clone();
        for pi in 0..per_side {
            let p = oracle.coords(pi);
            for c in ring.elements() {
                let l = line_through(&ring, &layout, &p, ring.add(p[0], c))?;
                let li = per_side + oracle.encode(&l);
                oracle.adj[pi].push(li as u32);
                oracle.adj[li].push(pi as u32);
            }
        }
        // every line must see one point per colour, and those must be its neighbours
        for li in 0..per_side {
            let line = Vertex::line(oracle.coords(li));
            let mut seen: Vec<u32> = Vec::with_capacity(q as usize);
            for c in ring.elements() {
                let p = oracle.graph.neighbor(&line, c)?;
                seen.push(oracle.encode(&p.coords) as u32);
            }
            seen.sort_unstable();
            let mut mine = oracle.adj[per_side + li].clone();
            mine.sort_unstable();
            if seen != mine {
                oracle.rainbow = false;
            }
        }
        Ok(oracle)
    }

    pub fn graph(&self) -> &DGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.per_side
    }

    pub fn edge_count(&self) -> usize {
        self.adj[..self.per_side].iter().map(Vec::len).sum()
    }

    fn coords(&self, mut idx: usize) -> Vec<RingElem> {
        let q = self.graph.ring().modulus() as usize;
        (0..self.graph.n())
            .map(|_| {
                let d = idx % q;
                idx /= q;
                d as RingElem
            })
            .collect()
    }

    fn encode(&self, coords: &[RingElem]) -> usize {
        let q = self.graph.ring().modulus() as usize;
        coords.iter().rev().fold(0, |acc, &c| acc * q + c as usize)
    }

    pub fn vertex(&self, idx: usize) -> Vertex {
        if idx < self.per_side {
            Vertex::point(self.coords(idx))
        } else {
            Vertex::line(self.coords(idx - self.per_side))
        }
    }

    pub fn index(&self, v: &Vertex) -> usize {
        let base = match v.side {
            Side::Point => 0,
            Side::Line => self.per_side,
        };
        base + self.encode(&v.coords)
    }

    /// Every edge as `(point, line)` indices.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj[..self.per_side]
            .iter()
            .enumerate()
            .flat_map(|(p, ls)| ls.iter().map(move |&l| (p, l as usize)))
    }

    fn has_multi_edges(&self) -> bool {
        self.adj.iter().any(|ns| {
            let mut s = ns.clone();
            s.sort_unstable();
            s.windows(2).any(|w| w[0] == w[1])
        })
    }

    pub fn is_bipartite(&self) -> bool {
        let mut colour = vec![u8::MAX; self.adj.len()];
        let mut queue = VecDeque::new();
        for s in 0..self.adj.len() {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    let w = w as usize;
                    if colour[w] == u8::MAX {
                        colour[w] = 1 - colour[u];
                        queue.push_back(w);
                    } else if colour[w] == colour[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn regular_degree(&self) -> Option<usize> {
        if self.has_multi_edges() {
            return None;
        }
        let d = self.adj[0].len();
        self.adj.iter().all(|ns| ns.len() == d).then_some(d)
    }

    /// Exact girth by BFS from every vertex, cut off once no shorter cycle
    /// can appear.
    pub fn girth(&self) -> Option<usize> {
        if self.has_multi_edges() {
            return Some(2);
        }
        let v = self.adj.len();
        let mut best = usize::MAX;
        let mut dist = vec![u32::MAX; v];
        let mut parent = vec![u32::MAX; v];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..v {
            for &t in &touched {
                dist[t] = u32::MAX;
            }
            touched.clear();
            queue.clear();
            dist[s] = 0;
            parent[s] = u32::MAX;
            touched.push(s);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] as usize + 1 >= best {
                    break;
                }
                for &w in &self.adj[u] {
                    let w = w as usize;
                    if dist[w] == u32::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u as u32;
                        touched.push(w);
                        queue.push_back(w);
                    } else if parent[u] != w as u32 {
                        best = best.min((dist[u] + dist[w] + 1) as usize);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    pub fn report(&self) -> GraphReport {
        GraphReport {
            vertex_count: self.vertex_count(),
            edge_count: self.edge_count(),
            is_bipartite: self.is_bipartite(),
            regular_degree: self.regular_degree(),
            rainbow: self.rainbow,
            girth: self.girth(),
        }
    }

    /// Connected component label of every vertex, and the number of labels.
    pub fn components(&self) -> (Vec<u32>, usize) {
        let mut label = vec![u32::MAX; self.adj.len()];
        let mut count = 0u32;
        let mut stack = Vec::new();
        for s in 0..self.adj.len() {
            if label[s] != u32::MAX {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if label[w as usize] == u32::MAX {
                        label[w as usize] = count;
                        stack.push(w as usize);
                    }
                }
            }
            count += 1;
        }
        (label, count as usize)
    }

    /// Invariant-vector fiber of every vertex. Below dimension 6 there are no
    /// invariants and everything lies in one fiber.
    pub fn fibers(&self) -> Result<(Vec<u32>, usize)> {
        let mut ids: FxHashMap<Vec<RingElem>, u32> = FxHashMap::default();
        let mut label = Vec::with_capacity(self.adj.len());
        for idx in 0..self.adj.len() {
            let key = if self.graph.n() < 6 {
                Vec::new()
            } else {
                self.graph.invariant_vector(&self.vertex(idx))?
            };
            let next = ids.len() as u32;
            label.push(*ids.entry(key).or_insert(next));
        }
        Ok((label, ids.len()))
    }

    /// Compares the component partition with the fiber partition.
    pub fn component_report(&self) -> Result<ComponentReport> {
        let (comp, components) = self.components();
        let (fiber, fibers) = self.fibers()?;
        let mut fiber_of_comp = vec![u32::MAX; components];
        let mut comp_of_fiber = vec![u32::MAX; fibers];
        let mut mixed = vec![false; components];
        let mut split = vec![false; fibers];
        for (&c, &f) in comp.iter().zip(&fiber) {
            let (c, f) = (c as usize, f as usize);
            match fiber_of_comp[c] {
                u32::MAX => fiber_of_comp[c] = f as u32,
                x if x as usize != f => mixed[c] = true,
                _ => {}
            }
            match comp_of_fiber[f] {
                u32::MAX => comp_of_fiber[f] = c as u32,
                x if x as usize != c => split[f] = true,
                _ => {}
            }
        }
        Ok(ComponentReport {
            components,
            fibers,
            split_fibers: split.iter().filter(|&&s| s).count(),
            mixed_components: mixed.iter().filter(|&&m| m).count(),
        })
    }

    /// Edges whose endpoints have different invariant vectors.
    pub fn invariant_violations(&self) -> Result<usize> {
        let (fiber, _) = self.fibers()?;
        Ok(self.edges().filter(|&(p, l)| fiber[p] != fiber[l]).count())
    }
}
