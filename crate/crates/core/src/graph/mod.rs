//! The bipartite incidence graphs `D(n, K)`: vertices, colour operators,
//! numeric and symbolic walks, component invariants and exhaustive oracles.

mod invariant;
mod layout;
mod oracle;
pub(crate) mod solve;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

pub use invariant::invariant_count;
pub use layout::{index_of, label_at, CoordLabel, Layout, Relation};
pub use oracle::{ComponentReport, GraphOracle, GraphReport, ORACLE_VERTEX_LIMIT};

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyMap};
use crate::ring::{Ring, RingElem};
use solve::{line_through, point_on, Arith, Symbolic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Point,
    Line,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Point => Side::Line,
            Side::Line => Side::Point,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub side: Side,
    pub coords: Vec<RingElem>,
}

impl Vertex {
    pub fn point(coords: Vec<RingElem>) -> Self {
        Vertex {
            side: Side::Point,
            coords,
        }
    }

    pub fn line(coords: Vec<RingElem>) -> Self {
        Vertex {
            side: Side::Line,
            coords,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.side {
            Side::Point => "P",
            Side::Line => "L",
        };
        write!(f, "{tag} {}", join(&self.coords))
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (tag, body) = s
            .split_once(' ')
            .ok_or_else(|| Error::parse(1, format!("expected `P v1,...` or `L v1,...`, found `{s}`")))?;
        let side = match tag {
            "P" => Side::Point,
            "L" => Side::Line,
            _ => return Err(Error::parse(1, format!("unknown vertex tag `{tag}`"))),
        };
        Ok(Vertex {
            side,
            coords: parse_list(body)?,
        })
    }
}

pub(crate) fn join(values: &[RingElem]) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

pub(crate) fn parse_list(body: &str) -> Result<Vec<RingElem>> {
    let body = body.trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::parse(1, format!("bad residue `{t}`")))
        })
        .collect()
}

/// A point-to-point walk `N_{a_1} N_{a_2} ... N_{a_2s}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DWalk {
    colours: Vec<RingElem>,
}

impl DWalk {
    pub fn new(colours: Vec<RingElem>) -> Result<Self> {
        if !colours.len().is_multiple_of(2) {
            return Err(Error::InvalidWalk(format!(
                "point-to-point walk needs an even number of colours, got {}",
                colours.len()
            )));
        }
        Ok(DWalk { colours })
    }

    /// Colours drawn uniformly, never immediately undoing the previous step.
    /// With `regular_only` every colour is a regular element.
    pub fn random<R: Rng + ?Sized>(
        ring: Ring,
        steps: usize,
        regular_only: bool,
        rng: &mut R,
    ) -> Result<Self> {
        if regular_only {
            ring.require_three_regular()?;
        }
        let mut colours: Vec<RingElem> = Vec::with_capacity(2 * steps);
        while colours.len() < 2 * steps {
            let c = if regular_only {
                ring.sample_regular(rng)?
            } else {
                ring.sample(rng)
            };
            if colours.last().is_some_and(|&prev| ring.add(prev, c) == 0) {
                continue;
            }
            colours.push(c);
        }
        Ok(DWalk { colours })
    }

    pub fn colours(&self) -> &[RingElem] {
        &self.colours
    }

    /// Number of point-to-point steps.
    pub fn len(&self) -> usize {
        self.colours.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    /// Reversed colours, each negated.
    pub fn inverse(&self, ring: Ring) -> DWalk {
        DWalk {
            colours: self.colours.iter().rev().map(|&c| ring.neg(ring.reduce(c))).collect(),
        }
    }

    pub fn concat(&self, other: &DWalk) -> DWalk {
        let mut colours = self.colours.clone();
        colours.extend_from_slice(&other.colours);
        DWalk { colours }
    }

    /// The literal condition: consecutive colours differ.
    pub fn is_irreducible(&self) -> bool {
        self.colours.windows(2).all(|w| w[0] != w[1])
    }

    /// No step returns to the vertex visited just before it. A step with
    /// colour `c` is undone exactly by colour `-c`.
    pub fn is_non_backtracking(&self, ring: Ring) -> bool {
        self.colours
            .windows(2)
            .all(|w| ring.add(ring.reduce(w[0]), ring.reduce(w[1])) != 0)
    }
}

impl fmt::Display for DWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.colours))
    }
}

impl FromStr for DWalk {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DWalk::new(parse_list(s)?)
    }
}

/// `D(n, K)` for a fixed ring and dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DGraph {
    ring: Ring,
    layout: Layout,
}

impl DGraph {
    /// `n = 1` is read as `D(2, K)`.
    pub fn new(ring: Ring, n: usize) -> Result<Self> {
        let n = match n {
            0 => return Err(Error::DimensionTooSmall { min: 1, actual: 0 }),
            1 => 2,
            n => n,
        };
        Ok(DGraph {
            ring,
            layout: Layout::new(n),
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.layout.n()
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                actual: len,
            });
        }
        Ok(())
    }

    fn canonical(&self, v: &Vertex) -> Result<Vec<RingElem>> {
        self.check_len(v.coords.len())?;
        Ok(v.coords.iter().map(|&c| self.ring.reduce(c)).collect())
    }

    pub fn random_vertex<R: Rng + ?Sized>(&self, side: Side, rng: &mut R) -> Vertex {
        Vertex {
            side,
            coords: (0..self.n()).map(|_| self.ring.sample(rng)).collect(),
        }
    }

    /// Whether `a` and `b` are a point and a line satisfying every relation.
    pub fn is_incident(&self, a: &Vertex, b: &Vertex) -> Result<bool> {
        let (p, l) = match (a.side, b.side) {
            (Side::Point, Side::Line) => (a, b),
            (Side::Line, Side::Point) => (b, a),
            _ => return Ok(false),
        };
        let p = self.canonical(p)?;
        let l = self.canonical(l)?;
        let r = self.ring;
        for j in 1..self.n() {
            let rhs = match self.layout.relation(j) {
                Relation::LineFirst(a) => r.mul(l[0], p[a]),
                Relation::PointFirst(a) => r.mul(l[a], p[0]),
            };
            if r.sub(l[j], p[j]) != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn point_on_line(&self, l: &Vertex, p1: RingElem) -> Result<Vertex> {
        if l.side != Side::Line {
            return Err(Error::InvalidWalk("expected a line".into()));
        }
        let l = self.canonical(l)?;
        Ok(Vertex::point(point_on(&self.ring, &self.layout, &l, self.ring.reduce(p1))?))
    }

    pub fn line_through_point(&self, p: &Vertex, l1: RingElem) -> Result<Vertex> {
        if p.side != Side::Point {
            return Err(Error::InvalidWalk("expected a point".into()));
        }
        let p = self.canonical(p)?;
        Ok(Vertex::line(line_through(&self.ring, &self.layout, &p, self.ring.reduce(l1))?))
    }

    /// The neighbour whose first coordinate is shifted by `colour`.
    pub fn neighbor(&self, v: &Vertex, colour: RingElem) -> Result<Vertex> {
        self.check_len(v.coords.len())?;
        let first = self.ring.add(self.ring.reduce(v.coords[0]), self.ring.reduce(colour));
        match v.side {
            Side::Point => self.line_through_point(v, first),
            Side::Line => self.point_on_line(v, first),
        }
    }

    /// A point moves along colour `alpha`, a line along colour `beta`.
    pub fn apply_x(&self, v: &Vertex, alpha: RingElem, beta: RingElem) -> Result<Vertex> {
        match v.side {
            Side::Point => self.neighbor(v, alpha),
            Side::Line => self.neighbor(v, beta),
        }
    }

    pub fn apply_n(&self, v: &Vertex, alpha: RingElem) -> Result<Vertex> {
        self.neighbor(v, alpha)
    }

    /// Applies the colours in order. Starting from a line is allowed; the
    /// result then is a line too.
    pub fn walk_apply(&self, v: &Vertex, w: &DWalk) -> Result<Vertex> {
        let coords = self.canonical(v)?;
        let coords = walk_steps(&self.ring, &self.layout, v.side, coords, w.colours())?;
        Ok(Vertex {
            side: v.side,
            coords,
        })
    }

    /// The walk as a polynomial map of the point space.
    pub fn walk_symbolic(&self, w: &DWalk) -> Result<PolyMap> {
        self.ring.require_three_regular()?;
        let start = PolyMap::identity(self.ring, self.n()).into_coords();
        let coords = self.walk_symbolic_from(start, w)?;
        PolyMap::new(self.ring, coords)
    }

    /// Walks from a symbolic point whose coordinates are arbitrary
    /// polynomials, such as the image of an affine map.
    pub fn walk_symbolic_from(&self, start: Vec<Poly>, w: &DWalk) -> Result<Vec<Poly>> {
        self.check_len(start.len())?;
        walk_steps(&Symbolic, &self.layout, Side::Point, start, w.colours())
    }
}

pub(crate) fn walk_steps<A: Arith>(
    ar: &A,
    layout: &Layout,
    mut side: Side,
    mut coords: Vec<A::V>,
    colours: &[RingElem],
) -> Result<Vec<A::V>> {
    for &c in colours {
        let first = ar.add_const(&coords[0], c);
        coords = match side {
            Side::Point => line_through(ar, layout, &coords, first)?,
            Side::Line => point_on(ar, layout, &coords, first)?,
        };
        side = side.other();
    }
    Ok(coords)
}
