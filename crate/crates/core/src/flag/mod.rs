//! The double directed flag graph over `D(n, K)`: flags, the moves between
//! the two flag copies, the distance-two operators `Z(a, b)`, symbolic
//! Z-walks and order probes.

mod probe;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

pub use probe::{dd_cycle_oracle, order_probe, stable_power_check, OrderProbe, StableReport};

use crate::error::{Error, Result};
use crate::graph::solve::{line_through, point_on, Arith, Symbolic};
use crate::graph::{join, parse_list, DGraph, Layout};
use crate::poly::{Poly, PolyMap};
use crate::ring::{Ring, RingElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlagSide {
    /// Stored as `(p_1, ..., p_n, l_1)`.
    F1,
    /// Stored as `(l_1, ..., l_n, p_1)`.
    F2,
}

impl FlagSide {
    pub fn other(self) -> FlagSide {
        match self {
            FlagSide::F1 => FlagSide::F2,
            FlagSide::F2 => FlagSide::F1,
        }
    }
}

/// An incident point-line pair. The stored vertex is complete, the other
/// one is recovered from its first coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Flag {
    pub side: FlagSide,
    pub data: Vec<RingElem>,
}

impl Flag {
    pub fn f1(data: Vec<RingElem>) -> Self {
        Flag {
            side: FlagSide::F1,
            data,
        }
    }

    pub fn f2(data: Vec<RingElem>) -> Self {
        Flag {
            side: FlagSide::F2,
            data,
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.side {
            FlagSide::F1 => "F1",
            FlagSide::F2 => "F2",
        };
        write!(f, "{tag} {}", join(&self.data))
    }
}

impl FromStr for Flag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (tag, body) = s
            .split_once(' ')
            .ok_or_else(|| Error::parse(1, format!("expected `F1 v1,...` or `F2 v1,...`, found `{s}`")))?;
        let side = match tag {
            "F1" => FlagSide::F1,
            "F2" => FlagSide::F2,
            _ => return Err(Error::parse(1, format!("unknown flag tag `{tag}`"))),
        };
        Ok(Flag {
            side,
            data: parse_list(body)?,
        })
    }
}

/// A sequence of `Z(a_i, b_i)` applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZWalk {
    pairs: Vec<(RingElem, RingElem)>,
}

impl ZWalk {
    pub fn new(pairs: Vec<(RingElem, RingElem)>) -> Self {
        ZWalk { pairs }
    }

    /// `len` pairs of regular colours.
    pub fn random<R: Rng + ?Sized>(ring: Ring, len: usize, rng: &mut R) -> Result<Self> {
        ring.require_three_regular()?;
        let pairs = (0..len)
            .map(|_| Ok((ring.sample_regular(rng)?, ring.sample_regular(rng)?)))
            .collect::<Result<_>>()?;
        Ok(ZWalk { pairs })
    }

    pub fn pairs(&self) -> &[(RingElem, RingElem)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn check_regular(&self, ring: Ring) -> Result<()> {
        for &(a, b) in &self.pairs {
            for c in [a, b] {
                if !ring.is_regular(ring.reduce(c)) {
                    return Err(Error::NotRegularColour(c));
                }
            }
        }
        Ok(())
    }

    pub fn word(&self) -> ZWord {
        ZWord {
            steps: self.pairs.iter().map(|&(a, b)| ZStep::Forward(a, b)).collect(),
        }
    }

    /// The exact inverse: pairs reversed, each step undone.
    pub fn inverse(&self) -> ZWord {
        self.word().inverse()
    }
}

impl fmt::Display for ZWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ZWalk {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(ZWalk::default());
        }
        let pairs = s
            .split(',')
            .map(|p| {
                let (a, b) = p
                    .trim()
                    .split_once(':')
                    .ok_or_else(|| Error::parse(1, format!("expected `a:b`, found `{p}`")))?;
                let num = |t: &str| {
                    t.trim()
                        .parse::<RingElem>()
                        .map_err(|_| Error::parse(1, format!("bad colour `{t}`")))
                };
                Ok((num(a)?, num(b)?))
            })
            .collect::<Result<_>>()?;
        Ok(ZWalk { pairs })
    }
}

/// One generator of the flag group or the inverse of one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZStep {
    /// `Z(a, b)`: move the point by `a` along the line, then the line by `b`
    /// around the point.
    Forward(RingElem, RingElem),
    /// `Z(a, b)^{-1}`: line back by `b`, then point back by `a`.
    Inverse(RingElem, RingElem),
}

/// Words in the generators `Z(a, b)` and their inverses.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZWord {
    pub steps: Vec<ZStep>,
}

impl ZWord {
    pub fn inverse(&self) -> ZWord {
        ZWord {
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| match *s {
                    ZStep::Forward(a, b) => ZStep::Inverse(a, b),
                    ZStep::Inverse(a, b) => ZStep::Forward(a, b),
                })
                .collect(),
        }
    }

    pub fn then(mut self, other: &ZWord) -> ZWord {
        self.steps.extend_from_slice(&other.steps);
        self
    }

    pub fn repeat(&self, times: usize) -> ZWord {
        ZWord {
            steps: self.steps.repeat(times),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl From<&ZWalk> for ZWord {
    fn from(w: &ZWalk) -> Self {
        w.word()
    }
}

/// `DD(n, K)`. In restricted mode every nonzero colour must be regular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagGraph {
    graph: DGraph,
    restricted: bool,
}

impl FlagGraph {
    pub fn new(ring: Ring, n: usize, restricted: bool) -> Result<Self> {
        Ok(FlagGraph {
            graph: DGraph::new(ring, n)?,
            restricted,
        })
    }

    pub fn ring(&self) -> Ring {
        self.graph.ring()
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Dimension of the flag variety, `n + 1`.
    pub fn dim(&self) -> usize {
        self.n() + 1
    }

    pub fn is_restricted(&self) -> bool {
        self.restricted
    }

    pub fn graph(&self) -> &DGraph {
        &self.graph
    }

    fn check_colour(&self, c: RingElem) -> Result<RingElem> {
        let r = self.ring().reduce(c);
        if self.restricted && r != 0 && !self.ring().is_regular(r) {
            return Err(Error::NotRegularColour(c));
        }
        Ok(r)
    }

    fn canonical(&self, f: &Flag) -> Result<Vec<RingElem>> {
        if f.data.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: f.data.len(),
            });
        }
        Ok(f.data.iter().map(|&c| self.ring().reduce(c)).collect())
    }

    pub fn random_flag<R: Rng + ?Sized>(&self, side: FlagSide, rng: &mut R) -> Flag {
        Flag {
            side,
            data: (0..self.dim()).map(|_| self.ring().sample(rng)).collect(),
        }
    }

    /// The point and line of a flag.
    pub fn vertices(&self, f: &Flag) -> Result<(Vec<RingElem>, Vec<RingElem>)> {
        let mut data = self.canonical(f)?;
        let r = self.ring();
        let other_first = data.pop().expect("dim >= 3");
        let layout = self.graph.layout();
        Ok(match f.side {
            FlagSide::F1 => {
                let l = line_through(&r, layout, &data, other_first)?;
                (data, l)
            }
            FlagSide::F2 => {
                let p = point_on(&r, layout, &data, other_first)?;
                (p, data)
            }
        })
    }

    /// From F1, keep the line and move the point by `colour`; from F2, keep
    /// the point and move the line. Colour 0 leaves the flag as it is.
    pub fn flag_step(&self, f: &Flag, colour: RingElem) -> Result<Flag> {
        let c = self.check_colour(colour)?;
        let mut data = self.canonical(f)?;
        if c == 0 {
            return Ok(Flag { side: f.side, data });
        }
        let r = self.ring();
        let layout = self.graph.layout();
        let other_first = data.pop().expect("dim >= 3");
        let (mut stored, side) = match f.side {
            FlagSide::F1 => {
                let l = line_through(&r, layout, &data, other_first)?;
                (l, FlagSide::F2)
            }
            FlagSide::F2 => {
                let p = point_on(&r, layout, &data, other_first)?;
                (p, FlagSide::F1)
            }
        };
        stored.push(r.add(data[0], c));
        Ok(Flag { side, data: stored })
    }

    fn require_f1(&self, f: &Flag) -> Result<Vec<RingElem>> {
        if f.side != FlagSide::F1 {
            return Err(Error::InvalidWalk("Z operators act on F1 flags".into()));
        }
        self.canonical(f)
    }

    /// `Z(a, b)`: point moves by `a`, then line moves by `b`.
    pub fn apply_z(&self, f: &Flag, alpha: RingElem, beta: RingElem) -> Result<Flag> {
        self.apply_word(f, &ZWord {
            steps: vec![ZStep::Forward(alpha, beta)],
        })
    }

    /// `Z(a, b)^{-1}`
    pub fn apply_z_inverse(&self, f: &Flag, alpha: RingElem, beta: RingElem) -> Result<Flag> {
        self.apply_word(f, &ZWord {
            steps: vec![ZStep::Inverse(alpha, beta)],
        })
    }

    pub fn apply_zwalk(&self, f: &Flag, w: &ZWalk) -> Result<Flag> {
        self.apply_word(f, &w.word())
    }

    pub fn apply_word(&self, f: &Flag, word: &ZWord) -> Result<Flag> {
        let data = self.require_f1(f)?;
        let moves = self.moves(word)?;
        Ok(Flag::f1(run_moves(&self.ring(), self.graph.layout(), data, &moves)?))
    }

    fn moves(&self, word: &ZWord) -> Result<Vec<Move>> {
        let r = self.ring();
        let mut moves = Vec::with_capacity(2 * word.len());
        for s in &word.steps {
            match *s {
                ZStep::Forward(a, b) => {
                    moves.push(Move::Point(self.check_colour(a)?));
                    moves.push(Move::Line(self.check_colour(b)?));
                }
                ZStep::Inverse(a, b) => {
                    moves.push(Move::Line(r.neg(self.check_colour(b)?)));
                    moves.push(Move::Point(r.neg(self.check_colour(a)?)));
                }
            }
        }
        Ok(moves)
    }

    /// The Z-walk as a map of `K^{n+1}` in F1 coordinates.
    pub fn zwalk_symbolic(&self, w: &ZWalk) -> Result<PolyMap> {
        self.word_symbolic(&w.word())
    }

    pub fn word_symbolic(&self, word: &ZWord) -> Result<PolyMap> {
        let start = PolyMap::identity(self.ring(), self.dim()).into_coords();
        let coords = self.word_symbolic_from(start, word)?;
        PolyMap::new(self.ring(), coords)
    }

    /// Runs a word from a symbolic F1 flag with arbitrary polynomial
    /// coordinates.
    pub fn word_symbolic_from(&self, start: Vec<Poly>, word: &ZWord) -> Result<Vec<Poly>> {
        self.ring().require_three_regular()?;
        if start.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: start.len(),
            });
        }
        let moves = self.moves(word)?;
        run_moves(&Symbolic, self.graph.layout(), start, &moves)
    }

    /// Alternating `flag_step`s from a symbolic flag on `side`, returning
    /// the stored coordinates after every step.
    pub fn flag_walk_symbolic(&self, side: FlagSide, colours: &[RingElem]) -> Result<Vec<PolyMap>> {
        self.ring().require_three_regular()?;
        let r = self.ring();
        let layout = self.graph.layout();
        let mut data = PolyMap::identity(r, self.dim()).into_coords();
        let mut side = side;
        let mut trace = Vec::with_capacity(colours.len());
        for &c in colours {
            let c = self.check_colour(c)?;
            if c == 0 {
                return Err(Error::InvalidWalk("symbolic flag walks need nonzero colours".into()));
            }
            let other_first = data.pop().expect("dim >= 3");
            let mut stored = match side {
                FlagSide::F1 => line_through(&Symbolic, layout, &data, other_first)?,
                FlagSide::F2 => point_on(&Symbolic, layout, &data, other_first)?,
            };
            stored.push(data[0].add_constant(c));
            data = stored;
            side = side.other();
            trace.push(PolyMap::new(r, data.clone())?);
        }
        Ok(trace)
    }
}

/// Point move by `c` on F1 coordinates: same line, new point.
fn point_move<A: Arith>(ar: &A, layout: &Layout, mut data: Vec<A::V>, c: RingElem) -> Result<Vec<A::V>> {
    if c == 0 {
        return Ok(data);
    }
    let l1 = data.pop().expect("dim >= 3");
    let line = line_through(ar, layout, &data, l1.clone())?;
    let mut p = point_on(ar, layout, &line, ar.add_const(&data[0], c))?;
    p.push(l1);
    Ok(p)
}

/// Line move by `c` on F1 coordinates: only `l_1` changes.
fn line_move<A: Arith>(ar: &A, mut data: Vec<A::V>, c: RingElem) -> Vec<A::V> {
    let last = data.len() - 1;
    data[last] = ar.add_const(&data[last], c);
    data
}

#[derive(Debug, Clone, Copy)]
enum Move {
    Point(RingElem),
    Line(RingElem),
}

fn run_moves<A: Arith>(ar: &A, layout: &Layout, mut data: Vec<A::V>, moves: &[Move]) -> Result<Vec<A::V>> {
    for m in moves {
        data = match *m {
            Move::Point(c) => point_move(ar, layout, data, c)?,
            Move::Line(c) => line_move(ar, data, c),
        };
    }
    Ok(data)
}
