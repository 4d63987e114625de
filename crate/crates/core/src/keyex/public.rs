//! Public-key maps `T2 ∘ W ∘ T1` from a point-to-point walk `W`.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::apply_affine;
use crate::error::{Error, Result};
use crate::graph::{join, parse_list, DGraph, DWalk, Vertex};
use crate::poly::{AffineForm, AffineMap, PolyMap};
use crate::ring::{Ring, RingElem};

const HEADER: &str = "PRIVATEKEY v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    /// Applied to the plaintext first.
    pub t1: AffineMap,
    pub walk: DWalk,
    /// Applied last.
    pub t2: AffineMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicRule {
    pub public: PolyMap,
    pub private: PrivateKey,
}

impl PrivateKey {
    /// A walk of `colours` regular colours (even) and a first-row `T1`, both
    /// drawn from `seed`; `T2` is the identity and both shifts are zero.
    pub fn generate(n: usize, ring: Ring, colours: usize, seed: u64) -> Result<Self> {
        if colours == 0 || !colours.is_multiple_of(2) {
            return Err(Error::InvalidWalk(format!(
                "colour count must be positive and even, got {colours}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let walk = DWalk::random(ring, colours / 2, true, &mut rng)?;
        let t1 = AffineMap::random_first_row(ring, n, &mut rng);
        Ok(PrivateKey {
            t1,
            walk,
            t2: AffineMap::identity(ring, n),
        })
    }

    pub fn ring(&self) -> Ring {
        self.t1.ring()
    }

    pub fn dim(&self) -> usize {
        self.t1.dim()
    }

    fn graph(&self) -> Result<DGraph> {
        DGraph::new(self.ring(), self.dim())
    }

    /// Walks symbolically from the affine image `T1(x)`.
    pub fn public_map(&self) -> Result<PolyMap> {
        if self.walk.is_empty() {
            return Err(Error::InvalidWalk("public rule needs a nonempty walk".into()));
        }
        self.ring().require_three_regular()?;
        let start = self.t1.to_map().into_coords();
        let walked = self.graph()?.walk_symbolic_from(start, &self.walk)?;
        apply_affine(&self.t2, walked)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{HEADER}").unwrap();
        writeln!(s, "ring {}", self.ring()).unwrap();
        writeln!(s, "dim {}", self.dim()).unwrap();
        writeln!(s, "walk {}", self.walk).unwrap();
        write_affine(&mut s, "t1", &self.t1);
        write_affine(&mut s, "t2", &self.t2);
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .filter(|(_, l)| !l.is_empty());
        let mut field = |key: &str| -> Result<(usize, String)> {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("unexpected end of input, expected `{key}`")))?;
            if key == HEADER {
                return if line == HEADER {
                    Ok((ln, String::new()))
                } else {
                    Err(Error::parse(ln, format!("expected `{HEADER}`")))
                };
            }
            line.strip_prefix(key)
                .and_then(|rest| rest.strip_prefix(' '))
                .map(|rest| (ln, rest.to_string()))
                .ok_or_else(|| Error::parse(ln, format!("expected `{key} ...`")))
        };
        field(HEADER)?;
        let (ln, ring) = field("ring")?;
        let ring: Ring = ring.parse().map_err(|e| Error::parse(ln, format!("bad ring: {e}")))?;
        let (ln, dim) = field("dim")?;
        let dim: usize = dim.parse().map_err(|_| Error::parse(ln, "bad dimension"))?;
        let (ln, walk) = field("walk")?;
        let walk: DWalk = walk.parse().map_err(|e| at_line(e, ln))?;
        let t1 = read_affine(&mut field, "t1", ring, dim)?;
        let t2 = read_affine(&mut field, "t2", ring, dim)?;
        Ok(PrivateKey { t1, walk, t2 })
    }
}

fn at_line(e: Error, ln: usize) -> Error {
    match e {
        Error::Parse { msg, .. } => Error::Parse { line: ln, msg },
        other => Error::parse(ln, other.to_string()),
    }
}

fn write_affine(s: &mut String, name: &str, a: &AffineMap) {
    match a.form() {
        AffineForm::FirstRow => writeln!(s, "{name} first-row {}", join(&a.matrix()[0][1..])).unwrap(),
        AffineForm::Dense => {
            let rows: Vec<String> = a.matrix().iter().map(|r| join(r)).collect();
            writeln!(s, "{name} dense {}", rows.join(";")).unwrap()
        }
    }
    writeln!(s, "{name}-shift {}", join(a.shift())).unwrap();
}

fn read_affine<F>(field: &mut F, name: &str, ring: Ring, dim: usize) -> Result<AffineMap>
where
    F: FnMut(&str) -> Result<(usize, String)>,
{
    let (ln, body) = field(name)?;
    let (ln_shift, shift) = field(&format!("{name}-shift"))?;
    let shift = parse_list(&shift).map_err(|e| at_line(e, ln_shift))?;
    let map = if let Some(tail) = body.strip_prefix("first-row") {
        let tail = parse_list(tail).map_err(|e| at_line(e, ln))?;
        AffineMap::first_row(ring, &tail, shift)
    } else if let Some(rows) = body.strip_prefix("dense") {
        let rows = rows
            .trim()
            .split(';')
            .map(parse_list)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| at_line(e, ln))?;
        AffineMap::dense(ring, rows, shift)
    } else {
        return Err(Error::parse(ln, format!("expected `{name} first-row` or `{name} dense`")));
    };
    let map = map.map_err(|e| at_line(e, ln))?;
    if map.dim() != dim {
        return Err(Error::parse(ln, format!("{name} has dimension {}, expected {dim}", map.dim())));
    }
    Ok(map)
}

/// Builds the public rule for a given walk, drawing `T1` from `seed`.
pub fn make_public_rule(n: usize, ring: Ring, walk: &DWalk, seed: u64) -> Result<PublicRule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let private = PrivateKey {
        t1: AffineMap::random_first_row(ring, n, &mut rng),
        walk: walk.clone(),
        t2: AffineMap::identity(ring, n),
    };
    Ok(PublicRule {
        public: private.public_map()?,
        private,
    })
}

/// The same map as [`PrivateKey::public_map`], formed by walking from `x`
/// and composing with the affine maps afterwards.
pub fn public_rule_by_composition(key: &PrivateKey) -> Result<PolyMap> {
    key.ring().require_three_regular()?;
    let walk = key.graph()?.walk_symbolic(&key.walk)?;
    let inner = walk.compose(&key.t1.to_map())?;
    apply_affine(&key.t2, inner.into_coords())
}

pub fn encrypt(public: &PolyMap, x: &[RingElem]) -> Result<Vec<RingElem>> {
    public.eval(x)
}

/// `T1^{-1}`, the reversed walk with negated colours, then `T2^{-1}`, each
/// undoing its counterpart in reverse order.
pub fn decrypt(key: &PrivateKey, y: &[RingElem]) -> Result<Vec<RingElem>> {
    let ring = key.ring();
    let after_t2 = key.t2.inverse()?.apply(y)?;
    let point = key
        .graph()?
        .walk_apply(&Vertex::point(after_t2), &key.walk.inverse(ring))?;
    key.t1.inverse()?.apply(&point.coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn z256() -> Ring {
        Ring::residue(256).unwrap()
    }

    #[test]
    fn public_map_is_cubic() {
        let key = PrivateKey::generate(10, z256(), 10, 1).unwrap();
        let public = key.public_map().unwrap();
        assert_eq!(public.degree(), 3);
        assert_eq!(public.dim(), 10);
    }

    #[test]
    fn both_construction_routes_agree() {
        for seed in 0..4 {
            let key = PrivateKey::generate(9, z256(), 6, seed).unwrap();
            assert_eq!(key.public_map().unwrap(), public_rule_by_composition(&key).unwrap());
        }
    }

    #[test]
    fn empty_walk_is_rejected() {
        let walk = DWalk::default();
        assert!(matches!(make_public_rule(6, z256(), &walk, 0), Err(Error::InvalidWalk(_))));
        assert!(matches!(PrivateKey::generate(6, z256(), 3, 0), Err(Error::InvalidWalk(_))));
    }

    #[test]
    fn round_trip() {
        let key = PrivateKey::generate(10, z256(), 10, 2).unwrap();
        let public = key.public_map().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x: Vec<u64> = (0..10).map(|_| rng.random_range(0..256)).collect();
            let y = encrypt(&public, &x).unwrap();
            assert_eq!(decrypt(&key, &y).unwrap(), x);
        }
    }

    #[test]
    fn zero_plaintext_goes_to_the_walked_origin() {
        let key = PrivateKey::generate(8, z256(), 4, 5).unwrap();
        let public = key.public_map().unwrap();
        let g = DGraph::new(z256(), 8).unwrap();
        let walked = g.walk_apply(&Vertex::point(vec![0; 8]), &key.walk).unwrap();
        assert_eq!(encrypt(&public, &[0; 8]).unwrap(), walked.coords);
    }

    #[test]
    fn key_text_round_trip() {
        let key = PrivateKey::generate(7, z256(), 8, 6).unwrap();
        let text = key.to_text();
        assert_eq!(PrivateKey::from_text(&text).unwrap(), key);
        let bad = text.replace("walk", "wolk");
        assert!(matches!(PrivateKey::from_text(&bad), Err(Error::Parse { line: 4, .. })));
    }
}
