//! Symbolic key exchange over stable cubic groups, and the public-key map
//! built from a single graph walk.

mod public;
mod transcript;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use public::{decrypt, encrypt, make_public_rule, public_rule_by_composition, PrivateKey, PublicRule};
pub use transcript::{shared_digest, PublicTranscript, Transcript};

use crate::error::{Error, Result};
use crate::flag::{FlagGraph, ZWalk, ZWord};
use crate::graph::{DGraph, DWalk};
use crate::poly::{AffineMap, Poly, PolyMap};
use crate::ring::{Ring, RingElem};

/// Which group the session walks in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    /// Z-walks on flags, maps of `K^{n+1}`.
    #[default]
    Flag,
    /// Point-to-point walks on `D(n, K)`, maps of `K^n`.
    Graph,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Flag => "flag",
            Variant::Graph => "graph",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flag" | "q" => Ok(Variant::Flag),
            "graph" | "gd" => Ok(Variant::Graph),
            _ => Err(Error::parse(1, format!("unknown variant `{s}`, expected `flag` or `graph`"))),
        }
    }
}

/// A group element given as a walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Word {
    Flag(ZWord),
    Graph(DWalk),
}

impl Word {
    fn inverse(&self, ring: Ring) -> Word {
        match self {
            Word::Flag(w) => Word::Flag(w.inverse()),
            Word::Graph(w) => Word::Graph(w.inverse(ring)),
        }
    }

    fn then(&self, other: &Word) -> Word {
        match (self, other) {
            (Word::Flag(a), Word::Flag(b)) => Word::Flag(a.clone().then(b)),
            (Word::Graph(a), Word::Graph(b)) => Word::Graph(a.concat(b)),
            _ => unreachable!("words of one session share a variant"),
        }
    }

    fn repeat(&self, times: usize) -> Word {
        match self {
            Word::Flag(w) => Word::Flag(w.repeat(times)),
            Word::Graph(w) => Word::Graph(
                DWalk::new(w.colours().repeat(times)).expect("repeating an even walk"),
            ),
        }
    }
}

/// Alice's secret: the walks `g` and `h` and the affine map `tau`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateSeed {
    pub variant: Variant,
    pub n: usize,
    pub ring: Ring,
    pub g: Word,
    pub h: Word,
    pub tau: AffineMap,
    pub seed: u64,
}

impl PrivateSeed {
    /// Draws `g` and `h` with regular colours and a first-row `tau`, all from
    /// `seed`. Walk lengths count Z-steps or point-to-point steps.
    pub fn generate(
        variant: Variant,
        n: usize,
        ring: Ring,
        g_len: usize,
        h_len: usize,
        seed: u64,
    ) -> Result<Self> {
        ring.require_three_regular()?;
        if g_len == 0 || h_len == 0 {
            return Err(Error::InvalidWalk("walk lengths must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, h) = match variant {
            Variant::Flag => (
                Word::Flag(ZWalk::random(ring, g_len, &mut rng)?.word()),
                Word::Flag(ZWalk::random(ring, h_len, &mut rng)?.word()),
            ),
            Variant::Graph => (
                Word::Graph(DWalk::random(ring, g_len, true, &mut rng)?),
                Word::Graph(DWalk::random(ring, h_len, true, &mut rng)?),
            ),
        };
        let dim = dim_of(variant, n);
        let tau = AffineMap::random_first_row(ring, dim, &mut rng);
        Ok(PrivateSeed {
            variant,
            n,
            ring,
            g,
            h,
            tau,
            seed,
        })
    }

    /// A public vector drawn from the session seed, for demonstrations.
    pub fn sample_public_vector(&self) -> Vec<RingElem> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(1));
        (0..self.dim()).map(|_| self.ring.sample(&mut rng)).collect()
    }

    /// Dimension of the maps exchanged.
    pub fn dim(&self) -> usize {
        dim_of(self.variant, self.n)
    }

    /// `h^{-1} g h`, read left to right.
    pub fn conjugated_word(&self) -> Word {
        self.h.inverse(self.ring).then(&self.g).then(&self.h)
    }

    /// Walks `word` symbolically from the image of `start`.
    fn walk_from(&self, start: Vec<Poly>, word: &Word) -> Result<Vec<Poly>> {
        match word {
            Word::Flag(w) => FlagGraph::new(self.ring, self.n, true)?.word_symbolic_from(start, w),
            Word::Graph(w) => {
                self.ring.require_three_regular()?;
                DGraph::new(self.ring, self.n)?.walk_symbolic_from(start, w)
            }
        }
    }

    /// `tau ∘ W ∘ tau^{-1}` for the walk map `W` of `word`.
    fn conjugate_walk(&self, word: &Word) -> Result<PolyMap> {
        let tau_inv = self.tau.inverse()?;
        let start = tau_inv.to_map().into_coords();
        let walked = self.walk_from(start, word)?;
        apply_affine(&self.tau, walked)
    }
}

fn dim_of(variant: Variant, n: usize) -> usize {
    match variant {
        Variant::Flag => n + 1,
        Variant::Graph => n,
    }
}

/// `A ∘ F` for affine `A`, working coordinatewise on the polynomials of `F`.
pub(crate) fn apply_affine(a: &AffineMap, coords: Vec<Poly>) -> Result<PolyMap> {
    let ring = a.ring();
    let dim = a.dim();
    let mut out = Vec::with_capacity(dim);
    for (i, row) in a.matrix().iter().enumerate() {
        let mut acc = Poly::constant(ring, dim, a.shift()[i]);
        for (j, &m) in row.iter().enumerate() {
            if m != 0 {
                acc = acc.add(&coords[j].scale(m))?;
            }
        }
        out.push(acc);
    }
    PolyMap::new(ring, out)
}

/// The public base `b = tau ∘ W ∘ tau^{-1}`, `W` the walk of `h^{-1} g h`.
pub fn make_base(secret: &PrivateSeed) -> Result<PolyMap> {
    secret.conjugate_walk(&secret.conjugated_word())
}

/// `b^k` by walking `h^{-1} g h` repeated `k` times and conjugating once.
pub fn alice_power(secret: &PrivateSeed, k: u64) -> Result<PolyMap> {
    if k == 0 {
        return Err(Error::InvalidWalk("exponent must be at least 1".into()));
    }
    secret.conjugate_walk(&secret.conjugated_word().repeat(k as usize))
}

/// `b^k` by square-and-multiply, insisting every intermediate stays cubic.
pub fn bob_power(b: &PolyMap, k: u64) -> Result<PolyMap> {
    if k == 0 {
        return Err(Error::InvalidWalk("exponent must be at least 1".into()));
    }
    b.power_inspect(k, |m| {
        let degree = m.degree();
        if degree > 3 {
            return Err(Error::StabilityViolation {
                context: format!("intermediate power while raising to {k}"),
                degree,
            });
        }
        Ok(())
    })
}

/// Alice raises Bob's map to her exponent. Conjugating back by `tau` first
/// turns `c_B` into a sparse walk map, which keeps the powering cheap.
pub fn alice_collision(secret: &PrivateSeed, c_b: &PolyMap, n_a: u64) -> Result<PolyMap> {
    let tau = secret.tau.to_map();
    let tau_inv = secret.tau.inverse()?.to_map();
    let raw = tau_inv.compose(&c_b.compose(&tau)?)?;
    let powered = bob_power(&raw, n_a)?;
    tau.compose(&powered.compose(&tau_inv)?)
}

/// Runs both sides of the exchange in process.
pub fn run_exchange(secret: &PrivateSeed, n_a: u64, n_b: u64, v: &[RingElem]) -> Result<Transcript> {
    if v.len() != secret.dim() {
        return Err(Error::DimensionMismatch {
            expected: secret.dim(),
            actual: v.len(),
        });
    }
    let base = make_base(secret)?;
    let c_a = alice_power(secret, n_a)?;
    let c_b = bob_power(&base, n_b)?;
    let alice = alice_collision(secret, &c_b, n_a)?;
    let bob = bob_power(&c_a, n_b)?;
    if alice != bob {
        return Err(Error::CollisionMismatch);
    }
    let v: Vec<RingElem> = v.iter().map(|&x| secret.ring.reduce(x)).collect();
    let shared = alice.eval(&v)?;
    if bob.eval(&v)? != shared {
        return Err(Error::CollisionMismatch);
    }
    Ok(Transcript {
        ring: secret.ring,
        dim: secret.dim(),
        base,
        c_a,
        c_b,
        v,
        shared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn secret(variant: Variant, n: usize, ring: Ring, seed: u64) -> PrivateSeed {
        PrivateSeed::generate(variant, n, ring, 2, 2, seed).unwrap()
    }

    #[test]
    fn empty_g_gives_identity_base() {
        let r = Ring::prime_field(127).unwrap();
        let mut s = secret(Variant::Flag, 6, r, 1);
        s.g = Word::Flag(ZWord::default());
        assert!(make_base(&s).unwrap().is_identity());
    }

    #[test]
    fn plain_base_is_the_walk() {
        let r = Ring::residue(256).unwrap();
        let mut s = secret(Variant::Flag, 6, r, 2);
        s.h = Word::Flag(ZWord::default());
        s.tau = AffineMap::identity(r, 7);
        let Word::Flag(g) = &s.g else { unreachable!() };
        let direct = FlagGraph::new(r, 6, true).unwrap().word_symbolic(g).unwrap();
        assert_eq!(make_base(&s).unwrap(), direct);
    }

    #[test]
    fn base_is_cubic_and_conjugation_is_consistent() {
        let r = Ring::residue(256).unwrap();
        for variant in [Variant::Flag, Variant::Graph] {
            let s = secret(variant, 8, r, 3);
            let b = make_base(&s).unwrap();
            assert!(b.degree() <= 3);
            let raw = s.conjugate_walk(&s.conjugated_word()).unwrap();
            let via_compose = {
                let w = s
                    .walk_from(PolyMap::identity(r, s.dim()).into_coords(), &s.conjugated_word())
                    .unwrap();
                let w = PolyMap::new(r, w).unwrap();
                s.tau
                    .to_map()
                    .compose(&w.compose(&s.tau.inverse().unwrap().to_map()).unwrap())
                    .unwrap()
            };
            assert_eq!(raw, via_compose);
        }
    }

    #[test]
    fn fast_and_slow_powers_agree() {
        let r = Ring::prime_field(127).unwrap();
        for variant in [Variant::Flag, Variant::Graph] {
            let s = secret(variant, 6, r, 4);
            let b = make_base(&s).unwrap();
            assert_eq!(alice_power(&s, 1).unwrap(), b);
            for k in 2..=6 {
                let fast = alice_power(&s, k).unwrap();
                assert!(fast.degree() <= 3);
                assert_eq!(fast, b.power(k).unwrap(), "k = {k}");
            }
            assert_eq!(bob_power(&b, 6).unwrap(), alice_power(&s, 6).unwrap());
        }
    }

    #[test]
    fn bob_flags_degree_growth() {
        let r = Ring::prime_field(7).unwrap();
        let x = Poly::var(r, 2, 0);
        let y = Poly::var(r, 2, 1);
        let cube = x.mul(&x).unwrap().mul(&x).unwrap();
        let m = PolyMap::new(r, vec![x.clone(), y.add(&cube).unwrap()]).unwrap();
        assert!(bob_power(&m, 5).is_ok());
        let m = PolyMap::new(r, vec![x.add(&y.mul(&y).unwrap()).unwrap(), y.add(&x.mul(&x).unwrap()).unwrap()]).unwrap();
        assert!(matches!(bob_power(&m, 3), Err(Error::StabilityViolation { degree: 4, .. })));
        assert!(bob_power(&PolyMap::identity(r, 3), 999).unwrap().is_identity());
    }

    #[test]
    fn exchange_agrees() {
        let r = Ring::residue(1 << 16).unwrap();
        let s = secret(Variant::Flag, 8, r, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v: Vec<u64> = (0..9).map(|_| rng.random_range(0..1 << 16)).collect();
        let t = run_exchange(&s, 5, 3, &v).unwrap();
        let collision = alice_power(&s, 15).unwrap();
        assert_eq!(t.shared, collision.eval(&v).unwrap());
        let t1 = run_exchange(&s, 1, 1, &v).unwrap();
        assert_eq!(t1.shared, t1.base.eval(&v).unwrap());
    }

    #[test]
    fn conjugated_base_keeps_the_order() {
        let r = Ring::prime_field(5).unwrap();
        for seed in 0..3 {
            let s = secret(Variant::Flag, 3, r, seed);
            let b = make_base(&s).unwrap();
            let Word::Flag(w) = s.conjugated_word() else { unreachable!() };
            let raw = FlagGraph::new(r, 3, true).unwrap().word_symbolic(&w).unwrap();
            let exact = |m: &PolyMap| crate::flag::order_probe(m, &[], 1).unwrap().exact.unwrap();
            assert_eq!(exact(&b), exact(&raw));
            assert_eq!(b.degree(), raw.degree());
        }
    }

    #[test]
    fn too_few_regular_elements() {
        let r = Ring::residue(2).unwrap();
        assert!(matches!(
            PrivateSeed::generate(Variant::Flag, 4, r, 1, 1, 0),
            Err(Error::InsufficientRegularElements(_))
        ));
    }
}
