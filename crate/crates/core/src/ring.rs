//! Finite commutative rings `Z_m` and `F_p`.
//!
//! Elements are plain `u64` residues kept canonical in `[0, modulus)`. The
//! modulus is capped at `2^32`, so the product of two residues always fits a
//! `u64` before reduction.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// A canonical residue in `[0, modulus)`.
pub type RingElem = u64;

pub const MAX_MODULUS: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingKind {
    PrimeField,
    ResidueRing,
}

/// A validated ring description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ring {
    kind: RingKind,
    modulus: u64,
}

impl Ring {
    pub fn new(kind: RingKind, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::ModulusTooSmall(modulus));
        }
        if modulus > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(modulus));
        }
        if kind == RingKind::PrimeField && !is_prime(modulus) {
            return Err(Error::NonPrimeModulus(modulus));
        }
        Ok(Ring { kind, modulus })
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(RingKind::PrimeField, p)
    }

    pub fn residue(m: u64) -> Result<Self> {
        Self::new(RingKind::ResidueRing, m)
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// True when every nonzero element is invertible (`F_p`, or `Z_m` with `m` prime).
    pub fn is_field(&self) -> bool {
        self.kind == RingKind::PrimeField || is_prime(self.modulus)
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> RingElem {
        a % self.modulus
    }

    /// Maps a signed integer to its canonical residue.
    #[inline]
    pub fn from_i64(&self, a: i64) -> RingElem {
        a.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: RingElem) -> RingElem {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        // a, b < 2^32 so the product cannot overflow
        (a * b) % self.modulus
    }

    pub fn pow(&self, mut a: RingElem, mut e: u64) -> RingElem {
        let mut acc = self.reduce(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Nonzero and not a zero divisor. In a finite ring this is the same as
    /// being a unit.
    pub fn is_regular(&self, a: RingElem) -> bool {
        a != 0 && gcd(a, self.modulus) == 1
    }

    /// Multiplicative inverse of a regular element.
    pub fn inv(&self, a: RingElem) -> Option<RingElem> {
        let (g, x, _) = ext_gcd(a as i128, self.modulus as i128);
        if a == 0 || g != 1 {
            return None;
        }
        Some(x.rem_euclid(self.modulus as i128) as u64)
    }

    /// `|Reg(K)|`: Euler's totient for `Z_m`, `p - 1` for `F_p`.
    pub fn regular_count(&self) -> u64 {
        match self.kind {
            RingKind::PrimeField => self.modulus - 1,
            RingKind::ResidueRing => totient(self.modulus),
        }
    }

    /// The hypothesis of the stable-degree constructions: at least three
    /// regular elements.
    pub fn has_three_regular(&self) -> bool {
        self.regular_count() >= 3
    }

    pub fn require_three_regular(&self) -> Result<()> {
        if self.has_three_regular() {
            Ok(())
        } else {
            Err(Error::InsufficientRegularElements(self.to_string()))
        }
    }

    /// Uniform draw from `Reg(K)` by rejection.
    pub fn sample_regular<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<RingElem> {
        self.require_three_regular()?;
        loop {
            let a = rng.random_range(1..self.modulus);
            if self.is_regular(a) {
                return Ok(a);
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElem {
        rng.random_range(0..self.modulus)
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        0..self.modulus
    }

    /// Residue printed as a signed representative when that is shorter; used
    /// only for human-facing output.
    pub fn signed(&self, a: RingElem) -> i64 {
        if a > self.modulus / 2 {
            a as i64 - self.modulus as i64
        } else {
            a as i64
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            RingKind::PrimeField => 'F',
            RingKind::ResidueRing => 'Z',
        };
        write!(f, "{} {}", tag, self.modulus)
    }
}

/// Accepts `Z 256`, `F 127` and the colon form `Z:256` used on the command line.
impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::parse(1, format!("invalid ring tag `{s}`"));
        let mut chars = s.chars();
        let tag = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str().trim_start_matches([':', ' ']);
        let modulus: u64 = rest.trim().parse().map_err(|_| bad())?;
        match tag {
            'Z' | 'z' => Ring::residue(modulus),
            'F' | 'f' => Ring::prime_field(modulus),
            _ => Err(bad()),
        }
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Deterministic trial division; the modulus never exceeds `2^32`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn make_ring_examples() {
        let z = Ring::residue(256).unwrap();
        assert_eq!(z.to_string(), "Z 256");
        assert_eq!(Ring::prime_field(127).unwrap().to_string(), "F 127");
        assert_eq!(Ring::prime_field(256), Err(Error::NonPrimeModulus(256)));
        assert_eq!(Ring::residue(1), Err(Error::ModulusTooSmall(1)));
        assert_eq!(Ring::residue((1 << 32) + 1), Err(Error::ModulusTooLarge((1 << 32) + 1)));
        assert!(Ring::residue(1 << 32).is_ok());
    }

    #[test]
    fn arithmetic_examples() {
        let z5 = Ring::residue(5).unwrap();
        assert_eq!(z5.mul(2, 3), 1);
        let z256 = Ring::residue(256).unwrap();
        assert_eq!(z256.add(200, 100), 44);
        for a in 0..256 {
            assert_eq!(z256.add(a, z256.neg(a)), 0);
        }
        let big = Ring::residue(1 << 32).unwrap();
        let m = (1u64 << 32) - 1;
        assert_eq!(big.mul(m, m), 1);
    }

    #[test]
    fn regular_examples() {
        let z256 = Ring::residue(256).unwrap();
        assert!(z256.is_regular(3));
        assert!(!z256.is_regular(6));
        assert!(!z256.is_regular(0));
        assert!(Ring::prime_field(127).unwrap().is_regular(126));
    }

    #[test]
    fn count_regular_examples() {
        assert!(!Ring::residue(2).unwrap().has_three_regular());
        assert!(Ring::residue(8).unwrap().has_three_regular());
        assert!(!Ring::prime_field(3).unwrap().has_three_regular());
        assert_eq!(Ring::residue(256).unwrap().regular_count(), 128);
        assert_eq!(Ring::residue(12).unwrap().regular_count(), 4);
    }

    #[test]
    fn regular_iff_multiplication_injective() {
        for m in [2u64, 6, 8, 12, 30, 64, 97, 100] {
            let r = Ring::residue(m).unwrap();
            for a in r.elements() {
                let mut seen = vec![false; m as usize];
                let injective = r.elements().all(|x| {
                    let y = r.mul(a, x) as usize;
                    !std::mem::replace(&mut seen[y], true)
                });
                assert_eq!(r.is_regular(a), injective, "m={m} a={a}");
            }
        }
    }

    #[test]
    fn ring_axioms_exhaustive_small() {
        for r in [Ring::residue(6).unwrap(), Ring::prime_field(5).unwrap()] {
            for a in r.elements() {
                for b in r.elements() {
                    assert_eq!(r.add(a, b), r.add(b, a));
                    assert_eq!(r.mul(a, b), r.mul(b, a));
                    assert_eq!(r.sub(r.add(a, b), b), a);
                    for c in r.elements() {
                        assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
                        assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
                        assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = Ring::prime_field(127).unwrap();
        let z = Ring::residue(256).unwrap();
        for _ in 0..200 {
            assert_ne!(f.sample_regular(&mut rng).unwrap(), 0);
            assert_eq!(z.sample_regular(&mut rng).unwrap() % 2, 1);
        }
        let z2 = Ring::residue(2).unwrap();
        assert!(matches!(
            z2.sample_regular(&mut rng),
            Err(Error::InsufficientRegularElements(_))
        ));
        let a = z.sample_regular(&mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = z.sample_regular(&mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inverses() {
        let z256 = Ring::residue(256).unwrap();
        for a in (1..256).step_by(2) {
            assert_eq!(z256.mul(a, z256.inv(a).unwrap()), 1);
        }
        assert_eq!(z256.inv(2), None);
    }

    #[test]
    fn parse_tags() {
        assert_eq!("Z 256".parse::<Ring>().unwrap(), Ring::residue(256).unwrap());
        assert_eq!("Z:65536".parse::<Ring>().unwrap(), Ring::residue(65536).unwrap());
        assert_eq!("F 127".parse::<Ring>().unwrap(), Ring::prime_field(127).unwrap());
        assert!("Q 5".parse::<Ring>().is_err());
        assert!("F:8".parse::<Ring>().is_err());
    }
}
