//! The line-oriented `STABLEMAP v1` text format.
//!
//! ```text
//! STABLEMAP v1
//! ring Z 256
//! dim 3
//! coord 1: 3*x1^2*x2 + 5*x3 + 7
//! coord 2: 1*x2
//! coord 3: 0
//! ```
//!
//! Terms appear in canonical order, every non-constant term carries its
//! coefficient, exponent 1 is written without `^`, and the zero polynomial is
//! `0`. Writing a parsed canonical file reproduces it byte for byte.

use std::fmt::Write as _;

use super::{Poly, PolyMap};
use crate::error::{Error, Result};
use crate::ring::Ring;

pub const HEADER: &str = "STABLEMAP v1";

pub fn write_stablemap(map: &PolyMap) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "ring {}", map.ring()).unwrap();
    writeln!(out, "dim {}", map.dim()).unwrap();
    for (i, p) in map.coords().iter().enumerate() {
        writeln!(out, "coord {}: {}", i + 1, format_poly(p)).unwrap();
    }
    out
}

pub(crate) fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        if k > 0 {
            s.push_str(" + ");
        }
        write!(s, "{c}").unwrap();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => write!(s, "*x{}", i + 1).unwrap(),
                _ => write!(s, "*x{}^{}", i + 1, e).unwrap(),
            }
        }
    }
    s
}

pub fn parse_stablemap(text: &str) -> Result<PolyMap> {
    parse_stablemap_from(text, 1)
}

/// Parses a map whose first line is line `first_line` of some larger file,
/// so errors point at the right place.
pub(crate) fn parse_stablemap_from(text: &str, first_line: usize) -> Result<PolyMap> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + first_line, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::parse(first_line, format!("unexpected end of input, expected {what}")))
    };

    let (ln, header) = next("header")?;
    if header.trim_end() != HEADER {
        return Err(Error::parse(ln, format!("expected `{HEADER}`, found `{header}`")));
    }
    let (ln, ring_line) = next("ring line")?;
    let ring: Ring = ring_line
        .strip_prefix("ring ")
        .ok_or_else(|| Error::parse(ln, "expected `ring <tag> <modulus>`"))?
        .parse()
        .map_err(|e| Error::parse(ln, format!("bad ring: {e}")))?;
    let (ln, dim_line) = next("dim line")?;
    let dim: usize = dim_line
        .strip_prefix("dim ")
        .and_then(|d| d.trim().parse().ok())
        .ok_or_else(|| Error::parse(ln, "expected `dim <d>`"))?;
    if dim == 0 || dim > u16::MAX as usize {
        return Err(Error::parse(ln, format!("unsupported dimension {dim}")));
    }

    let mut coords = Vec::with_capacity(dim);
    for i in 1..=dim {
        let (ln, line) = next("coord line")?;
        let prefix = format!("coord {i}:");
        let body = line
            .strip_prefix(&prefix)
            .ok_or_else(|| Error::parse(ln, format!("expected `{prefix}`")))?;
        coords.push(parse_poly(body.trim(), ring, dim, ln)?);
    }
    if let Some((ln, extra)) = lines.next() {
        return Err(Error::parse(ln, format!("trailing content `{extra}`")));
    }
    PolyMap::new(ring, coords)
}

fn parse_poly(body: &str, ring: Ring, dim: usize, ln: usize) -> Result<Poly> {
    if body == "0" {
        return Ok(Poly::zero(ring, dim));
    }
    let mut terms = Vec::new();
    for term in body.split(" + ") {
        let term = term.trim();
        if term.is_empty() {
            return Err(Error::parse(ln, "empty term"));
        }
        let mut exps = vec![0u8; dim];
        let mut coeff: u64 = 1;
        for (k, factor) in term.split('*').enumerate() {
            if let Some(var) = factor.strip_prefix('x') {
                let (idx, e) = match var.split_once('^') {
                    Some((i, e)) => (i, e.parse::<u8>().ok()),
                    None => (var, Some(1)),
                };
                let idx: usize = idx
                    .parse()
                    .ok()
                    .filter(|&i| (1..=dim).contains(&i))
                    .ok_or_else(|| Error::parse(ln, format!("bad variable `{factor}`")))?;
                let e = e.ok_or_else(|| Error::parse(ln, format!("bad exponent in `{factor}`")))?;
                exps[idx - 1] = exps[idx - 1]
                    .checked_add(e)
                    .ok_or_else(|| Error::parse(ln, "exponent exceeds 255"))?;
            } else if k == 0 {
                coeff = factor
                    .parse()
                    .map_err(|_| Error::parse(ln, format!("bad coefficient `{factor}`")))?;
            } else {
                return Err(Error::parse(ln, format!("unexpected factor `{factor}`")));
            }
        }
        terms.push((exps, ring.reduce(coeff)));
    }
    Poly::from_terms(ring, dim, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "STABLEMAP v1\nring Z 256\ndim 3\ncoord 1: 3*x1^2*x2 + 5*x3 + 7\ncoord 2: 1*x2\ncoord 3: 0\n";

    #[test]
    fn canonical_text_round_trips() {
        let map = parse_stablemap(SAMPLE).unwrap();
        assert_eq!(map.dim(), 3);
        assert_eq!(map.coords()[0].len(), 3);
        assert!(map.coords()[2].is_zero());
        assert_eq!(write_stablemap(&map), SAMPLE);
    }

    #[test]
    fn identity_text() {
        let r = Ring::prime_field(127).unwrap();
        let text = write_stablemap(&PolyMap::identity(r, 2));
        assert_eq!(text, "STABLEMAP v1\nring F 127\ndim 2\ncoord 1: 1*x1\ncoord 2: 1*x2\n");
    }

    #[test]
    fn noncanonical_input_is_collected() {
        let text = "STABLEMAP v1\nring Z 5\ndim 1\ncoord 1: 3*x1 + 4*x1 + x1^2 + 6\n";
        let map = parse_stablemap(text).unwrap();
        assert_eq!(
            write_stablemap(&map),
            "STABLEMAP v1\nring Z 5\ndim 1\ncoord 1: 1*x1^2 + 2*x1 + 1\n"
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "STABLEMAP v1\nring Z 256\ndim 2\ncoord 1: 1*x1\ncoord 2: 1*y2\n";
        assert!(matches!(parse_stablemap(bad), Err(Error::Parse { line: 5, .. })));
        let bad = "STABLEMAP v2\n";
        assert!(matches!(parse_stablemap(bad), Err(Error::Parse { line: 1, .. })));
        let bad = "STABLEMAP v1\nring Q 7\ndim 1\ncoord 1: 0\n";
        assert!(matches!(parse_stablemap(bad), Err(Error::Parse { line: 2, .. })));
        let bad = "STABLEMAP v1\nring Z 7\ndim 2\ncoord 1: 0\n";
        assert!(matches!(parse_stablemap(bad), Err(Error::Parse { .. })));
        let bad = "STABLEMAP v1\nring Z 7\ndim 1\ncoord 1: 2*x3\n";
        assert!(matches!(parse_stablemap(bad), Err(Error::Parse { line: 4, .. })));
    }
}
