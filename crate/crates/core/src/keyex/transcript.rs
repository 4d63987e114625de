use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{join, parse_list};
use crate::poly::format::parse_stablemap_from;
use crate::poly::{write_stablemap, PolyMap};
use crate::ring::{Ring, RingElem};

const HEADER: &str = "TRANSCRIPT v1";
const MAPS: [&str; 3] = ["base", "c_A", "c_B"];

/// Everything a session produced. `shared` is secret; the text form carries
/// only its digest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub ring: Ring,
    pub dim: usize,
    pub base: PolyMap,
    pub c_a: PolyMap,
    pub c_b: PolyMap,
    pub v: Vec<RingElem>,
    pub shared: Vec<RingElem>,
}

/// SHA-256 of the comma-separated shared vector, lowercase hex.
pub fn shared_digest(shared: &[RingElem]) -> String {
    hex::encode(Sha256::digest(join(shared).as_bytes()))
}

/// The public part of a transcript as read back from text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicTranscript {
    pub ring: Ring,
    pub dim: usize,
    pub v: Vec<RingElem>,
    pub shared_digest: String,
    pub base: PolyMap,
    pub c_a: PolyMap,
    pub c_b: PolyMap,
}

impl Transcript {
    pub fn digest(&self) -> String {
        shared_digest(&self.shared)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{HEADER}").unwrap();
        writeln!(s, "ring {}", self.ring).unwrap();
        writeln!(s, "dim {}", self.dim).unwrap();
        writeln!(s, "v {}", join(&self.v)).unwrap();
        writeln!(s, "shared-digest {}", self.digest()).unwrap();
        for (name, map) in MAPS.iter().zip([&self.base, &self.c_a, &self.c_b]) {
            writeln!(s, "map {name}").unwrap();
            s.push_str(&write_stablemap(map));
        }
        s
    }

    pub fn public(&self) -> PublicTranscript {
        PublicTranscript {
            ring: self.ring,
            dim: self.dim,
            v: self.v.clone(),
            shared_digest: self.digest(),
            base: self.base.clone(),
            c_a: self.c_a.clone(),
            c_b: self.c_b.clone(),
        }
    }
}

impl PublicTranscript {
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().collect();
        let get = |i: usize, key: &str| -> Result<&str> {
            let line = lines
                .get(i)
                .ok_or_else(|| Error::parse(i + 1, format!("unexpected end of input, expected `{key}`")))?;
            if key == HEADER {
                return if *line == HEADER {
                    Ok("")
                } else {
                    Err(Error::parse(i + 1, format!("expected `{HEADER}`")))
                };
            }
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .ok_or_else(|| Error::parse(i + 1, format!("expected `{key} ...`")))
        };
        get(0, HEADER)?;
        let ring: Ring = get(1, "ring")?
            .parse()
            .map_err(|e| Error::parse(2, format!("bad ring: {e}")))?;
        let dim: usize = get(2, "dim")?
            .trim()
            .parse()
            .map_err(|_| Error::parse(3, "bad dimension"))?;
        let v = parse_list(get(3, "v")?).map_err(|_| Error::parse(4, "bad public vector"))?;
        if v.len() != dim {
            return Err(Error::parse(4, format!("public vector has {} entries, expected {dim}", v.len())));
        }
        let digest = get(4, "shared-digest")?.trim().to_string();

        let mut maps = Vec::with_capacity(3);
        let mut i = 5;
        for name in MAPS {
            if get(i, "map")?.trim() != name {
                return Err(Error::parse(i + 1, format!("expected `map {name}`")));
            }
            let start = i + 1;
            let end = (start..lines.len())
                .find(|&j| lines[j].starts_with("map "))
                .unwrap_or(lines.len());
            let block = lines[start..end].join("\n");
            let map = parse_stablemap_from(&block, start + 1)?;
            if map.dim() != dim || map.ring() != ring {
                return Err(Error::parse(start + 1, format!("map {name} does not match ring {ring}, dim {dim}")));
            }
            maps.push(map);
            i = end;
        }
        let c_b = maps.pop().expect("three maps");
        let c_a = maps.pop().expect("three maps");
        let base = maps.pop().expect("three maps");
        Ok(PublicTranscript {
            ring,
            dim,
            v,
            shared_digest: digest,
            base,
            c_a,
            c_b,
        })
    }
}
