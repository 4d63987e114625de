//! Timing harness for public-key generation and encryption, with the shape
//! checks run against its output.

use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::keyex::{encrypt, public_rule_by_composition, PrivateKey};
use crate::poly::DensityReport;
use crate::ring::{Ring, RingElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchOp {
    Keygen,
    Encrypt,
}

impl fmt::Display for BenchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchOp::Keygen => "keygen",
            BenchOp::Encrypt => "encrypt",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub op: BenchOp,
    pub n: usize,
    /// Number of colours in the private walk.
    pub p: usize,
    pub ring: Ring,
    /// Median over the timed runs. For encryption, per plaintext.
    pub elapsed: Duration,
}

impl BenchRow {
    /// `op,n,p,ring,micros`
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.op,
            self.n,
            self.p,
            ring_tag(self.ring),
            self.elapsed.as_micros()
        )
    }
}

fn ring_tag(r: Ring) -> String {
    r.to_string().replace(' ', ":")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    /// Timed runs per cell; the median is reported.
    pub runs: usize,
    /// Plaintexts encrypted per timed encryption run.
    pub batch: usize,
    /// Walk colours for the keys used in encryption timing.
    pub encrypt_colours: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            runs: 5,
            batch: 8,
            encrypt_colours: 10,
            seed: 0,
        }
    }
}

/// One discarded warmup call, then the median of `runs` timed calls.
fn median_time<F>(runs: usize, mut f: F) -> Result<Duration>
where
    F: FnMut() -> Result<()>,
{
    f()?;
    let mut times = Vec::with_capacity(runs.max(1));
    for _ in 0..runs.max(1) {
        let start = Instant::now();
        f()?;
        times.push(start.elapsed());
    }
    times.sort();
    Ok(times[times.len() / 2])
}

/// Times public-map generation by symbolic walking for every `(n, p)`.
pub fn bench_keygen(ns: &[usize], ps: &[usize], ring: Ring, cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::with_capacity(ns.len() * ps.len());
    for &n in ns {
        for &p in ps {
            let key = PrivateKey::generate(n, ring, p, cfg.seed)?;
            let elapsed = median_time(cfg.runs, || key.public_map().map(drop))?;
            rows.push(BenchRow {
                op: BenchOp::Keygen,
                n,
                p,
                ring,
                elapsed,
            });
        }
    }
    Ok(rows)
}

/// Times evaluation of a public map on a batch of seeded plaintexts.
pub fn bench_encrypt(ns: &[usize], rings: &[Ring], cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::with_capacity(ns.len() * rings.len());
    let batch = cfg.batch.max(1);
    for &n in ns {
        for &ring in rings {
            let key = PrivateKey::generate(n, ring, cfg.encrypt_colours, cfg.seed)?;
            let public = public_rule_by_composition(&key)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ n as u64);
            let plaintexts: Vec<Vec<RingElem>> = (0..batch)
                .map(|_| (0..n).map(|_| ring.sample(&mut rng)).collect())
                .collect();
            let elapsed = median_time(cfg.runs, || {
                for x in &plaintexts {
                    std::hint::black_box(encrypt(&public, x)?);
                }
                Ok(())
            })?;
            rows.push(BenchRow {
                op: BenchOp::Encrypt,
                n,
                p: cfg.encrypt_colours,
                ring,
                elapsed: elapsed / batch as u32,
            });
        }
    }
    Ok(rows)
}

/// Least-squares slope of `ln t` against `ln n`. `None` below two distinct
/// sizes.
pub fn loglog_slope(points: &[(usize, Duration)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, t)| ((n as f64).ln(), t.as_secs_f64().max(1e-9).ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if pts.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Encryption slope for one ring. `None` when fewer than two sizes were
/// timed.
pub fn encrypt_slope(rows: &[BenchRow], ring: Ring) -> Option<f64> {
    let pts: Vec<(usize, Duration)> = rows
        .iter()
        .filter(|r| r.op == BenchOp::Encrypt && r.ring == ring)
        .map(|r| (r.n, r.elapsed))
        .collect();
    loglog_slope(&pts)
}

/// Cells breaking the keygen shape: time must rise strictly with `n` at
/// fixed `p` and must not fall as `p` grows at fixed `n`.
pub fn keygen_shape_violations(rows: &[BenchRow]) -> Vec<String> {
    let mut out = Vec::new();
    let keygen: Vec<&BenchRow> = rows.iter().filter(|r| r.op == BenchOp::Keygen).collect();
    for a in &keygen {
        for b in &keygen {
            if a.ring != b.ring {
                continue;
            }
            if a.p == b.p && a.n < b.n && a.elapsed >= b.elapsed {
                out.push(format!(
                    "p={}: n={} took {:?}, not less than n={} at {:?}",
                    a.p, a.n, a.elapsed, b.n, b.elapsed
                ));
            }
            if a.n == b.n && a.p < b.p && a.elapsed > b.elapsed {
                out.push(format!(
                    "n={}: p={} took {:?}, more than p={} at {:?}",
                    a.n, a.p, a.elapsed, b.p, b.elapsed
                ));
            }
        }
    }
    out
}

fn millis(d: Duration) -> String {
    format!("{:.2}", d.as_secs_f64() * 1e3)
}

fn sorted_unique<T: Ord + Copy>(it: impl Iterator<Item = T>) -> Vec<T> {
    let mut v: Vec<T> = it.collect();
    v.sort();
    v.dedup();
    v
}

/// Rows `n`, columns `p`, milliseconds.
pub fn keygen_table(rows: &[BenchRow]) -> String {
    let rows: Vec<&BenchRow> = rows.iter().filter(|r| r.op == BenchOp::Keygen).collect();
    let ns = sorted_unique(rows.iter().map(|r| r.n));
    let ps = sorted_unique(rows.iter().map(|r| r.p));
    let mut s = String::new();
    write!(s, "{:>8}", "").unwrap();
    for p in &ps {
        write!(s, " {:>12}", format!("p={p}")).unwrap();
    }
    s.push('\n');
    for n in &ns {
        write!(s, "{:>8}", format!("n={n}")).unwrap();
        for p in &ps {
            let cell = rows
                .iter()
                .find(|r| r.n == *n && r.p == *p)
                .map_or("-".to_string(), |r| millis(r.elapsed));
            write!(s, " {cell:>12}").unwrap();
        }
        s.push('\n');
    }
    s
}

/// Rows `n`, columns ring, milliseconds per plaintext.
pub fn encrypt_table(rows: &[BenchRow]) -> String {
    let rows: Vec<&BenchRow> = rows.iter().filter(|r| r.op == BenchOp::Encrypt).collect();
    let ns = sorted_unique(rows.iter().map(|r| r.n));
    let mut rings: Vec<Ring> = Vec::new();
    for r in &rows {
        if !rings.contains(&r.ring) {
            rings.push(r.ring);
        }
    }
    let mut s = String::new();
    write!(s, "{:>8}", "").unwrap();
    for r in &rings {
        write!(s, " {:>12}", ring_tag(*r)).unwrap();
    }
    s.push('\n');
    for n in &ns {
        write!(s, "{:>8}", format!("n={n}")).unwrap();
        for ring in &rings {
            let cell = rows
                .iter()
                .find(|r| r.n == *n && r.ring == *ring)
                .map_or("-".to_string(), |r| millis(r.elapsed));
            write!(s, " {cell:>12}").unwrap();
        }
        s.push('\n');
    }
    s
}

/// Density of the public map for a seeded key, against `C(n, 3)` slots.
pub fn density_for(n: usize, colours: usize, ring: Ring, seed: u64) -> Result<DensityReport> {
    let key = PrivateKey::generate(n, ring, colours, seed)?;
    Ok(public_rule_by_composition(&key)?.density())
}

pub fn density_line(r: &DensityReport) -> String {
    format!(
        "density n={} terms={} squarefree-cubic={} of {} ({:.4})",
        r.dim,
        r.total_terms,
        r.total_squarefree_cubic,
        r.slots * r.dim as u64,
        r.ratio
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> BenchConfig {
        BenchConfig {
            runs: 1,
            batch: 1,
            encrypt_colours: 4,
            seed: 3,
        }
    }

    #[test]
    fn slope_of_exact_powers() {
        let pts: Vec<(usize, Duration)> = [10usize, 20, 40]
            .iter()
            .map(|&n| (n, Duration::from_nanos((n as u64).pow(4))))
            .collect();
        assert!((loglog_slope(&pts).unwrap() - 4.0).abs() < 1e-9);
        assert_eq!(loglog_slope(&pts[..1]), None);
    }

    #[test]
    fn grid_shapes() {
        let r = Ring::residue(256).unwrap();
        let rows = bench_keygen(&[6, 8], &[2, 4], r, &quick()).unwrap();
        assert_eq!(rows.len(), 4);
        let single = bench_encrypt(&[6], &[r], &quick()).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(encrypt_slope(&single, r), None);
        let table = keygen_table(&rows);
        assert_eq!(table.lines().count(), 3);
        assert!(table.lines().next().unwrap().contains("p=4"));
        assert!(rows[0].csv().starts_with("keygen,6,2,Z:256,"));
    }

    #[test]
    fn shape_violations_are_reported() {
        let r = Ring::residue(256).unwrap();
        let row = |n, p, ms| BenchRow {
            op: BenchOp::Keygen,
            n,
            p,
            ring: r,
            elapsed: Duration::from_millis(ms),
        };
        let good = [row(10, 10, 1), row(10, 20, 2), row(20, 10, 3), row(20, 20, 4)];
        assert!(keygen_shape_violations(&good).is_empty());
        let bad = [row(10, 10, 5), row(20, 10, 5), row(20, 20, 4)];
        assert_eq!(keygen_shape_violations(&bad).len(), 2);
    }
}
