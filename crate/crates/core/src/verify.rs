//! The acceptance checks, each runnable at a quick smoke scale or in full.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench::{
    bench_encrypt, bench_keygen, density_for, density_line, encrypt_slope, keygen_shape_violations, BenchConfig,
};
use crate::error::{Error, Result};
use crate::flag::{dd_cycle_oracle, order_probe, stable_power_check, FlagGraph, FlagSide, ZStep, ZWalk, ZWord};
use crate::graph::{DGraph, DWalk, GraphOracle, Side};
use crate::keyex::{decrypt, encrypt, run_exchange, PrivateKey, PrivateSeed, Variant};
use crate::poly::{parse_stablemap, write_stablemap, AffineMap, PolyMap};
use crate::ring::Ring;

pub const CRITERIA: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Smoke,
    Full,
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smoke" => Ok(Scale::Smoke),
            "full" => Ok(Scale::Full),
            _ => Err(Error::parse(1, format!("unknown scale `{s}`, expected `smoke` or `full`"))),
        }
    }
}

impl Scale {
    fn pick<T>(self, smoke: T, full: T) -> T {
        match self {
            Scale::Smoke => smoke,
            Scale::Full => full,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// `PASS 3 components 1.20s: detail`
impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {:.2}s: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

pub fn criterion_name(id: usize) -> &'static str {
    match id {
        1 => "graph-facts",
        2 => "girth",
        3 => "components",
        4 => "edge-invariance",
        5 => "inverses",
        6 => "stable-degree",
        7 => "exchange",
        8 => "order-bounds",
        9 => "complexity-shape",
        10 => "round-trips",
        _ => "unknown",
    }
}

/// Runs one criterion. Errors raised inside a check count as failure.
pub fn run_criterion(id: usize, scale: Scale) -> Outcome {
    let start = Instant::now();
    let result = match id {
        1 => graph_facts(),
        2 => girth(),
        3 => components(scale),
        4 => edge_invariance(scale),
        5 => inverses(scale),
        6 => stable_degree(scale),
        7 => exchange(scale),
        8 => order_bounds(scale),
        9 => complexity_shape(scale),
        10 => round_trips(scale),
        _ => Err(Error::InvalidWalk(format!("no criterion {id}"))),
    };
    let (passed, detail) = match result {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Outcome {
        id,
        name: criterion_name(id),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn verify_suite(scale: Scale) -> Vec<Outcome> {
    (1..=CRITERIA).map(|id| run_criterion(id, scale)).collect()
}

type Check = Result<(bool, String)>;

fn f(q: u64) -> Ring {
    Ring::prime_field(q).expect("prime")
}

fn z(m: u64) -> Ring {
    Ring::residue(m).expect("modulus")
}

const SMALL_GRAPHS: [(usize, u64); 4] = [(2, 3), (3, 3), (2, 5), (3, 5)];

fn graph_facts() -> Check {
    let mut bad = Vec::new();
    for (k, q) in SMALL_GRAPHS {
        let g = GraphOracle::build(f(q), k)?;
        let order = 2 * (q as usize).pow(k as u32);
        if g.vertex_count() != order || !g.is_bipartite() || g.regular_degree() != Some(q as usize) {
            bad.push(format!(
                "D({k},{q}): order {} bipartite {} degree {:?}",
                g.vertex_count(),
                g.is_bipartite(),
                g.regular_degree()
            ));
        }
    }
    Ok(summary(bad, "4 graphs of order 2q^k, bipartite, q-regular"))
}

fn girth() -> Check {
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    for (k, q) in SMALL_GRAPHS {
        let bound = if k == 2 { 6 } else { 8 };
        let girth = GraphOracle::build(f(q), k)?.girth();
        seen.push(format!("D({k},{q})={}", girth.map_or("inf".into(), |g| g.to_string())));
        if girth.is_some_and(|g| g < bound) {
            bad.push(format!("D({k},{q}) girth {girth:?} < {bound}"));
        }
    }
    Ok(summary(bad, &seen.join(" ")))
}

fn components(scale: Scale) -> Check {
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    let exact: &[usize] = scale.pick(&[6], &[6, 7]);
    for &k in exact {
        let rep = GraphOracle::build(f(3), k)?.component_report()?;
        seen.push(format!("D({k},3): {} components = {} fibers", rep.components, rep.fibers));
        if !rep.coincide() {
            bad.push(format!("D({k},3): {rep:?}"));
        }
    }
    let rep = GraphOracle::build(z(4), 6)?.component_report()?;
    seen.push(format!("D(6,Z4): {} fibers split", rep.split_fibers));
    if rep.split_fibers == 0 {
        bad.push(format!("D(6,Z4): no fiber splits {rep:?}"));
    }
    Ok(summary(bad, &seen.join("; ")))
}

fn edge_invariance(scale: Scale) -> Check {
    let mut violations = 0;
    let exact: &[usize] = scale.pick(&[6], &[6, 7]);
    for &k in exact {
        violations += GraphOracle::build(f(3), k)?.invariant_violations()?;
    }
    let samples = scale.pick(1_000, 10_000);
    let g = DGraph::new(f(127), 10)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..samples {
        let p = g.random_vertex(Side::Point, &mut rng);
        let l = g.neighbor(&p, g.ring().sample(&mut rng))?;
        if g.invariant_vector(&p)? != g.invariant_vector(&l)? {
            violations += 1;
        }
    }
    Ok((
        violations == 0,
        format!("{violations} violations over all edges of D(k,3), k in {exact:?}, and {samples} random edges of D(10,F127)"),
    ))
}

fn inverses(scale: Scale) -> Check {
    let rings = [f(127), z(256)];
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let vertices = scale.pick(100, 1_000);
    let mut x_bad = 0;
    for ring in rings {
        for n in [6, 10] {
            let g = DGraph::new(ring, n)?;
            for _ in 0..vertices {
                let side = if rng.random_bool(0.5) { Side::Point } else { Side::Line };
                let v = g.random_vertex(side, &mut rng);
                let (a, b) = (ring.sample(&mut rng), ring.sample(&mut rng));
                let there = g.apply_x(&v, a, b)?;
                if g.apply_x(&there, ring.neg(b), ring.neg(a))? != v {
                    x_bad += 1;
                }
            }
        }
    }

    let pairs = scale.pick(10, 50);
    let (mut literal_bad, mut true_bad, mut total) = (0, 0, 0);
    for ring in rings {
        for n in [6, 10] {
            let fg = FlagGraph::new(ring, n, true)?;
            for _ in 0..pairs {
                let a = ring.sample_regular(&mut rng)?;
                let b = ring.sample_regular(&mut rng)?;
                total += 1;
                let literal = ZWalk::new(vec![(a, b), (ring.neg(a), ring.neg(b))]).word();
                if !fg.word_symbolic(&literal)?.is_identity() {
                    literal_bad += 1;
                }
                let undo = ZWord {
                    steps: vec![ZStep::Forward(a, b), ZStep::Inverse(a, b)],
                };
                if !fg.word_symbolic(&undo)?.is_identity() {
                    true_bad += 1;
                }
            }
        }
    }
    let passed = x_bad == 0 && literal_bad == 0 && true_bad == 0;
    Ok((
        passed,
        format!(
            "X(a,b)X(-b,-a): {x_bad} of {} vertices off; Z(a,b)Z(-a,-b): {literal_bad} of {total} not the identity; \
             Z(a,b) then its inverse (line move -b, point move -a): {true_bad} of {total} off",
            vertices * 4
        ),
    ))
}

fn stable_degree(scale: Scale) -> Check {
    let rings = [z(256), z(1 << 16), f(127)];
    let dims: &[usize] = scale.pick(&[8, 16], &[8, 16, 32]);
    let walks = scale.pick(10, 100);
    let kmax = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = Vec::new();
    let mut conjugated = [0usize; 2];

    let check = |label: String, g: PolyMap, bad: &mut Vec<String>| -> Result<()> {
        let rep = stable_power_check(&g, kmax)?;
        if g.degree() > 3 || !rep.passed {
            bad.push(format!("{label}: degrees {:?}", rep.degrees));
        }
        Ok(())
    };
    let conjugate = |g: &PolyMap, tau: &AffineMap| -> Result<PolyMap> {
        tau.to_map().compose(&g.compose(&tau.inverse()?.to_map())?)
    };

    for i in 0..walks {
        let ring = rings[i % 3];
        let n = dims[(i / 3) % dims.len()];
        let len = 1 + i % 16;
        let fg = FlagGraph::new(ring, n, true)?;
        let w = ZWalk::random(ring, len, &mut rng)?;
        let mut g = fg.zwalk_symbolic(&w)?;
        if i % 2 == 1 {
            let tau = AffineMap::random_first_row(ring, n + 1, &mut rng);
            g = conjugate(&g, &tau)?;
            conjugated[0] += 1;
        }
        check(format!("Z-walk #{i} {ring} n={n} len={len}"), g, &mut bad)?;
    }
    for i in 0..walks {
        let ring = rings[i % 3];
        let n = dims[(i / 3) % dims.len()];
        let len = 1 + i % 16;
        let dg = DGraph::new(ring, n)?;
        let w = DWalk::random(ring, len, true, &mut rng)?;
        let mut g = dg.walk_symbolic(&w)?;
        // conjugated point-to-point maps are dense; their powers are only
        // affordable at the smallest dimension
        if i % 2 == 1 && n == dims[0] {
            let tau = AffineMap::random_first_row(ring, n, &mut rng);
            g = conjugate(&g, &tau)?;
            conjugated[1] += 1;
        }
        check(format!("D-walk #{i} {ring} n={n} len={len}"), g, &mut bad)?;
    }
    Ok(summary(
        bad,
        &format!(
            "{walks} Z-walks ({} conjugated) and {walks} D-walks ({} conjugated), n in {dims:?}, powers to {kmax}, all degree <= 3",
            conjugated[0], conjugated[1]
        ),
    ))
}

fn exchange(scale: Scale) -> Check {
    let runs = scale.pick(4, 20);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad = Vec::new();
    for i in 0..runs {
        let n = [8, 16][i % 2];
        let ring = [z(1 << 16), f(127)][(i / 2) % 2];
        let secret = PrivateSeed::generate(Variant::Flag, n, ring, 1 + i % 4, 1 + (i / 4) % 3, i as u64)?;
        let n_a = rng.random_range(1..=64u64);
        let n_b = rng.random_range(1..=4096 / n_a);
        let v: Vec<u64> = (0..secret.dim()).map(|_| ring.sample(&mut rng)).collect();
        if let Err(e) = run_exchange(&secret, n_a, n_b, &v) {
            bad.push(format!("run {i} ({ring}, n={n}, {n_a}x{n_b}): {e}"));
        }
    }
    Ok(summary(bad, &format!("{runs}/{runs} exchanges agree formally and on v")))
}

fn order_bounds(scale: Scale) -> Check {
    let ring = f(127);
    let seeds = scale.pick(2, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = Vec::new();
    let mut lows = Vec::new();
    for n in [11, 15] {
        let fg = FlagGraph::new(ring, n, true)?;
        for k in [2, 4] {
            let bound = ((n + 5) / (2 * k)) as u64;
            for _ in 0..seeds {
                let g = fg.zwalk_symbolic(&ZWalk::random(ring, k, &mut rng)?)?;
                let samples: Vec<Vec<u64>> = (0..4).map(|_| fg.random_flag(FlagSide::F1, &mut rng).data).collect();
                let probe = order_probe(&g, &samples, 10_000)?;
                lows.push(probe.lower_bound);
                if probe.lower_bound < bound {
                    bad.push(format!("n={n} k={k}: order >= {} only, need {bound}", probe.lower_bound));
                }
            }
        }
    }
    let mut cycles = Vec::new();
    for n in [2, 3] {
        let need = (n + 5) / 2;
        match dd_cycle_oracle(n, f(3), true)? {
            Some(c) if c < need => bad.push(format!("DD({n},F3) has a cycle of length {c} < {need}")),
            c => cycles.push(format!("DD({n},F3) shortest cycle {}", c.map_or("none".into(), |c| c.to_string()))),
        }
    }
    let min_low = lows.iter().min().copied().unwrap_or(0);
    Ok(summary(
        bad,
        &format!("smallest probed order bound {min_low}; {}", cycles.join(", ")),
    ))
}

fn complexity_shape(scale: Scale) -> Check {
    let ring = z(256);
    let cfg = BenchConfig {
        seed: 9,
        ..BenchConfig::default()
    };
    let enc_ns: &[usize] = scale.pick(&[20, 40, 60], &[20, 40, 60, 80, 100]);
    let key_ns: &[usize] = scale.pick(&[10, 20], &[10, 20, 30, 40]);
    let key_ps: &[usize] = scale.pick(&[10, 20], &[10, 20, 30]);

    let enc = bench_encrypt(enc_ns, &[ring], &cfg)?;
    let slope = encrypt_slope(&enc, ring);
    let keygen = bench_keygen(key_ns, key_ps, ring, &cfg)?;
    let shape = keygen_shape_violations(&keygen);

    let mut notes = Vec::new();
    for &n in enc_ns {
        notes.push(density_line(&density_for(n, cfg.encrypt_colours, ring, cfg.seed)?));
    }
    let slope_ok = slope.is_some_and(|s| (3.0..=5.0).contains(&s));
    let mut detail = format!(
        "encryption slope {} over n={enc_ns:?}; keygen grid {}x{} shape violations {}",
        slope.map_or("n/a".into(), |s| format!("{s:.2}")),
        key_ns.len(),
        key_ps.len(),
        shape.len()
    );
    for v in &shape {
        detail.push_str("; ");
        detail.push_str(v);
    }
    detail.push_str(" | ");
    detail.push_str(&notes.join(" | "));
    Ok((slope_ok && shape.is_empty(), detail))
}

fn round_trips(scale: Scale) -> Check {
    let maps = scale.pick(20, 100);
    let plaintexts = scale.pick(100, 1_000);
    let rings = [z(256), z(1 << 16), f(127), f(5), z(1 << 32)];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut map_bad = 0;
    for i in 0..maps {
        let ring = rings[i % rings.len()];
        let n = 2 + i % 9;
        let m = match i % 3 {
            0 => FlagGraph::new(ring, n, true)?.zwalk_symbolic(&ZWalk::random(ring, 1 + i % 5, &mut rng)?)?,
            1 => DGraph::new(ring, n)?.walk_symbolic(&DWalk::random(ring, 1 + i % 5, true, &mut rng)?)?,
            _ => {
                let g = DGraph::new(ring, n)?.walk_symbolic(&DWalk::random(ring, 2, true, &mut rng)?)?;
                g.compose(&AffineMap::random_first_row(ring, n, &mut rng).to_map())?
            }
        };
        let text = write_stablemap(&m);
        let back = parse_stablemap(&text)?;
        if back != m || write_stablemap(&back) != text {
            map_bad += 1;
        }
    }

    let ring = z(256);
    let key = PrivateKey::generate(10, ring, 10, 11)?;
    let public = key.public_map()?;
    let mut enc_bad = 0;
    for _ in 0..plaintexts {
        let x: Vec<u64> = (0..10).map(|_| ring.sample(&mut rng)).collect();
        if decrypt(&key, &encrypt(&public, &x)?)? != x {
            enc_bad += 1;
        }
    }
    Ok((
        map_bad == 0 && enc_bad == 0,
        format!("STABLEMAP {map_bad} of {maps} maps differ; decrypt(encrypt(x)) {enc_bad} of {plaintexts} differ"),
    ))
}

fn summary(bad: Vec<String>, ok: &str) -> (bool, String) {
    if bad.is_empty() {
        (true, ok.to_string())
    } else {
        (false, bad.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_line_format() {
        let o = Outcome {
            id: 3,
            name: "components",
            passed: true,
            detail: "ok".into(),
            seconds: 1.234,
        };
        assert_eq!(o.to_string(), "PASS 3 components 1.23s: ok");
        assert_eq!("full".parse::<Scale>().unwrap(), Scale::Full);
        assert!("huge".parse::<Scale>().is_err());
    }

    #[test]
    fn unknown_criterion_fails() {
        let o = run_criterion(11, Scale::Smoke);
        assert!(!o.passed);
        assert_eq!(o.name, "unknown");
    }
}
