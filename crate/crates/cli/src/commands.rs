use std::fmt;
use std::fs;
use std::path::Path;

use cremona_core::bench::{
    bench_encrypt, bench_keygen, encrypt_slope, encrypt_table, keygen_shape_violations, keygen_table, BenchConfig,
    BenchRow,
};
use cremona_core::graph::GraphOracle;
use cremona_core::keyex::{decrypt, encrypt, run_exchange};
use cremona_core::poly::{parse_stablemap, write_stablemap};
use cremona_core::verify::{run_criterion, Scale, CRITERIA};
use cremona_core::{
    DGraph, DWalk, Error, Flag, FlagGraph, PrivateKey, PrivateSeed, Ring, RingElem, RingKind, Variant, Vertex, ZWalk,
};

use crate::{
    BenchAction, Command, DecryptArgs, DhDemoArgs, EncryptArgs, GraphAction, KeygenArgs, ScaleArg, VariantArg,
    VerifyArgs, WalkAction, WalkTarget,
};

const MAX_BENCH_N: usize = 100;
const MAX_BENCH_P: usize = 60;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or flag values; exit status 2.
    Usage(String),
    /// A check failed or an input file was unusable; exit status 1.
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(flag: &str, e: impl fmt::Display) -> CliError {
    CliError::Usage(format!("{flag}: {e}"))
}

fn failure(e: impl fmt::Display) -> CliError {
    CliError::Failure(e.to_string())
}

/// Errors a computation raises because of its arguments rather than its data.
fn classify(flag: &str, e: Error) -> CliError {
    match e {
        Error::InsufficientRegularElements(_)
        | Error::NotRegularColour(_)
        | Error::DimensionTooSmall { .. }
        | Error::DimensionMismatch { .. }
        | Error::InvalidWalk(_)
        | Error::TooLarge(_) => usage(flag, e),
        other => failure(other),
    }
}

fn ring_arg(s: &str) -> Result<Ring> {
    s.parse().map_err(|e| usage("--ring", e))
}

fn walk_ring_arg(s: &str) -> Result<Ring> {
    let ring = ring_arg(s)?;
    ring.require_three_regular().map_err(|e| usage("--ring", e))?;
    Ok(ring)
}

fn list_arg<T: std::str::FromStr>(flag: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| usage(flag, format!("cannot read `{x}`"))))
        .collect()
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| failure(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| failure(format!("{}: {e}", path.display())))
}

pub fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::RingInfo { ring } => ring_info(&ring),
        Command::Graph {
            action: GraphAction::Verify { k, q },
        } => graph_verify(k, q),
        Command::Walk { action } => walk(action),
        Command::Keygen(a) => keygen(a),
        Command::Encrypt(a) => encrypt_cmd(a),
        Command::Decrypt(a) => decrypt_cmd(a),
        Command::DhDemo(a) => dh_demo(a),
        Command::Bench { action } => bench(action),
        Command::VerifySuite(a) => verify_suite(a),
    }
}

fn ring_info(tag: &str) -> Result<()> {
    let ring = ring_arg(tag)?;
    println!("ring {ring}");
    println!(
        "kind {}",
        match ring.kind() {
            RingKind::PrimeField => "prime field",
            RingKind::ResidueRing => "residue ring",
        }
    );
    println!("modulus {}", ring.modulus());
    println!("field {}", ring.is_field());
    println!("regular-elements {}", ring.regular_count());
    println!(
        "walks {}",
        if ring.has_three_regular() {
            "supported"
        } else {
            "unsupported, needs at least 3 regular elements"
        }
    );
    Ok(())
}

fn graph_verify(k: usize, q: u64) -> Result<()> {
    let ring = Ring::prime_field(q).map_err(|e| usage("--q", e))?;
    let g = GraphOracle::build(ring, k).map_err(|e| classify("--k", e))?;
    let rep = g.report();
    let order = 2 * (q as usize).pow(k as u32);
    // odd k: girth >= k + 5, even k: >= k + 4
    let girth_bound = if k % 2 == 1 { k + 5 } else { k + 4 };
    println!("graph D({k},{q})");
    println!("order {} (expected {order})", rep.vertex_count);
    println!("edges {}", rep.edge_count);
    println!("bipartite {}", rep.is_bipartite);
    println!(
        "regular-degree {}",
        rep.regular_degree.map_or("none".into(), |d| d.to_string())
    );
    println!("rainbow {}", rep.rainbow);
    println!(
        "girth {} (bound {girth_bound})",
        rep.girth.map_or("none".into(), |g| g.to_string())
    );
    let mut ok = rep.vertex_count == order
        && rep.is_bipartite
        && rep.regular_degree == Some(q as usize)
        && rep.rainbow
        && rep.girth.is_none_or(|g| g >= girth_bound);
    if k >= 6 {
        let comp = g.component_report().map_err(failure)?;
        println!(
            "components {} fibers {} split {} mixed {}",
            comp.components, comp.fibers, comp.split_fibers, comp.mixed_components
        );
        let violations = g.invariant_violations().map_err(failure)?;
        println!("invariant-violations {violations}");
        ok &= violations == 0 && (comp.mixed_components == 0);
    }
    if ok {
        println!("status ok");
        Ok(())
    } else {
        Err(CliError::Failure(format!("D({k},{q}) failed verification")))
    }
}

enum ParsedWalk {
    Graph(DWalk),
    Flag(ZWalk),
}

fn walk_target(t: &WalkTarget) -> Result<(Ring, ParsedWalk)> {
    let ring = walk_ring_arg(&t.ring)?;
    let walk = match (&t.walk, &t.zwalk) {
        (Some(w), _) => ParsedWalk::Graph(w.parse().map_err(|e| usage("--walk", e))?),
        (None, Some(z)) => ParsedWalk::Flag(z.parse().map_err(|e| usage("--zwalk", e))?),
        (None, None) => return Err(usage("--walk", "one of --walk or --zwalk is required")),
    };
    Ok((ring, walk))
}

fn walk(action: WalkAction) -> Result<()> {
    match action {
        WalkAction::Run { target, vertex, flag } => {
            let (ring, w) = walk_target(&target)?;
            match w {
                ParsedWalk::Graph(w) => {
                    let g = DGraph::new(ring, target.n).map_err(|e| classify("--n", e))?;
                    let v: Vertex = vertex
                        .ok_or_else(|| usage("--vertex", "required with --walk"))?
                        .parse()
                        .map_err(|e| usage("--vertex", e))?;
                    let end = g.walk_apply(&v, &w).map_err(|e| classify("--vertex", e))?;
                    println!("{end}");
                }
                ParsedWalk::Flag(w) => {
                    let fg = FlagGraph::new(ring, target.n, true).map_err(|e| classify("--n", e))?;
                    let f: Flag = flag
                        .ok_or_else(|| usage("--flag", "required with --zwalk"))?
                        .parse()
                        .map_err(|e| usage("--flag", e))?;
                    let end = fg.apply_zwalk(&f, &w).map_err(|e| classify("--flag", e))?;
                    println!("{end}");
                }
            }
        }
        WalkAction::Symbolic { target, unrestricted } => {
            let (ring, w) = walk_target(&target)?;
            let map = match w {
                ParsedWalk::Graph(w) => DGraph::new(ring, target.n)
                    .and_then(|g| g.walk_symbolic(&w))
                    .map_err(|e| classify("--walk", e))?,
                ParsedWalk::Flag(w) => FlagGraph::new(ring, target.n, !unrestricted)
                    .and_then(|g| g.zwalk_symbolic(&w))
                    .map_err(|e| classify("--zwalk", e))?,
            };
            print!("{}", write_stablemap(&map));
        }
    }
    Ok(())
}

fn keygen(a: KeygenArgs) -> Result<()> {
    let ring = walk_ring_arg(&a.ring)?;
    let key = PrivateKey::generate(a.n, ring, a.p, a.seed).map_err(|e| classify("--p", e))?;
    let public = key.public_map().map_err(|e| classify("--n", e))?;
    let text = write_stablemap(&public);
    match &a.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &a.export_secret {
        write_file(path, &key.to_text())?;
    }
    Ok(())
}

fn encrypt_cmd(a: EncryptArgs) -> Result<()> {
    let public = parse_stablemap(&read_file(&a.public)?).map_err(|e| failure(format!("{}: {e}", a.public.display())))?;
    let x: Vec<RingElem> = list_arg("--input", &a.input)?;
    let y = encrypt(&public, &x).map_err(|e| classify("--input", e))?;
    println!("{}", join(&y));
    Ok(())
}

fn decrypt_cmd(a: DecryptArgs) -> Result<()> {
    let key = PrivateKey::from_text(&read_file(&a.secret)?).map_err(|e| failure(format!("{}: {e}", a.secret.display())))?;
    let y: Vec<RingElem> = list_arg("--input", &a.input)?;
    let x = decrypt(&key, &y).map_err(|e| classify("--input", e))?;
    println!("{}", join(&x));
    Ok(())
}

fn join(v: &[RingElem]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn dh_demo(a: DhDemoArgs) -> Result<()> {
    let ring = walk_ring_arg(&a.ring)?;
    let variant = match a.variant {
        VariantArg::Flag => Variant::Flag,
        VariantArg::Graph => Variant::Graph,
    };
    for (flag, e) in [("--na", a.na), ("--nb", a.nb)] {
        if e == 0 || e > 1 << 20 {
            return Err(usage(flag, format!("exponent {e} outside 1..=2^20")));
        }
    }
    let secret = PrivateSeed::generate(variant, a.n, ring, a.g_len, a.h_len, a.seed).map_err(|e| classify("--n", e))?;
    let v = secret.sample_public_vector();
    let t = run_exchange(&secret, a.na, a.nb, &v).map_err(failure)?;
    print!("{}", t.to_text());
    if let Some(path) = &a.export_secret {
        let text = format!(
            "SECRET v1\nvariant {variant}\nseed {}\nn_A {}\nn_B {}\nshared {}\n",
            a.seed,
            a.na,
            a.nb,
            join(&t.shared)
        );
        write_file(path, &text)?;
    }
    Ok(())
}

fn capped(flag: &str, values: Vec<usize>, cap: usize) -> Result<Vec<usize>> {
    match values.iter().find(|&&v| v == 0 || v > cap) {
        Some(v) => Err(usage(flag, format!("{v} outside 1..={cap}"))),
        None => Ok(values),
    }
}

fn print_rows(rows: &[BenchRow]) {
    println!("op,n,p,ring,micros");
    for r in rows {
        println!("{}", r.csv());
    }
}

fn bench(action: BenchAction) -> Result<()> {
    match action {
        BenchAction::Keygen { n, p, ring, seed, runs } => {
            let ring = walk_ring_arg(&ring)?;
            let ns = capped("--n", list_arg("--n", &n)?, MAX_BENCH_N)?;
            let ps = capped("--p", list_arg("--p", &p)?, MAX_BENCH_P)?;
            if let Some(odd) = ps.iter().find(|&&p| p % 2 != 0) {
                return Err(usage("--p", format!("{odd} is odd; colour counts must be even")));
            }
            let cfg = BenchConfig {
                runs,
                seed,
                ..BenchConfig::default()
            };
            let rows = bench_keygen(&ns, &ps, ring, &cfg).map_err(failure)?;
            print!("{}", keygen_table(&rows));
            print_rows(&rows);
            let bad = keygen_shape_violations(&rows);
            if bad.is_empty() {
                println!("shape ok");
                Ok(())
            } else {
                Err(CliError::Failure(format!("keygen shape: {}", bad.join("; "))))
            }
        }
        BenchAction::Encrypt {
            n,
            ring,
            seed,
            runs,
            batch,
            p,
        } => {
            let rings: Vec<Ring> = ring.split(',').map(walk_ring_arg).collect::<Result<_>>()?;
            let ns = capped("--n", list_arg("--n", &n)?, MAX_BENCH_N)?;
            let cfg = BenchConfig {
                runs,
                batch,
                encrypt_colours: p,
                seed,
            };
            let rows = bench_encrypt(&ns, &rings, &cfg).map_err(|e| classify("--p", e))?;
            print!("{}", encrypt_table(&rows));
            print_rows(&rows);
            let mut bad = Vec::new();
            for r in rings {
                match encrypt_slope(&rows, r) {
                    None => println!("slope {} skipped, need two sizes", r.to_string().replace(' ', ":")),
                    Some(s) => {
                        println!("slope {} {s:.2}", r.to_string().replace(' ', ":"));
                        if !(3.0..=5.0).contains(&s) {
                            bad.push(format!("{r}: slope {s:.2} outside [3, 5]"));
                        }
                    }
                }
            }
            if bad.is_empty() {
                Ok(())
            } else {
                Err(CliError::Failure(bad.join("; ")))
            }
        }
    }
}

fn verify_suite(a: VerifyArgs) -> Result<()> {
    let scale = match a.scale {
        ScaleArg::Smoke => Scale::Smoke,
        ScaleArg::Full => Scale::Full,
    };
    let ids: Vec<usize> = match &a.only {
        Some(list) => list_arg("--only", list)?,
        None => (1..=CRITERIA).collect(),
    };
    if let Some(bad) = ids.iter().find(|&&id| id == 0 || id > CRITERIA) {
        return Err(usage("--only", format!("no criterion {bad}")));
    }
    let mut failed = Vec::new();
    if let Some(path) = &a.stablemap {
        match read_file(path).and_then(|t| {
            let m = parse_stablemap(&t).map_err(failure)?;
            if write_stablemap(&m) == t {
                Ok(())
            } else {
                Err(failure("parses, but is not in canonical form"))
            }
        }) {
            Ok(()) => println!("PASS stablemap {}", path.display()),
            Err(e) => {
                println!("FAIL stablemap {}: {e}", path.display());
                failed.push("stablemap".to_string());
            }
        }
    }
    for id in ids {
        let outcome = run_criterion(id, scale);
        println!("{outcome}");
        if !outcome.passed {
            failed.push(id.to_string());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(format!("failed: {}", failed.join(", "))))
    }
}
