use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Stable cubic transformation groups from walks on D(n, K) and its flag
/// graph: graph checks, walks, public-key maps, key exchange and benchmarks.
#[derive(Debug, Parser)]
#[command(name = "cremona", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Describe a ring given as `Z:<m>` or `F:<p>`.
    RingInfo {
        ring: String,
    },
    /// Exhaustive checks on a materialized graph D(k, F_q).
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
    /// Run a walk on a vertex or flag, or print its polynomial map.
    Walk {
        #[command(subcommand)]
        action: WalkAction,
    },
    /// Generate a public map from a seeded private key.
    Keygen(KeygenArgs),
    /// Evaluate a public map on a plaintext vector.
    Encrypt(EncryptArgs),
    /// Invert a ciphertext with an exported private key.
    Decrypt(DecryptArgs),
    /// Run both sides of the key exchange and print the public transcript.
    DhDemo(DhDemoArgs),
    /// Time key generation or encryption over a grid.
    Bench {
        #[command(subcommand)]
        action: BenchAction,
    },
    /// Run the acceptance checks and print one line per criterion.
    VerifySuite(VerifyArgs),
}

#[derive(Debug, Subcommand)]
enum GraphAction {
    Verify {
        #[arg(long)]
        k: usize,
        /// Prime field size.
        #[arg(long)]
        q: u64,
    },
}

#[derive(Debug, Args)]
struct WalkTarget {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    n: usize,
    /// Point-to-point walk, comma-separated colours of even length.
    #[arg(long, conflicts_with = "zwalk", required_unless_present = "zwalk")]
    walk: Option<String>,
    /// Flag walk as `a:b` pairs.
    #[arg(long)]
    zwalk: Option<String>,
}

#[derive(Debug, Subcommand)]
enum WalkAction {
    Run {
        #[command(flatten)]
        target: WalkTarget,
        /// Start vertex such as `P 1,2,3` (for `--walk`).
        #[arg(long)]
        vertex: Option<String>,
        /// Start flag such as `F1 1,2,3,4` (for `--zwalk`).
        #[arg(long)]
        flag: Option<String>,
    },
    Symbolic {
        #[command(flatten)]
        target: WalkTarget,
        /// Unrestricted flag graph: allow zero divisors as colours.
        #[arg(long)]
        unrestricted: bool,
    },
}

#[derive(Debug, Args)]
struct KeygenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ring: String,
    /// Number of walk colours, even.
    #[arg(long)]
    p: usize,
    #[arg(long)]
    seed: u64,
    /// Write the public map here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the private key to this file.
    #[arg(long)]
    export_secret: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EncryptArgs {
    /// STABLEMAP file holding the public map.
    #[arg(long)]
    public: PathBuf,
    /// Comma-separated plaintext.
    #[arg(long)]
    input: String,
}

#[derive(Debug, Args)]
struct DecryptArgs {
    /// Private key written by `keygen --export-secret`.
    #[arg(long)]
    secret: PathBuf,
    /// Comma-separated ciphertext.
    #[arg(long)]
    input: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Flag,
    Graph,
}

#[derive(Debug, Args)]
struct DhDemoArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ring: String,
    #[arg(long)]
    na: u64,
    #[arg(long)]
    nb: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "flag")]
    variant: VariantArg,
    /// Length of the secret walk g.
    #[arg(long, default_value_t = 4)]
    g_len: usize,
    /// Length of the conjugating walk h.
    #[arg(long, default_value_t = 2)]
    h_len: usize,
    /// Write the shared vector and exponents to this file.
    #[arg(long)]
    export_secret: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum BenchAction {
    Keygen {
        /// Comma-separated dimensions.
        #[arg(long)]
        n: String,
        /// Comma-separated colour counts.
        #[arg(long)]
        p: String,
        #[arg(long, default_value = "Z:256")]
        ring: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        runs: usize,
    },
    Encrypt {
        #[arg(long)]
        n: String,
        /// Comma-separated rings.
        #[arg(long, default_value = "Z:256")]
        ring: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        /// Plaintexts per timed run.
        #[arg(long, default_value_t = 8)]
        batch: usize,
        /// Colours in the walk of the timed key.
        #[arg(long, default_value_t = 10)]
        p: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScaleArg {
    Smoke,
    Full,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "smoke")]
    scale: ScaleArg,
    /// Run only these criteria, comma-separated.
    #[arg(long)]
    only: Option<String>,
    /// Also check that this STABLEMAP file parses and round-trips.
    #[arg(long)]
    stablemap: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
