//! `pmds`: construct, verify and exercise partial MDS codes from the shell.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use manifest::{digest, manifest_path, with_out, Manifest};

#[derive(Debug, Parser)]
#[command(name = "pmds", version, about = "Partial MDS code constructions, verifiers and bounds")]
pub struct Cli {
    /// Master seed for randomized commands; one is generated and recorded when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker thread cap.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the machine-readable document instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    /// Write the machine-readable document here, plus `<out>.manifest.json`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct ParamArgs {
    /// Number of local groups.
    #[arg(long)]
    m: usize,
    /// Locality.
    #[arg(long)]
    ell: usize,
    /// Global redundancy, k = mℓ − s.
    #[arg(long)]
    s: usize,
    /// Per-block local redundancy, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    r: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Mrd,
    Random,
    Stepwise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    Tkl,
    Definition,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a PMDS generator matrix.
    Construct {
        #[arg(long, value_enum)]
        method: MethodArg,
        #[command(flatten)]
        params: ParamArgs,
        /// Field characteristic.
        #[arg(long, default_value_t = 2)]
        p: u32,
        /// Degree of GF(q) over GF(p); chosen automatically when absent.
        #[arg(long = "q-deg")]
        q_deg: Option<u32>,
        /// Extension degree of GF(q^N) for the mrd method (default mℓ).
        #[arg(long = "N")]
        big_n: Option<u32>,
        /// Attempts for the random method.
        #[arg(long, default_value_t = 1000)]
        max_attempts: u64,
    },
    /// Check a PMDS code file.
    Verify {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        mode: VerifyMode,
    },
    /// Erase, decode and tally recoveries over the local-plus-global pattern family.
    Simulate {
        input: PathBuf,
        /// Sampled patterns when the family is too large to sweep.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Field-size and probability bounds for a parameter set.
    Bounds {
        #[command(flatten)]
        params: ParamArgs,
        /// Field sizes (prime powers), comma separated.
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
        /// Characteristic for the rank-metric field recipe.
        #[arg(long)]
        p: Option<u32>,
    },
    /// Empirical success rate of random standard-form fills.
    Estimate {
        #[command(flatten)]
        params: ParamArgs,
        /// Field size (prime power).
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Vandermonde MDS generator over GF(p^q-deg).
    MdsGen {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long = "q-deg", default_value_t = 1)]
        q_deg: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Gabidulin generator over GF(q^N), q = p^q-deg.
    MrdGen {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long = "q-deg", default_value_t = 1)]
        q_deg: u32,
        #[arg(long = "N")]
        big_n: u32,
        /// Code length (default N).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: usize,
    },
    /// Check that every maximal minor of a generator is nonzero.
    MdsCheck { input: PathBuf },
    /// Check the rank-metric distance criterion of a tower-field generator.
    MrdCheck { input: PathBuf },
    /// Re-run the command recorded in a manifest and compare output digests.
    Replay { manifest: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Construct { .. } => "construct",
            Command::Verify { .. } => "verify",
            Command::Simulate { .. } => "simulate",
            Command::Bounds { .. } => "bounds",
            Command::Estimate { .. } => "estimate",
            Command::MdsGen { .. } => "mds-gen",
            Command::MrdGen { .. } => "mrd-gen",
            Command::MdsCheck { .. } => "mds-check",
            Command::MrdCheck { .. } => "mrd-check",
            Command::Replay { .. } => "replay",
        }
    }

    fn is_randomized(&self) -> bool {
        match self {
            Command::Construct { method, .. } => *method != MethodArg::Mrd,
            Command::Simulate { .. } | Command::Estimate { .. } => true,
            _ => false,
        }
    }
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CONSTRUCTION: u8 = 3;

/// A failure carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: EXIT_USAGE, error: error.into() }
    }

    pub fn construction(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: EXIT_CONSTRUCTION, error: error.into() }
    }
}

/// Result of a command: the machine document, a human summary and the exit status.
pub struct Report {
    pub json: String,
    pub human: String,
    pub code: u8,
}

fn auto_seed() -> u64 {
    let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos() as u64).unwrap_or(0);
    nanos ^ (u64::from(std::process::id()) << 32)
}

fn run(args: Vec<String>) -> Result<u8, Failure> {
    let cli = match Cli::try_parse_from(std::iter::once("pmds".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return Ok(code);
        }
    };

    if let Command::Replay { manifest } = &cli.command {
        return replay(manifest, cli.out.as_deref());
    }

    if let Some(threads) = cli.threads {
        // A second call in the same process (replay) keeps the existing pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }

    let mut args = args;
    let seed = match cli.seed {
        Some(s) => Some(s),
        None if cli.command.is_randomized() => {
            let s = auto_seed();
            eprintln!("no --seed given; using {s}");
            args.push("--seed".into());
            args.push(s.to_string());
            Some(s)
        }
        None => None,
    };

    let start = Instant::now();
    let report = commands::dispatch(&cli.command, seed)?;
    let elapsed_ms = start.elapsed().as_millis() as u64;

    if let Some(out) = &cli.out {
        std::fs::write(out, &report.json)
            .map_err(|e| Failure::usage(anyhow::anyhow!("writing {}: {e}", out.display())))?;
        let manifest = Manifest {
            command: cli.command.name().to_string(),
            args,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_ms,
            output: out.clone(),
            result_digest: digest(report.json.as_bytes()),
        };
        manifest.write(&manifest_path(out)).map_err(Failure::usage)?;
    }
    if cli.json {
        print!("{}", report.json);
    } else {
        println!("{}", report.human);
    }
    Ok(report.code)
}

fn replay(path: &std::path::Path, out: Option<&std::path::Path>) -> Result<u8, Failure> {
    let manifest = Manifest::read(path).map_err(Failure::usage)?;
    let target = out.map(|p| p.to_path_buf()).unwrap_or_else(|| manifest.output.clone());
    let args = with_out(&manifest.args, &target);
    let code = run(args)?;
    let bytes =
        std::fs::read(&target).map_err(|e| Failure::usage(anyhow::anyhow!("reading {}: {e}", target.display())))?;
    let got = digest(&bytes);
    if got == manifest.result_digest {
        eprintln!("replay of {} reproduced {got} (exit {code})", manifest.command);
        Ok(EXIT_OK)
    } else {
        eprintln!("replay of {} produced {got}, manifest records {}", manifest.command, manifest.result_digest);
        Ok(EXIT_NEGATIVE)
    }
}

fn main() -> ExitCode {
    match run(std::env::args().skip(1).collect()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
