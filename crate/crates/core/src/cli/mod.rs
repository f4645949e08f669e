//! Command-line front end. Every subcommand prints JSON on stdout (or to
//! `--out`); diagnostics go to stderr.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::error::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "gfock", version, about = "Generalized Fock spaces: kernels, operators, transforms, moment certificates")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Series truncation degree [default: 64; `verify` uses its profile's].
    #[arg(long, global = true)]
    pub terms: Option<usize>,

    /// Gauss-Hermite node count.
    #[arg(long, global = true, default_value_t = crate::bargmann::DEFAULT_NODES)]
    pub nodes: usize,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Indented JSON; `table` renders plain text.
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the identity suite and emit a report.
    Verify(VerifyArgs),
    /// Reproducing kernel K(z, w) by series and closed form.
    Kernel(KernelArgs),
    /// Bargmann-type transform of an L^2 function at a point.
    Transform(TransformArgs),
    /// Apply an operator expression to a coefficient sequence.
    Op(OpArgs),
    /// Hankel certificates for a moment sequence.
    Moments(MomentsArgs),
    /// Exact adjoint weights per degree.
    Table(TableArgs),
    /// Special-function values.
    #[command(subcommand)]
    Specfun(SpecfunCmd),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "quick")]
    pub profile: String,
    /// Record wall-clock time per check (makes the report nondeterministic).
    #[arg(long)]
    pub timings: bool,
    /// Only run checks whose id starts with one of these prefixes.
    pub filter: Vec<String>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long, default_value = "hp")]
    pub space: String,
    #[arg(long, default_value_t = 0)]
    pub p: u32,
    #[arg(long, value_parser = parse_complex)]
    pub z: Complex64,
    #[arg(long, value_parser = parse_complex)]
    pub w: Complex64,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, default_value = "b")]
    pub kind: String,
    #[arg(long, default_value_t = 0)]
    pub p: u32,
    /// `gaussian`, `hermite_n:K` or `hermite:FILE.json`.
    #[arg(long, default_value = "gaussian")]
    pub phi: String,
    #[arg(long, value_parser = parse_complex)]
    pub z: Complex64,
}

#[derive(Debug, Args)]
pub struct OpArgs {
    #[arg(long)]
    pub expr: String,
    /// Coefficient sequence JSON; required unless `--matrix` is given.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Truncation degree; defaults to `--terms`.
    #[arg(long)]
    pub trunc: Option<usize>,
    /// Print the truncated matrix as CSV of exact rationals.
    #[arg(long)]
    pub matrix: bool,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    /// `hp:P`, `fp:P`, `factorial`, `hausdorff` or `file:FILE.json`.
    #[arg(long)]
    pub seq: String,
    #[arg(long, default_value_t = 6)]
    pub nmax: usize,
    #[arg(long, default_value = "exact")]
    pub mode: String,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// `adjoint_hp` or `adjoint_fp`.
    #[arg(long)]
    pub kind: String,
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    #[arg(long, default_value_t = 5)]
    pub nmax: usize,
}

#[derive(Debug, Subcommand)]
pub enum SpecfunCmd {
    /// Stirling number of the second kind S(n, k).
    Stirling2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Touchard polynomial T_n(x).
    Touchard {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_complex)]
        x: Complex64,
    },
    /// Probabilists' Hermite polynomial He_n(z).
    HermiteHe {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_complex)]
        z: Complex64,
    },
    /// Normalized Hermite function xi_n(x).
    HermiteFn {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// `sum z^n / ((n+1)^{2p} n!)` through `z^terms`.
    Hyper {
        #[arg(long)]
        p: u32,
        #[arg(long, value_parser = parse_complex)]
        z: Complex64,
    },
    /// Rising factorial (a)_n.
    Pochhammer {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long)]
        n: usize,
    },
}

/// `RE` or `RE,IM`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let bad = || format!("expected RE or RE,IM, got `{s}`");
    let (re, im) = match s.split_once(',') {
        Some((re, im)) => (re, im),
        None => (s, "0"),
    };
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

pub const DEFAULT_TERMS: usize = 64;

impl GlobalOpts {
    pub fn terms(&self) -> usize {
        self.terms.unwrap_or(DEFAULT_TERMS)
    }
}

/// Result of a subcommand before it is written out.
pub(crate) struct Output {
    pub body: String,
    pub code: u8,
}

/// Parses `args` (including the program name), runs the command, writes the
/// output and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let out = match commands::dispatch(&cli) {
        Ok(out) => out,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code_for(&e);
        }
    };
    let written = match &cli.global.out {
        Some(path) => write_atomic(path, out.body.as_bytes()),
        None => stdout
            .write_all(out.body.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| Error::io("<stdout>", e)),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_IO;
    }
    if out.code == EXIT_CHECK_FAILED {
        let _ = writeln!(stderr, "one or more checks failed");
    }
    out.code
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

/// Writes through a temporary file in the target directory, so a failed write
/// leaves nothing behind.
fn write_atomic(path: &Path, bytes: &[u8]) -> crate::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.flush().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
