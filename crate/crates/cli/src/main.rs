use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use permcode_core::DistanceSet;

mod commands;
mod report;
mod tables;

use report::{Outcome, RunReport};

#[derive(Parser)]
#[command(name = "permcode", version, about = "LP and SDP upper bounds for permutation codes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Global {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the result rows as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Seed for randomized probes.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Permit runs that take minutes to hours.
    #[arg(long, global = true)]
    pub allow_slow: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Character table of Sym(n).
    Chars {
        #[arg(long)]
        n: usize,
    },
    /// Eigenmatrix Q, class weights and structure constants of the conjugacy scheme.
    Scheme {
        #[arg(long)]
        n: usize,
        /// Include the tensor p_ij^k.
        #[arg(long)]
        structure_constants: bool,
    },
    /// Delsarte LP bound, solved exactly.
    Lp {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        distances: DistanceArgs,
    },
    /// Orbits of Sym(n)² under conjugation and inversion.
    Orbits {
        #[arg(long)]
        n: usize,
        /// Enumerate the orbits instead of only counting them.
        #[arg(long)]
        enumerate: bool,
        /// Also count orbits under the coordinate swap.
        #[arg(long)]
        swap: bool,
        /// Write the orbit id array (implies --enumerate).
        #[arg(long, value_name = "PATH")]
        save: Option<PathBuf>,
    },
    /// Multiplicities of the conjugacy representation, or the dimension of the
    /// algebra generated by the A_i and E'_i.
    Algebra {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "terwilliger_dim", required_unless_present = "terwilliger_dim")]
        multiplicities: bool,
        #[arg(long)]
        terwilliger_dim: bool,
    },
    /// Basic blocks of the orbit algebra.
    Blocks {
        #[arg(long)]
        n: usize,
        /// Write the blocks in the PCBB binary format.
        #[arg(long, value_name = "PATH")]
        save: Option<PathBuf>,
    },
    /// SDP bound over the orbit algebra.
    Sdp {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        distances: DistanceArgs,
        #[arg(long, value_enum, default_value_t = Mode::Block)]
        mode: Mode,
        /// Keep transpose-partner orbits as separate variables.
        #[arg(long)]
        split_transposes: bool,
        /// Write the program in SDPA sparse format.
        #[arg(long, value_name = "PATH")]
        export_sdpa: Option<PathBuf>,
    },
    /// Reproduce a reference table and diff it against the embedded values.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        which: u8,
        /// One-based inclusive row range, e.g. `3..10` or `7`.
        #[arg(long, value_name = "K..L")]
        rows: Option<String>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DistanceArgs {
    /// Minimum distance d, i.e. D = {d, .., n}.
    #[arg(long)]
    dmin: Option<usize>,
    /// Explicit distance set, e.g. `2,5,6` (empty for D = ∅).
    #[arg(long, value_name = "LIST")]
    dset: Option<String>,
}

impl DistanceArgs {
    fn resolve(&self, n: usize) -> Result<DistanceSet> {
        let d = match (&self.dmin, &self.dset) {
            (Some(d), _) => DistanceSet::from_min_distance(n, *d)?,
            (None, Some(s)) => s.parse::<DistanceSet>()?,
            (None, None) => unreachable!("clap enforces one of --dmin, --dset"),
        };
        d.check_degree(n)?;
        Ok(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Block,
    Full,
}

/// Failures that carry their own exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use permcode_core::Error;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Exit>() {
            return e.code;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Range(_) | Error::Argument(_) => 2,
                Error::Capacity(_) => 3,
                Error::Numerical(_) => 4,
                _ => 1,
            };
        }
    }
    1
}

fn run(cli: Cli, argv: Vec<String>) -> Result<u8> {
    if cli.global.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.jobs)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let g = &cli.global;
    let start = Instant::now();
    let outcome: Outcome = match &cli.command {
        Command::Chars { n } => commands::chars(*n)?,
        Command::Scheme { n, structure_constants } => commands::scheme(*n, *structure_constants)?,
        Command::Lp { n, distances } => commands::lp(*n, distances.resolve(*n)?)?,
        Command::Orbits { n, enumerate, swap, save } => commands::orbits(*n, *enumerate, *swap, save.as_deref())?,
        Command::Algebra { n, terwilliger_dim, .. } => {
            if *terwilliger_dim {
                commands::terwilliger(*n, g.allow_slow)?
            } else {
                commands::multiplicities(*n)?
            }
        }
        Command::Blocks { n, save } => commands::blocks(*n, g.seed, save.as_deref())?,
        Command::Sdp { n, distances, mode, split_transposes, export_sdpa } => {
            commands::sdp(*n, distances.resolve(*n)?, *mode, *split_transposes, export_sdpa.as_deref(), g.seed)?
        }
        Command::Tables { which, rows } => tables::run(*which, rows.as_deref(), g)?,
    };
    let elapsed = start.elapsed().as_secs_f64();
    if let Some(path) = &g.csv {
        let rows = outcome.csv.as_ref().ok_or_else(|| Exit {
            code: 2,
            message: "--csv is supported by lp, sdp and tables".into(),
        })?;
        report::write_csv(path, rows).with_context(|| format!("writing {}", path.display()))?;
    }
    let text = if g.json {
        let report = RunReport::new(argv, g.seed, elapsed, outcome.result);
        serde_json::to_string_pretty(&report)? + "\n"
    } else {
        outcome.text
    };
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    Ok(outcome.exit)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(cli, argv) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = exit_code(&err);
            if code == 2 {
                eprintln!("run `permcode --help` for usage");
            }
            ExitCode::from(code)
        }
    }
}
