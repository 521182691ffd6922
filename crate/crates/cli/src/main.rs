use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crystgar::crystlat::{GroupKind, MIN_LATTICE_WINDOW};
use crystgar_cli::cache::Cache;
use crystgar_cli::checks;
use crystgar_cli::commands::{self, IntervalRequest};

#[derive(Parser)]
#[command(name = "crystgar", version, about = "Intervals, lattices and normal forms for euclidean Coxeter and Garside groups")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    out: Format,
    /// Cache directory for interval builds.
    #[arg(long, env = "CRYSTGAR_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 2024, global = true)]
    seed: u64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    W,
    H,
    D,
    F,
    C,
}

impl From<Group> for GroupKind {
    fn from(g: Group) -> GroupKind {
        match g {
            Group::W => GroupKind::W,
            Group::H => GroupKind::H,
            Group::D => GroupKind::D,
            Group::F => GroupKind::F,
            Group::C => GroupKind::C,
        }
    }
}

#[derive(Args)]
struct TypeArgs {
    /// Type such as `G2`, `E8`, `A3(2,2)`, or a family letter with `--rank`.
    #[arg(long = "type")]
    ty: String,
    #[arg(long)]
    rank: Option<usize>,
    /// Bigon `p,q` for type A.
    #[arg(long, value_parser = commands::parse_bigon)]
    bigon: Option<(usize, usize)>,
    /// Window multiplier: periods materialized on each side of the origin.
    #[arg(long, default_value_t = 2)]
    window: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Root system, horizontal components and generator counts.
    Roots(TypeArgs),
    /// Build `[1,w]` in one of the groups.
    Interval {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, value_enum, ignore_case = true, default_value_t = Group::W)]
        group: Group,
        /// Print the three-row coarse grid.
        #[arg(long)]
        coarse: bool,
        /// Include the full poset in the report.
        #[arg(long)]
        poset: bool,
    },
    /// Bowtie and atom-join audit of a windowed interval.
    LatticeCheck {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, value_enum, ignore_case = true, default_value_t = Group::C)]
        group: Group,
    },
    /// Type-B noncrossing partitions.
    Ncb {
        #[arg(long)]
        n: usize,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Special interval of the middle group `Mid(B_n)`.
    Mid {
        #[arg(long)]
        n: usize,
    },
    /// Hurwitz orbit of minimal reflection factorizations of `w`.
    Hurwitz {
        #[command(flatten)]
        t: TypeArgs,
        /// Use the spherical Coxeter group of the given type.
        #[arg(long)]
        spherical: bool,
    },
    /// Dual presentation read off `[1,w]`.
    Presentation {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, value_enum, ignore_case = true, default_value_t = Group::W)]
        group: Group,
    },
    /// Garside normal form of a word in the dual simples of type `B_n`.
    Nf {
        #[arg(long)]
        n: usize,
        /// Use the middle group `Mid(B_n)` instead.
        #[arg(long)]
        mid: bool,
        /// Letters: atom numbers, `-k` for inverses, `D` for the Garside element.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Golden-table and property suite.
    Selftest {
        /// Ranks up to four only (default).
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        /// Include the E8 coarse grid.
        #[arg(long)]
        full: bool,
    },
}

fn etype(t: &TypeArgs) -> Result<crystgar::rootdata::EuclideanType> {
    commands::parse_type(&t.ty, t.rank, t.bigon)
}

fn emit(out: Format, v: &Value) -> Result<()> {
    let s = match out {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(v)?),
        Format::Text => commands::render_text(v),
    };
    std::io::stdout().write_all(s.as_bytes())?;
    Ok(())
}

fn run(cli: Cli) -> Result<i32> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let v = match &cli.cmd {
        Command::Roots(t) => commands::roots_report(&etype(t)?, t.window)?,
        Command::Interval { t, group, coarse, poset } => {
            let req = IntervalRequest {
                etype: etype(t)?,
                group: (*group).into(),
                window: t.window,
                coarse: *coarse,
                poset: *poset,
            };
            match &cli.cache_dir {
                Some(dir) => Cache::open(dir)?.get_or_insert(&req.cache_key(), || commands::interval_report(&req))?,
                None => commands::interval_report(&req)?,
            }
        }
        Command::LatticeCheck { t, group } => {
            let w = if t.window < MIN_LATTICE_WINDOW { MIN_LATTICE_WINDOW } else { t.window };
            commands::lattice_report(&etype(t)?, (*group).into(), w)?
        }
        Command::Ncb { n, count } => commands::ncb_report(*n, *count)?,
        Command::Mid { n } => commands::mid_report(*n)?,
        Command::Hurwitz { t, spherical: true } => {
            let (family, n) = commands::parse_spherical(&t.ty, t.rank)?;
            commands::spherical_hurwitz_report(family, n)?
        }
        Command::Hurwitz { t, spherical: false } => commands::hurwitz_report(&etype(t)?, t.window)?,
        Command::Presentation { t, group } => commands::presentation_report(&etype(t)?, (*group).into(), t.window)?,
        Command::Nf { n, mid, word } => commands::nf_report(*n, *mid, word)?,
        Command::Selftest { quick, full } => {
            if *quick && *full {
                bail!("--quick and --full are exclusive");
            }
            let results = checks::run_all(*full, cli.seed);
            let failed = results.iter().filter(|c| c.is_unexpected_failure()).count();
            match cli.out {
                Format::Json => emit(cli.out, &Value::Array(results.iter().map(|c| c.to_json()).collect()))?,
                Format::Text => {
                    for c in &results {
                        println!("{c}");
                    }
                }
            }
            return Ok(i32::from(failed > 0));
        }
    };
    emit(cli.out, &v)?;
    Ok(0)
}

fn main() -> Result<()> {
    let code = run(Cli::parse())?;
    std::process::exit(code);
}
