//! `gtrs`: build twisted Reed-Solomon constructions, run verification sweeps,
//! search for self-orthogonal codes, and convert reports.
//!
//! Exit status is 0 when every result passes, 1 when some check fails, and 2 on
//! usage or configuration errors. `GTRS_WORKERS` sets the worker count.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gtrs_cli::config::{parse_list, DEFAULT_MAX_WORK};
use gtrs_cli::{execute, CliError, FileConfig, Grid, Report, RunConfig, Suite, Task};
use gtrs_core::constructions::{sample_eta_outside_subfield, ConstructionSpec};
use gtrs_core::gf::{FieldCtx, FieldSpec};
use gtrs_core::gtrs::seeded_nonzero;

#[derive(Parser)]
#[command(
    name = "gtrs",
    version,
    about = "Twisted Reed-Solomon codes: constructions, checks, and searches"
)]
struct Cli {
    /// TOML file with field, seed and limit defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record per-result wall time (reports are then not byte-stable).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build one of the explicit self-orthogonal constructions.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Run a verification suite over a parameter grid.
    Verify(VerifyArgs),
    /// Sample point sets and twists looking for self-orthogonal codes.
    Search(SearchArgs),
    /// Re-emit a saved JSON report as JSON or CSV.
    Report(ReportArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Field order; the default modulus is used.
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, requires = "m")]
    p: Option<u32>,
    #[arg(long, requires = "p")]
    m: Option<u32>,
}

#[derive(Args)]
struct TwistArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 0)]
    h: usize,
    /// Twist coefficient as a canonical element index.
    #[arg(long, conflicts_with = "eta_seed")]
    eta: Option<u32>,
    /// Seed for drawing the twist coefficient; defaults to the run seed.
    #[arg(long)]
    eta_seed: Option<u64>,
    /// Skip the distance classification.
    #[arg(long)]
    no_classify: bool,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Full field minus `l` points.
    Tc1 {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        twist: TwistArgs,
        /// Number of excluded points; the last `l` elements in canonical order.
        #[arg(long, conflicts_with = "excluded")]
        l: Option<usize>,
        /// Excluded points as element indices.
        #[arg(long)]
        excluded: Option<String>,
    },
    /// Binary field, any point set of size at least 2k + t.
    Tc2 {
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        twist: TwistArgs,
        /// Evaluation points as element indices; all of GF(2^m) by default.
        #[arg(long)]
        points: Option<String>,
    },
    /// The subfield of order p^r inside GF(p^m).
    Ct4 {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        cond: u8,
        #[command(flatten)]
        twist: TwistArgs,
    },
    /// Nonzero elements of the subfield of order 2^r inside GF(2^m).
    Ct5 {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        cond: u8,
        #[command(flatten)]
        twist: TwistArgs,
    },
}

#[derive(Args)]
struct GridArgs {
    /// Values of k, e.g. `3-5,7`.
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    h: Option<String>,
    /// Code lengths.
    #[arg(long)]
    n: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Sweep every admissible cell; the same as giving no ranges.
    #[arg(long, conflicts_with_all = ["k", "t", "h", "n", "l"])]
    all: bool,
    /// Values of l for the power-sum suite.
    #[arg(long)]
    l: Option<String>,
    /// Twist coefficients per cell.
    #[arg(long, default_value_t = 3)]
    etas: usize,
    /// Instances for the oracle suite.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Findings kept per cell.
    #[arg(long, default_value_t = 3)]
    keep: usize,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    input: PathBuf,
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn list(s: &Option<String>) -> Result<Vec<usize>, CliError> {
    s.as_deref()
        .map_or(Ok(Vec::new()), |s| parse_list(s).map_err(usage))
}

fn indices(s: &str) -> Result<Vec<u32>, CliError> {
    Ok(parse_list(s)
        .map_err(usage)?
        .into_iter()
        .map(|i| i as u32)
        .collect())
}

/// `--q`, then `--p/--m`, then the config file. A file modulus is kept when
/// its `(p, m)` matches.
fn resolve_field(args: &FieldArgs, file: &FileConfig) -> Result<FieldSpec, CliError> {
    let from_file = file.field_spec()?;
    let pm = match (args.q, args.p, args.m) {
        (Some(q), None, None) => {
            let s = FieldSpec::for_order(q).map_err(usage)?;
            Some((s.p, s.m))
        }
        (None, Some(p), Some(m)) => Some((p, m)),
        (None, None, None) => None,
        _ => return Err(usage("give either --q or --p with --m")),
    };
    match (pm, from_file) {
        (Some((p, m)), Some(f)) if f.p == p && f.m == m => Ok(f),
        (Some((p, m)), _) => FieldSpec::new(p, m, None).map_err(usage),
        (None, Some(f)) => Ok(f),
        (None, None) => Err(usage("no field given: use --q, --p/--m, or a config file")),
    }
}

fn field_with(p: u32, m: u32, file: &FileConfig) -> Result<FieldSpec, CliError> {
    resolve_field(
        &FieldArgs {
            q: None,
            p: Some(p),
            m: Some(m),
        },
        file,
    )
}

fn twist_eta(
    field: &FieldSpec,
    twist: &TwistArgs,
    seed: u64,
    subfield: Option<u32>,
) -> Result<u32, CliError> {
    if let Some(eta) = twist.eta {
        return Ok(eta);
    }
    let ctx = FieldCtx::new(field.clone())?;
    let eta_seed = twist.eta_seed.unwrap_or(seed);
    Ok(match subfield {
        Some(r) => sample_eta_outside_subfield(&ctx, r, eta_seed)?.index(),
        None => seeded_nonzero(&ctx, eta_seed, 1)[0].index(),
    })
}

fn construct_task(
    cmd: &ConstructCmd,
    file: &FileConfig,
    seed: u64,
) -> Result<(FieldSpec, Task), CliError> {
    let (spec, twist) = match cmd {
        ConstructCmd::Tc1 {
            field,
            twist,
            l,
            excluded,
        } => {
            let field = resolve_field(field, file)?;
            let q = field.order();
            let excluded = match (excluded, l) {
                (Some(s), _) => indices(s)?,
                (None, Some(l)) if *l as u64 <= q as u64 => (q - *l as u32..q).collect(),
                (None, Some(l)) => return Err(usage(format!("l = {l} exceeds q = {q}"))),
                (None, None) => Vec::new(),
            };
            let eta = twist_eta(&field, twist, seed, None)?;
            let TwistArgs { k, t, h, .. } = *twist;
            (
                ConstructionSpec::Tc1 {
                    field,
                    k,
                    t,
                    h,
                    eta,
                    excluded,
                },
                twist,
            )
        }
        ConstructCmd::Tc2 { m, twist, points } => {
            let field = field_with(2, *m, file)?;
            let points = match points {
                Some(s) => indices(s)?,
                None => (0..field.order()).collect(),
            };
            let eta = twist_eta(&field, twist, seed, None)?;
            let TwistArgs { k, t, h, .. } = *twist;
            (
                ConstructionSpec::Tc2 {
                    field,
                    k,
                    t,
                    h,
                    eta,
                    points,
                },
                twist,
            )
        }
        ConstructCmd::Ct4 {
            p,
            r,
            m,
            cond,
            twist,
        } => {
            let field = field_with(*p, *m, file)?;
            let eta = twist_eta(&field, twist, seed, Some(*r))?;
            let TwistArgs { k, t, h, .. } = *twist;
            let spec = ConstructionSpec::Ct4 {
                field,
                r: *r,
                condition: *cond,
                k,
                t,
                h,
                eta,
            };
            (spec, twist)
        }
        ConstructCmd::Ct5 { r, m, cond, twist } => {
            let field = field_with(2, *m, file)?;
            let eta = twist_eta(&field, twist, seed, Some(*r))?;
            let TwistArgs { k, t, h, .. } = *twist;
            let spec = ConstructionSpec::Ct5 {
                field,
                r: *r,
                condition: *cond,
                k,
                t,
                h,
                eta,
            };
            (spec, twist)
        }
    };
    let field = spec.field().clone();
    Ok((
        field,
        Task::Construct {
            spec,
            classify: !twist.no_classify,
        },
    ))
}

fn grid(args: &GridArgs) -> Result<Grid, CliError> {
    Ok(Grid {
        k: list(&args.k)?,
        t: list(&args.t)?,
        h: list(&args.h)?,
        n: list(&args.n)?,
        ..Grid::default()
    })
}

fn build_config(cli: &Cli, file: &FileConfig) -> Result<RunConfig, CliError> {
    let seed = cli.seed.or(file.seed).unwrap_or(1);
    let (field, task) = match &cli.cmd {
        Cmd::Construct(c) => construct_task(c, file, seed)?,
        Cmd::Verify(v) => {
            let mut g = grid(&v.grid)?;
            g.l = list(&v.l)?;
            g.etas = v.etas;
            g.samples = v.samples;
            (
                resolve_field(&v.field, file)?,
                Task::Verify {
                    suite: v.suite,
                    grid: g,
                },
            )
        }
        Cmd::Search(s) => {
            let mut g = grid(&s.grid)?;
            g.samples = s.samples;
            (
                resolve_field(&s.field, file)?,
                Task::Search {
                    grid: g,
                    keep: s.keep,
                },
            )
        }
        Cmd::Report(_) => unreachable!("reports are converted, not run"),
    };
    Ok(RunConfig {
        field,
        seed,
        limits: file.limits.unwrap_or_default(),
        max_work: file.max_work.unwrap_or(DEFAULT_MAX_WORK),
        task,
    })
}

fn emit(cli: &Cli, report: &Report) -> Result<(), CliError> {
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    match &cli.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn workers() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("GTRS_WORKERS") else {
        return Ok(());
    };
    let n: usize = raw.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        usage(format!(
            "GTRS_WORKERS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(usage)
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    workers()?;
    let report = if let Cmd::Report(r) = &cli.cmd {
        let text = fs::read_to_string(&r.input)
            .map_err(|e| CliError::Io(format!("{}: {e}", r.input.display())))?;
        Report::from_json(&text)?
    } else {
        let file = match &cli.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        execute(&build_config(cli, &file)?, cli.timing)?
    };
    emit(cli, &report)?;
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&e.to_json()).expect("errors serialize")
            );
            ExitCode::from(2)
        }
    }
}
