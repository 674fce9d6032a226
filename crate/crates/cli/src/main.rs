//! `twotree`: resistance distances on straight and bent linear 2-trees.
//!
//! Exit codes: 0 on success, 1 when a verification fails or methods
//! disagree, 2 on usage or input errors.

mod methods;
mod output;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use twotree::delta_y::{reduce_bent, reduce_straight_logged};
use twotree::graph::{recognize_family, Family, WeightedGraph};
use twotree::identities::{registry, run_identities, Profile};
use twotree::resistance::ResistanceValue;

use methods::{evaluate, FamilyArg, Method, MethodSpec, Query};
use output::{write_records, Format, OutputRecord};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(twotree::Error),
    Io(io::Error),
}

impl From<twotree::Error> for CliError {
    fn from(e: twotree::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "twotree", version, about = "Resistance distance on linear 2-trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute r(i, j) on one family member with one or more methods.
    Resistance(ResistanceArgs),
    /// Evaluate r(1, n) over a range of n.
    Sweep(SweepArgs),
    /// Check the identity suite.
    Verify(VerifyArgs),
    /// Run the Δ–Y reduction, optionally printing every step.
    Reduce(ReduceArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(value_enum, long, default_value_t = Format::Text)]
    format: Format,
    /// Significant digits in the decimal rendering.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u16).range(1..))]
    digits: u16,
}

#[derive(Args, Debug)]
struct ResistanceArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    /// Bend position (bent family only).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    /// Comma-separated method tags, or `all` / `closed-form`.
    #[arg(long)]
    methods: Option<MethodSpec>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KPolicy {
    All,
    Fixed,
    Center,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    /// Inclusive range `LO:HI`, or a single value.
    #[arg(long, value_parser = parse_range)]
    n: (usize, usize),
    #[arg(value_enum, long, default_value_t = KPolicy::All)]
    k_policy: KPolicy,
    /// Bend position for `--k-policy fixed`.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    methods: Option<MethodSpec>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    Small,
    Standard,
    Deep,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Small => Profile::Small,
            ProfileArg::Standard => Profile::Standard,
            ProfileArg::Deep => Profile::Deep,
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum, long, default_value_t = ProfileArg::Standard)]
    profile: ProfileArg,
    /// Negate every right-hand side; the run must then fail.
    #[arg(long, hide = true)]
    mutate: bool,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[arg(value_enum, required_unless_present = "input", conflicts_with = "input")]
    family: Option<FamilyArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Edge-list file; its family and parameters are recognized.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Include the full step log.
    #[arg(long)]
    emit_log: bool,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad bound {t:?}: {e}"))
    };
    let (lo, hi) = match s.split_once(':') {
        Some((lo, hi)) => (parse(lo)?, parse(hi)?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn run_query(
    command: &'static str,
    q: &Query,
    spec: &MethodSpec,
    digits: usize,
) -> Result<OutputRecord, CliError> {
    let methods = spec.resolve(q)?;
    let results = evaluate(q, &methods)?;
    Ok(OutputRecord::new(command, q, &results, digits))
}

fn emit(records: &[OutputRecord], format: Format) -> Result<ExitCode, CliError> {
    write_records(io::stdout().lock(), format, records)?;
    let bad: Vec<_> = records.iter().filter(|r| r.disagrees()).collect();
    for r in &bad {
        eprintln!(
            "methods disagree for {} n={} k={:?} r({},{})",
            r.family, r.n, r.k, r.i, r.j
        );
    }
    Ok(if bad.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_resistance(args: ResistanceArgs) -> Result<ExitCode, CliError> {
    let q = Query::new(args.family, args.n, args.k, args.i, args.j)?;
    let spec = args.methods.unwrap_or_default();
    let record = run_query("resistance", &q, &spec, args.output.digits as usize)?;
    emit(&[record], args.output.format)
}

fn sweep_queries(args: &SweepArgs) -> Result<Vec<Query>, CliError> {
    let (lo, hi) = args.n;
    let mut queries = Vec::new();
    match args.family {
        FamilyArg::Straight => {
            if args.k.is_some() {
                return Err(CliError::Usage("--k only applies to the bent family".into()));
            }
            for n in lo.max(3)..=hi {
                queries.push(Query::new(FamilyArg::Straight, n, None, None, None)?);
            }
        }
        FamilyArg::Bent => {
            if args.k.is_some() != (args.k_policy == KPolicy::Fixed) {
                return Err(CliError::Usage("--k is required by, and only used with, --k-policy fixed".into()));
            }
            for n in lo.max(6)..=hi {
                let ks: Vec<usize> = match args.k_policy {
                    KPolicy::All => (3..=n - 3).collect(),
                    KPolicy::Center => vec![n / 2],
                    // Sizes too small for the fixed bend are skipped.
                    KPolicy::Fixed => {
                        let k = args.k.expect("checked above");
                        if (3..=n - 3).contains(&k) {
                            vec![k]
                        } else {
                            vec![]
                        }
                    }
                };
                for k in ks {
                    queries.push(Query::new(FamilyArg::Bent, n, Some(k), None, None)?);
                }
            }
        }
    }
    Ok(queries)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, CliError> {
    let queries = sweep_queries(&args)?;
    let spec = args.methods.clone().unwrap_or_default();
    // Resolve every point first so usage errors surface before any work.
    for q in &queries {
        spec.resolve(q)?;
    }
    let digits = args.output.digits as usize;
    let records = queries
        .par_iter()
        .map(|q| run_query("sweep", q, &spec, digits))
        .collect::<Result<Vec<_>, _>>()?;
    emit(&records, args.output.format)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let mut identities = registry();
    if args.mutate {
        identities = identities.iter().map(|i| i.with_flipped_sign()).collect();
    }
    let reports = run_identities(&identities, args.profile.into());
    let mut out = io::stdout().lock();
    for r in &reports {
        serde_json::to_writer(&mut out, r).map_err(io::Error::from)?;
        writeln!(out)?;
    }
    out.flush()?;

    let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
    for r in &failed {
        if let Some(cx) = &r.counterexample {
            let at: Vec<_> = cx.params.iter().map(|(p, v)| format!("{p}={v}")).collect();
            eprintln!(
                "{} fails at {} (clause {}): {} != {}",
                r.id,
                at.join(", "),
                cx.clause,
                cx.lhs,
                cx.rhs
            );
        }
    }
    eprintln!("{} of {} identities passed", reports.len() - failed.len(), reports.len());
    Ok(if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_reduce(args: ReduceArgs) -> Result<ExitCode, CliError> {
    if args.emit_log && args.output.format == Format::Csv {
        return Err(CliError::Usage("--emit-log needs --format json or text".into()));
    }
    let q = match (&args.input, args.family) {
        (Some(path), _) => {
            if args.n.is_some() || args.k.is_some() {
                return Err(CliError::Usage("--input replaces --n and --k".into()));
            }
            let text = fs::read_to_string(path)?;
            let g: WeightedGraph = text.parse()?;
            if !g.is_connected() {
                return Err(twotree::Error::Disconnected.into());
            }
            match recognize_family(&g) {
                Some(Family::Straight { n }) => Query::new(FamilyArg::Straight, n, None, None, None)?,
                Some(Family::Bent { n, k }) => Query::new(FamilyArg::Bent, n, Some(k), None, None)?,
                None => {
                    return Err(twotree::Error::UnsupportedTopology(
                        "not a unit-weight straight or bent linear 2-tree".into(),
                    )
                    .into())
                }
            }
        }
        (None, Some(family)) => {
            let n = args.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
            Query::new(family, n, args.k, None, None)?
        }
        (None, None) => unreachable!("clap requires a family or --input"),
    };

    let (r, log) = match q.family {
        FamilyArg::Straight => {
            let (r, state) = reduce_straight_logged(q.n)?;
            (r, state.log().to_vec())
        }
        FamilyArg::Bent => {
            let red = reduce_bent(q.n, q.k.expect("validated"))?;
            (red.r, red.state.log().to_vec())
        }
    };
    let results = [(Method::DeltaY, ResistanceValue::Exact(r))];
    let mut record = OutputRecord::new("reduce", &q, &results, args.output.digits as usize);
    if args.emit_log {
        record.log = Some(serde_json::to_value(&log).map_err(io::Error::from)?);
    }
    emit(&[record], args.output.format)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Resistance(a) => cmd_resistance(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Reduce(a) => cmd_reduce(a),
    };
    match result {
        Ok(code) => code,
        // A closed downstream pipe (e.g. `| head`) is not an error.
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
