//! The `linecfg` command line.
//!
//! Every subcommand writes to the given output stream; diagnostics go to the
//! error stream. Exit codes: 0 success, 2 usage or input errors, 3 precision
//! failures, 4 bound violations.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::enumerate::{self, EnumerateError, StrataCatalog};
use crate::laurent::{LaurentError, LaurentSeries};
use crate::limit::{self, Chart, LimitError, MovingConfiguration};
use crate::stab::{self, CurveLocation, FdrtPoint, StabError};
use crate::trees::{Space, StratumType, TreeError};

#[derive(Debug, Parser)]
#[command(name = "linecfg", version, about = "Strata, invariants and limits of configurations on a line")]
pub struct Cli {
    /// Worker threads; 1 gives the same output as any other value.
    #[arg(long, global = true, env = "LINECFG_JOBS")]
    pub jobs: Option<usize>,
    /// Write output to this file instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    #[arg(short, long, value_parser = parse_space)]
    pub space: Space,
    #[arg(short, long)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Topological Euler characteristic of the space.
    Euler(SpaceArgs),
    /// CSV of Euler characteristics of both spaces for n = 1..=max-n.
    Table {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
    /// All stratum types with their invariants.
    Strata {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, conflicts_with_all = ["csv", "dot"])]
        json: bool,
        #[arg(long, conflicts_with = "dot")]
        csv: bool,
        #[arg(long)]
        dot: bool,
    },
    /// E-polynomial (point count over F_q) of the space.
    Epoly(SpaceArgs),
    /// Compares χ of the universal curve computed stratum by stratum with χ over n + 1 marks.
    CheckUniversal(SpaceArgs),
    /// Stable limit at t = 0 of marks given as Laurent series in t.
    Limit {
        /// JSON file `{"marks": [...], "chart": ..., "precision": ...}`.
        #[arg(long, conflicts_with = "marks")]
        input: Option<PathBuf>,
        /// Comma-separated series, for example "t^-1 + 2, 3*t^-1".
        #[arg(long)]
        marks: Option<String>,
        #[arg(long, default_value = "additive", value_parser = parse_chart)]
        chart: Chart,
        #[arg(long)]
        precision: Option<usize>,
        #[arg(long)]
        dot: bool,
    },
    /// Types reached at t = 0 from a stratum of the Losev-Manin space.
    Degenerate {
        #[arg(short, long)]
        n: usize,
        /// Ordered partition, for example "(1,2|3)".
        #[arg(long)]
        stratum: String,
        #[arg(long, value_delimiter = ',', default_values_t = limit::DEFAULT_SEEDS)]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = limit::DEFAULT_EXPONENT_BOUND)]
        exponent_bound: i64,
        #[arg(long, default_value_t = limit::DEFAULT_DEPTH)]
        depth: usize,
        /// List every type reached, not only those of the stratum's dimension.
        #[arg(long)]
        all: bool,
    },
    /// Adds mark n + 1 to a curve.
    Insert {
        /// JSON curve: a tree, or `{"t", "tree"|"chain"}`.
        #[arg(long)]
        point: PathBuf,
        /// JSON location `{"vertex": [...], "at": "r" | "infinity" | {"node": k}}`.
        #[arg(long)]
        at: String,
    },
    /// Removes a mark and contracts what became unstable.
    Forget {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        mark: usize,
    },
}

fn parse_space(s: &str) -> Result<Space, String> {
    s.parse::<Space>().map_err(|e| e.to_string())
}

fn parse_chart(s: &str) -> Result<Chart, String> {
    s.parse::<Chart>().map_err(|e| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Precision(String),
    Bound(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Precision(_) => 3,
            Failure::Bound(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Precision(m) | Failure::Bound(m) => m,
        }
    }
}

impl From<EnumerateError> for Failure {
    fn from(e: EnumerateError) -> Self {
        Failure::Bound(e.to_string())
    }
}

impl From<LimitError> for Failure {
    fn from(e: LimitError) -> Self {
        match e {
            LimitError::Precision(_) => Failure::Precision(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<LaurentError> for Failure {
    fn from(e: LaurentError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<StabError> for Failure {
    fn from(e: StabError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Runs the command line on `argv` (program name first) against real stdio.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

/// Runs the command line, writing results to `out` and diagnostics to `err`.
pub fn run_with<I, S>(argv: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.output.as_ref() {
        Some(path) => match std::fs::File::create(path) {
            Ok(file) => {
                let mut w = std::io::BufWriter::new(file);
                with_jobs(cli.jobs, || dispatch(&cli.command, &mut w)).and_then(|()| Ok(w.flush()?))
            }
            Err(e) => Err(Failure::Usage(format!("{}: {e}", path.display()))),
        },
        None => with_jobs(cli.jobs, || dispatch(&cli.command, out)),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "linecfg: {}", f.message());
            f.code()
        }
    }
}

fn with_jobs<F>(jobs: Option<usize>, f: F) -> Outcome
where
    F: FnOnce() -> Outcome + Send,
{
    match jobs {
        None => f(),
        Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Failure::Usage(e.to_string()))?
            .install(f),
    }
}

fn dispatch(cmd: &Command, out: &mut (dyn Write + Send)) -> Outcome {
    match cmd {
        Command::Euler(a) => writeln!(out, "{}", enumerate::total_chi(a.space, a.n)?)?,
        Command::Table { max_n } => table(*max_n, out)?,
        Command::Strata { space, format, json, csv, dot } => {
            let format = match (json, csv, dot) {
                (true, _, _) => Format::Json,
                (_, true, _) => Format::Csv,
                (_, _, true) => Format::Dot,
                _ => *format,
            };
            strata(&enumerate::enumerate_types(space.space, space.n)?, format, out)?
        }
        Command::Epoly(a) => writeln!(out, "{}", enumerate::total_epoly(a.space, a.n)?)?,
        Command::CheckUniversal(a) => {
            let (weighted, direct) = enumerate::universal_curve_chi_check(a.space, a.n)?;
            let verdict = if weighted == direct { "equal" } else { "DIFFERENT" };
            writeln!(out, "{weighted} {direct} {verdict}")?;
            if weighted != direct {
                return Err(Failure::Usage("universal curve check failed".into()));
            }
        }
        Command::Limit { input, marks, chart, precision, dot } => {
            let cfg = limit_input(input.as_ref(), marks.as_deref(), *chart, *precision)?;
            let tree = limit::stable_limit(&cfg)?;
            if *dot {
                write!(out, "{}", tree.to_dot())?;
            } else {
                writeln!(out, "{}", serde_json::to_string_pretty(&limit::limit_json(&tree)).expect("json"))?;
            }
        }
        Command::Degenerate { n, stratum, seeds, exponent_bound, depth, all } => {
            degenerate(*n, stratum, seeds, *exponent_bound, *depth, *all, out)?
        }
        Command::Insert { point, at } => {
            let p = read_point(point)?;
            let loc = CurveLocation::from_json(at)?;
            write_point(&stab::insert_mark(&p, &loc)?, out)?;
        }
        Command::Forget { point, mark } => {
            let p = read_point(point)?;
            write_point(&stab::forget_mark(&p, *mark)?, out)?;
        }
    }
    Ok(())
}

fn table(max_n: usize, out: &mut dyn Write) -> Outcome {
    if max_n == 0 || max_n > enumerate::DEFAULT_BOUND {
        return Err(EnumerateError::BoundExceeded { n: max_n, bound: enumerate::DEFAULT_BOUND }.into());
    }
    let header: Vec<String> = (1..=max_n).map(|n| n.to_string()).collect();
    writeln!(out, "space,{}", header.join(","))?;
    for space in [Space::P, Space::L] {
        let row = (1..=max_n)
            .map(|n| enumerate::total_chi(space, n).map(|c| c.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        writeln!(out, "{space},{}", row.join(","))?;
    }
    Ok(())
}

/// Writes entries as they are formatted rather than building one document.
fn strata(catalog: &StrataCatalog, format: Format, out: &mut dyn Write) -> Outcome {
    match format {
        Format::Table => {
            writeln!(out, "{:<40} {:>3} {:>6} {:>4}  epoly", "type", "dim", "chi", "comp")?;
            for e in &catalog.entries {
                writeln!(out, "{:<40} {:>3} {:>6} {:>4}  {}", e.ty.to_string(), e.dimension, e.chi, e.components, e.epoly)?;
            }
            writeln!(out, "# {} strata, chi = {}, epoly = {}", catalog.len(), catalog.total_chi(), catalog.total_epoly())?;
        }
        Format::Csv => write!(out, "{}", catalog.to_csv())?,
        Format::Json => {
            writeln!(out, "{{\"space\":\"{}\",\"n\":{},\"strata\":[", catalog.space, catalog.n)?;
            for (i, e) in catalog.entries.iter().enumerate() {
                let sep = if i + 1 < catalog.len() { "," } else { "" };
                writeln!(out, "{}{sep}", e.to_json())?;
            }
            writeln!(
                out,
                "],\"total_chi\":{},\"total_epoly\":{}}}",
                catalog.total_chi(),
                serde_json::to_string(&catalog.total_epoly().coeffs()).expect("json")
            )?;
        }
        Format::Dot => {
            for e in &catalog.entries {
                write!(out, "{}", e.ty.to_dot())?;
            }
        }
    }
    Ok(())
}

fn limit_input(
    input: Option<&PathBuf>,
    marks: Option<&str>,
    chart: Chart,
    precision: Option<usize>,
) -> Result<MovingConfiguration, Failure> {
    let cfg = match (input, marks) {
        (Some(path), _) => MovingConfiguration::from_json(&std::fs::read_to_string(path)?)?,
        (None, Some(list)) => {
            let series = list
                .split(',')
                .map(|s| s.trim().parse::<LaurentSeries>())
                .collect::<Result<Vec<_>, _>>()?;
            match chart {
                Chart::Additive => MovingConfiguration::new(series)?,
                Chart::Multiplicative => MovingConfiguration::from_multiplicative(series)?,
            }
        }
        (None, None) => return Err(Failure::Usage("give --input or --marks".into())),
    };
    Ok(match precision {
        Some(p) => cfg.with_precision(p),
        None => cfg,
    })
}

fn degenerate(
    n: usize,
    stratum: &str,
    seeds: &[u64],
    exponent_bound: i64,
    depth: usize,
    all: bool,
    out: &mut dyn Write,
) -> Outcome {
    if n == 0 || n > enumerate::DEFAULT_BOUND {
        return Err(EnumerateError::BoundExceeded { n, bound: enumerate::DEFAULT_BOUND }.into());
    }
    if seeds.is_empty() {
        return Err(Failure::Usage("at least one seed is needed".into()));
    }
    let ty: StratumType = stratum.parse()?;
    if !matches!(&ty, StratumType::L(p) if p.is_valid() && p.mark_count() == n) {
        return Err(Failure::Usage(format!("`{stratum}` is not a stratum of L{n}")));
    }
    let reached = limit::degenerate_stratum_sample(&ty, exponent_bound, depth, seeds)?;
    let shown = if all { reached } else { limit::of_dimension(&reached, ty.dimension()) };
    let seeds: Vec<String> = seeds.iter().map(u64::to_string).collect();
    writeln!(
        out,
        "# source {ty} (dimension {}) seeds {} exponent-bound {exponent_bound} depth {depth}",
        ty.dimension(),
        seeds.join(",")
    )?;
    for t in &shown {
        writeln!(out, "{t}\t{}", t.dimension())?;
    }
    Ok(())
}

fn read_point(path: &PathBuf) -> Result<FdrtPoint, Failure> {
    Ok(FdrtPoint::from_json(&std::fs::read_to_string(path)?)?)
}

fn write_point(p: &FdrtPoint, out: &mut dyn Write) -> Outcome {
    writeln!(out, "{}", serde_json::to_string_pretty(&p.to_json_value()).expect("json"))?;
    Ok(())
}
