use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kresolve_core::detcx::{macaulay_resultant, DetOptions, Method};
use kresolve_core::galedual::{column_transform, gale_map, parse_int_matrix, GaleMatrix};
use kresolve_core::geometry::{check_acyclicity, implicitize, ConditionReport, GeometryError, PipelineOptions};
use kresolve_core::koszul::{KoszulError, MapSpec, Mode};
use kresolve_core::poly::RingSpec;
use kresolve_core::report::{MapInput, MatrixProvenance, Report};

/// Implicit equations of rational maps P^n -> (P^1)^(n+1) from Koszul
/// strand determinants.
#[derive(Parser, Debug)]
#[command(name = "kresolve", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full pipeline: conditions, resultant, base locus, implicit equation.
    Implicitize(JobArgs),
    /// Acyclicity and strict-codimension conditions only.
    Check(JobArgs),
    /// The Macaulay resultant of the forms g_i*x_i - f_i*y_i.
    Resultant(JobArgs),
    /// Implicitize the map built from an integer matrix (one row per line).
    Discriminant {
        #[command(flatten)]
        job: JobArgs,
        /// Square unimodular matrix applied to the columns first.
        #[arg(long, value_name = "FILE")]
        transform: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct JobArgs {
    /// Map description (JSON) or, for `discriminant`, an integer matrix.
    input: PathBuf,
    /// Strand degree; must exceed sum(d_i - 1).
    #[arg(long)]
    nu: Option<u32>,
    #[arg(long, value_enum, default_value_t = MethodArg::Cayley)]
    method: MethodArg,
    /// Overrides the mode given in the input file.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    report: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Cayley,
    Interpolate,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Strict,
    Permissive,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Cayley => Method::Cayley,
            MethodArg::Interpolate => Method::Interpolate,
            MethodArg::Both => Method::Both,
        }
    }
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Permissive => Mode::Permissive,
        }
    }
}

/// Failure classes with a stable exit code each.
enum Failure {
    Input(String),
    Math(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Math(_) => 2,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Koszul(KoszulError::DegreeTooLow { .. }) => input_err(e),
            e => Failure::Math(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn seed_from_env() -> Result<DetOptions, Failure> {
    let mut opts = DetOptions::default();
    if let Ok(s) = std::env::var("KRESOLVE_SEED") {
        opts.seed = s.trim().parse().map_err(|_| Failure::Input(format!("KRESOLVE_SEED: `{s}` is not an integer")))?;
    }
    Ok(opts)
}

fn load_map(args: &JobArgs) -> Result<MapSpec, Failure> {
    let input = MapInput::from_json(&read(&args.input)?).map_err(input_err)?;
    input.to_spec(args.mode.map(Mode::from)).map_err(input_err)
}

fn pipeline_options(args: &JobArgs, spec: &MapSpec) -> Result<PipelineOptions, Failure> {
    if let Some(nu) = args.nu {
        if nu <= spec.eta() {
            return Err(Failure::Input(format!("--nu {nu} must exceed eta = {}", spec.eta())));
        }
    }
    Ok(PipelineOptions { nu: args.nu, method: args.method.into(), det: seed_from_env()? })
}

/// Writes to stdout; a closed pipe is not an error worth reporting.
fn out(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => out(&format!("{}\n", report.to_json())),
        Format::Text => out(&report.to_text()),
    }
}

fn failed_conditions(report: &Report) -> bool {
    let acyclic = report.conditions.as_ref().and_then(|c| c.get("avramov_ok")).and_then(|v| v.as_bool());
    acyclic == Some(false) || report.h.is_none()
}

fn run_implicitize(spec: &MapSpec, args: &JobArgs, matrix: Option<MatrixProvenance>) -> Result<u8, Failure> {
    let opts = pipeline_options(args, spec)?;
    let result = implicitize(spec, &opts)?;
    let mut report = Report::from_implicit(spec, &result);
    report.matrix = matrix;
    emit(&report, args.report);
    Ok(if failed_conditions(&report) { 2 } else { 0 })
}

fn conditions_text(c: &ConditionReport) -> String {
    let mut s = String::new();
    for row in &c.avramov {
        s.push_str(&format!("I_{}  codim {}  needed {}\n", row.r, row.codim, row.needed));
    }
    s.push_str(&format!("acyclic        {}\n", c.acyclic()));
    s.push_str(&format!("strict codim   {}", c.strict_ok));
    if !c.strict_witnesses.is_empty() {
        s.push_str(&format!("  witnesses {:?}", c.strict_witnesses));
    }
    s.push('\n');
    for d in &c.diagnostics {
        s.push_str(&format!("diagnostic     {d}\n"));
    }
    s
}

fn run_check(args: &JobArgs) -> Result<u8, Failure> {
    let spec = load_map(args)?;
    let c = check_acyclicity(&spec)?;
    match args.report {
        Format::Json => out(&format!("{}\n", serde_json::to_string_pretty(&c).expect("condition report serializes"))),
        Format::Text => out(&conditions_text(&c)),
    }
    Ok(if c.acyclic() { 0 } else { 2 })
}

fn run_resultant(args: &JobArgs) -> Result<u8, Failure> {
    let spec = load_map(args)?;
    let opts = pipeline_options(args, &spec)?;
    let out = macaulay_resultant(&spec, opts.nu, opts.method, &opts.det).map_err(|e| Failure::Math(e.to_string()))?;
    let report = Report::from_resultant(&spec, &out, None);
    emit(&report, args.report);
    Ok(if out.res.is_zero() { 2 } else { 0 })
}

fn run_discriminant(args: &JobArgs, transform: Option<&Path>) -> Result<u8, Failure> {
    let input: GaleMatrix = read(&args.input)?.parse().map_err(input_err)?;
    let (used, m) = match transform {
        Some(path) => {
            let m = parse_int_matrix(&read(path)?).map_err(input_err)?;
            (column_transform(&input, &m).map_err(input_err)?, Some(m))
        }
        None => (input.clone(), None),
    };
    let names: Vec<String> = match used.cols() {
        3 => vec!["u".into(), "v".into(), "w".into()],
        k => (0..k).map(|i| format!("t{i}")).collect(),
    };
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let ring = RingSpec::with_default_pairs(&names).map_err(input_err)?;
    let mode = args.mode.map_or(Mode::Strict, Mode::from);
    let spec = gale_map(&used, &ring, mode).map_err(input_err)?;
    let provenance =
        MatrixProvenance { input: input.entries().to_vec(), transform: m, used: used.entries().to_vec() };
    run_implicitize(&spec, args, Some(provenance))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Implicitize(args) => load_map(args).and_then(|spec| run_implicitize(&spec, args, None)),
        Command::Check(args) => run_check(args),
        Command::Resultant(args) => run_resultant(args),
        Command::Discriminant { job, transform } => run_discriminant(job, transform.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            match &f {
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Math(m) => eprintln!("failed: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
