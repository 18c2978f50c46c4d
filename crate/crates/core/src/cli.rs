//! The `zeros` command line front end.
//!
//! Exit codes: 0 success, 1 bad parameters or input, 2 solver failure or
//! non-convergence, 3 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::equilibrium::{proposition_residual, Configuration};
use crate::error::Error;
use crate::families::{q_at, FamilySpec, Preset, REFERENCE_CASES};
use crate::solver::{initial_guess, solve_from, SolveReport, SolverSettings};
use crate::verify::{
    chebyshev_exact_zeros, infinity_norm_diff, is_chebyshev_first_kind, polish_residual,
    solve_reference_cases, ErrorTable,
};

/// Exact-error bound for `--verify-exact` on Chebyshev input.
pub const EXACT_ERROR_BOUND: f64 = 1e-15;
/// Oracle residual bound for `--verify-exact` on other families.
pub const POLISH_BOUND: f64 = 1e-12;
/// Default degrees for `--paper-tables`.
pub const PAPER_DEGREES: [usize; 2] = [20, 25];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Jacobi,
    Laguerre,
    Hermite,
    Chebyshev1,
    Legendre,
    GegenbauerPaper,
    LaguerreClassical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "zeros",
    version,
    about = "Zeros of Jacobi, Laguerre and Hermite polynomials from electrostatic equilibrium",
    allow_negative_numbers = true
)]
pub struct Args {
    /// Polynomial family or named preset.
    #[arg(long, value_enum, required_unless_present = "paper_tables")]
    pub family: Option<FamilyArg>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Degree; may be repeated with --paper-tables.
    #[arg(long)]
    pub degree: Vec<usize>,
    /// Newton step tolerance (infinity norm).
    #[arg(long, default_value_t = 1e-15)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = 30)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file, or output directory with --paper-tables.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Check the result against closed-form zeros (Chebyshev) or the
    /// recurrence oracle (other families).
    #[arg(long)]
    pub verify_exact: bool,
    /// Write the zero and error-estimate tables for the seven reference
    /// configurations.
    #[arg(long, conflicts_with_all = ["family", "alpha", "beta", "seed_config", "verify_exact"])]
    pub paper_tables: bool,
    /// Starting configuration, one real per line.
    #[arg(long)]
    pub seed_config: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
    Io(PathBuf, io::Error),
    NotConverged(String),
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => 1,
            CliError::Core(e) => core_exit_code(e),
            CliError::NotConverged(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::ParameterOutOfRange { .. }
        | Error::InvalidDegree(_)
        | Error::DomainViolation { .. }
        | Error::LengthMismatch { .. }
        | Error::InvalidSettings(_) => 1,
        Error::FactorizationFailure
        | Error::LineSearchStalled { .. }
        | Error::Iteration { .. }
        | Error::DerivativeVanishes { .. } => 2,
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e @ Error::ParameterOutOfRange { .. }) => {
                write!(f, "ParameterOutOfRange: {e}")
            }
            CliError::Core(e) => write!(f, "error: {e}"),
            CliError::Io(p, e) => write!(f, "i/o error on {}: {e}", p.display()),
            CliError::NotConverged(m) => write!(f, "not converged: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

/// Formats a real with 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn serialize_real<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return s.serialize_none();
    }
    RawValue::from_string(format_real(*x))
        .map_err(serde::ser::Error::custom)?
        .serialize(s)
}

fn serialize_reals<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Real(#[serde(serialize_with = "serialize_real")] f64);
    s.collect_seq(xs.iter().map(|&x| Real(x)))
}

/// One solved polynomial as emitted by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub family_label: String,
    pub degree: usize,
    #[serde(serialize_with = "serialize_reals")]
    pub zeros: Vec<f64>,
    #[serde(serialize_with = "serialize_real")]
    pub error_estimate: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl OutputRecord {
    pub fn new(family_label: String, report: &SolveReport) -> Self {
        Self {
            family_label,
            degree: report.zeros.len(),
            zeros: report.zeros.points().to_vec(),
            error_estimate: report.final_step_norm,
            iterations: report.iterations,
            converged: report.converged,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        ZeroTable {
            columns: vec!["zero".to_string()],
            rows: self.zeros.iter().map(|&z| vec![Some(z)]).collect(),
        }
        .to_csv()
    }
}

/// Zeros indexed by `k = 1..n`, one column per polynomial. A missing cell
/// marks a failed solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl ZeroTable {
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header = vec!["k".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for (k, row) in self.rows.iter().enumerate() {
            let mut rec = vec![(k + 1).to_string()];
            rec.extend(row.iter().map(|c| c.map(format_real).unwrap_or_default()));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| e.to_string())?.clone();
        if header.get(0) != Some("k") {
            return Err("first column must be k".into());
        }
        let columns: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| e.to_string())?;
            let k: usize = rec[0].parse().map_err(|e| format!("row {}: {e}", i + 1))?;
            if k != i + 1 {
                return Err(format!("row {} has k = {k}", i + 1));
            }
            let cells = rec
                .iter()
                .skip(1)
                .map(|c| {
                    if c.is_empty() {
                        Ok(None)
                    } else {
                        c.parse::<f64>()
                            .map(Some)
                            .map_err(|e| format!("row {}: {e}", i + 1))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(cells);
        }
        Ok(Self { columns, rows })
    }
}

/// Error-estimate table as CSV, one row per polynomial. Failed rows keep
/// their label and degree with empty cells.
pub fn error_table_csv(table: &ErrorTable) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record([
        "polynomial",
        "degree",
        "error_estimate",
        "exact_error",
        "iterations",
        "converged",
    ])
    .expect("in-memory write");
    for row in &table.rows {
        let degree = row.degree.to_string();
        let cells = match &row.outcome {
            Ok(est) => [
                format_real(est.error_estimate),
                est.exact_error.map(format_real).unwrap_or_default(),
                est.iterations.to_string(),
                est.converged.to_string(),
            ],
            Err(_) => Default::default(),
        };
        let mut rec = vec![row.family_label.to_string(), degree];
        rec.extend(cells);
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

/// Writes `zeros_n{n}.csv` and `error_estimates_n{n}.csv` for each degree into
/// `dir`. Returns the written paths and whether every solve converged.
pub fn emit_paper_tables(
    degrees: &[usize],
    dir: &Path,
    settings: &SolverSettings,
    diagnostics: &mut dyn Write,
) -> io::Result<(Vec<PathBuf>, bool)> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut all_ok = true;
    for &n in degrees {
        let solved = solve_reference_cases(n, settings);
        let mut table = ZeroTable {
            columns: REFERENCE_CASES
                .iter()
                .map(|c| c.column.to_string())
                .collect(),
            rows: vec![Vec::with_capacity(REFERENCE_CASES.len()); n],
        };
        for (case, outcome) in &solved {
            match outcome {
                Ok(report) => {
                    if !report.converged {
                        all_ok = false;
                        writeln!(
                            diagnostics,
                            "n={n} {}: not converged after {} iterations (step {:.3e})",
                            case.column, report.iterations, report.final_step_norm
                        )?;
                    }
                    for (row, &z) in table.rows.iter_mut().zip(report.zeros.points()) {
                        row.push(Some(z));
                    }
                }
                Err(e) => {
                    all_ok = false;
                    writeln!(diagnostics, "n={n} {}: {e}", case.column)?;
                    table.rows.iter_mut().for_each(|row| row.push(None));
                }
            }
        }
        let zeros_path = dir.join(format!("zeros_n{n}.csv"));
        fs::write(&zeros_path, table.to_csv())?;
        written.push(zeros_path);

        let errors = ErrorTable {
            rows: ErrorTable::rows_for(n, &solved),
        };
        let errors_path = dir.join(format!("error_estimates_n{n}.csv"));
        fs::write(&errors_path, error_table_csv(&errors))?;
        written.push(errors_path);
    }
    Ok((written, all_ok))
}

fn resolve_family(args: &Args) -> Result<(FamilySpec, String), CliError> {
    let family = args.family.expect("clap enforces --family");
    let preset = match family {
        FamilyArg::Chebyshev1 => Some((Preset::ChebyshevFirstKind, "Chebyshev")),
        FamilyArg::Legendre => Some((Preset::Legendre, "Legendre")),
        FamilyArg::GegenbauerPaper => Some((Preset::GegenbauerPaper, "Gegenbauer")),
        FamilyArg::LaguerreClassical => Some((Preset::ClassicalLaguerre, "Laguerre")),
        _ => None,
    };
    if let Some((preset, label)) = preset {
        if args.alpha.is_some() || args.beta.is_some() {
            return Err(CliError::Usage(
                "named presets fix alpha and beta; drop --alpha/--beta".into(),
            ));
        }
        return Ok((preset.spec(), label.to_string()));
    }
    let need = |name: &str, v: Option<f64>| {
        v.ok_or_else(|| CliError::Usage(format!("--{name} is required for this family")))
    };
    let spec = match family {
        FamilyArg::Jacobi => {
            FamilySpec::jacobi(need("alpha", args.alpha)?, need("beta", args.beta)?)?
        }
        FamilyArg::Laguerre => {
            if args.beta.is_some() {
                return Err(CliError::Usage("--beta does not apply to laguerre".into()));
            }
            FamilySpec::laguerre(need("alpha", args.alpha)?)?
        }
        FamilyArg::Hermite => {
            if args.alpha.is_some() || args.beta.is_some() {
                return Err(CliError::Usage("hermite takes no parameters".into()));
            }
            FamilySpec::Hermite
        }
        _ => unreachable!(),
    };
    Ok((spec, spec.to_string()))
}

fn read_seed(path: &Path, spec: FamilySpec, n: usize) -> Result<Configuration, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    let points = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| {
            l.parse::<f64>()
                .map_err(|e| CliError::Usage(format!("{} line {}: {e}", path.display(), i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if points.len() != n {
        return Err(CliError::Usage(format!(
            "seed file has {} points but --degree is {n}",
            points.len()
        )));
    }
    Ok(Configuration::new(spec, points)?)
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e)),
    }
}

fn verify_result(
    spec: &FamilySpec,
    report: &SolveReport,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let zeros = report.zeros.points();
    let n = zeros.len();
    if is_chebyshev_first_kind(spec) {
        let exact = infinity_norm_diff(zeros, &chebyshev_exact_zeros(n))?;
        let _ = writeln!(stderr, "exact error (infinity norm): {exact:.3e}");
        if exact > EXACT_ERROR_BOUND {
            return Err(CliError::Verification(format!(
                "exact error {exact:.3e} exceeds {EXACT_ERROR_BOUND:.0e}"
            )));
        }
        return Ok(());
    }
    let polish = polish_residual(spec, n, zeros)?;
    let residual = proposition_residual(&report.zeros);
    let scale = zeros
        .iter()
        .fold(0.0f64, |m, &x| m.max((2.0 * q_at(spec, x)).abs()));
    let prop = residual.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let _ = writeln!(
        stderr,
        "oracle polish residual: {polish:.3e}; unified residual: {prop:.3e}"
    );
    if polish > POLISH_BOUND {
        return Err(CliError::Verification(format!(
            "oracle residual {polish:.3e} exceeds {POLISH_BOUND:.0e}"
        )));
    }
    if prop > POLISH_BOUND * (1.0 + scale) {
        return Err(CliError::Verification(format!(
            "unified residual {prop:.3e} exceeds {:.3e}",
            POLISH_BOUND * (1.0 + scale)
        )));
    }
    Ok(())
}

fn execute(args: Args, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let settings = SolverSettings {
        tolerance: args.tol,
        max_iterations: args.max_iter,
        ..Default::default()
    };
    settings.validate()?;

    if args.paper_tables {
        if args.format == Format::Json {
            return Err(CliError::Usage("--paper-tables writes CSV only".into()));
        }
        let degrees = if args.degree.is_empty() {
            PAPER_DEGREES.to_vec()
        } else {
            args.degree.clone()
        };
        if let Some(&bad) = degrees.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidDegree(bad).into());
        }
        let dir = args.output.clone().unwrap_or_else(|| PathBuf::from("."));
        let (paths, ok) = emit_paper_tables(&degrees, &dir, &settings, stderr)
            .map_err(|e| CliError::Io(dir.clone(), e))?;
        for p in paths {
            let _ = writeln!(stdout, "{}", p.display());
        }
        return if ok {
            Ok(())
        } else {
            Err(CliError::NotConverged("see diagnostics above".into()))
        };
    }

    let (spec, label) = resolve_family(&args)?;
    let n = match args.degree.as_slice() {
        [n] => *n,
        [] => return Err(CliError::Usage("--degree is required".into())),
        _ => return Err(CliError::Usage("give a single --degree".into())),
    };
    let start = match &args.seed_config {
        Some(path) => read_seed(path, spec, n)?,
        None => initial_guess(&spec, n)?,
    };
    let report = solve_from(start, &settings)?;
    let record = OutputRecord::new(label, &report);
    let text = match args.format {
        Format::Csv => record.to_csv(),
        Format::Json => record.to_json(),
    };
    write_output(args.output.as_deref(), &text, stdout)?;

    if !report.converged {
        return Err(CliError::NotConverged(format!(
            "last step {:.3e} after {} iterations",
            report.final_step_norm, report.iterations
        )));
    }
    if args.verify_exact {
        verify_result(&spec, &report, stderr)?;
    }
    Ok(())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    1
                }
            };
        }
    };
    match execute(args, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}
