//! Command-line front end: problem descriptions in as JSON, eigenvalue
//! tables, inequality reports, and homogenization sweeps out as CSV or JSON.
//!
//! Exit codes: 0 success, 1 invalid input or problem data, 2 solver
//! non-convergence, 3 I/O failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use serde::{Deserialize, Serialize};

use plyap::{
    assemble, bound_classical, bound_lyapi, bound_lyapu, bounds_harris_kong,
    das_vatsala_constant, eigenvalue_with, phi_p, pi_p, smallest_positive_eigenvalue, sweep,
    verify_lyapi2, weyl_estimate, BeamProblem, BoundReport, EigenPair, Error as CoreError,
    PiecewiseWeight, ProblemSpec, Sign, SignChoice, SolveOptions, SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "plyap",
    version,
    about = "Eigenvalue ladders, inequality reports, and homogenization sweeps \
             for one-dimensional p-Laplacian problems with sign-changing weights"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute eigenvalues and eigenfunctions of a problem description
    Solve(SolveArgs),
    /// Evaluate every applicable eigenvalue inequality at computed eigenvalues
    Bounds(SolveArgs),
    /// Sweep the rescaled weight across a grid of periods
    Homogenize(HomogenizeArgs),
    /// Solve the clamped higher-order problem and verify its inequality
    Beam(BeamArgs),
    /// Tabulate the generalized circle constant and power nonlinearity
    Ptrig(PtrigArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Problem description (JSON)
    #[arg(long)]
    input: PathBuf,
    /// Eigenvalue indices, a single integer or an inclusive range like 1..3
    #[arg(long, value_parser = parse_k_range, default_value = "1..3")]
    k: KRange,
    /// Which ladder to compute: +, -, or both
    #[arg(long, value_enum, default_value = "+", allow_hyphen_values = true)]
    sign: SignArg,
    /// Residual tolerance for eigenvalue acceptance, in (0, 1e-2]
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct HomogenizeArgs {
    /// Base problem description (JSON); its weight is rescaled per epsilon
    #[arg(long)]
    input: PathBuf,
    /// Eigenvalue indices, a single integer or an inclusive range like 1..2
    #[arg(long, value_parser = parse_k_range, default_value = "1..2")]
    k: KRange,
    /// Which ladder to sweep: +, -, or both
    #[arg(long, value_enum, default_value = "+", allow_hyphen_values = true)]
    sign: SignArg,
    /// Comma-separated period lengths in (0, 1], e.g. 0.25,0.125,0.0625
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Residual tolerance for eigenvalue acceptance, in (0, 1e-2]
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct BeamArgs {
    /// Beam description (JSON): {"m": order, "L": length, "rho": weight, "n": cells}
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct PtrigArgs {
    /// Exponents to tabulate (default: a built-in grid)
    #[arg(value_name = "P")]
    p: Vec<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format; the default is csv for tables and json for reports
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Omit the timestamped metadata line from CSV output
    #[arg(long)]
    no_header: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    #[value(name = "+")]
    Plus,
    #[value(name = "-")]
    Minus,
    Both,
}

impl SignArg {
    fn choice(self) -> SignChoice {
        match self {
            SignArg::Plus => SignChoice::Plus,
            SignArg::Minus => SignChoice::Minus,
            SignArg::Both => SignChoice::Both,
        }
    }
}

/// Inclusive eigenvalue index range parsed from `a`, `a..b`, or `a..=b`.
#[derive(Clone, Copy, Debug)]
struct KRange {
    lo: usize,
    hi: usize,
}

impl KRange {
    fn iter(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

fn parse_k_range(s: &str) -> Result<KRange, String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid index {t:?} in k range {s:?}"))
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo == 0 || hi < lo {
        return Err(format!("k range must satisfy 1 <= a <= b, got {s:?}"));
    }
    Ok(KRange { lo, hi })
}

/// Error carrying the process exit code it maps to.
#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn domain(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
    fn solver(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
    fn io(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::Domain(_) | CoreError::NoEigenvalue(_) | CoreError::Resource { .. } => 1,
            CoreError::Integration { .. } | CoreError::Search(_) => 2,
        };
        Self { code, message: e.to_string() }
    }
}

/// Appends the offending input to an error message so failures are
/// reproducible from the printed output alone.
fn echo_input(mut e: CliError, path: &Path, raw: &str) -> CliError {
    let _ = write!(
        e.message,
        "\ninput {}:\n{}",
        path.display(),
        truncate_utf8(raw.trim_end(), 4096)
    );
    e
}

fn truncate_utf8(s: &str, max: usize) -> &str {
    if s.len() <= max {
        return s;
    }
    let mut end = max;
    while !s.is_char_boundary(end) {
        end -= 1;
    }
    &s[..end]
}

/// A problem coefficient: a bare number means that constant on [0, L].
#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum CoefficientInput {
    Constant(f64),
    Weight(PiecewiseWeight),
}

impl CoefficientInput {
    fn realize(&self, length: f64, what: &str) -> Result<PiecewiseWeight, CliError> {
        match self {
            CoefficientInput::Constant(c) => Ok(PiecewiseWeight::constant(*c, length)?),
            CoefficientInput::Weight(w) => {
                if (w.length() - length).abs() > 1e-12 * length.max(1.0) {
                    return Err(CliError::domain(format!(
                        "{what} is defined on [0, {}] but the problem length is {length}",
                        w.length()
                    )));
                }
                Ok(w.clone())
            }
        }
    }
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemInput {
    p: f64,
    #[serde(rename = "L")]
    length: f64,
    a: CoefficientInput,
    rho: CoefficientInput,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BeamInput {
    m: usize,
    #[serde(rename = "L")]
    length: f64,
    rho: CoefficientInput,
    /// Grid cells for the dense discretization (default 400).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
}

struct Loaded {
    raw: String,
    input: ProblemInput,
    a: PiecewiseWeight,
    rho: PiecewiseWeight,
    spec: ProblemSpec,
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("reading {}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<Loaded, CliError> {
    let raw = read_input(path)?;
    let input: ProblemInput = serde_json::from_str(&raw).map_err(|e| {
        echo_input(
            CliError::domain(format!("invalid problem description: {e}")),
            path,
            &raw,
        )
    })?;
    let a = input
        .a
        .realize(input.length, "a")
        .map_err(|e| echo_input(e, path, &raw))?;
    let rho = input
        .rho
        .realize(input.length, "rho")
        .map_err(|e| echo_input(e, path, &raw))?;
    let spec = ProblemSpec::new(input.p, a.clone(), rho.clone())
        .map_err(|e| echo_input(e.into(), path, &raw))?;
    Ok(Loaded { raw, input, a, rho, spec })
}

fn solve_options(p: f64, tol: Option<f64>) -> Result<SolveOptions, CliError> {
    let mut opts = SolveOptions::for_p(p);
    if let Some(t) = tol {
        if !(t > 0.0 && t <= 1e-2) {
            return Err(CliError::domain(format!(
                "--tol must lie in (0, 1e-2], got {t}"
            )));
        }
        opts.residual_tol = t;
        opts.ode_rel_tol = (t * 1e-2).clamp(1e-13, 1e-10);
        opts.ode_abs_tol = opts.ode_rel_tol * 1e-2;
    }
    Ok(opts)
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &out.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::io(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Timestamped metadata line for CSV output; `--no-header` drops it so
/// repeated runs are byte-identical.
fn csv_metadata() -> String {
    let ms = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    format!("# plyap {} run_unix_ms={ms}\n", env!("CARGO_PKG_VERSION"))
}

fn resolve(format: Option<Format>, default: Format) -> Format {
    format.unwrap_or(default)
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn is_unit(a: &PiecewiseWeight) -> bool {
    a.constant_value().is_some_and(|c| (c - 1.0).abs() <= 1e-15)
}

/// Ladders requested by --sign, skipping empty ones only under `both`.
fn applicable_signs(
    arg: SignArg,
    rho: &PiecewiseWeight,
) -> Vec<Sign> {
    let parts = rho.split_parts();
    arg.choice()
        .signs()
        .iter()
        .copied()
        .filter(|sign| {
            if arg != SignArg::Both {
                return true;
            }
            let exists = match sign {
                Sign::Plus => parts.positive > 0.0,
                Sign::Minus => parts.negative > 0.0,
            };
            if !exists {
                info!("skipping the {sign} ladder: the weight has no matching part");
            }
            exists
        })
        .collect()
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    problem: &'a ProblemInput,
    pairs: &'a [EigenPair],
}

fn run_solve(args: &SolveArgs) -> Result<(), CliError> {
    let loaded = load_problem(&args.input)?;
    let p = loaded.spec.p();
    info!("command=solve p={p} L={} k={:?}", loaded.spec.length(), args.k);
    let opts = solve_options(p, args.tol)?;
    let with_echo = |e: CliError| echo_input(e, &args.input, &loaded.raw);
    let unit = is_unit(&loaded.a);
    let mut pairs = Vec::new();
    let mut weyl = Vec::new();
    for sign in applicable_signs(args.sign, &loaded.rho) {
        for k in args.k.iter() {
            let pair = eigenvalue_with(&loaded.a, &loaded.rho, p, k, sign, &opts)
                .map_err(|e| with_echo(e.into()))?;
            debug!("k={k} sign={sign} lambda={} residual={}", pair.lambda, pair.residual);
            weyl.push(if unit { weyl_estimate(&loaded.rho, p, k, sign).ok() } else { None });
            pairs.push(pair);
        }
    }
    let text = match resolve(args.out.format, Format::Csv) {
        Format::Csv => {
            let mut t = String::new();
            if !args.out.no_header {
                t.push_str(&csv_metadata());
            }
            t.push_str("k,sign,lambda,nodal_count,residual,weyl_estimate\n");
            for (pair, w) in pairs.iter().zip(&weyl) {
                let _ = writeln!(
                    t,
                    "{},{},{},{},{},{}",
                    pair.k,
                    pair.sign_class,
                    pair.lambda,
                    pair.nodal_count,
                    pair.residual,
                    opt_cell(*w)
                );
            }
            t
        }
        Format::Json => to_json(&SolveOutput { problem: &loaded.input, pairs: &pairs })?,
    };
    emit(&args.out, &text)
}

#[derive(Serialize)]
struct BoundRow {
    k: usize,
    sign: Sign,
    lambda: f64,
    report: BoundReport,
}

#[derive(Serialize)]
struct BoundsOutput<'a> {
    problem: &'a ProblemInput,
    reports: &'a [BoundRow],
}

fn run_bounds(args: &SolveArgs) -> Result<(), CliError> {
    let loaded = load_problem(&args.input)?;
    let p = loaded.spec.p();
    info!("command=bounds p={p} L={} k={:?}", loaded.spec.length(), args.k);
    let opts = solve_options(p, args.tol)?;
    let with_echo = |e: CliError| echo_input(e, &args.input, &loaded.raw);
    let unit = is_unit(&loaded.a);
    let mut rows = Vec::new();
    for sign in applicable_signs(args.sign, &loaded.rho) {
        for k in args.k.iter() {
            let pair = eigenvalue_with(&loaded.a, &loaded.rho, p, k, sign, &opts)
                .map_err(|e| with_echo(e.into()))?;
            let lambda = pair.lambda;
            // The first-order inequalities read the full signed right-hand
            // side w = lambda * rho.
            let w = loaded.rho.scale(lambda);
            let mut push = |report: BoundReport| rows.push(BoundRow { k, sign, lambda, report });
            push(bound_lyapi(&loaded.a, &w, p).map_err(|e| with_echo(e.into()))?);
            push(bound_lyapu(&loaded.a, &loaded.rho, p, k, lambda).map_err(|e| with_echo(e.into()))?);
            if unit {
                // These two are stated for the normalized problem only; with
                // a general leading coefficient they are not necessary
                // conditions and would report spurious violations.
                push(bound_classical(&loaded.rho, p, k, lambda).map_err(|e| with_echo(e.into()))?);
                let (left, right) = bounds_harris_kong(&w, p).map_err(|e| with_echo(e.into()))?;
                push(left);
                push(right);
            }
        }
    }
    let text = match resolve(args.out.format, Format::Csv) {
        Format::Csv => {
            let mut t = String::new();
            if !args.out.no_header {
                t.push_str(&csv_metadata());
            }
            t.push_str("name,k,sign,lambda,lhs,rhs,slack,satisfied,certifies_nonexistence\n");
            for row in &rows {
                let r = &row.report;
                let _ = writeln!(
                    t,
                    "{},{},{},{},{},{},{},{},{}",
                    r.name.as_str(),
                    row.k,
                    row.sign,
                    row.lambda,
                    r.lhs,
                    r.rhs,
                    r.slack,
                    r.satisfied,
                    r.certifies_nonexistence
                );
            }
            t
        }
        Format::Json => to_json(&BoundsOutput { problem: &loaded.input, reports: &rows })?,
    };
    emit(&args.out, &text)
}

#[derive(Serialize)]
struct HomogenizeOutput<'a> {
    problem: &'a ProblemInput,
    result: &'a plyap::SweepResult,
}

fn run_homogenize(args: &HomogenizeArgs) -> Result<(), CliError> {
    let loaded = load_problem(&args.input)?;
    let p = loaded.spec.p();
    info!("command=homogenize p={p} k={:?} sign={:?}", args.k, args.sign.choice());
    let with_echo = |e: CliError| echo_input(e, &args.input, &loaded.raw);
    let mut config = SweepConfig::new(loaded.spec.clone());
    config.options = solve_options(p, args.tol)?;
    config.k_list = args.k.iter().collect();
    config.signs = args.sign.choice();
    if let Some(eps) = &args.eps {
        for &e in eps {
            if !(e > 0.0 && e <= 1.0) {
                return Err(CliError::domain(format!(
                    "--eps entries must lie in (0, 1], got {e}"
                )));
            }
        }
        config.epsilons = eps.clone();
    }
    let result = sweep(&config).map_err(|e| with_echo(e.into()))?;
    let text = match resolve(args.out.format, Format::Csv) {
        Format::Csv => {
            let mut t = String::new();
            if !args.out.no_header {
                t.push_str(&csv_metadata());
            }
            t.push_str(&result.to_csv(true));
            t
        }
        Format::Json => to_json(&HomogenizeOutput { problem: &loaded.input, result: &result })?,
    };
    emit(&args.out, &text)?;
    let failed: Vec<_> = result.rows.iter().filter(|r| r.error.is_some()).collect();
    if !failed.is_empty() {
        for row in &failed {
            eprintln!(
                "row eps={} k={} sign={}: {}",
                row.epsilon,
                row.k,
                row.sign,
                row.error.as_deref().unwrap_or("")
            );
        }
        return Err(with_echo(CliError::solver(format!(
            "{} of {} sweep rows did not converge",
            failed.len(),
            result.rows.len()
        ))));
    }
    Ok(())
}

#[derive(Serialize)]
struct BeamOutput<'a> {
    problem: &'a BeamInput,
    n: usize,
    lambda: f64,
    verification: BoundReport,
    das_vatsala_constant: f64,
    /// Normalized fundamental mode on the interior grid nodes.
    mode: Vec<f64>,
}

fn run_beam(args: &BeamArgs) -> Result<(), CliError> {
    let raw = read_input(&args.input)?;
    let input: BeamInput = serde_json::from_str(&raw).map_err(|e| {
        echo_input(
            CliError::domain(format!("invalid beam description: {e}")),
            &args.input,
            &raw,
        )
    })?;
    let with_echo = |e: CliError| echo_input(e, &args.input, &raw);
    let n = input.n.unwrap_or(400);
    info!("command=beam m={} L={} n={n}", input.m, input.length);
    let rho = input.rho.realize(input.length, "rho").map_err(&with_echo)?;
    let problem = BeamProblem::new(input.m, rho, n).map_err(|e| with_echo(e.into()))?;
    let pencil = assemble(&problem);
    let (lambda, mode) = smallest_positive_eigenvalue(&pencil).map_err(|e| with_echo(e.into()))?;
    let verification = verify_lyapi2(&problem, lambda).map_err(|e| with_echo(e.into()))?;
    let reference = das_vatsala_constant(input.m, input.length).map_err(|e| with_echo(e.into()))?;
    let text = match resolve(args.out.format, Format::Json) {
        Format::Json => to_json(&BeamOutput {
            problem: &input,
            n,
            lambda,
            verification,
            das_vatsala_constant: reference,
            mode,
        })?,
        Format::Csv => {
            let mut t = String::new();
            if !args.out.no_header {
                t.push_str(&csv_metadata());
            }
            t.push_str("m,n,L,lambda,lhs,rhs,satisfied,das_vatsala_constant\n");
            let _ = writeln!(
                t,
                "{},{},{},{},{},{},{},{}",
                input.m,
                n,
                input.length,
                lambda,
                verification.lhs,
                verification.rhs,
                verification.satisfied,
                reference
            );
            t
        }
    };
    emit(&args.out, &text)
}

#[derive(Serialize)]
struct PhiSample {
    s: f64,
    value: f64,
}

#[derive(Serialize)]
struct PtrigRow {
    p: f64,
    pi_p: f64,
    phi: Vec<PhiSample>,
}

const PHI_SAMPLES: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];

fn run_ptrig(args: &PtrigArgs) -> Result<(), CliError> {
    let ps = if args.p.is_empty() {
        vec![1.1, 1.2, 1.5, 2.0, 2.5, 3.0, 5.0, 10.0]
    } else {
        args.p.clone()
    };
    info!("command=ptrig exponents={ps:?}");
    let mut rows = Vec::new();
    for &p in &ps {
        let pip = pi_p(p)?;
        rows.push(PtrigRow {
            p,
            pi_p: pip,
            phi: PHI_SAMPLES
                .iter()
                .map(|&s| PhiSample { s, value: phi_p(s, p) })
                .collect(),
        });
    }
    let text = match resolve(args.out.format, Format::Csv) {
        Format::Csv => {
            let mut t = String::new();
            if !args.out.no_header {
                t.push_str(&csv_metadata());
            }
            t.push_str("p,pi_p");
            for s in PHI_SAMPLES {
                let _ = write!(t, ",phi({s})");
            }
            t.push('\n');
            for row in &rows {
                let _ = write!(t, "{},{}", row.p, row.pi_p);
                for sample in &row.phi {
                    let _ = write!(t, ",{}", sample.value);
                }
                t.push('\n');
            }
            t
        }
        Format::Json => to_json(&rows)?,
    };
    emit(&args.out, &text)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::domain(format!("serializing output: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Bounds(args) => run_bounds(args),
        Command::Homogenize(args) => run_homogenize(args),
        Command::Beam(args) => run_beam(args),
        Command::Ptrig(args) => run_ptrig(args),
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`plyap ... | head`) instead of panicking.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PLYAP_LOG", "error"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
