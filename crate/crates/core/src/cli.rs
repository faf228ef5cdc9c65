//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid flags or preconditions, 3 numerical
//! failure (including a failed periodicity check), 4 non-monotone input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::format::g17;
use crate::periodicity::{
    check_mixed_periodicity, check_neumann_periodicity, check_robin_periodicity, PeriodicityRow,
};
use crate::selfsimilar::{make_params, CantorParams};
use crate::sigma::{s_of_t, s_range, sigma_cauchy_diagnostic, sigma_k};
use crate::singularity::{
    criterion_products, first_monotonicity_violation, step_approximate, MonotoneSamples,
};
use crate::spectral::spectrum;
use crate::step::StepFunction;
use crate::string::{assemble_pencil, build_string, BoundaryCondition};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_NOT_MONOTONE: i32 = 4;

/// Largest residual accepted by the `periodicity` subcommand.
pub const PERIODICITY_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "cantor-spectrum",
    version,
    about = "Spectra of strings with Cantor-type self-similar weights"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the first eigenvalues of one boundary problem.
    Eigs(EigsArgs),
    /// Check a spectral periodicity identity between two levels.
    Periodicity(PeriodicityArgs),
    /// Write σ_k and samples of s(t) as two-column CSV.
    Sigma(SigmaArgs),
    /// Step-approximate monotone samples and report the criterion product.
    Approx(ApproxArgs),
}

#[derive(Debug, Args)]
struct WeightArgs {
    /// Number of self-similar copies.
    #[arg(long, default_value_t = 2)]
    kappa: usize,
    /// Length of each copy interval.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    a: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BcKind {
    Dirichlet,
    Neumann,
    Robin,
}

#[derive(Debug, Args)]
struct BcArgs {
    #[arg(long, value_enum, default_value_t = BcKind::Neumann)]
    bc: BcKind,
    #[arg(long, default_value_t = 0.0)]
    gamma0: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma1: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct EigsArgs {
    #[command(flatten)]
    weight: WeightArgs,
    #[command(flatten)]
    bc: BcArgs,
    #[arg(long)]
    level: usize,
    #[arg(long)]
    count: usize,
    /// Relative bisection tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    out: OutFormat,
    #[arg(long)]
    path: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckKind {
    Neumann,
    Robin,
    Mixed,
}

#[derive(Debug, Args)]
struct PeriodicityArgs {
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long, value_enum)]
    check: CheckKind,
    #[arg(long)]
    level: usize,
    #[arg(long = "n-max")]
    n_max: usize,
    /// Relative bisection tolerance of the Neumann check.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Debug, Args)]
struct SigmaArgs {
    #[command(flatten)]
    weight: WeightArgs,
    #[command(flatten)]
    bc: BcArgs,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    level: usize,
    #[arg(long, default_value_t = 512)]
    grid: usize,
    /// Output for the breaks and values of σ_k (`t,sigma`).
    #[arg(long = "sigma-path", default_value = "sigma.csv")]
    sigma_path: PathBuf,
    /// Output for the samples of s (`t,s`).
    #[arg(long = "s-path", default_value = "s.csv")]
    s_path: PathBuf,
}

#[derive(Debug, Args)]
struct ApproxArgs {
    /// CSV with header `x,f` and non-decreasing `f`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[arg(long, default_value = "approx.csv")]
    path: PathBuf,
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Resource(_) => EXIT_USAGE,
            Error::Numerical(_) | Error::Internal(_) => EXIT_NUMERICAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Eigs(a) => cmd_eigs(&a),
        Command::Periodicity(a) => cmd_periodicity(&a, out),
        Command::Sigma(a) => cmd_sigma(&a, out),
        Command::Approx(a) => cmd_approx(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn params(w: &WeightArgs) -> std::result::Result<CantorParams, Failure> {
    Ok(make_params(w.kappa, w.a)?)
}

fn boundary(b: &BcArgs) -> std::result::Result<BoundaryCondition, Failure> {
    Ok(match b.bc {
        BcKind::Dirichlet => BoundaryCondition::Dirichlet,
        BcKind::Neumann => BoundaryCondition::neumann(),
        BcKind::Robin => BoundaryCondition::robin(b.gamma0, b.gamma1)?,
    })
}

/// Writes `contents` next to `path` and renames it into place.
fn write_atomic(path: &Path, contents: &str) -> std::result::Result<(), Failure> {
    let name = path
        .file_name()
        .ok_or_else(|| Failure::usage(format!("invalid output path {}", path.display())))?;
    let mut tmp_name = OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, contents)
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| {
            let _ = std::fs::remove_file(&tmp);
            Failure::usage(format!("cannot write {}: {e}", path.display()))
        })
}

/// CSV body `n,lambda`.
pub fn eigenvalues_csv(eigenvalues: &[f64]) -> String {
    let mut s = String::from("n,lambda\n");
    for (n, v) in eigenvalues.iter().enumerate() {
        let _ = writeln!(s, "{n},{}", g17(*v));
    }
    s
}

/// JSON document with keys in a fixed order.
pub fn eigenvalues_json(
    params: &CantorParams,
    bc: &BoundaryCondition,
    level: usize,
    tol: f64,
    eigenvalues: &[f64],
) -> String {
    let (g0, g1) = bc.gammas();
    let list: Vec<String> = eigenvalues.iter().map(|v| g17(*v)).collect();
    format!(
        concat!(
            "{{\"params\":{{\"kappa\":{},\"a\":{},\"b\":{},\"nu\":{},\"D\":{}}},",
            "\"bc\":{{\"kind\":\"{}\",\"gamma0\":{},\"gamma1\":{}}},",
            "\"level\":{},\"tol\":{},\"eigenvalues\":[{}]}}\n"
        ),
        params.kappa,
        g17(params.a),
        g17(params.b),
        g17(params.nu),
        g17(params.d_order),
        bc.kind(),
        g17(g0),
        g17(g1),
        level,
        g17(tol),
        list.join(",")
    )
}

fn cmd_eigs(args: &EigsArgs) -> CliResult {
    let params = params(&args.weight)?;
    let bc = boundary(&args.bc)?;
    let string = build_string(&params, args.level)?;
    if args.count > string.len() {
        return Err(Failure::usage(format!(
            "count {} exceeds the {} eigenvalues available at level {}",
            args.count,
            string.len(),
            args.level
        )));
    }
    let pencil = assemble_pencil(&string, bc);
    let spec = spectrum(&pencil, args.count, args.tol)?;
    let body = match args.out {
        OutFormat::Csv => eigenvalues_csv(&spec.eigenvalues),
        OutFormat::Json => eigenvalues_json(&params, &bc, args.level, args.tol, &spec.eigenvalues),
    };
    write_atomic(&args.path, &body)?;
    Ok(EXIT_OK)
}

fn periodicity_table(rows: &[PeriodicityRow]) -> String {
    let mut s = String::from("n,index,lhs,rhs,residual\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.n,
            r.lhs_index,
            g17(r.lhs),
            g17(r.rhs),
            g17(r.residual)
        );
    }
    s
}

fn cmd_periodicity(args: &PeriodicityArgs, out: &mut dyn Write) -> CliResult {
    let params = params(&args.weight)?;
    let rows = match args.check {
        CheckKind::Neumann => check_neumann_periodicity(&params, args.level, args.n_max, args.tol)?,
        CheckKind::Robin => check_robin_periodicity(&params, args.level, args.n_max)?,
        CheckKind::Mixed => check_mixed_periodicity(&params, args.level, args.n_max)?,
    };
    let max = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let _ = write!(out, "{}", periodicity_table(&rows));
    let _ = writeln!(out, "max_residual,{}", g17(max));
    Ok(if max < PERIODICITY_THRESHOLD {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    })
}

fn sigma_csv(sigma: &StepFunction) -> String {
    // each break appears twice, with the values on either side
    let mut s = String::from("t,sigma\n");
    let _ = writeln!(s, "{},{}", g17(sigma.lo()), g17(sigma.values[0]));
    for (j, b) in sigma.breaks.iter().enumerate() {
        let _ = writeln!(s, "{},{}", g17(*b), g17(sigma.values[j]));
        let _ = writeln!(s, "{},{}", g17(*b), g17(sigma.values[j + 1]));
    }
    let _ = writeln!(
        s,
        "{},{}",
        g17(sigma.hi()),
        g17(*sigma.values.last().unwrap())
    );
    s
}

fn cmd_sigma(args: &SigmaArgs, out: &mut dyn Write) -> CliResult {
    let params = params(&args.weight)?;
    let bc = boundary(&args.bc)?;
    let sigma = sigma_k(&params, args.k, args.level, bc)?;
    let samples = s_of_t(&sigma, params.d_order, args.grid)?;
    let cauchy = sigma_cauchy_diagnostic(&params, args.k, args.level, bc)?;

    let mut s_body = String::from("t,s\n");
    for (t, s) in &samples {
        let _ = writeln!(s_body, "{},{}", g17(*t), g17(*s));
    }
    write_atomic(&args.sigma_path, &sigma_csv(&sigma))?;
    write_atomic(&args.s_path, &s_body)?;

    let _ = writeln!(out, "k,{}", args.k);
    let _ = writeln!(out, "breaks,{}", sigma.n_breaks());
    let _ = writeln!(out, "sigma_at_0,{}", g17(sigma.values[0]));
    let _ = writeln!(out, "sigma_at_nu,{}", g17(*sigma.values.last().unwrap()));
    let _ = writeln!(out, "s_range,{}", g17(s_range(&samples)));
    let _ = writeln!(out, "cauchy,{}", g17(cauchy));
    Ok(EXIT_OK)
}

fn read_samples(path: &Path) -> std::result::Result<(Vec<f64>, Vec<f64>), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().unwrap_or("");
    if header.trim() != "x,f" {
        return Err(Failure::usage(format!(
            "expected header `x,f`, found `{header}`"
        )));
    }
    let mut xs = Vec::new();
    let mut fs = Vec::new();
    for (i, line) in lines.enumerate() {
        let parsed = line.split_once(',').and_then(|(x, f)| {
            Some((x.trim().parse::<f64>().ok()?, f.trim().parse::<f64>().ok()?))
        });
        let (x, f) = parsed
            .ok_or_else(|| Failure::usage(format!("malformed sample on data row {i}: `{line}`")))?;
        xs.push(x);
        fs.push(f);
    }
    Ok((xs, fs))
}

fn cmd_approx(args: &ApproxArgs, out: &mut dyn Write) -> CliResult {
    let (xs, fs) = read_samples(&args.input)?;
    if let Some(i) = first_monotonicity_violation(&fs) {
        return Err(Failure {
            code: EXIT_NOT_MONOTONE,
            message: format!("input is not monotone: sample {i} decreases"),
        });
    }
    let f = MonotoneSamples::new(xs, fs)?;
    let approx = step_approximate(&f, args.n, args.eps)?;
    let error = f.l2_distance(&approx)?;
    let product = criterion_products(&f, std::slice::from_ref(&approx))?[0];

    let mut body = String::from("break,value_left,value_right\n");
    for (j, b) in approx.breaks.iter().enumerate() {
        let _ = writeln!(
            body,
            "{},{},{}",
            g17(*b),
            g17(approx.values[j]),
            g17(approx.values[j + 1])
        );
    }
    write_atomic(&args.path, &body)?;
    let _ = writeln!(
        out,
        "n,{},breaks,{},l2_error,{},c_n,{}",
        args.n,
        approx.n_breaks(),
        g17(error),
        g17(product)
    );
    Ok(EXIT_OK)
}
