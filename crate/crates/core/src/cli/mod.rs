//! The `fractalc` command line: `compute`, `check` and `solve`.
//!
//! Exit codes: 0 success (and every claim matched), 1 some claim verdict was
//! unexpected, 2 usage or cap error, 3 domain error.

pub mod claims;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::corpus::{FuncExpr, GridFunction, Interval};
use crate::derivations::{solve_derivation_space, DerivationReport, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::frac_ops::{
    caputo, gl_derivative, jumarie, rl_derivative, rl_integral, Direction, FracOrder, Integrand, Resolution, Scheme,
};
use crate::local_ops::{bc_lfd, kg_lfd};

use claims::{CheckConfig, ClaimReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNEXPECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// Environment variable seeding corpus order in `check`.
pub const SEED_VAR: &str = "FRACTALC_SEED";

#[derive(Debug, Parser)]
#[command(name = "fractalc", version, about = "Fractional derivative operators and checks of their algebraic laws")]
#[command(after_help = claims::claim_table())]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Op {
    Classical,
    RlInt,
    RlDeriv,
    Caputo,
    Jumarie,
    Gl,
    BcLfd,
    KgLfd,
    Entropy,
    KonigMilman,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgebraArg {
    Pointwise,
    TruncatedPoly,
}

#[derive(Debug, clap::Args)]
struct ResolutionArgs {
    /// Quadrature nodes for RL, Caputo and Jumarie (GL uses 4x as many).
    #[arg(long)]
    nodes: Option<usize>,
    /// Dyadic scales in the local-derivative ladder.
    #[arg(long)]
    ladder_scales: Option<usize>,
    /// Tolerance of the limit extrapolation.
    #[arg(long)]
    tol: Option<f64>,
}

impl ResolutionArgs {
    fn resolution(&self) -> Result<Resolution> {
        let mut r = Resolution::default();
        if let Some(n) = self.nodes {
            Scheme::new(n)?;
            r.nodes = n;
            r.gl_nodes = 4 * n;
        }
        if let Some(s) = self.ladder_scales {
            if s < r.local.min_scales {
                return Err(Error::argument(format!("--ladder-scales must be at least {}", r.local.min_scales)));
            }
            r.local.scales = s;
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Error::argument("--tol must be positive"));
            }
            r.local.tolerance = t;
        }
        Ok(r)
    }
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Evaluate an operator and write CSV `t,value` (plus `status,error_bar` for local operators).
    Compute {
        #[arg(long, value_enum)]
        op: Op,
        /// Fractional order in (0, 1).
        #[arg(long)]
        alpha: Option<f64>,
        /// Base point of RL, Caputo and GL operators.
        #[arg(long, default_value_t = 0.0)]
        base: f64,
        /// Side of a local derivative: + or -.
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sigma: String,
        /// Function, e.g. `monomial:1,0.5`, `const:2`, `exp:1`, `cos:3`, `weierstrass:0.5,2,24`.
        #[arg(long = "fn", conflicts_with = "fn_csv")]
        func: Option<String>,
        /// Function samples as CSV with header `t,value`.
        #[arg(long)]
        fn_csv: Option<PathBuf>,
        /// Single evaluation point.
        #[arg(long, conflicts_with_all = ["from", "to", "points"])]
        at: Option<f64>,
        #[arg(long, requires_all = ["to", "points"])]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// Coefficient c of the König-Milman form.
        #[arg(long, default_value = "const:1")]
        c: String,
        /// Coefficient d of the entropy and König-Milman forms.
        #[arg(long, default_value = "const:1")]
        d: String,
        #[command(flatten)]
        resolution: ResolutionArgs,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one claim (or `all`) and print one JSON report per line.
    Check {
        claim: String,
        #[command(flatten)]
        resolution: ResolutionArgs,
    },
    /// Solve the derivation space of a finite algebra and print it as JSON.
    Solve {
        #[arg(long, value_enum)]
        algebra: AlgebraArg,
        /// Dimension of the pointwise algebra (at most 16).
        #[arg(long, required_if_eq("algebra", "pointwise"))]
        n: Option<usize>,
        /// Degree of the truncated polynomial algebra (at most 8).
        #[arg(long, required_if_eq("algebra", "truncated-poly"))]
        d: Option<usize>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::NotConverged(_) => EXIT_DOMAIN,
        _ => EXIT_USAGE,
    }
}

/// Parse `args` (including the program name) and run. Output goes to `out`,
/// diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Compute { op, alpha, base, sigma, func, fn_csv, at, from, to, points, c, d, resolution, out: path } => {
            let spec = ComputeSpec { op, alpha, base, sigma, func, fn_csv, at, from, to, points, c, d };
            // rendered in full first, so a failing point leaves no partial CSV
            resolution
                .resolution()
                .and_then(|res| compute(&spec, &res))
                .and_then(|csv| match path {
                    Some(p) => Ok(std::fs::write(p, csv)?),
                    None => Ok(out.write_all(&csv)?),
                })
                .map(|_| EXIT_OK)
        }
        Command::Check { claim, resolution } => resolution.resolution().and_then(|res| check(&claim, res, out)),
        Command::Solve { algebra, n, d } => solve(algebra, n, d, out).map(|_| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "fractalc: {e}");
            exit_code(&e)
        }
    }
}

struct ComputeSpec {
    op: Op,
    alpha: Option<f64>,
    base: f64,
    sigma: String,
    func: Option<String>,
    fn_csv: Option<PathBuf>,
    at: Option<f64>,
    from: Option<f64>,
    to: Option<f64>,
    points: Option<usize>,
    c: String,
    d: String,
}

impl ComputeSpec {
    fn points(&self) -> Result<Vec<f64>> {
        match (self.at, self.from, self.to, self.points) {
            (Some(t), ..) => Ok(vec![t]),
            (None, Some(a), Some(b), Some(n)) if n >= 1 => {
                if n == 1 {
                    Ok(vec![a])
                } else if b > a {
                    Ok(Interval { a, b }.equispaced(n))
                } else {
                    Err(Error::argument("--to must exceed --from"))
                }
            }
            _ => Err(Error::argument("give --at, or --from, --to and --points")),
        }
    }

    fn alpha(&self) -> Result<FracOrder> {
        let a = self.alpha.ok_or_else(|| Error::argument("--alpha is required for this operator"))?;
        FracOrder::new(a)
    }
}

enum Source {
    Expr(FuncExpr),
    Grid(GridFunction),
}

impl Source {
    fn integrand(&self) -> &dyn Integrand {
        match self {
            Source::Expr(f) => f,
            Source::Grid(g) => g,
        }
    }
}

fn parse_fn(s: &str) -> Result<FuncExpr> {
    s.parse()
}

fn compute(spec: &ComputeSpec, res: &Resolution) -> Result<Vec<u8>> {
    let source = match (&spec.func, &spec.fn_csv) {
        (Some(s), None) => Source::Expr(parse_fn(s)?),
        (None, Some(p)) => Source::Grid(GridFunction::read_csv(BufReader::new(File::open(p)?))?),
        _ => return Err(Error::argument("give exactly one of --fn and --fn-csv")),
    };
    let points = spec.points()?;
    let local = matches!(spec.op, Op::BcLfd | Op::KgLfd);
    let mut w = csv::Writer::from_writer(Vec::new());
    if local {
        w.write_record(["t", "value", "status", "error_bar"])?;
    } else {
        w.write_record(["t", "value"])?;
    }
    let scheme = res.scheme()?;
    let f = source.integrand();
    let expr = || match &source {
        Source::Expr(e) => Ok(e),
        Source::Grid(_) => Err(Error::Unsupported(format!("{:?} needs a closed-form --fn", spec.op))),
    };
    for t in points {
        let fmt = |v: f64| format!("{v:.16e}");
        match spec.op {
            Op::BcLfd | Op::KgLfd => {
                let sigma: Direction = spec.sigma.parse()?;
                let mut cfg = res.local;
                if let Source::Grid(g) = &source {
                    cfg.domain = g.interval();
                }
                let est = match (spec.op, &source) {
                    (Op::BcLfd, Source::Expr(e)) => bc_lfd(e, spec.alpha()?, t, sigma, &cfg)?,
                    (Op::KgLfd, Source::Expr(e)) => kg_lfd(e, spec.alpha()?, t, sigma, &cfg)?,
                    _ => return Err(Error::Unsupported("local operators need a closed-form --fn".into())),
                };
                w.write_record([fmt(t), fmt(est.value), est.status.to_string(), fmt(est.error_bar)])?;
            }
            op => {
                let v = match op {
                    Op::Classical => expr()?.derivative()?.eval(t)?,
                    Op::RlInt => rl_integral(f, spec.alpha()?, spec.base, t, scheme)?,
                    Op::RlDeriv => rl_derivative(f, spec.alpha()?, spec.base, t, scheme)?,
                    Op::Caputo => caputo(f, spec.alpha()?, spec.base, t, scheme)?,
                    Op::Jumarie => jumarie(f, spec.alpha()?, t, scheme)?,
                    Op::Gl => gl_derivative(f, spec.alpha()?, spec.base, t, res.gl_nodes)?,
                    Op::Entropy => parse_fn(&spec.d)?.eval(t)? * crate::algebra::u_ln_abs_u(f.value(t)?),
                    Op::KonigMilman => {
                        let km = crate::frac_ops::OperatorHandle::KonigMilman { c: parse_fn(&spec.c)?, d: parse_fn(&spec.d)? };
                        km.apply(expr()?, t, res)?
                    }
                    Op::BcLfd | Op::KgLfd => unreachable!(),
                };
                w.write_record([fmt(t), fmt(v)])?;
            }
        }
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn seed_from_env() -> Result<u64> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s.trim().parse().map_err(|_| Error::argument(format!("{SEED_VAR} must be an unsigned integer, got {s:?}"))),
        Err(_) => Ok(0),
    }
}

/// Run the named claims and stream NDJSON reports.
pub fn check_reports(claim: &str, cfg: &CheckConfig) -> Result<Vec<ClaimReport>> {
    let selected: Vec<_> = if claim == "all" {
        claims::registry().iter().collect()
    } else {
        vec![claims::find(claim).ok_or_else(|| Error::argument(format!("unknown claim id `{claim}`")))?]
    };
    Ok(claims::run_claims(&selected, cfg))
}

fn check(claim: &str, resolution: Resolution, out: &mut dyn Write) -> Result<i32> {
    let cfg = CheckConfig { resolution, seed: seed_from_env()? };
    let reports = check_reports(claim, &cfg)?;
    for r in &reports {
        writeln!(out, "{}", serde_json::to_string(r).map_err(|e| Error::Parse(e.to_string()))?)?;
    }
    Ok(if reports.iter().all(|r| r.matched) { EXIT_OK } else { EXIT_UNEXPECTED })
}

#[derive(Serialize)]
struct SolveOutput {
    schema: u32,
    #[serde(flatten)]
    report: DerivationReport,
}

fn solve(algebra: AlgebraArg, n: Option<usize>, d: Option<usize>, out: &mut dyn Write) -> Result<()> {
    let a = match algebra {
        AlgebraArg::Pointwise => FiniteAlgebra::pointwise(n.ok_or_else(|| Error::argument("--n is required"))?)?,
        AlgebraArg::TruncatedPoly => FiniteAlgebra::truncated_polynomial(d.ok_or_else(|| Error::argument("--d is required"))?)?,
    };
    let space = solve_derivation_space(&a)?;
    let output = SolveOutput { schema: claims::SCHEMA_VERSION, report: space.report() };
    writeln!(out, "{}", serde_json::to_string(&output).map_err(|e| Error::Parse(e.to_string()))?)?;
    Ok(())
}
