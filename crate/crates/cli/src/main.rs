//! Command-line front end for `leja-logdet`.

mod output;
mod source;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use leja_logdet::gmrf::{analytic_logdet_curve, argmax_theta, likelihood_curve, sample_gmrf, theta_grid, SAMPLER_MAX_SIDE};
use leja_logdet::sparse::{write_matrix_market, MmSymmetry};
use leja_logdet::spectral::KrylovOptions;
use leja_logdet::{
    estimate_logdet, generate_fast_leja, BoundsSpec, EpsFloor, LejaSequence, Method, ReductionMode, ScalingChoice,
    Settings,
};

use output::{EstimateOutput, Format, ResolvedConfig};
use source::{best_oracle, exact_logdet, GenSpec, Source};

/// Exit status when the run succeeded but produced warnings.
const EXIT_WARNINGS: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "leja-logdet", version, about = "Log-determinants of sparse SPD matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate log det of one matrix.
    Estimate(EstimateArgs),
    /// Log-likelihood scan over θ for a sampled lattice GMRF.
    GmrfLikelihood(GmrfArgs),
    /// Compare methods over a family of generated matrices.
    Bench(BenchArgs),
    /// Write a generated matrix in Matrix Market format.
    Gen(GenArgs),
    /// Write fast Léja points on [-2, 2].
    Leja(LejaArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct MatrixArg {
    /// Matrix Market file holding a symmetric positive definite matrix.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Generated matrix: pentadiagonal:N[:SEED] or gmrf:G:THETA.
    #[arg(long = "gen")]
    generate: Option<GenSpec>,
}

impl MatrixArg {
    fn source(&self) -> Source {
        match (&self.matrix, self.generate) {
            (Some(path), _) => Source::File(path.clone()),
            (None, Some(spec)) => Source::Generated(spec),
            (None, None) => unreachable!("clap enforces one matrix source"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BoundsArg {
    Gershgorin,
    Lanczos,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum SVal {
    Center,
    HalfMax,
    Value(f64),
}

fn parse_s_val(s: &str) -> Result<SVal, String> {
    match s {
        "center" => Ok(SVal::Center),
        "half-max" => Ok(SVal::HalfMax),
        _ => s
            .parse::<f64>()
            .map(SVal::Value)
            .map_err(|_| format!("expected center, half-max or a number, got '{s}'")),
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    matrix: MatrixArg,
    #[arg(long, default_value = "leja-hutchpp", value_parser = parse_method)]
    method: Method,
    /// Matrix-function queries for Hutch++ and Hutchinson.
    #[arg(long, default_value_t = 12)]
    queries: usize,
    /// Probe vectors for SLQ.
    #[arg(long, default_value_t = 30)]
    probes: usize,
    /// Lanczos steps per SLQ probe.
    #[arg(long, default_value_t = 40)]
    slq_degree: usize,
    /// Relative stopping tolerance of each Newton series.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, default_value_t = 400)]
    max_degree: usize,
    /// Taylor expansion point: center, half-max or a number.
    #[arg(long, default_value = "center", value_parser = parse_s_val)]
    s_val: SVal,
    #[arg(long, value_enum, default_value_t = BoundsArg::Gershgorin)]
    bounds: BoundsArg,
    /// Use [LAMBDA_MIN, LAMBDA_MAX] as the spectral interval.
    #[arg(long, requires = "lambda_max")]
    lambda_min: Option<f64>,
    #[arg(long, requires = "lambda_min")]
    lambda_max: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Sequential reductions, giving bitwise reproducible results.
    #[arg(long)]
    deterministic: bool,
    /// Also compute an exact reference with the cheapest applicable oracle.
    #[arg(long)]
    exact: bool,
    /// Largest dimension for the dense Cholesky oracle.
    #[arg(long, default_value_t = leja_logdet::oracle::DEFAULT_DENSE_CAP)]
    dense_cap: usize,
}

#[derive(Args, Debug)]
struct GmrfArgs {
    /// Grid side; the field has g² sites.
    #[arg(long, default_value_t = 64)]
    g: usize,
    /// Parameter used to draw the sample.
    #[arg(long, default_value_t = -0.22, allow_negative_numbers = true)]
    theta_true: f64,
    #[arg(long, default_value_t = -0.26, allow_negative_numbers = true)]
    grid_start: f64,
    #[arg(long, default_value_t = -0.14, allow_negative_numbers = true)]
    grid_stop: f64,
    #[arg(long, default_value_t = 0.01)]
    grid_step: f64,
    #[arg(long, default_value_t = 12)]
    queries: usize,
    /// Seed for the sample and, offset by one, for the estimator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long)]
    deterministic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Family {
    Pentadiagonal,
    Gmrf(f64),
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s.split_once(':') {
        None if s == "pentadiagonal" => Ok(Family::Pentadiagonal),
        Some(("gmrf", theta)) => theta.parse().map(Family::Gmrf).map_err(|_| format!("bad theta '{theta}'")),
        _ => Err(format!("expected pentadiagonal or gmrf:THETA, got '{s}'")),
    }
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// pentadiagonal (sizes are n) or gmrf:THETA (sizes are grid sides).
    #[arg(long, default_value = "pentadiagonal", value_parser = parse_family)]
    family: Family,
    #[arg(long, value_delimiter = ',', default_value = "10000,100000")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "leja-hutchpp,slq", value_parser = parse_method)]
    methods: Vec<Method>,
    /// Runs per method and size, with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 3)]
    repetitions: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 12)]
    queries: usize,
    #[arg(long, default_value_t = 30)]
    probes: usize,
    #[arg(long, default_value_t = 40)]
    slq_degree: usize,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long)]
    deterministic: bool,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// pentadiagonal:N[:SEED] or gmrf:G:THETA.
    spec: GenSpec,
    #[arg(long)]
    out: PathBuf,
    /// Store every entry instead of the lower triangle.
    #[arg(long)]
    general: bool,
}

#[derive(Args, Debug)]
struct LejaArgs {
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn reduction(deterministic: bool) -> ReductionMode {
    if deterministic {
        ReductionMode::Sequential
    } else {
        ReductionMode::Parallel
    }
}

fn output_writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn estimate(args: &EstimateArgs) -> Result<bool> {
    let src = args.matrix.source();
    let q = src.load()?;
    let gmrf = src.gmrf();
    let bounds = match (args.lambda_min, args.lambda_max, args.bounds) {
        (Some(lambda_min), Some(lambda_max), _) => BoundsSpec::Supplied { lambda_min, lambda_max },
        (_, _, BoundsArg::Gershgorin) => BoundsSpec::Gershgorin(EpsFloor::default()),
        (_, _, BoundsArg::Lanczos) => BoundsSpec::Lanczos(KrylovOptions { seed: args.seed, ..Default::default() }),
    };
    let scaling = match args.s_val {
        SVal::Center => ScalingChoice::OptimalCenter,
        SVal::HalfMax => ScalingChoice::HalfLambdaMax,
        SVal::Value(s) => ScalingChoice::Explicit(s),
    };
    let settings = Settings {
        method: args.method,
        queries: args.queries,
        probes: args.probes,
        slq_degree: args.slq_degree,
        tol: args.tol,
        max_degree: args.max_degree,
        scaling,
        bounds,
        seed: args.seed,
        reduction: reduction(args.deterministic),
        dense_cap: args.dense_cap,
        gmrf,
        ..Default::default()
    };
    let mut report = estimate_logdet(&q, &settings)?;

    let oracle = if args.exact { best_oracle(&q, gmrf, args.dense_cap) } else { None };
    if args.exact && oracle.is_none() {
        report.warnings.push("no exact oracle is feasible for this matrix".into());
    }
    let exact = oracle.map(|m| exact_logdet(&q, m, gmrf, args.dense_cap)).transpose()?;
    let rel_error = exact.map(|e| (report.estimate - e).abs() / e.abs().max(f64::MIN_POSITIVE));

    let s_val = match args.s_val {
        SVal::Center => "center".to_string(),
        SVal::HalfMax => "half-max".to_string(),
        SVal::Value(s) => s.to_string(),
    };
    let bounds_name = match bounds {
        BoundsSpec::Supplied { .. } => "supplied",
        BoundsSpec::Gershgorin(_) => "gershgorin",
        BoundsSpec::Lanczos(_) => "lanczos",
    };
    let out = EstimateOutput {
        config: ResolvedConfig {
            matrix: src.describe(),
            method: args.method,
            queries: args.queries,
            probes: args.probes,
            slq_degree: args.slq_degree,
            tol: args.tol,
            max_degree: args.max_degree,
            s_val,
            bounds: bounds_name.into(),
            seed: args.seed,
            reduction: settings.reduction,
            exact: oracle,
        },
        n: q.dim(),
        nnz: q.nnz(),
        report,
        exact,
        rel_error,
    };
    let mut w = output_writer(&None)?;
    w.write_all(out.render(args.format).as_bytes())?;
    w.flush()?;
    for warning in &out.report.warnings {
        eprintln!("warning: {warning}");
    }
    Ok(out.report.has_warnings())
}

fn gmrf_likelihood(args: &GmrfArgs) -> Result<bool> {
    let grid = theta_grid(args.grid_start, args.grid_stop, args.grid_step)?;
    let mut w = output_writer(&None)?;
    if args.g > SAMPLER_MAX_SIDE {
        eprintln!(
            "note: g = {} exceeds the sampler limit of {SAMPLER_MAX_SIDE}; writing the analytic log det curve only",
            args.g
        );
        writeln!(w, "theta,logdet_analytic")?;
        for (theta, logdet) in analytic_logdet_curve(args.g, &grid)? {
            writeln!(w, "{theta},{logdet}")?;
        }
        w.flush()?;
        return Ok(true);
    }
    let x = sample_gmrf(args.g, args.theta_true, args.seed)?;
    let mut opts = leja_logdet::LejaOptions { reduction: reduction(args.deterministic), ..Default::default() };
    opts.action.tol = args.tol;
    let rows = likelihood_curve(&x, args.g, &grid, args.queries, args.seed.wrapping_add(1), &opts)?;
    writeln!(w, "theta,loglik,logdet_est,quadform")?;
    for r in &rows {
        writeln!(w, "{},{},{},{}", r.theta, r.loglik, r.logdet_est, r.quadform)?;
    }
    w.flush()?;
    if let Some(best) = argmax_theta(&rows) {
        eprintln!("argmax theta = {best}");
    }
    Ok(false)
}

fn bench(args: &BenchArgs) -> Result<bool> {
    if args.repetitions == 0 {
        bail!("need at least one repetition");
    }
    let mut w = output_writer(&args.out)?;
    writeln!(w, "size,n,method,rep,seed,estimate,exact,rel_error,wall_time,matvecs,error")?;
    let mut any_error = false;
    for &size in &args.sizes {
        let (spec, gmrf) = match args.family {
            Family::Pentadiagonal => (GenSpec::Pentadiagonal { n: size, seed: args.seed }, None),
            Family::Gmrf(theta) => (GenSpec::Gmrf { g: size, theta }, Some((size, theta))),
        };
        let q = match spec.build() {
            Ok(q) => q,
            Err(e) => {
                any_error = true;
                writeln!(w, "{size},,,,,,,,,,{}", output_error(&e))?;
                continue;
            }
        };
        let n = q.dim();
        let exact = best_oracle(&q, gmrf, leja_logdet::oracle::DEFAULT_DENSE_CAP)
            .and_then(|m| exact_logdet(&q, m, gmrf, leja_logdet::oracle::DEFAULT_DENSE_CAP).ok());
        for &method in &args.methods {
            for rep in 0..args.repetitions {
                let seed = args.seed + rep;
                let settings = Settings {
                    method,
                    queries: args.queries,
                    probes: args.probes,
                    slq_degree: args.slq_degree,
                    tol: args.tol,
                    seed,
                    reduction: reduction(args.deterministic),
                    gmrf,
                    ..Default::default()
                };
                let exact_col = exact.map(|e| e.to_string()).unwrap_or_default();
                match estimate_logdet(&q, &settings) {
                    Ok(r) => {
                        let rel = exact.map(|e| ((r.estimate - e).abs() / e.abs()).to_string()).unwrap_or_default();
                        writeln!(
                            w,
                            "{size},{n},{method},{rep},{seed},{},{exact_col},{rel},{},{},",
                            r.estimate, r.wall_time, r.matvecs_total
                        )?;
                    }
                    Err(e) => {
                        any_error = true;
                        writeln!(w, "{size},{n},{method},{rep},{seed},,{exact_col},,,,{}", output_error(&e))?;
                    }
                }
                w.flush()?;
            }
        }
    }
    Ok(any_error)
}

fn output_error(e: &dyn std::fmt::Display) -> String {
    format!("\"{}\"", e.to_string().replace('"', "'"))
}

fn gen(args: &GenArgs) -> Result<bool> {
    let q = args.spec.build()?;
    let symmetry = if args.general { MmSymmetry::General } else { MmSymmetry::Symmetric };
    write_matrix_market(&args.out, &q, symmetry).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(false)
}

fn leja(args: &LejaArgs) -> Result<bool> {
    let seq: LejaSequence<f64> = generate_fast_leja(args.count)?;
    match &args.out {
        Some(path) => seq.write_text(path)?,
        None => {
            let mut w = output_writer(&None)?;
            for p in seq.points() {
                writeln!(w, "{p}")?;
            }
            w.flush()?;
        }
    }
    Ok(false)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Estimate(a) => estimate(a),
        Command::GmrfLikelihood(a) => gmrf_likelihood(a),
        Command::Bench(a) => bench(a),
        Command::Gen(a) => gen(a),
        Command::Leja(a) => leja(a),
    };
    match outcome {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(EXIT_WARNINGS),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
