use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use lorentz_wishart::hypothesis::{equality_test, subcone_test};
use lorentz_wishart::verify::{calibrate_null, run_suite, SuiteConfig};
use lorentz_wishart::wishart::log_density;
use lorentz_wishart::{ConePoint, SubconeSplit, WishartModel};
use lorentz_wishart_cli::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "lorentz-wishart", version, about = "Wishart laws on Lorentz cones and invariant tests of their scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw from W_{eta,sigma}.
    Sample(SampleArgs),
    /// Evaluate the density at each observation.
    Density(DensityArgs),
    /// Test that sigma lies in the subcone generated by the first m0 coordinates of W.
    TestT1(T1Args),
    /// Test that two observations share the same scale.
    TestT2(T2Args),
    /// Run the Monte Carlo and quadrature verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Model {
    /// Dimension of W.
    #[arg(long)]
    m: Option<usize>,
    /// Shape parameter.
    #[arg(long)]
    eta: f64,
    /// Scale as JSON {"lambda": .., "w": [..]} or @file; defaults to the unit element.
    #[arg(long)]
    sigma: Option<String>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    model: Model,
    /// Number of draws.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    model: Model,
    /// Observations CSV.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct T1Args {
    #[arg(long)]
    m: Option<usize>,
    /// Dimension of W0.
    #[arg(long)]
    m0: usize,
    #[arg(long)]
    eta: f64,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct T2Args {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    eta: f64,
    /// Observations CSV with exactly two rows.
    #[arg(long = "in")]
    input: PathBuf,
    /// Size of the simulated null calibration.
    #[arg(long, default_value_t = 20_000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    m0: usize,
    #[arg(long)]
    eta: f64,
    #[arg(long, default_value_t = 11)]
    seed: u64,
    /// Write the JSON-lines reports here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn build_model(model: &Model) -> Result<WishartModel> {
    let sigma = match &model.sigma {
        Some(s) => parse_sigma(s)?,
        None => ConePoint::identity(model.m.ok_or_else(|| anyhow!("--m is required when --sigma is absent"))?),
    };
    if let Some(m) = model.m {
        if sigma.m() != m {
            bail!("sigma has m = {}, but --m is {m}", sigma.m());
        }
    }
    Ok(WishartModel::new(model.eta, sigma)?)
}

fn read_interior(path: &Path, m: Option<usize>) -> Result<Vec<ConePoint>> {
    let obs = read_observations_file(path, m)?;
    for (i, x) in obs.iter().enumerate() {
        if !x.contains() {
            bail!("{}: observation on line {} not in Lorentz cone", path.display(), i + 2);
        }
    }
    Ok(obs)
}

fn cmd_sample(a: &SampleArgs) -> Result<ExitCode> {
    let model = build_model(&a.model)?;
    let draws = model.sample(a.n, &mut ChaCha8Rng::seed_from_u64(a.seed))?;
    let mut out = open_out(&a.out)?;
    write_observations(&mut out, &draws, a.format)?;
    out.flush()?;
    let mut mean = vec![0.0; model.space().dim()];
    for x in &draws {
        for (s, v) in mean.iter_mut().zip(x.to_vec()) {
            *s += v / a.n as f64;
        }
    }
    let summary = format!(
        "n = {}; sample mean = [{}]; sigma = [{}]",
        a.n,
        mean.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(", "),
        model.sigma().to_vec().iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(", ")
    );
    if a.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_density(a: &DensityArgs) -> Result<ExitCode> {
    let model = build_model(&a.model)?;
    let obs = read_observations_file(&a.input, Some(model.space().m()))?;
    let vals = obs.iter().map(|x| log_density(&model, x)).collect::<Result<Vec<_>, _>>()?;
    let mut out = open_out(&a.out)?;
    match a.format {
        Format::Csv => {
            writeln!(out, "log_density,density")?;
            for v in &vals {
                writeln!(out, "{},{}", fmt_f64(*v), fmt_f64(v.exp()))?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = obs
                .iter()
                .zip(&vals)
                .map(|(x, v)| json!({ "x": cone_point_to_json(x), "log_density": v, "density": v.exp() }))
                .collect();
            writeln!(out, "{}", to_json_string(&Value::Array(rows)))?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn emit_reports(out: &Option<PathBuf>, reports: Vec<Value>) -> Result<()> {
    let v = if reports.len() == 1 { reports.into_iter().next().unwrap() } else { Value::Array(reports) };
    let mut w = open_out(out)?;
    writeln!(w, "{}", to_json_string(&v))?;
    w.flush()?;
    Ok(())
}

fn cmd_test_t1(a: &T1Args) -> Result<ExitCode> {
    let obs = read_interior(&a.input, a.m)?;
    if obs.is_empty() {
        bail!("{}: no observations", a.input.display());
    }
    let split = SubconeSplit::new(obs[0].m(), a.m0)?;
    let reports = obs
        .iter()
        .map(|x| subcone_test(x, split, a.eta).map(|r| t1_report(&r, &[])))
        .collect::<Result<Vec<_>, _>>()?;
    emit_reports(&a.out, reports)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_test_t2(a: &T2Args) -> Result<ExitCode> {
    let obs = read_interior(&a.input, a.m)?;
    if obs.len() != 2 {
        bail!("{}: T2 needs exactly 2 observations, found {}", a.input.display(), obs.len());
    }
    let m = obs[0].m();
    let calib = calibrate_null(m, a.eta, a.n, a.seed)?;
    let r = equality_test(&obs[0], &obs[1], a.eta, &calib)?;
    emit_reports(&a.out, vec![t2_report(&r, m, a.n, &[])])?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode> {
    let cfg = SuiteConfig { m: a.m, m0: a.m0, eta: a.eta, seed: a.seed };
    SubconeSplit::new(a.m, a.m0)?;
    WishartModel::standard(a.eta, a.m)?;
    let reports = run_suite(&cfg)?;
    let mut w = open_out(&a.out)?;
    for r in &reports {
        writeln!(w, "{}", to_json_string(&check_report_json(r)))?;
    }
    w.flush()?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    if failed.is_empty() {
        eprintln!("all {} checks passed", reports.len());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} of {} checks failed: {}", failed.len(), reports.len(), failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Density(a) => cmd_density(a),
        Command::TestT1(a) => cmd_test_t1(a),
        Command::TestT2(a) => cmd_test_t2(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
