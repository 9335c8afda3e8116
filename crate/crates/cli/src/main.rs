//! `hellyfit`: largest rotated and scaled copy of a polytope inside an
//! intersection of half-spaces.

mod bench;
mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hellyfit::geometry::{Body, HPolytope, VPolytope};
use hellyfit::lab::{lower_bound_demo, Verdict, DEFAULT_ARC_VERTICES};
use hellyfit::rotation_net::{build_net_2d, build_net_sufficient, shape_hash, RotationNet};
use hellyfit::schema;
use hellyfit::solver::{alpha_reference, solve, FitResult, Method};

#[derive(Parser)]
#[command(name = "hellyfit", version, about)]
struct Cli {
    /// RNG seed; outputs other than timings depend only on it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit K (V-polytope or cap body JSON) into P (H-polytope JSON).
    Fit(FitArgs),
    /// Build a rotation net for K.
    Net(NetArgs),
    /// Cap-body demonstration that n-subsets do not certify the whole family.
    Demo(DemoArgs),
    /// Operation counts and timings on random tangent half-spaces, as CSV.
    Bench(BenchArgs),
    /// Reference value of the unrestricted optimum over a fine planar net.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct FitArgs {
    k: PathBuf,
    p: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value = "msw")]
    method: Method,
    /// Reuse a saved net instead of building one.
    #[arg(long)]
    net: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Also try the mirror image of K and keep the better fit.
    #[arg(long)]
    with_reflection: bool,
}

#[derive(Args)]
struct NetArgs {
    k: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 12)]
    sample_count: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [1000, 10000, 100000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [Method::Msw])]
    method: Vec<Method>,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    k: PathBuf,
    p: PathBuf,
    #[arg(long, default_value_t = 0.005)]
    fine_eps: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A verdict or certification failed; exit code 1.
#[derive(Debug)]
struct Failed(String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        bail!(hellyfit::Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

fn load_body(path: &Path) -> Result<VPolytope<f64>> {
    let k = match schema::parse_body::<f64>(&read(path)?).with_context(|| format!("parsing {}", path.display()))? {
        Body::Polygon(k) => k,
        Body::Arc(a) => a.discretize(DEFAULT_ARC_VERTICES)?,
    };
    k.check_full_dimensional()?;
    Ok(k)
}

fn load_container(path: &Path) -> Result<HPolytope<f64>> {
    Ok(schema::parse_hpolytope(&read(path)?).with_context(|| format!("parsing {}", path.display()))?)
}

fn build_net(k: &VPolytope<f64>, epsilon: f64) -> Result<RotationNet<f64>> {
    let net = match k.dim() {
        2 => build_net_2d(k, epsilon)?,
        d => build_net_sufficient(k, epsilon, d)?,
    };
    Ok(net.with_shape_hash(shape_hash(k)?))
}

fn load_net(path: &Path, k: &VPolytope<f64>) -> Result<RotationNet<f64>> {
    let net: RotationNet<f64> = schema::parse_net(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(h) = net.shape_hash() {
        if h != shape_hash(k)? {
            bail!(hellyfit::Error::InvalidParameter(format!("{} was built for a different shape", path.display())));
        }
    }
    Ok(net)
}

fn cmd_fit(a: &FitArgs, seed: u64) -> Result<()> {
    let k = load_body(&a.k)?;
    let p = load_container(&a.p)?;
    if k.dim() != p.dim() {
        bail!(hellyfit::Error::DimensionMismatch { expected: k.dim(), found: p.dim() });
    }
    let net = match &a.net {
        Some(path) => load_net(path, &k)?,
        None => {
            check_epsilon(a.epsilon)?;
            build_net(&k, a.epsilon)?
        }
    };
    let mut result: FitResult<f64> = solve(a.method, &k, &net, &p, seed)?;
    let mut shape = k.clone();
    if a.with_reflection {
        let mirror = k.reflect();
        let r = solve(a.method, &mirror, &net, &p, seed)?;
        if r.beta > result.beta {
            result = r;
            result.reflected = true;
            shape = mirror;
        }
    }
    if result.is_infeasible() {
        eprintln!("warning: P is empty; beta = 0");
    }
    emit(&schema::to_json(&result)?, a.out.as_deref())?;
    if let Some(path) = &a.svg {
        if k.dim() != 2 {
            bail!(hellyfit::Error::UnsupportedDimension { dim: k.dim(), reason: "SVG output is planar" });
        }
        let placed = result.placement.realize(&shape);
        fs::write(path, svg::fit_svg(&p, &placed, &result.basis)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_net(a: &NetArgs) -> Result<()> {
    check_epsilon(a.epsilon)?;
    let k = load_body(&a.k)?;
    let net = build_net(&k, a.epsilon)?;
    emit(&schema::net_to_json(&net)?, a.out.as_deref())
}

fn cmd_demo(a: &DemoArgs, seed: u64) -> Result<()> {
    let report = lower_bound_demo(a.n, a.sample_count, seed)?;
    emit(&schema::to_json(&report)?, a.out.as_deref())?;
    if let Some(path) = &a.svg {
        fs::write(path, svg::demo_svg(&report)).with_context(|| format!("writing {}", path.display()))?;
    }
    if report.verdict == Verdict::Fail {
        bail!(Failed(format!("demo failed for n = {}", a.n)));
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs, seed: u64) -> Result<()> {
    check_epsilon(a.epsilon)?;
    let rows = bench::run(&a.sizes, a.reps, &a.method, a.epsilon, seed)?;
    match &a.out {
        Some(path) => bench::write_csv(&rows, fs::File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => bench::write_csv(&rows, std::io::stdout().lock()),
    }
}

fn cmd_oracle(a: &OracleArgs, seed: u64) -> Result<()> {
    check_epsilon(a.fine_eps)?;
    let k = load_body(&a.k)?;
    let p = load_container(&a.p)?;
    let alpha = alpha_reference(&k, &p, a.fine_eps, seed)?;
    let value = if alpha.is_finite() { serde_json::json!(alpha) } else { serde_json::Value::Null };
    emit(&serde_json::to_string_pretty(&serde_json::json!({ "alpha_reference": value, "fine_eps": a.fine_eps }))?, a.out.as_deref())
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("HELLYFIT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| hellyfit::Error::InvalidParameter(format!("HELLYFIT_THREADS must be a count, got {v:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Failed>().is_some() {
        return 1;
    }
    match e.downcast_ref::<hellyfit::Error>() {
        Some(hellyfit::Error::SearchFailed(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = configure_threads().and_then(|()| match &cli.command {
        Command::Fit(a) => cmd_fit(a, cli.seed),
        Command::Net(a) => cmd_net(a),
        Command::Demo(a) => cmd_demo(a, cli.seed),
        Command::Bench(a) => cmd_bench(a, cli.seed),
        Command::Oracle(a) => cmd_oracle(a, cli.seed),
    });
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
