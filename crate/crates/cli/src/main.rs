use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use regusamp::bounds::bound_report;
use regusamp::harness::{self, ErrorReport, ExperimentPlan};
use regusamp::reconstruct::{reconstruct_samples, SampleSet, Summation};
use regusamp::{default_params, Error, KernelEval, SamplingConfig, WindowKind, WindowSpec};

mod selftest;

const PRESETS: &[(&str, &str)] = &[
    ("fig2", include_str!("../presets/fig2.plan")),
    ("fig3", include_str!("../presets/fig3.plan")),
    ("fig5", include_str!("../presets/fig5.plan")),
    ("fig6", include_str!("../presets/fig6.plan")),
    ("fig8", include_str!("../presets/fig8.plan")),
    ("fig9", include_str!("../presets/fig9.plan")),
    ("fig10", include_str!("../presets/fig10.plan")),
];

const EXIT_SELFTEST: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RANGE: u8 = 3;
const EXIT_BOUND: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser)]
#[command(
    name = "regusamp",
    version,
    about = "Regularized Shannon sampling with localized sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the regularized sampling formula from a sample file.
    Reconstruct(ReconstructArgs),
    /// Print numeric and closed-form error constants.
    Bounds(BoundsArgs),
    /// Run an experiment plan and write its CSV report.
    Experiment(ExperimentArgs),
    /// Run the fast invariant checks.
    Selftest,
}

#[derive(Args)]
struct ConfigArgs {
    /// Bandwidth parameter.
    #[arg(long = "N")]
    n: u32,
    /// Oversampling parameter; `N(1 + lambda)` must be an integer.
    #[arg(long, value_parser = parse_real)]
    lambda: f64,
    /// Relative bandwidth `delta / N`, in (0, 1/2).
    #[arg(long, value_parser = parse_real)]
    tau: f64,
    /// Truncation parameter.
    #[arg(long)]
    m: u32,
    #[arg(long, value_parser = parse_kind)]
    window: WindowKind,
    /// Gaussian width.
    #[arg(long)]
    sigma: Option<f64>,
    /// Half order of the B-spline.
    #[arg(long)]
    s: Option<u32>,
    /// Shape parameter of the sinh-type window.
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// CSV with header `index,value`.
    #[arg(long)]
    samples: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
    /// Single evaluation point.
    #[arg(
        long,
        conflicts_with = "grid",
        required_unless_present = "grid",
        allow_hyphen_values = true
    )]
    at: Option<f64>,
    /// Equispaced points as `a,b,count`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Noise level for the robustness bounds.
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Grid size for the maximum of |eta|.
    #[arg(long, default_value_t = regusamp::bounds::E1_GRID)]
    grid_points: usize,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Plan file with `key = value` lines.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    plan: Option<PathBuf>,
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["fig2", "fig3", "fig5", "fig6", "fig8", "fig9", "fig10"]))]
    preset: Option<String>,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of logical processors.
    #[arg(long)]
    jobs: Option<usize>,
    /// Override the number of evaluation points.
    #[arg(long)]
    points: Option<usize>,
    /// Override the number of noise trials.
    #[arg(long)]
    trials: Option<usize>,
}

fn parse_real(s: &str) -> Result<f64, String> {
    let bad = || format!("`{s}` is not a number");
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            Ok(p / q)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

fn parse_kind(s: &str) -> Result<WindowKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Lib(Error::Io(e))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::IndexOutOfRange { .. } => EXIT_RANGE,
        Error::BoundViolation(_) => EXIT_BOUND,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn build(cfg_args: &ConfigArgs) -> Result<(SamplingConfig, WindowSpec), Failure> {
    let a = cfg_args;
    let cfg = SamplingConfig::new(a.n, a.lambda, a.tau, a.m)?;
    let given = [a.sigma.is_some(), a.s.is_some(), a.beta.is_some()];
    let allowed = match a.window {
        WindowKind::Rect => [false; 3],
        WindowKind::Gauss => [true, false, false],
        WindowKind::Bspline => [false, true, false],
        WindowKind::Sinh => [false, false, true],
    };
    if given.iter().zip(allowed).any(|(&g, ok)| g && !ok) {
        return Err(Failure::Usage(format!(
            "--sigma, --s and --beta apply only to gauss, bspline and sinh respectively (window is {})",
            a.window
        )));
    }
    let spec = match (a.window, a.sigma, a.s, a.beta) {
        (WindowKind::Gauss, Some(sigma), _, _) => WindowSpec::Gauss { sigma },
        (WindowKind::Bspline, _, Some(s), _) => WindowSpec::Bspline { s },
        (WindowKind::Sinh, _, _, Some(beta)) => WindowSpec::Sinh { beta },
        (kind, ..) => {
            let spec = default_params(kind, &cfg);
            match spec {
                WindowSpec::Gauss { sigma } => eprintln!("using default sigma = {sigma:.16e}"),
                WindowSpec::Bspline { s } => eprintln!("using default s = {s}"),
                WindowSpec::Sinh { beta } => eprintln!("using default beta = {beta:.16e}"),
                WindowSpec::Rect => {}
            }
            spec
        }
    };
    spec.validate()?;
    if cfg.wide_truncation() {
        eprintln!(
            "warning: 2m = {} exceeds L/4 = {}; the truncation reaches far into the sample grid",
            2 * cfg.m(),
            cfg.l() as f64 / 4.0
        );
    }
    Ok((cfg, spec))
}

fn grid_points(spec: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let usage = || Failure::Usage(format!("--grid expects `a,b,count`, got `{spec}`"));
    let [a, b, n] = parts[..] else {
        return Err(usage());
    };
    let a = parse_real(a).map_err(|_| usage())?;
    let b = parse_real(b).map_err(|_| usage())?;
    let n: usize = n.parse().map_err(|_| usage())?;
    Ok(match n {
        0 => return Err(usage()),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    })
}

fn reconstruct(args: &ReconstructArgs) -> Result<(), Failure> {
    let (cfg, spec) = build(&args.config)?;
    let ts = match (&args.grid, args.at) {
        (Some(g), _) => grid_points(g)?,
        (None, Some(t)) => vec![t],
        (None, None) => unreachable!("clap requires --at or --grid"),
    };
    let samples = SampleSet::read_csv(cfg, File::open(&args.samples)?)?;
    let kernel = KernelEval::new(spec, cfg)?;
    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(out, "t,value")?;
    for t in ts {
        let v = reconstruct_samples(&samples, &kernel, t, Summation::Plain)?;
        writeln!(out, "{t:.16e},{v:.16e}")?;
    }
    out.flush()?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x:.16e}"))
}

fn bounds(args: &BoundsArgs) -> Result<(), Failure> {
    let (cfg, spec) = build(&args.config)?;
    let r = bound_report(spec, &cfg, args.eps, args.grid_points)?;
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "window,m,tau,lambda,e1,e2,closed_form,eta_max,robustness_generic,robustness_specialized"
    )?;
    writeln!(
        out,
        "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e},{}",
        spec.kind(),
        cfg.m(),
        cfg.tau(),
        cfg.lambda(),
        r.e1,
        r.e2,
        opt(r.closed_form),
        r.eta_max,
        r.robustness.generic,
        opt(r.robustness.specialized)
    )?;
    Ok(())
}

fn write_report(report: &ErrorReport, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => harness::emit_csv(report, path)?,
        None => report.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn experiment(args: &ExperimentArgs) -> Result<(), Failure> {
    let mut plan = match (&args.plan, &args.preset) {
        (Some(path), _) => ExperimentPlan::load(path)?,
        (None, Some(name)) => {
            let text = PRESETS
                .iter()
                .find(|p| p.0 == name)
                .expect("clap restricts preset names")
                .1;
            ExperimentPlan::parse(text)?
        }
        (None, None) => unreachable!("clap requires --plan or --preset"),
    };
    if let Ok(seed) = std::env::var("REGUSAMP_SEED") {
        plan.seed = seed.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "REGUSAMP_SEED = `{seed}` is not an unsigned integer"
            ))
        })?;
    }
    if let Some(p) = args.points {
        plan.points = p;
    }
    if let Some(t) = args.trials {
        plan.trials = t;
    }
    if let Some(j) = args.jobs {
        if j == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match harness::run(&plan) {
        Ok(report) => write_report(&report, &args.out),
        Err(Error::BoundViolation(v)) => {
            write_report(&v.report, &args.out)?;
            Err(Error::BoundViolation(v).into())
        }
        Err(e) => Err(e.into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Reconstruct(a) => reconstruct(a),
        Command::Bounds(a) => bounds(a),
        Command::Experiment(a) => experiment(a),
        Command::Selftest => {
            return if selftest::run() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_SELFTEST)
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
