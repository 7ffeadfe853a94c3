//! Experiment plans, measured maximum errors and CSV output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{closed_form_bound, robustness_bound};
use crate::error::{BoundViolation, Error, Result};
use crate::kernel::KernelEval;
use crate::reconstruct::{
    apply_weights, fill_uniform_noise, sample, LocalWeights, Samples, Summation, TestFunction,
};
use crate::windows::{default_params, SamplingConfig, WindowKind};

/// Which test function a plan samples; its bandwidth follows each cell's `δ = τN`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    SincBand,
    SincSqBand,
}

impl Target {
    pub fn build(self, delta: f64) -> TestFunction {
        match self {
            Self::SincBand => TestFunction::sinc_band(delta),
            Self::SincSqBand => TestFunction::sinc_sq_band(delta),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sinc" | "sincband" | "sinc_band" => Ok(Self::SincBand),
            "sinc2" | "sincsqband" | "sinc_sq_band" => Ok(Self::SincSqBand),
            other => Err(Error::Parse(format!("unknown test function `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub test_fn: Target,
    pub n: u32,
    pub m_list: Vec<u32>,
    /// `(τ, λ)` pairs in iteration order.
    pub pairs: Vec<(f64, f64)>,
    pub windows: Vec<WindowKind>,
    /// Number of equidistant evaluation points on `[-1, 1]`, endpoints included.
    pub points: usize,
    pub trials: usize,
    /// Noise bound; zero selects the approximation experiment.
    pub eps: f64,
    pub seed: u64,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        Self {
            test_fn: Target::SincBand,
            n: 128,
            m_list: (2..=10).collect(),
            pairs: vec![(1.0 / 3.0, 1.0)],
            windows: vec![WindowKind::Gauss, WindowKind::Bspline, WindowKind::Sinh],
            points: 100_000,
            trials: 100,
            eps: 0.0,
            seed: 0,
        }
    }
}

fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad number `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            Ok(p / q)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

fn parse_int<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer `{}`", s.trim())))
}

fn items(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

fn parse_m_list(s: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for item in items(s) {
        match item.split_once("..=") {
            Some((a, b)) => out.extend(parse_int::<u32>(a)?..=parse_int::<u32>(b)?),
            None => out.push(parse_int(item)?),
        }
    }
    Ok(out)
}

impl ExperimentPlan {
    /// Parses `key = value` lines; `#` starts a comment, lists are comma separated.
    ///
    /// Keys: `test_fn`, `N`, `m_list`, `tau_list`, `lambda_list`, `pairs`
    /// (`tau:lambda` items, replacing the product of the two lists), `windows`,
    /// `S`, `trials`, `eps`, `seed`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut plan = Self::default();
        let mut taus: Option<Vec<f64>> = None;
        let mut lambdas: Option<Vec<f64>> = None;
        let mut pairs: Option<Vec<(f64, f64)>> = None;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", no + 1)))?;
            let value = value.trim();
            match key.trim() {
                "test_fn" => plan.test_fn = value.parse()?,
                "N" => plan.n = parse_int(value)?,
                "m_list" => plan.m_list = parse_m_list(value)?,
                "tau_list" => taus = Some(items(value).map(parse_real).collect::<Result<_>>()?),
                "lambda_list" => {
                    lambdas = Some(items(value).map(parse_real).collect::<Result<_>>()?)
                }
                "pairs" => {
                    let mut v = Vec::new();
                    for item in items(value) {
                        let (t, l) = item.split_once(':').ok_or_else(|| {
                            Error::Parse(format!("pair `{item}` must read tau:lambda"))
                        })?;
                        v.push((parse_real(t)?, parse_real(l)?));
                    }
                    pairs = Some(v);
                }
                "windows" => plan.windows = items(value).map(str::parse).collect::<Result<_>>()?,
                "S" => plan.points = parse_int(value)?,
                "trials" => plan.trials = parse_int(value)?,
                "eps" => plan.eps = parse_real(value)?,
                "seed" => plan.seed = parse_int(value)?,
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown key `{other}`",
                        no + 1
                    )))
                }
            }
        }
        plan.pairs = match (pairs, taus, lambdas) {
            (Some(p), None, None) => p,
            (Some(_), _, _) => {
                return Err(Error::Parse(
                    "`pairs` cannot be combined with tau_list/lambda_list".into(),
                ))
            }
            (None, t, l) => {
                let t = t.unwrap_or_else(|| vec![1.0 / 3.0]);
                let l = l.unwrap_or_else(|| vec![1.0]);
                t.iter()
                    .flat_map(|&tau| l.iter().map(move |&lam| (tau, lam)))
                    .collect()
            }
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InvalidConfig(format!(
                "S = {} must be at least 2",
                self.points
            )));
        }
        if self.m_list.is_empty() || self.windows.is_empty() || self.pairs.is_empty() {
            return Err(Error::InvalidConfig(
                "m_list, windows and (tau, lambda) pairs must be nonempty".into(),
            ));
        }
        if !(self.eps >= 0.0) || !self.eps.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "eps = {} must be finite and >= 0",
                self.eps
            )));
        }
        if self.eps > 0.0 && self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        for cell in self.cells() {
            SamplingConfig::new(self.n, cell.lambda, cell.tau, cell.m)?;
        }
        Ok(())
    }

    /// Cells in output order: `(τ, λ)` pairs, then windows, then `m`.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &(tau, lambda) in &self.pairs {
            for &window in &self.windows {
                for &m in &self.m_list {
                    out.push(Cell {
                        window,
                        m,
                        tau,
                        lambda,
                    });
                }
            }
        }
        out
    }

    fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.points;
        (0..n).map(move |s| {
            if s + 1 == n {
                1.0
            } else {
                -1.0 + 2.0 * s as f64 / (n - 1) as f64
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub window: WindowKind,
    pub m: u32,
    pub tau: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub window: WindowKind,
    pub m: u32,
    pub tau: f64,
    pub lambda: f64,
    pub measured: f64,
    /// `None` when no bound applies to this cell.
    pub bound: Option<f64>,
}

impl ReportRow {
    pub fn bound_valid(&self) -> bool {
        self.bound.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErrorReport {
    pub rows: Vec<ReportRow>,
}

impl ErrorReport {
    /// Indices of rows whose measured error exceeds a valid bound.
    pub fn violations(&self) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.bound.is_some_and(|b| !(r.measured <= b)))
            .map(|(i, _)| i)
            .collect()
    }

    /// Fails with [`Error::BoundViolation`] if any row breaks its bound.
    pub fn check(self) -> Result<Self> {
        let offending = self.violations();
        if offending.is_empty() {
            Ok(self)
        } else {
            Err(Error::BoundViolation(Box::new(BoundViolation {
                report: self,
                offending,
            })))
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("window,m,tau,lambda,measured,bound,bound_valid\n");
        for r in &self.rows {
            let bound = r
                .bound
                .map_or_else(|| "NA".to_string(), |b| format!("{b:.16e}"));
            let _ = writeln!(
                s,
                "{},{},{:.16e},{:.16e},{:.16e},{},{}",
                r.window,
                r.m,
                r.tau,
                r.lambda,
                r.measured,
                bound,
                r.bound_valid()
            );
        }
        s
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}

pub fn emit_csv(report: &ErrorReport, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, report.to_csv())?;
    Ok(())
}

struct Prepared {
    cfg: SamplingConfig,
    f: TestFunction,
    kernel: KernelEval,
    samples: crate::reconstruct::SampleSet,
}

fn prepare(plan: &ExperimentPlan, cell: &Cell) -> Result<Prepared> {
    let cfg = SamplingConfig::new(plan.n, cell.lambda, cell.tau, cell.m)?;
    let f = plan.test_fn.build(cfg.delta());
    let reach = cfg.l() as i64 + cfg.m() as i64;
    let samples = sample(&f, &cfg, -reach, reach)?;
    let kernel = KernelEval::new(default_params(cell.window, &cfg), cfg)?;
    Ok(Prepared {
        cfg,
        f,
        kernel,
        samples,
    })
}

fn approximation_cell(plan: &ExperimentPlan, cell: &Cell) -> Result<ReportRow> {
    let p = prepare(plan, cell)?;
    let mut w = LocalWeights::default();
    let mut worst: f64 = 0.0;
    for t in plan.grid() {
        p.kernel.weights_into(t, &mut w);
        let r = apply_weights(&p.samples, &w, Summation::Plain)?;
        worst = worst.max((p.f.eval(t) - r).abs());
    }
    let norm = p.f.l2_norm().unwrap_or(1.0);
    let bound = match closed_form_bound(cell.window, &p.cfg) {
        Ok(b) => Some(b * norm),
        Err(Error::ConditionViolated(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ReportRow {
        window: cell.window,
        m: cell.m,
        tau: cell.tau,
        lambda: cell.lambda,
        measured: worst,
        bound,
    })
}

// Noise-only samples laid out `[index][trial]` so one weight set serves every trial.
struct NoiseBlock<'a> {
    lo: i64,
    len: usize,
    trials: usize,
    data: &'a [f64],
}

fn perturbation_cell(plan: &ExperimentPlan, cell: &Cell, stream: u64) -> Result<ReportRow> {
    let p = prepare(plan, cell)?;
    let (lo, hi) = p.samples.index_range();
    let len = (hi - lo + 1) as usize;
    let trials = plan.trials;
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    rng.set_stream(stream);
    let mut by_trial = vec![0.0; len * trials];
    for chunk in by_trial.chunks_mut(len) {
        fill_uniform_noise(&mut rng, plan.eps, chunk);
    }
    let mut data = vec![0.0; len * trials];
    for t in 0..trials {
        for i in 0..len {
            data[i * trials + t] = by_trial[t * len + i];
        }
    }
    let block = NoiseBlock {
        lo,
        len,
        trials,
        data: &data,
    };
    let mut w = LocalWeights::default();
    let mut acc = vec![0.0; trials];
    let mut worst: f64 = 0.0;
    for t in plan.grid() {
        p.kernel.weights_into(t, &mut w);
        let first = w.first - block.lo;
        let last = first + w.weights.len() as i64 - 1;
        if first < 0 || last >= block.len as i64 {
            return Err(Error::IndexOutOfRange {
                need_lo: w.first,
                need_hi: w.first + w.weights.len() as i64 - 1,
                have_lo: lo,
                have_hi: hi,
            });
        }
        acc.iter_mut().for_each(|a| *a = 0.0);
        for (j, &wj) in w.weights.iter().enumerate() {
            let row = (first as usize + j) * block.trials;
            for (a, &e) in acc.iter_mut().zip(&block.data[row..row + block.trials]) {
                *a += wj * e;
            }
        }
        worst = acc.iter().fold(worst, |m, a| m.max(a.abs()));
    }
    let rb = robustness_bound(p.kernel.window().spec(), &p.cfg, plan.eps)?;
    Ok(ReportRow {
        window: cell.window,
        m: cell.m,
        tau: cell.tau,
        lambda: cell.lambda,
        measured: worst,
        bound: Some(rb.best()),
    })
}

fn run_cells<F>(plan: &ExperimentPlan, f: F) -> Result<ErrorReport>
where
    F: Fn(&Cell, u64) -> Result<ReportRow> + Sync,
{
    plan.validate()?;
    let cells = plan.cells();
    let rows = cells
        .par_iter()
        .enumerate()
        .map(|(i, c)| f(c, i as u64))
        .collect::<Result<Vec<_>>>()?;
    ErrorReport { rows }.check()
}

/// Measured `max_t |f(t) − (R f)(t)|` per cell, paired with the closed-form bound.
pub fn run_approximation(plan: &ExperimentPlan) -> Result<ErrorReport> {
    if plan.eps != 0.0 {
        return Err(Error::InvalidConfig(
            "the approximation run needs eps = 0".into(),
        ));
    }
    run_cells(plan, |c, _| approximation_cell(plan, c))
}

/// Measured `max_t |(R f̃)(t) − (R f)(t)|` over all trials, paired with the robustness bound.
pub fn run_perturbation(plan: &ExperimentPlan) -> Result<ErrorReport> {
    if !(plan.eps > 0.0) {
        return Err(Error::InvalidConfig(
            "the perturbation run needs eps > 0".into(),
        ));
    }
    run_cells(plan, |c, i| perturbation_cell(plan, c, i))
}

/// Dispatches on `plan.eps`.
pub fn run(plan: &ExperimentPlan) -> Result<ErrorReport> {
    if plan.eps > 0.0 {
        run_perturbation(plan)
    } else {
        run_approximation(plan)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_plan() -> ExperimentPlan {
        ExperimentPlan {
            m_list: vec![2, 4],
            windows: vec![WindowKind::Gauss, WindowKind::Sinh],
            points: 501,
            trials: 2,
            ..ExperimentPlan::default()
        }
    }

    #[test]
    fn parse_plan_file() {
        let text = "# demo\ntest_fn = sinc2\nN = 256\nm_list = 2..=4, 7\ntau_list = 1/20, 0.45\nlambda_list = 1\nwindows = sinh, gauss\nS = 100\neps = 1e-3\ntrials = 3\nseed = 7\n";
        let p = ExperimentPlan::parse(text).unwrap();
        assert_eq!(p.test_fn, Target::SincSqBand);
        assert_eq!(p.m_list, vec![2, 3, 4, 7]);
        assert_eq!(p.pairs, vec![(0.05, 1.0), (0.45, 1.0)]);
        assert_eq!(p.windows, vec![WindowKind::Sinh, WindowKind::Gauss]);
        assert_eq!((p.points, p.trials, p.seed, p.eps), (100, 3, 7, 1e-3));
        let paired = ExperimentPlan::parse("pairs = 1/3:0, 1/3:2").unwrap();
        assert_eq!(paired.pairs, vec![(1.0 / 3.0, 0.0), (1.0 / 3.0, 2.0)]);
        assert!(ExperimentPlan::parse("colour = red").is_err());
        assert!(ExperimentPlan::parse("S = 1").is_err());
        assert!(ExperimentPlan::parse("pairs = 1/3:1\ntau_list = 0.1").is_err());
        assert!(ExperimentPlan::parse("lambda_list = 0.3").is_err());
    }

    #[test]
    fn csv_format() {
        let empty = ErrorReport::default();
        assert_eq!(
            empty.to_csv(),
            "window,m,tau,lambda,measured,bound,bound_valid\n"
        );
        let r = ErrorReport {
            rows: vec![ReportRow {
                window: WindowKind::Bspline,
                m: 3,
                tau: 0.45,
                lambda: 1.0,
                measured: 0.1,
                bound: None,
            }],
        };
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.lines().nth(1).unwrap().ends_with(",NA,false"));
        assert!(csv.contains("1.0000000000000001e-1"));
    }

    #[test]
    fn approximation_rows_in_order_and_dominated() {
        let report = run_approximation(&small_plan()).unwrap();
        let labels: Vec<_> = report.rows.iter().map(|r| (r.window, r.m)).collect();
        assert_eq!(
            labels,
            vec![
                (WindowKind::Gauss, 2),
                (WindowKind::Gauss, 4),
                (WindowKind::Sinh, 2),
                (WindowKind::Sinh, 4)
            ]
        );
        assert!(report.violations().is_empty());
    }

    #[test]
    fn perturbation_is_deterministic() {
        let plan = ExperimentPlan {
            eps: 1e-3,
            ..small_plan()
        };
        let a = run_perturbation(&plan).unwrap();
        let b = run_perturbation(&plan).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a
            .rows
            .iter()
            .all(|r| r.measured > 0.0 && r.measured <= r.bound.unwrap()));
        assert!(run_approximation(&plan).is_err());
    }

    #[test]
    fn violation_is_loud() {
        let report = ErrorReport {
            rows: vec![ReportRow {
                window: WindowKind::Gauss,
                m: 2,
                tau: 0.25,
                lambda: 1.0,
                measured: 2.0,
                bound: Some(1.0),
            }],
        };
        match report.check() {
            Err(Error::BoundViolation(v)) => assert_eq!(v.offending, vec![0]),
            other => panic!("expected a violation, got {other:?}"),
        }
    }
}
