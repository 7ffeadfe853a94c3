//! The regularized Shannon sampling operator with localized sampling.

use std::f64::consts::PI;
use std::fmt;
use std::io::{Read, Write};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::{sinc, KernelEval};
use crate::windows::{SamplingConfig, WindowSpec};

/// Functions the harness knows how to sample.
#[derive(Clone)]
pub enum TestFunction {
    /// `√(2δ) sinc(2δπt)`, unit `L²` norm.
    SincBand {
        delta: f64,
    },
    /// `δ sinc²(δπt)`.
    SincSqBand {
        delta: f64,
    },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SincBand { delta } => write!(f, "SincBand {{ delta: {delta} }}"),
            Self::SincSqBand { delta } => write!(f, "SincSqBand {{ delta: {delta} }}"),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl TestFunction {
    pub fn sinc_band(delta: f64) -> Self {
        Self::SincBand { delta }
    }

    pub fn sinc_sq_band(delta: f64) -> Self {
        Self::SincSqBand { delta }
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::SincBand { delta } => (2.0 * delta).sqrt() * sinc(2.0 * delta * PI * t),
            Self::SincSqBand { delta } => {
                let s = sinc(delta * PI * t);
                delta * s * s
            }
            Self::Custom(f) => f(t),
        }
    }

    /// `‖f‖_{L²}` when known in closed form.
    pub fn l2_norm(&self) -> Option<f64> {
        match self {
            Self::SincBand { .. } => Some(1.0),
            Self::SincSqBand { delta } => Some((2.0 * delta / 3.0).sqrt()),
            Self::Custom(_) => None,
        }
    }
}

/// Read access to equispaced samples `f̃(ℓ/L)`.
pub trait Samples {
    /// Inclusive index range held.
    fn index_range(&self) -> (i64, i64);
    /// Value at `index`, which the caller guarantees lies inside `index_range`.
    fn get(&self, index: i64) -> f64;
}

/// Samples `f(ℓ/L)` over a contiguous index range, with optional stored perturbations.
#[derive(Debug, Clone)]
pub struct SampleSet {
    cfg: SamplingConfig,
    index_lo: i64,
    values: Vec<f64>,
    noise: Option<Vec<f64>>,
    noise_eps: f64,
}

impl SampleSet {
    pub fn from_values(cfg: SamplingConfig, index_lo: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidRange(
                "a sample set needs at least one value".into(),
            ));
        }
        Ok(Self {
            cfg,
            index_lo,
            values,
            noise: None,
            noise_eps: 0.0,
        })
    }

    pub fn cfg(&self) -> &SamplingConfig {
        &self.cfg
    }

    pub fn index_lo(&self) -> i64 {
        self.index_lo
    }

    pub fn index_hi(&self) -> i64 {
        self.index_lo + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn noise(&self) -> Option<&[f64]> {
        self.noise.as_deref()
    }

    pub fn noise_eps(&self) -> f64 {
        self.noise_eps
    }

    /// Copy carrying i.i.d. uniform perturbations on `(-eps, eps)` drawn from ChaCha8 seeded with `seed`.
    pub fn perturb(&self, eps: f64, seed: u64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidRange(format!(
                "noise bound eps = {eps} must be positive"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut noise = vec![0.0; self.values.len()];
        fill_uniform_noise(&mut rng, eps, &mut noise);
        Ok(Self {
            noise: Some(noise),
            noise_eps: eps,
            ..self.clone()
        })
    }

    /// View of `f(ℓ/L) + ε_ℓ`; identical to the clean set when unperturbed.
    pub fn noisy(&self) -> NoisyView<'_> {
        NoisyView(self)
    }

    pub fn read_csv<R: Read>(cfg: SamplingConfig, reader: R) -> Result<Self> {
        let mut rows = Vec::new();
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers().map_err(csv_error)?.clone();
        if headers.len() < 2 || &headers[0] != "index" || &headers[1] != "value" {
            return Err(Error::Parse(
                "sample CSV must start with header `index,value`".into(),
            ));
        }
        for rec in rdr.records() {
            let rec = rec.map_err(csv_error)?;
            let index: i64 = rec[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad sample index `{}`", &rec[0])))?;
            let value: f64 = rec[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad sample value `{}`", &rec[1])))?;
            rows.push((index, value));
        }
        rows.sort_by_key(|r| r.0);
        let Some(&(lo, _)) = rows.first() else {
            return Err(Error::Parse("sample CSV holds no rows".into()));
        };
        for (i, &(index, _)) in rows.iter().enumerate() {
            if index != lo + i as i64 {
                return Err(Error::Parse(format!(
                    "sample indices must be contiguous; expected {} but found {index}",
                    lo + i as i64
                )));
            }
        }
        Self::from_values(cfg, lo, rows.into_iter().map(|r| r.1).collect())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "index,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{:.16e}", self.index_lo + i as i64, v)?;
        }
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

impl Samples for SampleSet {
    fn index_range(&self) -> (i64, i64) {
        (self.index_lo, self.index_hi())
    }

    fn get(&self, index: i64) -> f64 {
        self.values[(index - self.index_lo) as usize]
    }
}

pub struct NoisyView<'a>(&'a SampleSet);

impl Samples for NoisyView<'_> {
    fn index_range(&self) -> (i64, i64) {
        self.0.index_range()
    }

    fn get(&self, index: i64) -> f64 {
        let i = (index - self.0.index_lo) as usize;
        match &self.0.noise {
            Some(n) => self.0.values[i] + n[i],
            None => self.0.values[i],
        }
    }
}

/// Fills `out` with uniform draws on the open interval `(-eps, eps)`.
pub fn fill_uniform_noise(rng: &mut impl Rng, eps: f64, out: &mut [f64]) {
    for slot in out {
        loop {
            let u: f64 = rng.gen();
            if u > 0.0 {
                *slot = (2.0 * u - 1.0) * eps;
                break;
            }
        }
    }
}

/// Evaluates `f` at `ℓ/L` for `ℓ = lo..=hi`.
pub fn sample(f: &TestFunction, cfg: &SamplingConfig, lo: i64, hi: i64) -> Result<SampleSet> {
    if lo > hi {
        return Err(Error::InvalidRange(format!(
            "sample range {lo}..={hi} is empty"
        )));
    }
    let l = cfg.l() as f64;
    let values = (lo..=hi).map(|i| f.eval(i as f64 / l)).collect();
    SampleSet::from_values(*cfg, lo, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Summation {
    #[default]
    Plain,
    Compensated,
}

/// Kernel weights `ψ(t − ℓ/L)` for the indices `first..first + weights.len()`.
#[derive(Debug, Clone, Default)]
pub struct LocalWeights {
    pub first: i64,
    pub weights: Vec<f64>,
}

impl KernelEval {
    /// Fills `out` with the local weights at `t`. On-grid `t` yields a single unit weight.
    pub fn weights_into(&self, t: f64, out: &mut LocalWeights) {
        let cfg = self.cfg();
        let l = cfg.l() as f64;
        let m = cfg.m() as i64;
        let x = t * l;
        let nearest = x.round();
        out.weights.clear();
        if (x - nearest).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            out.first = nearest as i64;
            out.weights.push(1.0);
            return;
        }
        let k = x.floor();
        let frac = x - k;
        out.first = k as i64 - m + 1;
        // sin(π frac) = sin(π (1 − frac)); the reflected argument keeps full relative precision.
        let s = (PI * frac.min(1.0 - frac)).sin() / PI;
        let window = self.window();
        for j in (-m + 1)..=m {
            let d = frac - j as f64;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            out.weights.push(sign * s / d * window.eval_grid(d));
        }
    }

    pub fn weights(&self, t: f64) -> LocalWeights {
        let mut w = LocalWeights::default();
        self.weights_into(t, &mut w);
        w
    }
}

fn check_range<S: Samples + ?Sized>(s: &S, lo: i64, hi: i64) -> Result<()> {
    let (have_lo, have_hi) = s.index_range();
    if lo < have_lo || hi > have_hi {
        return Err(Error::IndexOutOfRange {
            need_lo: lo,
            need_hi: hi,
            have_lo,
            have_hi,
        });
    }
    Ok(())
}

/// Sums `weights · samples`, pairing terms from both ends of the window inward.
pub fn apply_weights<S: Samples + ?Sized>(s: &S, w: &LocalWeights, mode: Summation) -> Result<f64> {
    let n = w.weights.len() as i64;
    check_range(s, w.first, w.first + n - 1)?;
    let mut sum = 0.0;
    let mut comp = 0.0;
    let (mut lo, mut hi) = (0i64, n - 1);
    let mut add = |i: i64| {
        let term = w.weights[i as usize] * s.get(w.first + i);
        match mode {
            Summation::Plain => sum += term,
            Summation::Compensated => {
                let y = term - comp;
                let t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
        }
    };
    while lo <= hi {
        add(lo);
        if hi != lo {
            add(hi);
        }
        lo += 1;
        hi -= 1;
    }
    Ok(sum)
}

/// `(R_{φ,m} f)(t)` from any sample source.
pub fn reconstruct_samples<S: Samples + ?Sized>(
    s: &S,
    kernel: &KernelEval,
    t: f64,
    mode: Summation,
) -> Result<f64> {
    let w = kernel.weights(t);
    if w.weights.len() == 1 {
        check_range(s, w.first, w.first)?;
        return Ok(s.get(w.first));
    }
    apply_weights(s, &w, mode)
}

/// `(R_{φ,m} f)(t)` with a prepared kernel.
pub fn reconstruct_with(
    ss: &SampleSet,
    kernel: &KernelEval,
    t: f64,
    use_noisy: bool,
) -> Result<f64> {
    if use_noisy {
        reconstruct_samples(&ss.noisy(), kernel, t, Summation::Plain)
    } else {
        reconstruct_samples(ss, kernel, t, Summation::Plain)
    }
}

/// `(R_{φ,m} f)(t)` for the window `w` on the sample set's configuration.
pub fn reconstruct_at(ss: &SampleSet, w: WindowSpec, t: f64, use_noisy: bool) -> Result<f64> {
    let kernel = KernelEval::new(w, *ss.cfg())?;
    reconstruct_with(ss, &kernel, t, use_noisy)
}

/// The truncated Shannon series with the rectangular window.
pub fn classical_truncated(ss: &SampleSet, t: f64) -> Result<f64> {
    reconstruct_at(ss, WindowSpec::Rect, t, false)
}
