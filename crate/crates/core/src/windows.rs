//! Sampling configurations and the window family.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernel::sinc;
use crate::specfun::{bessel_i1_scaled, centered_bspline, j1_over_sqrt, m2s_at_zero_f64};

/// Bandwidth, oversampling and truncation parameters.
///
/// `L = N (1 + λ)` must be an integer, and `δ = τ N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    n: u32,
    lambda: f64,
    tau: f64,
    m: u32,
    l: u32,
}

impl SamplingConfig {
    pub fn new(n: u32, lambda: f64, tau: f64, m: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidConfig("N must be at least 1".into()));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "lambda = {lambda} must be finite and >= 0"
            )));
        }
        if !(tau > 0.0 && tau < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "tau = {tau} must lie in (0, 1/2)"
            )));
        }
        if m < 2 {
            return Err(Error::InvalidConfig(format!("m = {m} must be at least 2")));
        }
        let l_real = n as f64 * (1.0 + lambda);
        let l_round = l_real.round();
        if (l_real - l_round).abs() > 1e-9 * l_real || l_round > u32::MAX as f64 {
            return Err(Error::InvalidConfig(format!(
                "L = N (1 + lambda) = {l_real} is not an integer"
            )));
        }
        let l = l_round as u32;
        if 2 * m as u64 > l as u64 {
            return Err(Error::InvalidConfig(format!(
                "2m = {} exceeds L = {l}",
                2 * m
            )));
        }
        Ok(Self {
            n,
            lambda,
            tau,
            m,
            l,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn delta(&self) -> f64 {
        self.tau * self.n as f64
    }

    /// Same configuration with another truncation parameter.
    pub fn with_m(&self, m: u32) -> Result<Self> {
        Self::new(self.n, self.lambda, self.tau, m)
    }

    /// True when `2m > L/4`, i.e. the truncation is no longer small against `L`.
    pub fn wide_truncation(&self) -> bool {
        8 * self.m as u64 > self.l as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WindowKind {
    Rect,
    Gauss,
    Bspline,
    Sinh,
}

impl WindowKind {
    pub const ALL: [WindowKind; 4] = [Self::Rect, Self::Gauss, Self::Bspline, Self::Sinh];

    pub fn name(self) -> &'static str {
        match self {
            Self::Rect => "rect",
            Self::Gauss => "gauss",
            Self::Bspline => "bspline",
            Self::Sinh => "sinh",
        }
    }
}

impl fmt::Display for WindowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rect" => Ok(Self::Rect),
            "gauss" => Ok(Self::Gauss),
            "bspline" => Ok(Self::Bspline),
            "sinh" => Ok(Self::Sinh),
            other => Err(Error::Parse(format!("unknown window kind `{other}`"))),
        }
    }
}

/// A window kind together with its shape parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowSpec {
    Rect,
    Gauss { sigma: f64 },
    Bspline { s: u32 },
    Sinh { beta: f64 },
}

impl WindowSpec {
    pub fn kind(&self) -> WindowKind {
        match self {
            Self::Rect => WindowKind::Rect,
            Self::Gauss { .. } => WindowKind::Gauss,
            Self::Bspline { .. } => WindowKind::Bspline,
            Self::Sinh { .. } => WindowKind::Sinh,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Rect => Ok(()),
            Self::Gauss { sigma } if sigma > 0.0 && sigma.is_finite() => Ok(()),
            Self::Gauss { sigma } => Err(Error::InvalidWindow(format!("sigma = {sigma}"))),
            Self::Bspline { s } if s >= 2 => Ok(()),
            Self::Bspline { s } => Err(Error::InvalidWindow(format!("s = {s}, need s >= 2"))),
            Self::Sinh { beta } if beta > 0.0 && beta.is_finite() => Ok(()),
            Self::Sinh { beta } => Err(Error::InvalidWindow(format!("beta = {beta}"))),
        }
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rect => write!(f, "rect"),
            Self::Gauss { sigma } => write!(f, "gauss(sigma={sigma})"),
            Self::Bspline { s } => write!(f, "bspline(s={s})"),
            Self::Sinh { beta } => write!(f, "sinh(beta={beta})"),
        }
    }
}

/// Parameter choice for the sinh-type window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SinhCase {
    /// `β = π m (1 + λ + 2τ) / (1 + λ)`.
    One,
    /// `β = π m (1 + λ − 2τ) / (1 + λ)`.
    #[default]
    Two,
}

pub fn sinh_beta(cfg: &SamplingConfig, case: SinhCase) -> f64 {
    let (m, lam, tau) = (cfg.m as f64, cfg.lambda, cfg.tau);
    match case {
        SinhCase::One => PI * m * (1.0 + lam + 2.0 * tau) / (1.0 + lam),
        SinhCase::Two => PI * m * (1.0 + lam - 2.0 * tau) / (1.0 + lam),
    }
}

pub fn gauss_sigma(cfg: &SamplingConfig) -> f64 {
    let l = cfg.l as f64;
    (cfg.m as f64 / (PI * l * (l - 2.0 * cfg.delta()))).sqrt()
}

pub fn bspline_s(cfg: &SamplingConfig) -> u32 {
    cfg.m / 2 + 1
}

/// Default shape parameters; sinh uses [`SinhCase::Two`].
pub fn default_params(kind: WindowKind, cfg: &SamplingConfig) -> WindowSpec {
    default_params_with(kind, cfg, SinhCase::Two)
}

pub fn default_params_with(kind: WindowKind, cfg: &SamplingConfig, case: SinhCase) -> WindowSpec {
    match kind {
        WindowKind::Rect => WindowSpec::Rect,
        WindowKind::Gauss => WindowSpec::Gauss {
            sigma: gauss_sigma(cfg),
        },
        WindowKind::Bspline => WindowSpec::Bspline { s: bspline_s(cfg) },
        WindowKind::Sinh => WindowSpec::Sinh {
            beta: sinh_beta(cfg, case),
        },
    }
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    Rect,
    Gauss { sigma: f64, grid_coef: f64 },
    Bspline { order: usize, s: f64, m2s0: f64 },
    Sinh { beta: f64, denom: f64 },
}

/// A window bound to a configuration, with its constants precomputed.
#[derive(Debug, Clone, Copy)]
pub struct Window {
    spec: WindowSpec,
    cfg: SamplingConfig,
    shape: Shape,
}

impl Window {
    pub fn new(spec: WindowSpec, cfg: SamplingConfig) -> Result<Self> {
        spec.validate()?;
        let l = cfg.l as f64;
        let shape = match spec {
            WindowSpec::Rect => Shape::Rect,
            WindowSpec::Gauss { sigma } => Shape::Gauss {
                sigma,
                grid_coef: 1.0 / (2.0 * sigma * sigma * l * l),
            },
            WindowSpec::Bspline { s } => Shape::Bspline {
                order: 2 * s as usize,
                s: s as f64,
                m2s0: m2s_at_zero_f64(s as i64)?,
            },
            WindowSpec::Sinh { beta } => Shape::Sinh {
                beta,
                denom: -(-2.0 * beta).exp_m1(),
            },
        };
        Ok(Self { spec, cfg, shape })
    }

    pub fn spec(&self) -> WindowSpec {
        self.spec
    }

    pub fn cfg(&self) -> &SamplingConfig {
        &self.cfg
    }

    pub fn kind(&self) -> WindowKind {
        self.spec.kind()
    }

    /// `φ(x)` before truncation.
    pub fn eval(&self, x: f64) -> f64 {
        let u = x * self.cfg.l as f64;
        match self.shape {
            Shape::Gauss { sigma, .. } => (-x * x / (2.0 * sigma * sigma)).exp(),
            _ => self.eval_grid(u),
        }
    }

    /// `φ_m(x)`, zero outside `[-m/L, m/L]`.
    pub fn eval_truncated(&self, x: f64) -> f64 {
        self.eval_grid(x * self.cfg.l as f64)
    }

    /// `φ_m(u / L)` for `u` measured in sample spacings.
    pub fn eval_grid(&self, u: f64) -> f64 {
        let m = self.cfg.m as f64;
        let a = u.abs();
        match self.shape {
            Shape::Rect => {
                if a <= m {
                    1.0
                } else {
                    0.0
                }
            }
            _ if a >= m => 0.0,
            _ if a == 0.0 => 1.0,
            Shape::Gauss { grid_coef, .. } => (-u * u * grid_coef).exp(),
            Shape::Bspline { order, s, m2s0 } => centered_bspline(order, a * s / m) / m2s0,
            Shape::Sinh { beta, denom } => {
                let r = a / m;
                let root = ((1.0 - r) * (1.0 + r)).sqrt();
                (beta * (root - 1.0)).exp() * -(-2.0 * beta * root).exp_m1() / denom
            }
        }
    }

    /// Fourier transform `φ̂(v) = ∫ φ(x) e^{-2πivx} dx` of the untruncated window.
    pub fn ft(&self, v: f64) -> f64 {
        let m = self.cfg.m as f64;
        let l = self.cfg.l as f64;
        match self.shape {
            Shape::Rect => 2.0 * m / l * sinc(2.0 * PI * m * v / l),
            Shape::Gauss { sigma, .. } => {
                (2.0 * PI).sqrt() * sigma * (-2.0 * PI * PI * sigma * sigma * v * v).exp()
            }
            Shape::Bspline { order, s, m2s0 } => {
                m / (s * l * m2s0) * sinc(PI * v * m / (s * l)).powi(order as i32)
            }
            Shape::Sinh { beta, denom } => {
                let w = 2.0 * PI * m * v / l;
                let (h, e) = j1_over_sqrt((w - beta) * (w + beta));
                PI * m * beta / l * h * 2.0 * (e - beta).exp() / denom
            }
        }
    }

    /// `φ̂(0)`.
    pub fn ft_at_zero(&self) -> f64 {
        let m = self.cfg.m as f64;
        let l = self.cfg.l as f64;
        match self.shape {
            Shape::Rect => 2.0 * m / l,
            Shape::Gauss { sigma, .. } => (2.0 * PI).sqrt() * sigma,
            Shape::Bspline { s, m2s0, .. } => m / (s * l * m2s0),
            Shape::Sinh { beta, denom } => PI * m / l * bessel_i1_scaled(beta) * 2.0 / denom,
        }
    }
}

pub fn eval_window(w: WindowSpec, cfg: &SamplingConfig, x: f64) -> Result<f64> {
    Ok(Window::new(w, *cfg)?.eval(x))
}

pub fn eval_truncated(w: WindowSpec, cfg: &SamplingConfig, x: f64) -> Result<f64> {
    Ok(Window::new(w, *cfg)?.eval_truncated(x))
}

pub fn window_ft_at_zero(w: WindowSpec, cfg: &SamplingConfig) -> Result<f64> {
    Ok(Window::new(w, *cfg)?.ft_at_zero())
}
