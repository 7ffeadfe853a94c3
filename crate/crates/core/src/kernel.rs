//! The regularized sinc function `ψ = sinc(Lπ·) φ_m` and its Fourier transform.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::specfun::{erf, erfc, integrate, j1_over_sqrt, Quadrature};
use crate::windows::{SamplingConfig, Window, WindowKind, WindowSpec};

/// `sin(x)/x` with the removable point filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

pub(crate) fn fine_quadrature() -> Quadrature {
    Quadrature {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
        max_subdivisions: 4000,
    }
}

/// Integrates over `[a, b]`, restarting the adaptive rule at every breakpoint inside.
pub(crate) fn integrate_pieces<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: impl IntoIterator<Item = f64>,
    q: Quadrature,
) -> Result<f64> {
    let mut cuts: Vec<f64> = breaks.into_iter().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(f64::total_cmp);
    let mut total = 0.0;
    let mut lo = a;
    for hi in cuts.into_iter().chain(std::iter::once(b)) {
        total += integrate(&f, lo, hi, q)?.value;
        lo = hi;
    }
    Ok(total)
}

// Multiples of `period` strictly inside (a, b).
fn multiples(a: f64, b: f64, period: f64) -> impl Iterator<Item = f64> {
    let first = (a / period).floor() as i64 + 1;
    let last = (b / period).ceil() as i64 - 1;
    (first..=last.max(first - 1)).map(move |k| k as f64 * period)
}

/// `ψ` and `ψ̂` for one window and configuration.
#[derive(Debug, Clone, Copy)]
pub struct KernelEval {
    window: Window,
}

impl KernelEval {
    pub fn new(spec: WindowSpec, cfg: SamplingConfig) -> Result<Self> {
        Ok(Self {
            window: Window::new(spec, cfg)?,
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn cfg(&self) -> &SamplingConfig {
        self.window.cfg()
    }

    pub fn kind(&self) -> WindowKind {
        self.window.kind()
    }

    fn l(&self) -> f64 {
        self.cfg().l() as f64
    }

    fn m(&self) -> f64 {
        self.cfg().m() as f64
    }

    /// `ψ(x) = sinc(Lπx) φ_m(x)`.
    pub fn psi(&self, x: f64) -> f64 {
        let u = x * self.l();
        sinc(PI * u) * self.window.eval_grid(u)
    }

    fn expect(&self, kind: WindowKind) -> Result<()> {
        if self.kind() == kind {
            Ok(())
        } else {
            Err(Error::WrongKind {
                expected: kind,
                got: self.kind(),
            })
        }
    }

    /// Closed-form `ψ̂` for the Gaussian (untruncated) window.
    pub fn ft_psi_gauss(&self, v: f64) -> Result<f64> {
        self.expect(WindowKind::Gauss)?;
        Ok(self.band_integral_gauss(v) / self.l())
    }

    /// `ψ̂` for the B-spline window.
    pub fn ft_psi_bspline(&self, v: f64) -> Result<f64> {
        self.expect(WindowKind::Bspline)?;
        Ok(self.band_integral_bspline(v)? / self.l())
    }

    /// `ψ̂` for the sinh-type window.
    pub fn ft_psi_sinh(&self, v: f64) -> Result<f64> {
        self.expect(WindowKind::Sinh)?;
        Ok(self.band_integral_sinh(v)? / self.l())
    }

    /// `ψ̂(v)` for any window kind.
    pub fn ft_psi(&self, v: f64) -> Result<f64> {
        Ok(self.band_integral(v)? / self.l())
    }

    /// `∫_{v-L/2}^{v+L/2} φ̂(u) du`, which equals `L ψ̂(v)`.
    pub fn band_integral(&self, v: f64) -> Result<f64> {
        match self.kind() {
            WindowKind::Rect => self.band_integral_rect(v),
            WindowKind::Gauss => Ok(self.band_integral_gauss(v)),
            WindowKind::Bspline => self.band_integral_bspline(v),
            WindowKind::Sinh => self.band_integral_sinh(v),
        }
    }

    pub(crate) fn gauss_scale(&self) -> f64 {
        match self.window.spec() {
            WindowSpec::Gauss { sigma } => SQRT_2 * PI * sigma,
            _ => unreachable!("gauss_scale on a non-Gaussian window"),
        }
    }

    fn band_integral_gauss(&self, v: f64) -> f64 {
        let c = self.gauss_scale();
        let h = self.l() / 2.0;
        let (hi, lo) = (c * (v + h), c * (v - h));
        // Difference of complements keeps digits once both arguments share a sign.
        if lo > 0.0 {
            0.5 * (erfc(lo) - erfc(hi))
        } else if hi < 0.0 {
            0.5 * (erfc(-hi) - erfc(-lo))
        } else {
            0.5 * (erf(hi) - erf(lo))
        }
    }

    // (1/π) ∫ sinc(x) dx over the band in x = 2πmu/L.
    fn band_integral_rect(&self, v: f64) -> Result<f64> {
        let k = 2.0 * PI * self.m() / self.l();
        let (a, b) = (k * (v - self.l() / 2.0), k * (v + self.l() / 2.0));
        let val = integrate_pieces(sinc, a, b, multiples(a, b, PI), fine_quadrature())?;
        Ok(val / PI)
    }

    pub(crate) fn bspline_params(&self) -> (u32, f64) {
        match self.window.spec() {
            WindowSpec::Bspline { s } => (
                s,
                self.m() / (s as f64 * self.l() * self.window.ft_at_zero()),
            ),
            _ => unreachable!("bspline_params on a non-B-spline window"),
        }
    }

    // (1/(π M)) ∫ sinc^{2s}(x) dx over the band in x = πum/(sL).
    fn band_integral_bspline(&self, v: f64) -> Result<f64> {
        let (s, m2s0) = self.bspline_params();
        let k = PI * self.m() / (s as f64 * self.l());
        let (a, b) = (k * (v - self.l() / 2.0), k * (v + self.l() / 2.0));
        let order = 2 * s as i32;
        let val = integrate_pieces(
            |x| sinc(x).powi(order),
            a,
            b,
            multiples(a, b, PI),
            fine_quadrature(),
        )?;
        Ok(val / (PI * m2s0))
    }

    pub(crate) fn sinh_beta(&self) -> f64 {
        match self.window.spec() {
            WindowSpec::Sinh { beta } => beta,
            _ => unreachable!("sinh_beta on a non-sinh window"),
        }
    }

    /// Frequency `u` mapped to `w = 2πmu/(Lβ)`, so the sinh transform turns at `w = ±1`.
    pub(crate) fn sinh_w(&self, u: f64) -> f64 {
        2.0 * PI * self.m() * u / (self.l() * self.sinh_beta())
    }

    /// `φ̂` of the sinh window in the variable `w`, times `du/dw`.
    pub(crate) fn sinh_band_density(&self, w: f64) -> f64 {
        let beta = self.sinh_beta();
        let denom = -(-2.0 * beta).exp_m1();
        let (h, e) = j1_over_sqrt(beta * beta * (w - 1.0) * (w + 1.0));
        beta * beta * h * (e - beta).exp() / denom
    }

    fn band_integral_sinh(&self, v: f64) -> Result<f64> {
        let h = self.l() / 2.0;
        let (a, b) = (self.sinh_w(v - h), self.sinh_w(v + h));
        integrate_pieces(
            |w| self.sinh_band_density(w),
            a,
            b,
            [-1.0, 1.0],
            fine_quadrature(),
        )
    }

    /// Direct quadrature of `∫ ψ(x) cos(2πvx) dx`, independent of the closed forms.
    ///
    /// For the Gaussian the untruncated product is integrated up to
    /// `max(m/L, 12σ)`, matching the transform returned by [`Self::ft_psi_gauss`].
    pub fn ft_psi_by_quadrature(&self, v: f64) -> Result<f64> {
        let l = self.l();
        let (reach, f): (f64, Box<dyn Fn(f64) -> f64 + '_>) = match self.window.spec() {
            WindowSpec::Gauss { sigma } => (
                (self.m() / l).max(12.0 * sigma),
                Box::new(move |x: f64| {
                    sinc(PI * l * x) * self.window.eval(x) * (2.0 * PI * v * x).cos()
                }),
            ),
            _ => (
                self.m() / l,
                Box::new(move |x: f64| self.psi(x) * (2.0 * PI * v * x).cos()),
            ),
        };
        let step = 0.5 / l;
        let pieces = (reach / step).ceil() as usize;
        let val = integrate_pieces(
            f,
            0.0,
            reach,
            (1..pieces).map(|i| i as f64 * step),
            fine_quadrature(),
        )?;
        Ok(2.0 * val)
    }

    /// Upper bound on `|ψ̂(v)|` for `|v| ≥ L(1+ε)/2`.
    pub fn tail_bound(&self, epsilon: f64) -> Result<f64> {
        let l = self.l();
        let m = self.m();
        let out_of_range = |range: String| Error::EpsilonOutOfRange { epsilon, range };
        match self.window.spec() {
            WindowSpec::Gauss { sigma } => {
                if !(epsilon > 0.0 && epsilon < 1.0) {
                    return Err(out_of_range("(0, 1)".into()));
                }
                let a = PI * sigma * l * epsilon;
                Ok((-a * a / 2.0).exp() / ((2.0 * PI).sqrt() * l * a))
            }
            WindowSpec::Bspline { s } => {
                let s = s as f64;
                let min = 2.0 * s / (m * PI);
                if !(epsilon > min) {
                    return Err(out_of_range(format!("({min}, inf)")));
                }
                let (_, m2s0) = self.bspline_params();
                Ok((2.0 * s / (epsilon * m * PI)).powf(2.0 * s - 1.0)
                    / ((2.0 * s - 1.0) * PI * l * m2s0))
            }
            WindowSpec::Sinh { beta } => {
                let lam = self.cfg().lambda();
                let s = beta * (1.0 + lam) / (PI * (1.0 + 2.0 * lam));
                let min = 4.0 * s / m;
                if !(epsilon >= min) {
                    return Err(out_of_range(format!("[{min}, inf)")));
                }
                let inv_sinh = 2.0 * (-beta).exp() / -(-2.0 * beta).exp_m1();
                Ok(5.0 * (2.0 * s * beta).sqrt() / (4.0 * l * (m * epsilon).sqrt()) * inv_sinh)
            }
            WindowSpec::Rect => Err(Error::ConditionViolated(
                "the rectangular window has no essential-bandlimitation bound".into(),
            )),
        }
    }
}

/// Closed-form `φ̂(v)`.
pub fn ft_window(w: WindowSpec, cfg: &SamplingConfig, v: f64) -> Result<f64> {
    Ok(Window::new(w, *cfg)?.ft(v))
}

pub fn psi(k: &KernelEval, x: f64) -> f64 {
    k.psi(x)
}
