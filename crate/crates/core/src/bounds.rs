//! Error constants: generic `E₁`/`E₂`, closed-form per-window bounds and noise robustness.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernel::{fine_quadrature, integrate_pieces, KernelEval};
use crate::specfun::erfc;
use crate::windows::{
    default_params, default_params_with, SamplingConfig, SinhCase, WindowKind, WindowSpec,
};

/// Default grid size for the `E₁` maximization.
pub const E1_GRID: usize = 4097;

fn eta_kernel(k: &KernelEval, v: f64) -> Result<f64> {
    let cfg = k.cfg();
    let inside = v.abs() <= cfg.delta();
    let h = cfg.l() as f64 / 2.0;
    let core = match k.kind() {
        WindowKind::Gauss => {
            let c = k.gauss_scale();
            0.5 * (erfc(c * (h - v)) + erfc(c * (h + v)))
        }
        WindowKind::Sinh => {
            // 1 - tanh(β/2) minus the two tails beyond w = 1, by evenness of φ̂.
            let beta = k.sinh_beta();
            let tail = |x: f64| -> Result<f64> {
                let dens = |w: f64| k.sinh_band_density(w);
                if x >= 1.0 {
                    integrate_pieces(dens, 1.0, x, [], fine_quadrature())
                } else {
                    Ok(-integrate_pieces(
                        dens,
                        x,
                        1.0,
                        [0.0, -1.0],
                        fine_quadrature(),
                    )?)
                }
            };
            let a = k.sinh_w(v + h);
            let b = k.sinh_w(h - v);
            2.0 / (beta.exp() + 1.0) - (tail(a)? + tail(b)?)
        }
        WindowKind::Bspline | WindowKind::Rect => 1.0 - k.band_integral(v)?,
    };
    Ok(if inside { core } else { core - 1.0 })
}

/// `η(v) = 1_{[-δ,δ]}(v) − ∫_{v−L/2}^{v+L/2} φ̂(u) du`.
pub fn eta(w: WindowSpec, cfg: &SamplingConfig, v: f64) -> Result<f64> {
    eta_kernel(&KernelEval::new(w, *cfg)?, v)
}

/// `max |η|` on `[0, δ]`: uniform grid, then golden-section steps around the best node.
pub fn eta_max(w: WindowSpec, cfg: &SamplingConfig, grid_points: usize) -> Result<f64> {
    if grid_points < 2 {
        return Err(Error::InvalidRange(format!(
            "grid_points = {grid_points}, need >= 2"
        )));
    }
    let k = KernelEval::new(w, *cfg)?;
    let delta = cfg.delta();
    let step = delta / (grid_points - 1) as f64;
    let node = |i: usize| {
        if i + 1 == grid_points {
            delta
        } else {
            i as f64 * step
        }
    };
    let mut best = 0.0;
    let mut arg = 0;
    for i in 0..grid_points {
        let e = eta_kernel(&k, node(i))?.abs();
        if e > best {
            best = e;
            arg = i;
        }
    }
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (
        node(arg.saturating_sub(1)),
        node((arg + 1).min(grid_points - 1)),
    );
    for _ in 0..3 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        let fc = eta_kernel(&k, c)?.abs();
        let fd = eta_kernel(&k, d)?.abs();
        best = best.max(fc).max(fd);
        if fc > fd {
            b = d;
        } else {
            a = c;
        }
    }
    Ok(best)
}

/// `E₁ = √(2δ) max_{|v|≤δ} |η(v)|`.
pub fn e1_numeric(w: WindowSpec, cfg: &SamplingConfig, grid_points: usize) -> Result<f64> {
    Ok((2.0 * cfg.delta()).sqrt() * eta_max(w, cfg, grid_points)?)
}

/// `E₂ = (√(2L)/(πm)) (φ²(m/L) + L ∫_{m/L}^∞ φ²)^{1/2}` for the window as used in reconstruction.
///
/// Zero whenever the window already vanishes outside `[-m/L, m/L]`, since the
/// truncated and untruncated sums then coincide.
pub fn e2_numeric(w: WindowSpec, cfg: &SamplingConfig) -> Result<f64> {
    w.validate()?;
    match w {
        WindowSpec::Gauss { sigma } => {
            let (m, l) = (cfg.m() as f64, cfg.l() as f64);
            let r = m / (l * sigma);
            let inner = (-r * r).exp() + l * sigma * PI.sqrt() / 2.0 * erfc(r);
            Ok((2.0 * l).sqrt() / (PI * m) * inner.sqrt())
        }
        _ => Ok(0.0),
    }
}

/// `(L/π) √(2/m + 1/m²)`.
pub fn rect_bound(cfg: &SamplingConfig) -> f64 {
    rect_bound_at(cfg.l() as f64, cfg.m() as f64)
}

pub(crate) fn rect_bound_at(l: f64, m: f64) -> f64 {
    l / PI * (2.0 / m + 1.0 / (m * m)).sqrt()
}

/// Uniform bound for the Gaussian window with its default width.
pub fn gauss_bound(cfg: &SamplingConfig) -> f64 {
    let (m, l, d) = (cfg.m() as f64, cfg.l() as f64, cfg.delta());
    let num = 2.0 * (PI * d * l).sqrt() + l * (m + 1.0) / m.sqrt();
    num / (PI * (m * PI * (l - 2.0 * d)).sqrt()) * (-PI * m * (l / 2.0 - d) / l).exp()
}

/// True when `τ/(1+λ) < 1/2 − 1/π`, the range where the B-spline bound holds.
pub fn bspline_applicable(tau: f64, lambda: f64) -> bool {
    tau / (1.0 + lambda) < 0.5 - 1.0 / PI
}

/// Uniform bound for the B-spline window with `s = ⌈(m+1)/2⌉`.
pub fn bspline_bound(cfg: &SamplingConfig) -> Result<f64> {
    let (m, lam, tau) = (cfg.m() as f64, cfg.lambda(), cfg.tau());
    if !bspline_applicable(tau, lam) {
        return Err(Error::ConditionViolated(format!(
            "tau/(1+lambda) = {} is not below 1/2 - 1/pi",
            tau / (1.0 + lam)
        )));
    }
    let s = crate::windows::bspline_s(cfg) as f64;
    let rate = (PI * m * (1.0 + lam - 2.0 * tau)).ln() - (2.0 * s * (1.0 + lam)).ln();
    Ok(3.0 * (cfg.delta() * s).sqrt() / ((2.0 * s - 1.0) * PI) * (-m * rate).exp())
}

/// Uniform bound for the sinh-type window with the matching `β`.
pub fn sinh_bound(cfg: &SamplingConfig, case: SinhCase) -> f64 {
    let beta = crate::windows::sinh_beta(cfg, case);
    let d = cfg.delta();
    match case {
        SinhCase::Two => 3.0 * (2.0 * d).sqrt() * (-beta).exp(),
        SinhCase::One => {
            let (lam, tau) = (cfg.lambda(), cfg.tau());
            let w0 = (1.0 + lam - 2.0 * tau) / (1.0 + lam + 2.0 * tau);
            let q = 1.0 - w0 * w0;
            let first = (beta * PI * d).sqrt() / ((1.0 - 2.0 * (-beta).exp()) * q.powf(0.25))
                * (-beta * (1.0 - q.sqrt())).exp();
            let second = 2.0 * (2.0 * d).sqrt() / -(-2.0 * beta).exp_m1() * (-beta).exp();
            first + second
        }
    }
}

/// Closed-form bound for `kind` with its default parameters.
pub fn closed_form_bound(kind: WindowKind, cfg: &SamplingConfig) -> Result<f64> {
    match kind {
        WindowKind::Rect => Ok(rect_bound(cfg)),
        WindowKind::Gauss => Ok(gauss_bound(cfg)),
        WindowKind::Bspline => bspline_bound(cfg),
        WindowKind::Sinh => Ok(sinh_bound(cfg, SinhCase::Two)),
    }
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Closed-form bound matching `w`, or `None` when `w` is not one of the parameter choices covered.
pub fn closed_form_for(w: WindowSpec, cfg: &SamplingConfig) -> Option<Result<f64>> {
    match (w, default_params(w.kind(), cfg)) {
        (WindowSpec::Gauss { sigma }, WindowSpec::Gauss { sigma: d }) if same(sigma, d) => {
            Some(Ok(gauss_bound(cfg)))
        }
        (WindowSpec::Bspline { s }, WindowSpec::Bspline { s: d }) if s == d => {
            Some(bspline_bound(cfg))
        }
        (WindowSpec::Sinh { beta }, WindowSpec::Sinh { beta: d }) if same(beta, d) => {
            Some(Ok(sinh_bound(cfg, SinhCase::Two)))
        }
        (WindowSpec::Sinh { beta }, _) => {
            match default_params_with(WindowKind::Sinh, cfg, SinhCase::One) {
                WindowSpec::Sinh { beta: d } if same(beta, d) => {
                    Some(Ok(sinh_bound(cfg, SinhCase::One)))
                }
                _ => None,
            }
        }
        (WindowSpec::Rect, _) => Some(Ok(rect_bound(cfg))),
        _ => None,
    }
}

/// Noise amplification bounds for perturbations of size at most `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobustnessBound {
    /// `ε (2 + L φ̂(0))`, valid for any window.
    pub generic: f64,
    /// Window-specific closed form for the default parameters.
    pub specialized: Option<f64>,
}

impl RobustnessBound {
    /// The smaller of the available bounds.
    pub fn best(&self) -> f64 {
        self.specialized
            .map_or(self.generic, |s| s.min(self.generic))
    }
}

pub fn robustness_bound(w: WindowSpec, cfg: &SamplingConfig, eps: f64) -> Result<RobustnessBound> {
    if !(eps > 0.0) {
        return Err(Error::InvalidRange(format!(
            "noise bound eps = {eps} must be positive"
        )));
    }
    let window = crate::windows::Window::new(w, *cfg)?;
    let (m, l, lam, tau) = (cfg.m() as f64, cfg.l() as f64, cfg.lambda(), cfg.tau());
    let generic = eps * (2.0 + l * window.ft_at_zero());
    let ratio = ((2.0 + 2.0 * lam) / (1.0 + lam - 2.0 * tau)).sqrt();
    let specialized = match w.kind() {
        WindowKind::Rect => None,
        WindowKind::Gauss => Some(eps * (2.0 + ratio * m.sqrt())),
        WindowKind::Bspline => Some(eps * (2.0 + 1.5 * m.sqrt())),
        WindowKind::Sinh => {
            let beta = crate::windows::sinh_beta(cfg, SinhCase::Two);
            Some(eps * (2.0 + ratio * m.sqrt() / -(-2.0 * beta).exp_m1()))
        }
    };
    Ok(RobustnessBound {
        generic,
        specialized,
    })
}

/// All error constants for one window and configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub window: WindowSpec,
    pub cfg: SamplingConfig,
    pub e1: f64,
    pub e2: f64,
    /// `None` when no closed form covers the window parameters or its condition fails.
    pub closed_form: Option<f64>,
    pub robustness: RobustnessBound,
    pub eta_max: f64,
}

pub fn bound_report(
    w: WindowSpec,
    cfg: &SamplingConfig,
    eps: f64,
    grid_points: usize,
) -> Result<BoundReport> {
    let eta_max = eta_max(w, cfg, grid_points)?;
    let closed_form = match closed_form_for(w, cfg) {
        Some(Ok(v)) => Some(v),
        Some(Err(Error::ConditionViolated(_))) | None => None,
        Some(Err(e)) => return Err(e),
    };
    Ok(BoundReport {
        window: w,
        cfg: *cfg,
        e1: (2.0 * cfg.delta()).sqrt() * eta_max,
        e2: e2_numeric(w, cfg)?,
        closed_form,
        robustness: robustness_bound(w, cfg, eps)?,
        eta_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windows::gauss_sigma;

    fn cfg(m: u32) -> SamplingConfig {
        SamplingConfig::new(128, 1.0, 1.0 / 3.0, m).unwrap()
    }

    #[test]
    fn gauss_bound_fixture() {
        let c = SamplingConfig::new(128, 1.0, 1.0 / 3.0, 2).unwrap();
        assert!((gauss_bound(&c) - 1.093_528_362_609_633_400_7).abs() < 1e-14);
    }

    #[test]
    fn rect_bound_values() {
        let c = SamplingConfig::new(128, 1.0, 0.25, 2).unwrap();
        assert!((rect_bound(&c) - 256.0 / PI * 5f64.sqrt() / 2.0).abs() < 1e-12);
        for m in [50.0, 200.0, 1000.0] {
            let r = rect_bound_at(256.0, 4.0 * m) / rect_bound_at(256.0, m);
            assert!((0.49..=0.51).contains(&r));
        }
    }

    #[test]
    fn bspline_gate() {
        assert!(bspline_bound(&cfg(5)).unwrap() > 0.0);
        let bad = SamplingConfig::new(128, 1.0, 9.0 / 20.0, 5).unwrap();
        assert!(matches!(
            bspline_bound(&bad),
            Err(Error::ConditionViolated(_))
        ));
        let bad = SamplingConfig::new(128, 0.0, 1.0 / 3.0, 5).unwrap();
        assert!(matches!(
            bspline_bound(&bad),
            Err(Error::ConditionViolated(_))
        ));
    }

    #[test]
    fn sinh_fixture_and_case_order() {
        let c = cfg(5);
        let want = 3.0 * (2.0 * c.delta()).sqrt() * (-10.0 * PI / 3.0).exp();
        assert!(((sinh_bound(&c, SinhCase::Two) - want) / want).abs() < 1e-13);
        for m in 2..=10 {
            let c = cfg(m);
            assert!(sinh_bound(&c, SinhCase::Two) < sinh_bound(&c, SinhCase::One));
        }
    }

    #[test]
    fn robustness_fixtures() {
        let c = cfg(4);
        let g = robustness_bound(default_params(WindowKind::Gauss, &c), &c, 1e-3).unwrap();
        assert!((g.specialized.unwrap() - 1e-3 * (2.0 + 3f64.sqrt() * 2.0)).abs() < 1e-15);
        let c9 = cfg(9);
        let b = robustness_bound(default_params(WindowKind::Bspline, &c9), &c9, 1e-3).unwrap();
        assert!((b.specialized.unwrap() - 6.5e-3).abs() < 1e-15);
        assert!(robustness_bound(WindowSpec::Rect, &c, 1e-3)
            .unwrap()
            .specialized
            .is_none());
    }

    #[test]
    fn eta_forms_agree_with_band_integral() {
        for kind in [WindowKind::Gauss, WindowKind::Sinh, WindowKind::Bspline] {
            let c = cfg(4);
            let w = default_params(kind, &c);
            let k = KernelEval::new(w, c).unwrap();
            for v in [0.0, 10.0, c.delta()] {
                let direct = 1.0 - k.band_integral(v).unwrap();
                let e = eta(w, &c, v).unwrap();
                assert!((e - direct).abs() < 1e-12, "{kind} v={v}: {e} vs {direct}");
                assert!((e - eta(w, &c, -v).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn e2_values() {
        let c = cfg(6);
        assert_eq!(
            e2_numeric(default_params(WindowKind::Bspline, &c), &c).unwrap(),
            0.0
        );
        assert_eq!(
            e2_numeric(default_params(WindowKind::Sinh, &c), &c).unwrap(),
            0.0
        );
        let sigma = gauss_sigma(&c);
        let (m, l) = (6.0, c.l() as f64);
        let paper = (2.0 * l).sqrt() / (PI * m)
            * ((2.0 * m + l * l * sigma * sigma) / (2.0 * m)).sqrt()
            * (-m * m / (2.0 * l * l * sigma * sigma)).exp();
        let e2 = e2_numeric(WindowSpec::Gauss { sigma }, &c).unwrap();
        assert!(e2 > 0.0 && e2 <= paper);
    }

    #[test]
    fn e1_gauss_below_proof_estimate() {
        let c = cfg(5);
        let sigma = gauss_sigma(&c);
        let (l, d) = (c.l() as f64, c.delta());
        let h = l / 2.0 - d;
        let est = d.sqrt() / (PI.sqrt() * PI * sigma * h)
            * (-2.0 * PI * PI * sigma * sigma * h * h).exp();
        assert!(e1_numeric(WindowSpec::Gauss { sigma }, &c, 257).unwrap() <= est);
    }
}
