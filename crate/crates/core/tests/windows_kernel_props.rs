use std::f64::consts::PI;

use proptest::prelude::*;
use regusamp::specfun::{integrate, Quadrature};
use regusamp::{default_params, KernelEval, SamplingConfig, Window, WindowKind, WindowSpec};

fn grid_configs() -> Vec<SamplingConfig> {
    let mut out = Vec::new();
    for m in 2..=10 {
        for tau in [0.05, 0.1, 0.25, 1.0 / 3.0, 0.45] {
            out.push(SamplingConfig::new(128, 1.0, tau, m).unwrap());
        }
        for lam in [0.0, 0.5, 2.0] {
            out.push(SamplingConfig::new(128, lam, 1.0 / 3.0, m).unwrap());
        }
    }
    out
}

fn cfg_strategy() -> impl Strategy<Value = SamplingConfig> {
    (
        2u32..=10,
        prop::sample::select(vec![0.05, 0.1, 0.25, 1.0 / 3.0, 0.45]),
        prop::sample::select(vec![0.0, 0.5, 1.0, 2.0]),
    )
        .prop_map(|(m, tau, lam)| SamplingConfig::new(128, lam, tau, m).unwrap())
}

fn kind_strategy() -> impl Strategy<Value = WindowKind> {
    prop::sample::select(WindowKind::ALL.to_vec())
}

#[test]
fn windows_belong_to_the_family() {
    for cfg in grid_configs() {
        let edge = cfg.m() as f64 / cfg.l() as f64;
        for kind in WindowKind::ALL {
            let w = Window::new(default_params(kind, &cfg), cfg).unwrap();
            assert_eq!(w.eval(0.0), 1.0);
            let mut prev = 1.0;
            for i in 0..=10_000 {
                let x = edge * i as f64 / 10_000.0;
                let v = w.eval(x);
                assert!(v <= prev, "{kind} not monotone at {x}");
                prev = v;
            }
            assert_eq!(w.eval_truncated(edge * 1.0001), 0.0);
            assert_eq!(w.eval_truncated(-edge * 1.5), 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn windows_are_even(cfg in cfg_strategy(), kind in kind_strategy(), r in 0.0f64..1.2) {
        let w = Window::new(default_params(kind, &cfg), cfg).unwrap();
        let x = r * cfg.m() as f64 / cfg.l() as f64;
        prop_assert!((w.eval(x) - w.eval(-x)).abs() <= 1e-15);
        prop_assert_eq!(w.eval_truncated(x), w.eval_truncated(-x));
    }
}

#[test]
fn gauss_sigma_closed_forms_agree() {
    for cfg in grid_configs() {
        let WindowSpec::Gauss { sigma } = default_params(WindowKind::Gauss, &cfg) else {
            unreachable!()
        };
        let (m, n, lam, tau) = (cfg.m() as f64, cfg.n() as f64, cfg.lambda(), cfg.tau());
        let alt = (m / (PI * (1.0 + lam) * (1.0 + lam - 2.0 * tau))).sqrt() / n;
        assert!((sigma - alt).abs() <= 1e-14 * sigma.max(1.0));
    }
}

#[test]
fn ft_at_zero_matches_window_integral() {
    let q = Quadrature {
        abs_tol: 1e-14,
        rel_tol: 1e-13,
        max_subdivisions: 4000,
    };
    for cfg in grid_configs().into_iter().step_by(5) {
        for kind in WindowKind::ALL {
            let spec = default_params(kind, &cfg);
            let w = Window::new(spec, cfg).unwrap();
            let reach = match spec {
                WindowSpec::Gauss { sigma } => 12.0 * sigma,
                _ => cfg.m() as f64 / cfg.l() as f64,
            };
            let val = 2.0 * integrate(|x| w.eval(x), 0.0, reach, q).unwrap().value;
            assert!(
                (val - w.ft_at_zero()).abs() < 1e-10,
                "{kind}: {val} vs {}",
                w.ft_at_zero()
            );
            assert!((w.ft(0.0) - w.ft_at_zero()).abs() <= 1e-15 * w.ft_at_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn transforms_match_quadrature(cfg in cfg_strategy(), kind in kind_strategy(), r in -1.0f64..1.0) {
        let k = KernelEval::new(default_params(kind, &cfg), cfg).unwrap();
        let v = r * cfg.l() as f64;
        let closed = k.ft_psi(v).unwrap();
        let direct = k.ft_psi_by_quadrature(v).unwrap();
        prop_assert!((closed - direct).abs() < 1e-8, "{} v = {}: {} vs {}", kind, v, closed, direct);
        if matches!(kind, WindowKind::Gauss | WindowKind::Bspline) {
            prop_assert!(closed <= 1.0 / cfg.l() as f64 + 1e-12);
        }
    }

    #[test]
    fn transforms_are_even(cfg in cfg_strategy(), kind in kind_strategy(), r in 0.0f64..2.0) {
        let k = KernelEval::new(default_params(kind, &cfg), cfg).unwrap();
        let v = r * cfg.l() as f64;
        prop_assert!((k.ft_psi(v).unwrap() - k.ft_psi(-v).unwrap()).abs() < 1e-15);
    }
}

#[test]
fn psi_vanishes_on_nonzero_grid_points() {
    for cfg in grid_configs() {
        for kind in WindowKind::ALL {
            let k = KernelEval::new(default_params(kind, &cfg), cfg).unwrap();
            let m = cfg.m() as i64;
            for l in -m..=m {
                let v = k.psi(l as f64 / cfg.l() as f64);
                if l == 0 {
                    assert_eq!(v, 1.0);
                } else {
                    assert!(v.abs() <= 1e-13);
                }
            }
        }
    }
}

#[test]
fn gaussian_central_band_deviation() {
    // 0 < 1/L − ψ̂(v) ≤ 2 e^{−π²σ²L²ε²/2} / (√(2π) L² π σ ε) on |v| ≤ L(1−ε)/2.
    for cfg in grid_configs() {
        let spec = default_params(WindowKind::Gauss, &cfg);
        let WindowSpec::Gauss { sigma } = spec else {
            unreachable!()
        };
        let k = KernelEval::new(spec, cfg).unwrap();
        let l = cfg.l() as f64;
        for eps in [0.1, 0.3, 0.6, 0.9] {
            let a = PI * sigma * l * eps;
            let bound = 2.0 * (-a * a / 2.0).exp() / ((2.0 * PI).sqrt() * l * a);
            for i in 0..=50 {
                let v = l * (1.0 - eps) / 2.0 * i as f64 / 50.0;
                let gap = 1.0 / l - k.ft_psi(v).unwrap();
                assert!(
                    gap > -4.0 * f64::EPSILON / l && gap <= bound * (1.0 + 1e-12),
                    "{cfg:?} eps {eps} v {v}: {gap} vs {bound}"
                );
            }
        }
    }
}

#[test]
fn sinh_kernel_transform_can_exceed_inverse_l() {
    // mpmath: L ∫ ψ = 1.00293276215800803828 for m = 2, L = 128, β = π.
    let cfg = SamplingConfig::new(128, 0.0, 0.25, 2).unwrap();
    let k = KernelEval::new(default_params(WindowKind::Sinh, &cfg), cfg).unwrap();
    let excess = 128.0 * k.ft_psi(0.0).unwrap() - 1.0;
    assert!(
        (excess - 2.932_762_158_008_038e-3).abs() < 1e-13,
        "{excess:e}"
    );
}
