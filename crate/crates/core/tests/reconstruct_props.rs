use std::cell::Cell;

use proptest::prelude::*;
use regusamp::reconstruct::{
    reconstruct_samples, sample, SampleSet, Samples, Summation, TestFunction,
};
use regusamp::{
    default_params, reconstruct_with, robustness_bound, KernelEval, SamplingConfig, WindowKind,
};

struct Counting<'a> {
    inner: &'a SampleSet,
    reads: Cell<usize>,
}

impl Samples for Counting<'_> {
    fn index_range(&self) -> (i64, i64) {
        self.inner.index_range()
    }

    fn get(&self, index: i64) -> f64 {
        self.reads.set(self.reads.get() + 1);
        self.inner.get(index)
    }
}

fn setup(m: u32, kind: WindowKind) -> (SamplingConfig, KernelEval, SampleSet) {
    let cfg = SamplingConfig::new(128, 1.0, 1.0 / 3.0, m).unwrap();
    let k = KernelEval::new(default_params(kind, &cfg), cfg).unwrap();
    let l = cfg.l() as i64;
    let ss = sample(
        &TestFunction::sinc_band(cfg.delta()),
        &cfg,
        -l - m as i64,
        l + m as i64,
    )
    .unwrap();
    (cfg, k, ss)
}

fn kind_strategy() -> impl Strategy<Value = WindowKind> {
    prop::sample::select(WindowKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reads_exactly_two_m_samples(m in 2u32..=10, kind in kind_strategy(), t in -1.0f64..1.0) {
        let (cfg, k, ss) = setup(m, kind);
        let on_grid = (t * cfg.l() as f64).fract() == 0.0;
        prop_assume!(!on_grid);
        let c = Counting { inner: &ss, reads: Cell::new(0) };
        reconstruct_samples(&c, &k, t, Summation::Plain).unwrap();
        prop_assert_eq!(c.reads.get(), 2 * m as usize);
    }

    #[test]
    fn interpolates_on_grid(m in 2u32..=10, kind in kind_strategy(), j in -256i64..=256) {
        let (cfg, k, ss) = setup(m, kind);
        let t = j as f64 / cfg.l() as f64;
        prop_assert_eq!(reconstruct_with(&ss, &k, t, false).unwrap(), ss.get(j));
    }

    #[test]
    fn is_linear(m in 2u32..=10, kind in kind_strategy(), t in -1.0f64..1.0, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let (cfg, k, f) = setup(m, kind);
        let lo = f.index_lo();
        let g = sample(&TestFunction::sinc_sq_band(cfg.delta()), &cfg, lo, f.index_hi()).unwrap();
        let mix: Vec<f64> = f.values().iter().zip(g.values()).map(|(x, y)| a * x + b * y).collect();
        let h = SampleSet::from_values(cfg, lo, mix).unwrap();
        let lhs = reconstruct_with(&h, &k, t, false).unwrap();
        let rhs = a * reconstruct_with(&f, &k, t, false).unwrap() + b * reconstruct_with(&g, &k, t, false).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + a.abs() + b.abs()));
    }
}

#[test]
fn perturbation_error_within_robustness_bound() {
    let eps = 1e-3;
    for kind in WindowKind::ALL {
        for m in [2, 5, 9] {
            let (cfg, k, ss) = setup(m, kind);
            let bound = robustness_bound(default_params(kind, &cfg), &cfg, eps)
                .unwrap()
                .best();
            for seed in 0..100 {
                let noisy = ss.perturb(eps, seed).unwrap();
                let mut worst: f64 = 0.0;
                for i in 0..=400 {
                    let t = -1.0 + i as f64 / 200.0 + 1e-3;
                    let d = reconstruct_with(&noisy, &k, t, true).unwrap()
                        - reconstruct_with(&noisy, &k, t, false).unwrap();
                    worst = worst.max(d.abs());
                }
                assert!(
                    worst <= bound,
                    "{kind} m={m} seed={seed}: {worst} > {bound}"
                );
            }
        }
    }
}

#[test]
fn noise_stays_inside_open_interval() {
    let (_, _, ss) = setup(4, WindowKind::Sinh);
    for seed in 0..20 {
        let p = ss.perturb(1e-3, seed).unwrap();
        assert!(p.noise().unwrap().iter().all(|e| e.abs() < 1e-3));
    }
    let a = ss.perturb(1e-3, 7).unwrap();
    let b = ss.perturb(1e-3, 7).unwrap();
    assert_eq!(a.noise(), b.noise());
}

#[test]
fn classical_truncation_converges_slowly() {
    let cfg = SamplingConfig::new(512, 1.0, 1.0 / 3.0, 10).unwrap();
    let f = TestFunction::sinc_band(cfg.delta());
    let l = cfg.l() as i64;
    let ss = sample(&f, &cfg, -l - 400, l + 400).unwrap();
    let mut errs = Vec::new();
    for m in [10u32, 40, 160] {
        let c = cfg.with_m(m).unwrap();
        let k = KernelEval::new(regusamp::WindowSpec::Rect, c).unwrap();
        let ss = SampleSet::from_values(c, ss.index_lo(), ss.values().to_vec()).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..2000 {
            let t = -1.0 + (i as f64 + 0.5) / 1000.0;
            worst = worst.max((reconstruct_with(&ss, &k, t, false).unwrap() - f.eval(t)).abs());
        }
        errs.push(worst);
    }
    assert!(
        errs[1] < 0.75 * errs[0] && errs[2] < 0.75 * errs[1],
        "{errs:?}"
    );
    assert!(errs[2] > 1e-4, "{errs:?}");
}

#[test]
fn accurate_just_below_a_grid_point() {
    // Lt = 95 − 2.8e-5; the true error here is about 1e-18 (mpmath, 40 digits).
    let cfg = SamplingConfig::new(128, 1.0, 0.05, 10).unwrap();
    let k = KernelEval::new(default_params(WindowKind::Sinh, &cfg), cfg).unwrap();
    let f = TestFunction::sinc_band(cfg.delta());
    let ss = sample(&f, &cfg, -270, 270).unwrap();
    let t = 3.710_937_109_371_093e-1;
    let err = (reconstruct_with(&ss, &k, t, false).unwrap() - f.eval(t)).abs();
    assert!(err < 2e-13, "{err:e}");
}
