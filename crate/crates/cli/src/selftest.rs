//! Fast invariant checks behind `regusamp selftest`.
#![allow(clippy::excessive_precision)]

use regusamp::reconstruct::{reconstruct_with, sample, TestFunction};
use regusamp::specfun::{bessel_i1, bessel_j1, erf, m2s_at_zero};
use regusamp::{default_params, KernelEval, Result, SamplingConfig, WindowKind};

type Check = (&'static str, fn() -> Result<Option<String>>);

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn table(
    name: &str,
    f: impl Fn(f64) -> Result<f64>,
    rows: &[(f64, f64)],
    tol: f64,
) -> Result<Option<String>> {
    for &(x, want) in rows {
        let got = f(x)?;
        if rel(got, want) > tol {
            return Ok(Some(format!("{name}({x}) = {got:e}, expected {want:e}")));
        }
    }
    Ok(None)
}

fn erf_table() -> Result<Option<String>> {
    let rows = [
        (0.1, 0.112_462_916_018_284_898_4),
        (0.5, 0.520_499_877_813_046_537_7),
        (1.0, 0.842_700_792_949_714_869_3),
        (2.5, 0.999_593_047_982_555_041_1),
        (4.5, 0.999_999_999_803_383_955_9),
    ];
    table("erf", |x| Ok(erf(x)), &rows, 1e-15)
}

fn j1_table() -> Result<Option<String>> {
    let rows = [
        (1.0, 0.440_050_585_744_933_515_96),
        (5.0, -0.327_579_137_591_465_222_04),
        (25.5, -0.062_048_536_491_484_101_721),
        (1000.0, 0.004_728_311_907_089_523_917_6),
    ];
    table("J1", |x| Ok(bessel_j1(x)), &rows, 1e-12)
}

fn j1_small() -> Result<Option<String>> {
    let x = 1e-6;
    let lead = x / 2.0 - x * x * x / 16.0;
    Ok((rel(bessel_j1(x), lead) > 1e-15).then(|| format!("J1(1e-6) = {:e}", bessel_j1(x))))
}

fn i1_table() -> Result<Option<String>> {
    let rows = [
        (0.5, 0.257_894_305_390_896_316_36),
        (10.0, 2_670.988_303_701_254_654_3),
        (100.0, 1.068_369_390_338_162_481_2e42),
    ];
    table("I1", bessel_i1, &rows, 1e-12)
}

fn centre_values() -> Result<Option<String>> {
    let expected = [
        "1",
        "2/3",
        "11/20",
        "151/315",
        "15619/36288",
        "655177/1663200",
    ];
    for (s, want) in (1..).zip(expected) {
        let got = m2s_at_zero(s)?.to_string();
        if got != want {
            return Ok(Some(format!("M_{}(0) = {got}, expected {want}", 2 * s)));
        }
    }
    Ok(None)
}

fn interpolation() -> Result<Option<String>> {
    let cfg = SamplingConfig::new(128, 1.0, 1.0 / 3.0, 5)?;
    let f = TestFunction::sinc_band(cfg.delta());
    let reach = cfg.l() as i64 + 5;
    let ss = sample(&f, &cfg, -reach, reach)?;
    for kind in WindowKind::ALL {
        let k = KernelEval::new(default_params(kind, &cfg), cfg)?;
        for l in (-256..=256).step_by(17) {
            let t = l as f64 / cfg.l() as f64;
            let got = reconstruct_with(&ss, &k, t, false)?;
            if (got - f.eval(t)).abs() > 1e-12 * f.eval(t).abs().max(1e-300) {
                return Ok(Some(format!("{kind} at t = {t}: {got:e}")));
            }
        }
    }
    Ok(None)
}

fn transforms() -> Result<Option<String>> {
    let cfg = SamplingConfig::new(128, 1.0, 1.0 / 3.0, 6)?;
    for kind in [WindowKind::Gauss, WindowKind::Bspline, WindowKind::Sinh] {
        let k = KernelEval::new(default_params(kind, &cfg), cfg)?;
        for v in [-200.0, -77.5, 0.0, 31.25, 128.0, 250.0] {
            let d = (k.ft_psi(v)? - k.ft_psi_by_quadrature(v)?).abs();
            if d > 1e-8 {
                return Ok(Some(format!("{kind} at v = {v}: deviation {d:e}")));
            }
        }
    }
    Ok(None)
}

const CHECKS: &[Check] = &[
    ("erf reference values", erf_table),
    ("J1 reference values", j1_table),
    ("J1 small-argument series", j1_small),
    ("I1 reference values", i1_table),
    ("B-spline centre values", centre_values),
    ("interpolation on the grid", interpolation),
    ("transform versus quadrature", transforms),
];

/// Prints `check,status,detail` rows; true when every check passes.
pub fn run() -> bool {
    println!("check,status,detail");
    let mut all = true;
    for (name, check) in CHECKS {
        let (status, detail) = match check() {
            Ok(None) => ("pass", String::new()),
            Ok(Some(msg)) => ("fail", msg),
            Err(e) => ("fail", e.to_string()),
        };
        all &= status == "pass";
        println!("{name},{status},{}", detail.replace(',', ";"));
    }
    all
}
