//! Regularized Shannon sampling with localized sampling.
//!
//! A bandlimited function is recovered from `2m` equispaced samples around
//! each evaluation point by multiplying the sinc kernel with a compactly
//! supported window. The crate provides the four windows studied for this
//! scheme (rectangular, Gaussian, B-spline and sinh-type), their Fourier
//! transforms, the uniform error bounds, and an experiment harness.
//!
//! ```
//! use regusamp::{default_params, sample, KernelEval, SamplingConfig, TestFunction, WindowKind};
//!
//! let cfg = SamplingConfig::new(128, 1.0, 1.0 / 3.0, 8)?;
//! let f = TestFunction::sinc_band(cfg.delta());
//! let samples = sample(&f, &cfg, -300, 300)?;
//! let kernel = KernelEval::new(default_params(WindowKind::Sinh, &cfg), cfg)?;
//! let approx = regusamp::reconstruct_with(&samples, &kernel, 0.1234, false)?;
//! assert!((approx - f.eval(0.1234)).abs() < 1e-6);
//! # Ok::<(), regusamp::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod error;
pub mod harness;
pub mod kernel;
pub mod reconstruct;
pub mod specfun;
pub mod windows;

pub use bounds::{
    bound_report, bspline_bound, closed_form_bound, e1_numeric, e2_numeric, eta, gauss_bound,
    rect_bound, robustness_bound, sinh_bound, BoundReport, RobustnessBound,
};
pub use error::{Error, Result};
pub use harness::{ErrorReport, ExperimentPlan, ReportRow};
pub use kernel::{ft_window, sinc, KernelEval};
pub use reconstruct::{
    classical_truncated, reconstruct_at, reconstruct_with, sample, SampleSet, Summation,
    TestFunction,
};
pub use windows::{
    default_params, default_params_with, eval_truncated, eval_window, window_ft_at_zero,
    SamplingConfig, SinhCase, Window, WindowKind, WindowSpec,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/quickstart.md")]
    mod quickstart {}
    #[doc = include_str!("../../../book/src/windows.md")]
    mod windows {}
    #[doc = include_str!("../../../book/src/reconstruction.md")]
    mod reconstruction {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
