use std::fmt;

/// Errors raised by the sampling, kernel, bound and harness layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid B-spline order {0}: must be even and at least 2")]
    InvalidOrder(i64),

    #[error("argument out of range: {0}")]
    InvalidRange(String),

    #[error("|x| = {0} exceeds the overflow guard of 700")]
    OverflowDomain(f64),

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate:e}, error {error:e})")]
    NoConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("invalid sampling configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid window parameter: {0}")]
    InvalidWindow(String),

    #[error("operation requires a {expected} window, got {got}")]
    WrongKind {
        expected: crate::WindowKind,
        got: crate::WindowKind,
    },

    #[error("epsilon {epsilon} outside the admissible range {range}")]
    EpsilonOutOfRange { epsilon: f64, range: String },

    #[error("bound not applicable: {0}")]
    ConditionViolated(String),

    #[error("samples {need_lo}..={need_hi} required but only {have_lo}..={have_hi} available")]
    IndexOutOfRange {
        need_lo: i64,
        need_hi: i64,
        have_lo: i64,
        have_hi: i64,
    },

    #[error("{0}")]
    BoundViolation(Box<BoundViolation>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Rows of a finished run whose measured error exceeded the paired bound.
#[derive(Debug)]
pub struct BoundViolation {
    pub report: crate::harness::ErrorReport,
    pub offending: Vec<usize>,
}

impl fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "measured error exceeds bound in {} row(s):",
            self.offending.len()
        )?;
        for &i in &self.offending {
            let r = &self.report.rows[i];
            write!(
                f,
                " [{} m={} tau={} lambda={}: {:e} > {:e}]",
                r.window,
                r.m,
                r.tau,
                r.lambda,
                r.measured,
                r.bound.unwrap_or(f64::NAN)
            )?;
        }
        Ok(())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
