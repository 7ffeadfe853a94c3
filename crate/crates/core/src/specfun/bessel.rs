use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

const MILLER_LIMIT: f64 = 25.0;
const I1_SERIES_LIMIT: f64 = 30.0;
const I1_OVERFLOW: f64 = 700.0;

/// Bessel function of the first kind of order one.
///
/// Power series below 2, Miller's backward recurrence up to 25 and the
/// Hankel expansion beyond.
pub fn bessel_j1(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let a = x.abs();
    let r = if a < 2.0 {
        j1_series(a)
    } else if a < MILLER_LIMIT {
        j1_miller(a)
    } else {
        j1_hankel(a)
    };
    if x < 0.0 {
        -r
    } else {
        r
    }
}

fn j1_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + 1.0));
        sum += term;
        if term.abs() <= sum.abs() * 1e-17 {
            return sum;
        }
    }
}

// Backward recurrence J_{n-1} = (2n/x) J_n - J_{n+1}, normalised by
// J_0 + 2 (J_2 + J_4 + ...) = 1.
fn j1_miller(x: f64) -> f64 {
    let start = 2 * ((x as usize + 20 + (60.0 * x).sqrt() as usize) / 2);
    let mut above = 0.0;
    let mut cur = 1e-30;
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for n in (1..=start).rev() {
        let below = 2.0 * n as f64 / x * cur - above;
        above = cur;
        cur = below;
        let order = n - 1;
        if order == 1 {
            j1 = cur;
        }
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += cur;
    j1 / norm
}

// a_k for order one: prod_{i=1..k} (4 - (2i-1)^2) / (k! 8^k).
fn hankel_terms(x: f64) -> (f64, f64) {
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (4.0 - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= prev || term == 0.0 {
            break;
        }
        prev = term.abs();
        // P collects even k with alternating signs, Q the odd ones.
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    (p, q)
}

fn j1_hankel(x: f64) -> f64 {
    let (p, q) = hankel_terms(x);
    let (s, c) = x.sin_cos();
    // chi = x - 3pi/4, expanded so the argument reduction stays exact.
    let cos_chi = (s - c) * FRAC_1_SQRT_2;
    let sin_chi = -(s + c) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Modified Bessel function of the first kind of order one.
pub fn bessel_i1(x: f64) -> Result<f64> {
    if x.abs() > I1_OVERFLOW {
        return Err(Error::OverflowDomain(x));
    }
    let a = x.abs();
    let r = if a <= I1_SERIES_LIMIT {
        i1_series(a)
    } else {
        i1_asymptotic_scaled(a) * a.exp()
    };
    Ok(r.copysign(x))
}

/// `e^{-|x|} I_1(x)`, finite for every finite argument.
pub fn bessel_i1_scaled(x: f64) -> f64 {
    let a = x.abs();
    let r = if a <= I1_SERIES_LIMIT {
        i1_series(a) * (-a).exp()
    } else {
        i1_asymptotic_scaled(a)
    };
    r.copysign(x)
}

fn i1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + 1.0));
        sum += term;
        if term <= sum * 1e-17 {
            return sum;
        }
    }
}

fn i1_asymptotic_scaled(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (4.0 - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

/// `J_1(sqrt d) / sqrt d`, continued analytically to `I_1(sqrt(-d)) / sqrt(-d)`
/// for negative `d`. The function is entire in `d` with value 1/2 at 0.
///
/// The second component is an exponent `e` such that the true value is
/// `result.0 * exp(e)`; it is nonzero only on the `I_1` side, keeping large
/// arguments representable.
pub fn j1_over_sqrt(d: f64) -> (f64, f64) {
    if d.abs() < 4.0 {
        let q = -0.25 * d;
        let mut term = 0.5;
        let mut sum = term;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= q / (k * (k + 1.0));
            sum += term;
            if term.abs() <= sum.abs() * 1e-17 {
                return (sum, 0.0);
            }
        }
    }
    if d > 0.0 {
        let z = d.sqrt();
        (bessel_j1(z) / z, 0.0)
    } else {
        let z = (-d).sqrt();
        (bessel_i1_scaled(z) / z, z)
    }
}
