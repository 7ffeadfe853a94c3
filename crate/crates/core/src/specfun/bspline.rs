use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Centered cardinal B-spline `M_{2s}` of even order `order_2s`, supported on `[-s, s]`.
pub fn cardinal_bspline(order_2s: i64, x: f64) -> Result<f64> {
    if order_2s < 2 || order_2s % 2 != 0 {
        return Err(Error::InvalidOrder(order_2s));
    }
    Ok(centered_bspline(order_2s as usize, x))
}

// Cox-de Boor triangle on the shifted spline N_n(y), y = |x| + n/2.
pub(crate) fn centered_bspline(n: usize, x: f64) -> f64 {
    let half = n as f64 / 2.0;
    let y = x.abs() + half;
    if !(y < n as f64) {
        return 0.0;
    }
    let j = y.floor() as usize;
    let f = y - j as f64;
    let mut b = vec![0.0; n];
    b[0] = 1.0;
    for k in 2..=n {
        let kf = k as f64;
        for i in (0..k).rev() {
            let z = f + i as f64;
            let left = if i > 0 { b[i - 1] } else { 0.0 };
            b[i] = (z * b[i] + (kf - z) * left) / (kf - 1.0);
        }
    }
    b[j]
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Eulerian number `E(n, k-1)`, the count of permutations of `n` elements with `k-1` ascents.
pub fn eulerian_number(n: i64, k: i64) -> Result<BigInt> {
    if k < 1 || k > n {
        return Err(Error::InvalidRange(format!(
            "eulerian_number needs 1 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    let (n, k) = (n as u64, k as u64);
    let mut sum = BigInt::zero();
    for j in 0..k {
        let term = binomial(n + 1, j) * BigInt::from(k - j).pow(n as u32);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

/// Exact `M_{2s}(0)`.
pub fn m2s_at_zero(s: i64) -> Result<BigRational> {
    if s < 1 {
        return Err(Error::InvalidRange(format!(
            "m2s_at_zero needs s >= 1, got {s}"
        )));
    }
    let n = 2 * s - 1;
    let numer = eulerian_number(n, s)?;
    Ok(BigRational::new(numer, factorial(n as u64)))
}

/// `M_{2s}(0)` rounded to the nearest double.
pub fn m2s_at_zero_f64(s: i64) -> Result<f64> {
    let r = m2s_at_zero(s)?;
    r.to_f64()
        .ok_or_else(|| Error::InvalidRange(format!("M_2s(0) not representable for s = {s}")))
}
