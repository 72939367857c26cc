//! Modified Bessel functions of the first kind, integer order.
//!
//! Everything is computed in the scaled form `e^{−x} I_m(x)`: a power series
//! for `x ≤ 30` and Miller's backward recurrence, normalized through
//! `e^x = I₀(x) + 2 Σ_{k≥1} I_k(x)`, beyond.

use crate::error::{Error, Result};

/// Largest argument accepted by the scaled evaluation.
pub const MAX_ARGUMENT: f64 = 1500.0;
const SERIES_LIMIT: f64 = 30.0;

fn check_argument(x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Invalid(format!("Bessel argument must be non-negative, got {x}")));
    }
    if x > MAX_ARGUMENT {
        return Err(Error::Overflow(format!("Bessel argument {x} exceeds the guarded range {MAX_ARGUMENT}")));
    }
    Ok(())
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| f64::from(k).ln()).sum()
}

/// `e^{−x} I_m(x)`.
pub fn bessel_i_scaled_value(m: u32, x: f64) -> Result<f64> {
    check_argument(x)?;
    if x == 0.0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    if x <= SERIES_LIMIT {
        Ok(series(m, x))
    } else {
        Ok(miller(m, x))
    }
}

fn series(m: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    // Leading term (x/2)^m / m! times e^{−x}, formed in log space.
    let lead = (f64::from(m) * half.ln() - ln_factorial(m) - x).exp();
    let (mut term, mut sum) = (1.0, 1.0);
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + f64::from(m)));
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        k += 1.0;
    }
    lead * sum
}

fn miller(m: u32, x: f64) -> f64 {
    let m = m as usize;
    let start = m.max(x.ceil() as usize) + (80.0 * x).sqrt().ceil() as usize + 30;
    let (mut above, mut current) = (0.0f64, 1e-280f64);
    let mut wanted = 0.0;
    // Σ over k ≥ 1 of the unnormalized values.
    let mut tail = 0.0;
    for k in (1..=start).rev() {
        let below = above + 2.0 * k as f64 / x * current;
        above = current;
        current = below;
        if k - 1 == m {
            wanted = current;
        }
        tail += above;
        if current > 1e250 {
            current *= 1e-250;
            above *= 1e-250;
            tail *= 1e-250;
            wanted *= 1e-250;
        }
    }
    if m == 0 {
        wanted = current;
    }
    wanted / (current + 2.0 * tail)
}

/// `(e^{−x} I_m(x), e^{−x} I_m′(x))`.
pub fn bessel_i_scaled(m: u32, x: f64) -> Result<(f64, f64)> {
    let v = bessel_i_scaled_value(m, x)?;
    let up = bessel_i_scaled_value(m + 1, x)?;
    let d = if m == 0 { up } else { 0.5 * (bessel_i_scaled_value(m - 1, x)? + up) };
    Ok((v, d))
}

/// `(I_m(x), I_m′(x))`; errors once `e^x` is no longer representable.
pub fn bessel_i(m: u32, x: f64) -> Result<(f64, f64)> {
    let (v, d) = bessel_i_scaled(m, x)?;
    let s = x.exp();
    if !s.is_finite() {
        return Err(Error::Overflow(format!("I_{m}({x}) overflows; use the scaled form")));
    }
    Ok((v * s, d * s))
}

/// `I_{m+1}(x) / I_m(x)` by the continued fraction
/// `1 / (2(m+1)/x + 1 / (2(m+2)/x + …))`, evaluated with modified Lentz.
pub fn bessel_i_ratio(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    const TINY: f64 = 1e-300;
    let b = |k: u32| 2.0 * f64::from(m + k) / x;
    let mut f = b(1);
    let (mut c, mut d) = (f, 0.0);
    for k in 2..200_000u32 {
        d += b(k);
        if d.abs() < TINY {
            d = TINY;
        }
        c = b(k) + 1.0 / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}
