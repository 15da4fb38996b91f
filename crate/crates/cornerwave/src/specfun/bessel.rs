use super::hankel::hankel01;
use crate::error::{invalid, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Bessel function of the first kind of half-integer order, `J_{n+1/2}(x)`, for `x > 0`.
pub fn bessel_j_half(n: usize, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return invalid(format!("bessel_j_half needs x > 0, got {x}"));
    }
    if x <= 2.0 {
        return Ok(j_half_series(n, x));
    }
    let scale = (2.0 * x / PI).sqrt();
    if x >= n as f64 {
        return Ok(scale * spherical_j_upward(n, x));
    }
    Ok(scale * spherical_j_miller(n, x))
}

// Power series; for x <= 2 every term ratio is below 1/(m (m + nu)) so there is no cancellation.
fn j_half_series(n: usize, x: f64) -> f64 {
    // (x/2)^{nu} / Gamma(nu + 1) built as a product to keep full relative accuracy.
    let mut pref = (0.5 * x).sqrt() / (0.5 * PI.sqrt());
    for j in 1..=n {
        pref *= 0.5 * x / (j as f64 + 0.5);
    }
    let nu = n as f64 + 0.5;
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= q / (m * (m + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    pref * sum
}

fn spherical_j_upward(n: usize, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if n == 0 {
        return j0;
    }
    let mut jm = j0;
    let mut j = s / (x * x) - c / x;
    for l in 1..n {
        let next = (2 * l + 1) as f64 / x * j - jm;
        jm = j;
        j = next;
    }
    j
}

// Downward recurrence normalized by sum (2l+1) j_l^2 = 1, sign fixed from j_0 or j_1.
fn spherical_j_miller(n: usize, x: f64) -> f64 {
    let start = n + 40 + x as usize;
    let mut jp = 0.0;
    let mut j = 1e-30;
    let mut target = 0.0;
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for l in (0..=start).rev() {
        norm += (2 * l + 1) as f64 * j * j;
        if l == n {
            target = j;
        }
        if l == 1 {
            j1 = j;
        }
        if l == 0 {
            break;
        }
        let next = (2 * l + 1) as f64 / x * j - jp;
        jp = j;
        j = next;
        if j.abs() > 1e140 {
            jp *= 1e-140;
            j *= 1e-140;
            target *= 1e-140;
            j1 *= 1e-140;
            norm *= 1e-280;
        }
    }
    let j0 = j;
    let scale = 1.0 / norm.sqrt();
    let (s, c) = x.sin_cos();
    let true_j0 = s / x;
    let true_j1 = s / (x * x) - c / x;
    let sign = if true_j0.abs() > true_j1.abs() {
        (true_j0 * j0).signum()
    } else {
        (true_j1 * j1).signum()
    };
    sign * scale * target
}

/// `J_0(x), ..., J_nmax(x)` for real `x > 0` by normalized backward recurrence.
pub fn bessel_jn_seq(nmax: usize, x: f64) -> Result<Vec<f64>> {
    if !(x > 0.0) || !x.is_finite() {
        return invalid(format!("bessel_jn_seq needs x > 0, got {x}"));
    }
    let start = {
        let s = nmax.max(x as usize) + 40 + (2.0 * x.sqrt()) as usize;
        s + (s % 2)
    };
    let mut vals = vec![0.0; nmax + 1];
    let mut jp = 0.0;
    let mut j = 1e-30;
    let mut norm = 0.0;
    for l in (0..=start).rev() {
        if l <= nmax {
            vals[l] = j;
        }
        if l % 2 == 0 {
            norm += if l == 0 { j } else { 2.0 * j };
        }
        if l == 0 {
            break;
        }
        let next = 2.0 * l as f64 / x * j - jp;
        jp = j;
        j = next;
        if j.abs() > 1e200 {
            jp *= 1e-200;
            j *= 1e-200;
            norm *= 1e-200;
            for v in vals.iter_mut() {
                *v *= 1e-200;
            }
        }
    }
    let scale = 1.0 / norm;
    for v in vals.iter_mut() {
        *v *= scale;
    }
    Ok(vals)
}

/// `Y_0(x), ..., Y_nmax(x)` for real `x > 0` by upward recurrence.
pub fn bessel_yn_seq(nmax: usize, x: f64) -> Result<Vec<f64>> {
    if !(x > 0.0) || !x.is_finite() {
        return invalid(format!("bessel_yn_seq needs x > 0, got {x}"));
    }
    let (h0, h1) = hankel01(Complex64::new(x, 0.0));
    let mut vals = Vec::with_capacity(nmax + 1);
    vals.push(h0.im);
    if nmax >= 1 {
        vals.push(h1.im);
    }
    for l in 1..nmax {
        let next = 2.0 * l as f64 / x * vals[l] - vals[l - 1];
        vals.push(next);
    }
    Ok(vals)
}
