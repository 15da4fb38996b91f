use std::f64::consts::PI;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Error function with absolute error below 1e-15.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax <= 2.5 {
        erf_series(ax)
    } else {
        1.0 - erfc_cf(ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Complementary error function, accurate in the relative sense for large positive arguments.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.5 {
        1.0 - erf(x)
    } else {
        erfc_cf(x)
    }
}

// e^{-x^2} sum 2^n x^{2n+1}/(2n+1)!!, all terms positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

// Modified Lentz evaluation of erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + ...))).
fn erfc_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..5000 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// `2 phi(y) - y erfc(y / sqrt 2)` with `phi` the standard normal density: the scaled gap
/// between a Gaussian-smoothed `|x|` and `|x|` at `x = y` standard deviations.
pub fn gaussian_tail(y: f64) -> f64 {
    let y = y.abs();
    let two_phi = (2.0 / PI).sqrt() * (-0.5 * y * y).exp();
    if y < 3.0 {
        return two_phi - y * erfc(y / std::f64::consts::SQRT_2);
    }
    // erfc(y/sqrt2) = two_phi * R(y), R(y) = 1/(y + 1/(y + 2/(y + ...))); gap = two_phi * (1 - y R).
    // Backward evaluation of the tail t = 1/(y + 2/(y + 3/(...))) so that 1 - yR = t/(y + t).
    let mut t = 0.0;
    for n in (2..400).rev() {
        t = n as f64 / (y + t);
    }
    let t = 1.0 / (y + t);
    two_phi * t / (y + t)
}
