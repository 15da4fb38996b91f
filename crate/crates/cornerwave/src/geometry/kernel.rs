use crate::error::{invalid, Error, Result};
use crate::specfun::{bessel_j_half, erf, gaussian_tail};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Convolution kernel used to round corners.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SmoothingKernel {
    /// `c_k (1 - x^2)^k` on [-1, 1].
    Polynomial { order: u32 },
    /// Standard normal density truncated where it drops below `eps`.
    Gaussian { eps: f64 },
}

impl SmoothingKernel {
    pub fn polynomial(order: u32) -> Result<Self> {
        let k = Self::Polynomial { order };
        k.validate()?;
        Ok(k)
    }

    pub fn gaussian(eps: f64) -> Result<Self> {
        let k = Self::Gaussian { eps };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Polynomial { order: 0 } => invalid("polynomial kernel order must be positive"),
            Self::Gaussian { eps } if !(eps > 0.0 && eps <= 1e-6) => {
                invalid(format!("gaussian truncation must lie in (0, 1e-6], got {eps}"))
            }
            _ => Ok(()),
        }
    }

    /// Parses `poly:K` or `gauss` / `gauss:EPS`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(k) = spec.strip_prefix("poly:") {
            let order = k
                .parse::<u32>()
                .map_err(|_| Error::InvalidArgument(format!("bad polynomial order in '{spec}'")))?;
            return Self::polynomial(order);
        }
        if spec == "gauss" {
            return Self::gaussian(1e-15);
        }
        if let Some(e) = spec.strip_prefix("gauss:") {
            let eps = e
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad gaussian truncation in '{spec}'")))?;
            return Self::gaussian(eps);
        }
        invalid(format!("unknown kernel '{spec}', expected poly:K or gauss"))
    }

    pub fn label(&self) -> String {
        match *self {
            Self::Polynomial { order } => format!("poly:{order}"),
            Self::Gaussian { eps } => format!("gauss:{eps:e}"),
        }
    }
}

/// Normalization constant `c_k = (2k+1)!! / (2 (2k)!!)` of the polynomial kernel.
pub fn poly_constant(k: u32) -> f64 {
    let mut c = 0.5;
    for j in 1..=k {
        c *= (2 * j + 1) as f64 / (2 * j) as f64;
    }
    c
}

/// Threshold `x_eps` beyond which the standard normal density is below `eps`.
pub fn gaussian_threshold(eps: f64) -> f64 {
    (-2.0 * (eps * (2.0 * PI).sqrt()).ln()).sqrt()
}

/// Scaled kernel `(1/h) phi(x/h)`.
pub fn kernel_eval(kernel: &SmoothingKernel, x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return invalid(format!("kernel width must be positive, got {h}"));
    }
    let u = x / h;
    Ok(match *kernel {
        SmoothingKernel::Polynomial { order } => {
            if u.abs() >= 1.0 {
                0.0
            } else {
                poly_constant(order) * (1.0 - u * u).powi(order as i32) / h
            }
        }
        SmoothingKernel::Gaussian { .. } => (-0.5 * u * u).exp() / ((2.0 * PI).sqrt() * h),
    })
}

/// Fourier transform `int phi(x) e^{-2 pi i xi x} dx` of the unscaled kernel.
pub fn kernel_fourier(kernel: &SmoothingKernel, xi: f64) -> f64 {
    match *kernel {
        SmoothingKernel::Gaussian { .. } => (-2.0 * PI * PI * xi * xi).exp(),
        SmoothingKernel::Polynomial { order } => {
            let xi = xi.abs();
            if xi == 0.0 {
                return 1.0;
            }
            let nu = order as f64 + 0.5;
            let p = PI * xi;
            if p <= 1.0 {
                // sum_m (-(pi xi)^2)^m / (m! (k + 3/2)_m)
                let q = -p * p;
                let mut term = 1.0;
                let mut sum = 1.0;
                let mut m = 0.0;
                loop {
                    m += 1.0;
                    term *= q / (m * (nu + m));
                    sum += term;
                    if term.abs() < 1e-18 {
                        break;
                    }
                }
                return sum;
            }
            // Gamma(k + 3/2) = sqrt(pi) prod_{j=0}^{k} (j + 1/2), folded into the power.
            let mut log_pref = 0.5 * PI.ln();
            for j in 0..=order {
                log_pref += (j as f64 + 0.5).ln();
            }
            log_pref -= nu * p.ln();
            let j = bessel_j_half(order as usize, 2.0 * p).unwrap_or(0.0);
            log_pref.exp() * j
        }
    }
}

/// Profile `A(x) = int psi_k(u) |x - u| du` with derivatives `A'` and `A''`.
pub fn poly_profile(k: u32, x: f64) -> (f64, f64, f64) {
    let ax = x.abs();
    if ax >= 1.0 {
        return (ax, x.signum(), 0.0);
    }
    let ck = poly_constant(k);
    let w = 1.0 - x * x;
    // I_j(x) = int_0^x (1 - u^2)^j du via I_j = x w^j/(2j+1) + 2j/(2j+1) I_{j-1}.
    let mut ij = x;
    let mut wj = 1.0;
    for j in 1..=k {
        wj *= w;
        let jf = j as f64;
        ij = x * wj / (2.0 * jf + 1.0) + 2.0 * jf / (2.0 * jf + 1.0) * ij;
    }
    let wk1 = wj * w;
    let a = 2.0 * x * ck * ij + ck * wk1 / (k as f64 + 1.0);
    (a, 2.0 * ck * ij, 2.0 * ck * wj)
}

/// Closed-form convolution of the scaled Gaussian with `a|x| + b`.
pub fn gaussian_corner_profile(a: f64, b: f64, h: f64, x: f64) -> f64 {
    a * x * erf(x / (std::f64::consts::SQRT_2 * h)) + b + (2.0 / PI).sqrt() * a * h * (-x * x / (2.0 * h * h)).exp()
}

/// Largest Gaussian width whose smoothed `a|x|` stays within `eps` of `a|x|` at `x = +-w/2`.
pub fn select_delta(w: f64, a: f64, eps: f64) -> Result<f64> {
    if !(w > 0.0) || !w.is_finite() {
        return invalid(format!("zone width must be positive, got {w}"));
    }
    if !(eps > 0.0 && eps <= 1e-6) {
        return invalid(format!("tolerance must lie in (0, 1e-6], got {eps}"));
    }
    let residual = |delta: f64| a.abs() * delta * gaussian_tail(0.5 * w / delta);
    if residual(w) <= eps {
        return Ok(w);
    }
    let mut lo = w * 1e-6;
    if residual(lo) > eps {
        return Err(Error::InfeasibleTolerance(format!(
            "no gaussian width in (0, {w}] meets tolerance {eps} for slope {a}"
        )));
    }
    let mut hi = w;
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if residual(mid) <= eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
