use super::EULER_GAMMA;
use crate::error::{invalid, Error, Result};
use crate::quadrature::{gauss_hermite, Rule};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::OnceLock;

const SERIES_RADIUS: f64 = 4.0;
const ASYMPTOTIC_RADIUS: f64 = 16.0;
const IMAG_SWITCH: f64 = 0.5;

/// Hankel function of the first kind `H_order^(1)(z)` for order 0 or 1.
pub fn hankel1(order: u32, z: Complex64) -> Result<Complex64> {
    if order > 1 {
        return invalid(format!("hankel1 supports orders 0 and 1, got {order}"));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return invalid(format!("hankel1 needs a finite argument, got {z}"));
    }
    if z.norm() == 0.0 {
        return Err(Error::Singularity("hankel1 at z = 0".into()));
    }
    let (h0, h1) = hankel01(z);
    Ok(if order == 0 { h0 } else { h1 })
}

/// `(H_0^(1)(z), H_1^(1)(z))` for nonzero finite `z`; no argument checks.
pub fn hankel01(z: Complex64) -> (Complex64, Complex64) {
    let r = z.norm();
    if r > ASYMPTOTIC_RADIUS {
        return asymptotic(z);
    }
    if z.im > IMAG_SWITCH && r > 2.0 {
        return integral(z);
    }
    if r <= SERIES_RADIUS {
        series(z)
    } else {
        miller(z)
    }
}

fn series(z: Complex64) -> (Complex64, Complex64) {
    let q = -0.25 * z * z;
    let mut j0 = Complex64::new(1.0, 0.0);
    let mut j1s = Complex64::new(1.0, 0.0);
    let mut y0s = Complex64::new(0.0, 0.0);
    let mut y1s = Complex64::new(1.0, 0.0); // (H_0 + H_1) = 1 at m = 0
    let mut t0 = Complex64::new(1.0, 0.0); // q^m/(m!)^2
    let mut t1 = Complex64::new(1.0, 0.0); // q^m/(m!(m+1)!)
    let mut harm = 0.0;
    for m in 1..60 {
        let mf = m as f64;
        harm += 1.0 / mf;
        t0 *= q / (mf * mf);
        t1 *= q / (mf * (mf + 1.0));
        j0 += t0;
        j1s += t1;
        y0s -= harm * t0;
        y1s += (2.0 * harm + 1.0 / (mf + 1.0)) * t1;
        if t0.norm() < 1e-17 * j0.norm().max(1e-300) && t0.norm() * harm < 1e-17 {
            break;
        }
    }
    let half = 0.5 * z;
    let j1 = half * j1s;
    let lg = half.ln() + EULER_GAMMA;
    let y0 = (2.0 / PI) * (lg * j0 + y0s);
    let y1 = -2.0 / (PI * z) + (2.0 / PI) * lg * j1 - (1.0 / PI) * half * y1s;
    let i = Complex64::i();
    (j0 + i * y0, j1 + i * y1)
}

fn miller(z: Complex64) -> (Complex64, Complex64) {
    let r = z.norm();
    let mut top = (r + 36.0) as usize;
    top += top % 2;
    let inv = 1.0 / z;
    let mut jp = Complex64::new(0.0, 0.0);
    let mut j = Complex64::new(1e-30, 0.0);
    let mut vals = vec![Complex64::new(0.0, 0.0); top + 2];
    vals[top] = j;
    for l in (1..=top).rev() {
        let next = 2.0 * l as f64 * inv * j - jp;
        jp = j;
        j = next;
        vals[l - 1] = j;
    }
    // Normalize with 1 = J_0 + 2 sum J_{2k}.
    let mut norm = vals[0];
    for k in (2..=top).step_by(2) {
        norm += 2.0 * vals[k];
    }
    let scale = 1.0 / norm;
    for v in vals.iter_mut() {
        *v *= scale;
    }
    let j0 = vals[0];
    let j1 = vals[1];
    let lg = (0.5 * z).ln() + EULER_GAMMA;
    let mut s0 = Complex64::new(0.0, 0.0);
    let mut s1 = Complex64::new(0.0, 0.0);
    let mut sign = -1.0;
    for k in 1..=top / 2 {
        let kf = k as f64;
        s0 += sign * vals[2 * k] / kf;
        s1 += sign * (vals[2 * k - 1] - vals[2 * k + 1]) / kf;
        sign = -sign;
    }
    let y0 = (2.0 / PI) * lg * j0 - (4.0 / PI) * s0;
    let y1 = (2.0 / PI) * (lg * j1 - j0 * inv) + (2.0 / PI) * s1;
    let i = Complex64::i();
    (j0 + i * y0, j1 + i * y1)
}

fn asymptotic(z: Complex64) -> (Complex64, Complex64) {
    let inv = 1.0 / z;
    let i = Complex64::i();
    let sum = |nu: f64| -> Complex64 {
        let mu = 4.0 * nu * nu;
        let mut term = Complex64::new(1.0, 0.0);
        let mut s = term;
        let mut last = f64::INFINITY;
        for k in 1..=40 {
            let kf = k as f64;
            let odd = 2.0 * kf - 1.0;
            let next = term * i * inv * ((mu - odd * odd) / (8.0 * kf));
            let mag = next.norm();
            if mag > last {
                break;
            }
            term = next;
            s += term;
            last = mag;
            if mag < 1e-17 * s.norm() {
                break;
            }
        }
        s
    };
    // e^{iz} is formed from the exact argument; subtracting pi/4 first would cost digits at large |z|.
    let phase = (2.0 / (PI * z)).sqrt() * (i * z).exp();
    let h0 = phase * Complex64::from_polar(1.0, -FRAC_PI_4) * sum(0.0);
    let h1 = phase * Complex64::from_polar(1.0, -FRAC_PI_2 - FRAC_PI_4) * sum(1.0);
    (h0, h1)
}

fn hermite() -> &'static Rule {
    static R: OnceLock<Rule> = OnceLock::new();
    R.get_or_init(|| gauss_hermite(120))
}

// H_nu(z) = sqrt(2/(pi z)) e^{i(z - nu pi/2 - pi/4)} / Gamma(nu + 1/2)
//           * int_R |t|^{2nu} e^{-t^2} (1 + i t^2/(2z))^{nu - 1/2} dt
fn integral(z: Complex64) -> (Complex64, Complex64) {
    let rule = hermite();
    let i = Complex64::i();
    let c = i / (2.0 * z);
    let mut s0 = Complex64::new(0.0, 0.0);
    let mut s1 = Complex64::new(0.0, 0.0);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let t2 = t * t;
        let base = 1.0 + c * t2;
        let root = base.sqrt();
        s0 += w / root;
        s1 += w * t2 * root;
    }
    let pref = (2.0 / (PI * z)).sqrt();
    let sqrt_pi = PI.sqrt();
    let h0 = pref * (i * (z - FRAC_PI_4)).exp() * s0 / sqrt_pi;
    let h1 = pref * (i * (z - FRAC_PI_2 - FRAC_PI_4)).exp() * s1 / (0.5 * sqrt_pi);
    (h0, h1)
}
