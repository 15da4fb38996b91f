//! Fixed quadrature rules on reference intervals and Legendre expansion helpers.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights of an n-point rule.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss-Legendre rule on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// Legendre polynomial P_n(x) and its derivative.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Values P_0(x), ..., P_{n-1}(x).
pub fn legendre_values(n: usize, x: f64, out: &mut [f64]) {
    if n == 0 {
        return;
    }
    out[0] = 1.0;
    if n == 1 {
        return;
    }
    out[1] = x;
    for k in 2..n {
        let kf = k as f64;
        out[k] = ((2.0 * kf - 1.0) * x * out[k - 1] - (kf - 1.0) * out[k - 2]) / kf;
    }
}

/// Gauss-Hermite rule for weight e^{-t^2} on the real line.
pub fn gauss_hermite(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let pim4 = PI.powf(-0.25);
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z: f64 = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        nodes[i] = z;
        weights[i] = 2.0 / (pp * pp);
    }
    // Reorder ascending with symmetric copies.
    let mut out_nodes = vec![0.0; n];
    let mut out_weights = vec![0.0; n];
    for i in 0..m {
        out_nodes[n - 1 - i] = nodes[i];
        out_weights[n - 1 - i] = weights[i];
        out_nodes[i] = -nodes[i];
        out_weights[i] = weights[i];
    }
    Rule { nodes: out_nodes, weights: out_weights }
}

/// 16-point Gauss-Legendre rule, cached.
pub fn gl16() -> &'static Rule {
    static R: OnceLock<Rule> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(16))
}

/// 32-point Gauss-Legendre rule, cached.
pub fn gl32() -> &'static Rule {
    static R: OnceLock<Rule> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(32))
}

/// Barycentric weights for interpolation at the 16 Gauss-Legendre nodes.
pub fn gl16_barycentric() -> &'static [f64] {
    static W: OnceLock<Vec<f64>> = OnceLock::new();
    W.get_or_init(|| barycentric_weights(&gl16().nodes))
}

pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut w = vec![1.0; n];
    for j in 0..n {
        for k in 0..n {
            if k != j {
                w[j] /= nodes[j] - nodes[k];
            }
        }
    }
    let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for v in w.iter_mut() {
        *v /= scale;
    }
    w
}

/// Values of the Lagrange basis polynomials for `nodes` at `x`, written to `out`.
pub fn lagrange_basis(nodes: &[f64], bary: &[f64], x: f64, out: &mut [f64]) {
    for (j, &xj) in nodes.iter().enumerate() {
        if x == xj {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[j] = 1.0;
            return;
        }
    }
    let mut denom = 0.0;
    for j in 0..nodes.len() {
        let t = bary[j] / (x - nodes[j]);
        out[j] = t;
        denom += t;
    }
    for v in out.iter_mut() {
        *v /= denom;
    }
}

/// Legendre coefficients of samples taken at the Gauss-Legendre nodes of `rule`.
pub fn legendre_coefficients(rule: &Rule, samples: &[f64]) -> Vec<f64> {
    let n = rule.nodes.len();
    let mut coef = vec![0.0; n];
    let mut p = vec![0.0; n];
    for (i, &x) in rule.nodes.iter().enumerate() {
        legendre_values(n, x, &mut p);
        let ws = rule.weights[i] * samples[i];
        for k in 0..n {
            coef[k] += ws * p[k];
        }
    }
    for (k, c) in coef.iter_mut().enumerate() {
        *c *= (2 * k + 1) as f64 / 2.0;
    }
    coef
}

/// Tanh-sinh nodes on [0, 1] clustered at 0: returns (distance from 0, weight) pairs with
/// distances above `floor`.
pub fn tanh_sinh_unit(step: f64, floor: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let half_pi = 0.5 * PI;
    let mut k: i64 = -((6.0 / step) as i64);
    loop {
        let t = k as f64 * step;
        let q = half_pi * t.sinh();
        // x = (1 + tanh q)/2 = 1/(1 + e^{-2q}); weight = (pi/4) cosh t / cosh^2 q * step.
        let e = (-2.0 * q).exp();
        let x = 1.0 / (1.0 + e);
        let cq = q.cosh();
        let w = 0.5 * half_pi * t.cosh() / (cq * cq) * step;
        if x > floor && 1.0 - x > 0.0 && w > 0.0 && w.is_finite() {
            out.push((x, w));
        }
        if 1.0 - x < 1e-17 || t > 6.0 {
            break;
        }
        k += 1;
    }
    out
}

/// Adaptive Gauss-Legendre integration of a smooth function on [a, b].
pub fn adaptive_gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        let r = gl16();
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        r.nodes.iter().zip(&r.weights).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
    }
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = panel(f, a, m);
        let right = panel(f, m, b);
        let both = left + right;
        if depth >= 40 || (both - whole).abs() <= tol * both.abs().max(1e-300) {
            return both;
        }
        rec(f, a, m, left, tol, depth + 1) + rec(f, m, b, right, tol, depth + 1)
    }
    if a == b {
        return 0.0;
    }
    let whole = panel(f, a, b);
    rec(f, a, b, whole, tol, 0)
}
