//! Independent oracles shared by the integration tests: Gauss-Legendre rules built here by
//! Newton iteration, Bessel functions from their integral representations, and double-double
//! complex arithmetic for ascending series.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let step = p1 / dp;
            z -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Composite Gauss-Legendre integral of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            sum += wi * f(mid + 0.5 * h * xi);
        }
    }
    0.5 * h * sum
}

/// Integral over `[a, b]` of a function with an integrable singularity at `s` (inside or at an
/// end of the interval): geometrically graded 20-point Gauss-Legendre pieces toward `s`.
pub fn integrate_graded<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, s: f64) -> f64 {
    let side = |lo: f64, hi: f64, toward_lo: bool| -> f64 {
        let len = hi - lo;
        if len <= 0.0 {
            return 0.0;
        }
        let mut total = 0.0;
        let mut d = len;
        let floor = 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1e-300);
        while d > floor {
            let (x0, x1) = if toward_lo { (lo + 0.5 * d, lo + d) } else { (hi - d, hi - 0.5 * d) };
            total += integrate(&f, x0, x1, 1, 20);
            d *= 0.5;
        }
        total
    };
    side(s, b, true) + side(a, s, false)
}

/// `J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt`.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let panels = 16 + (x.abs() + n.abs() as f64) as usize;
    integrate(|t| (n as f64 * t - x * t.sin()).cos(), 0.0, PI, panels, 24) / PI
}

/// `Y_n(x)` for `x > 0` from its Schläfli integral.
pub fn bessel_y(n: i32, x: f64) -> f64 {
    let nf = n as f64;
    let panels = 16 + (x + nf.abs()) as usize;
    let first = integrate(|t| (x * t.sin() - nf * t).sin(), 0.0, PI, panels, 24) / PI;
    // Upper limit where e^{n t - x sinh t} < 1e-300.
    let mut tmax: f64 = 1.0;
    while x * tmax.sinh() - nf * tmax < 700.0 {
        tmax += 0.25;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let second = integrate(
        |t| (nf * t - x * t.sinh()).exp() + sign * (-nf * t - x * t.sinh()).exp(),
        0.0,
        tmax,
        400,
        24,
    ) / PI;
    first - second
}

/// Double-double number `hi + lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn from_parts(hi: f64, lo: f64) -> Self {
        let (s, e) = two_sum(hi, lo);
        Self { hi: s, lo: e }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = two_sum(s, e + t);
        Dd::from_parts(s, e + f)
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::from_parts(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::new(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::new(q2)));
        let q3 = r.hi / o.hi;
        Dd::from_parts(q1, q2).add(Dd::new(q3))
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re: Dd::new(re), im: Dd::new(im) }
    }

    pub fn real(re: Dd) -> Self {
        Self { re, im: Dd::new(0.0) }
    }

    pub fn add(self, o: Cdd) -> Cdd {
        Cdd { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    pub fn sub(self, o: Cdd) -> Cdd {
        Cdd { re: self.re.sub(o.re), im: self.im.sub(o.im) }
    }

    pub fn mul(self, o: Cdd) -> Cdd {
        Cdd { re: self.re.mul(o.re).sub(self.im.mul(o.im)), im: self.re.mul(o.im).add(self.im.mul(o.re)) }
    }

    pub fn scale(self, s: Dd) -> Cdd {
        Cdd { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn to_c64(self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// pi to double-double precision.
pub const PI_DD: Dd = Dd { hi: std::f64::consts::PI, lo: 1.2246467991473532e-16 };
/// Euler-Mascheroni constant to double-double precision.
pub const GAMMA_DD: Dd = Dd { hi: 0.5772156649015329, lo: -4.942915152430645e-18 };

/// `ln z` in double-double: an f64 start refined by one Newton step on `exp(w) = z`.
fn ln_dd(z: Cdd) -> Cdd {
    let (re, im) = z.to_c64();
    let w0 = num_complex::Complex64::new(re, im).ln();
    let mut w = Cdd::new(w0.re, w0.im);
    for _ in 0..2 {
        let e = exp_dd(w);
        // w <- w + (z - e) / e
        let num = z.sub(e);
        let den_norm = e.re.mul(e.re).add(e.im.mul(e.im));
        let q = Cdd {
            re: num.re.mul(e.re).add(num.im.mul(e.im)).div(den_norm),
            im: num.im.mul(e.re).sub(num.re.mul(e.im)).div(den_norm),
        };
        w = w.add(q);
    }
    w
}

/// `exp(w)` in double-double by argument reduction and Taylor series.
fn exp_dd(w: Cdd) -> Cdd {
    // exp(w) = exp(w / 2^s)^(2^s).
    let s = 12;
    let scale = Dd::new(1.0 / (1u64 << s) as f64);
    let u = w.scale(scale);
    let mut term = Cdd::new(1.0, 0.0);
    let mut sum = Cdd::new(1.0, 0.0);
    for m in 1..30 {
        term = term.mul(u).scale(Dd::new(1.0).div(Dd::new(m as f64)));
        sum = sum.add(term);
    }
    for _ in 0..s {
        sum = sum.mul(sum);
    }
    sum
}

/// `(H_0^(1)(z), H_1^(1)(z))` from the ascending series in double-double arithmetic.
pub fn hankel01_dd(zr: f64, zi: f64) -> ((f64, f64), (f64, f64)) {
    let z = Cdd::new(zr, zi);
    let half = Dd::new(0.5);
    let zh = z.scale(half);
    let q = zh.mul(zh).scale(Dd::new(-1.0));
    let mut t0 = Cdd::new(1.0, 0.0);
    let mut t1 = Cdd::new(1.0, 0.0);
    let mut j0 = t0;
    let mut j1s = t1;
    let mut s0 = Cdd::new(0.0, 0.0);
    let mut s1 = Cdd::new(0.0, 0.0);
    let mut harm = Dd::new(0.0);
    let mut harm1 = Dd::new(1.0);
    // Y_1 series uses H_m + H_{m+1}; at m = 0 that is 1.
    s1 = s1.add(t1.scale(harm.add(harm1)));
    for m in 1..200 {
        let mf = Dd::new(m as f64);
        let mf1 = Dd::new(m as f64 + 1.0);
        harm = harm.add(Dd::new(1.0).div(mf));
        harm1 = harm1.add(Dd::new(1.0).div(mf1));
        t0 = t0.mul(q).scale(Dd::new(1.0).div(mf.mul(mf)));
        t1 = t1.mul(q).scale(Dd::new(1.0).div(mf.mul(mf1)));
        j0 = j0.add(t0);
        j1s = j1s.add(t1);
        s0 = s0.add(t0.scale(harm));
        s1 = s1.add(t1.scale(harm.add(harm1)));
        let (a, b) = t0.to_c64();
        if (a.abs() + b.abs()) < 1e-40 {
            break;
        }
    }
    let two_over_pi = Dd::new(2.0).div(PI_DD);
    let l = ln_dd(zh).add(Cdd::real(GAMMA_DD));
    // Y0 = (2/pi) [(ln(z/2) + gamma) J0 + sum_{m>=1} (-1)^{m+1} H_m (z/2)^{2m}/(m!)^2].
    let y0 = l.mul(j0).sub(s0).scale(two_over_pi);
    let j1 = j1s.mul(zh);
    // Y1 = (2/pi)(ln(z/2)+gamma) J1 - 2/(pi z) - (1/pi) sum (-1)^m (H_m + H_{m+1}) (z/2)^{2m+1}/(m!(m+1)!)
    let inv_z = {
        let n = z.re.mul(z.re).add(z.im.mul(z.im));
        Cdd { re: z.re.div(n), im: z.im.neg().div(n) }
    };
    let y1 = l
        .mul(j1)
        .scale(two_over_pi)
        .sub(inv_z.scale(two_over_pi))
        .sub(s1.mul(zh).scale(Dd::new(1.0).div(PI_DD)));
    let i = Cdd::new(0.0, 1.0);
    let h0 = j0.add(i.mul(y0));
    let h1 = j1.add(i.mul(y1));
    (h0.to_c64(), h1.to_c64())
}

/// Coefficients of the scattered field of a plane wave off the disc of radius `a` at radius `r`:
/// `i^n (J_n(ka) / H_n(ka)) H_n(kr)` (sound-soft) or with derivatives at `ka` (sound-hard).
pub fn disc_terms(neumann: bool, k: f64, a: f64, r: f64) -> Vec<(f64, f64)> {
    let nmax = (k * a) as i32 + 40;
    (0..=nmax)
        .map(|n| {
            let (num, hr, hi) = if neumann {
                let dj = 0.5 * (bessel_j(n - 1, k * a) - bessel_j(n + 1, k * a));
                let dy = 0.5 * (bessel_y(n - 1, k * a) - bessel_y(n + 1, k * a));
                (dj, dj, dy)
            } else {
                let j = bessel_j(n, k * a);
                (j, j, bessel_y(n, k * a))
            };
            // num / (hr + i hi) times i^n (J_n(kr) + i Y_n(kr)).
            let d = hr * hr + hi * hi;
            let (qr, qi) = (num * hr / d, -num * hi / d);
            let (jr, yr) = (bessel_j(n, k * r), bessel_y(n, k * r));
            let (pr, pi) = (qr * jr - qi * yr, qr * yr + qi * jr);
            match n.rem_euclid(4) {
                0 => (pr, pi),
                1 => (-pi, pr),
                2 => (-pr, -pi),
                _ => (pi, -pr),
            }
        })
        .collect()
}

/// Scattered field `-sum_n eps_n t_n cos(n psi)` at angle `psi` from the incidence direction.
pub fn disc_series(terms: &[(f64, f64)], psi: f64) -> (f64, f64) {
    let (mut re, mut im) = terms[0];
    for (n, t) in terms.iter().enumerate().skip(1) {
        let c = 2.0 * (n as f64 * psi).cos();
        re += c * t.0;
        im += c * t.1;
    }
    (-re, -im)
}
