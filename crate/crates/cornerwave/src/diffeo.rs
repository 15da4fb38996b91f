//! Harmonic extensions of boundary maps of the unit circle onto convex curves: the extension of
//! a sampled boundary parameterization and the extension built from a support function's Gauss
//! map.

use crate::error::{invalid, Error, Result};
use crate::geometry::vec2::Point;
use crate::geometry::{kernel_fourier, PiecewiseCurve, SmoothingKernel};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

/// Trailing-coefficient threshold for truncation.
pub const COEFF_TOL: f64 = 1e-14;
const MAX_SAMPLES: usize = 1 << 17;
const CONVEXITY_GRID: usize = 4096;

/// `z(theta) = x + i y = sum_{|j| <= N} c_j e^{i j theta}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierBoundaryMap {
    /// `c_{-N}, ..., c_N`.
    pub coeffs: Vec<Complex64>,
}

impl FourierBoundaryMap {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 != 1 {
            return invalid(format!("coefficient list must have odd length, got {}", coeffs.len()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return invalid("coefficients must be finite");
        }
        Ok(Self { coeffs })
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() / 2
    }

    /// `c_j`, zero outside the stored range.
    pub fn coeff(&self, j: i64) -> Complex64 {
        let n = self.order() as i64;
        if j.abs() > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(j + n) as usize]
        }
    }

    /// `center + radius e^{i theta}`.
    pub fn circle(center: Point, radius: f64) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(center[0], center[1]), Complex64::new(radius, 0.0)] }
    }

    /// `(a cos theta, b sin theta)`.
    pub fn ellipse(a: f64, b: f64) -> Self {
        Self {
            coeffs: vec![
                Complex64::new(0.5 * (a - b), 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.5 * (a + b), 0.0),
            ],
        }
    }

    /// Fits `f` on the circle by FFT, doubling the sample count until the coefficients beyond
    /// the truncation order fall below the threshold with a factor-4 margin against aliasing.
    pub fn fit<F: Fn(f64) -> Point>(f: F) -> Result<Self> {
        let mut m = 64;
        let mut planner = FftPlanner::new();
        while m <= MAX_SAMPLES {
            let mut buf: Vec<Complex64> = (0..m)
                .map(|i| {
                    let p = f(2.0 * PI * i as f64 / m as f64);
                    Complex64::new(p[0], p[1])
                })
                .collect();
            if buf.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return invalid("boundary map produced non-finite samples");
            }
            planner.plan_fft_forward(m).process(&mut buf);
            let inv = 1.0 / m as f64;
            let c = |j: i64| buf[j.rem_euclid(m as i64) as usize] * inv;
            let half = (m / 2) as i64 - 1;
            let scale = (-half..=half).map(|j| c(j).norm()).fold(0.0, f64::max).max(1e-300);
            // Smallest N with all |c_j| (|j| > N) below the threshold.
            let mut n = half;
            while n > 0 && c(n).norm().max(c(-n).norm()) < COEFF_TOL * scale {
                n -= 1;
            }
            if 4 * n <= m as i64 {
                let coeffs = (-n..=n).map(c).collect();
                return Self::new(coeffs);
            }
            m *= 2;
        }
        Err(Error::InfeasibleTolerance(format!(
            "boundary map coefficients do not decay below {COEFF_TOL:e} with {MAX_SAMPLES} samples"
        )))
    }

    /// Arclength-proportional parameterization of a closed curve.
    pub fn from_curve(curve: &PiecewiseCurve) -> Result<Self> {
        let total = curve.total_length();
        Self::fit(|theta| curve.eval(total * theta / (2.0 * PI)).point)
    }

    /// Boundary point `z(theta)`.
    pub fn boundary(&self, theta: f64) -> Point {
        let z = self.eval(1.0, theta);
        [z.re, z.im]
    }

    fn eval(&self, r: f64, theta: f64) -> Complex64 {
        let n = self.order() as i64;
        let mut acc = self.coeff(0);
        let e = Complex64::from_polar(1.0, theta);
        let mut ep = Complex64::new(1.0, 0.0);
        let mut rp = 1.0;
        for j in 1..=n {
            ep *= e;
            rp *= r;
            acc += (self.coeff(j) * ep + self.coeff(-j) * ep.conj()) * rp;
        }
        acc
    }

    /// Whether the sampled boundary turns consistently in one direction.
    pub fn is_convex(&self) -> bool {
        let pts: Vec<Point> =
            (0..CONVEXITY_GRID).map(|i| self.boundary(2.0 * PI * i as f64 / CONVEXITY_GRID as f64)).collect();
        let n = pts.len();
        let mut signs = [0usize; 2];
        let mut total = 0.0;
        for i in 0..n {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            let c = pts[(i + 2) % n];
            let d1 = [b[0] - a[0], b[1] - a[1]];
            let d2 = [c[0] - b[0], c[1] - b[1]];
            let cr = d1[0] * d2[1] - d1[1] * d2[0];
            let scale = (d1[0].hypot(d1[1])) * (d2[0].hypot(d2[1]));
            if cr > 1e-9 * scale {
                signs[0] += 1;
            } else if cr < -1e-9 * scale {
                signs[1] += 1;
            }
            total += cr.atan2(d1[0] * d2[0] + d1[1] * d2[1]);
        }
        (signs[0] == 0 || signs[1] == 0) && (total.abs() - 2.0 * PI).abs() < 1e-6
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return invalid(format!("radius must lie in [0, 1], got {r}"));
    }
    Ok(())
}

/// `Phi(theta, r) = sum c_j r^{|j|} e^{i j theta}`.
pub fn harmonic_extension(map: &FourierBoundaryMap, r: f64, theta: f64) -> Result<Point> {
    check_radius(r)?;
    let z = map.eval(r, theta);
    Ok([z.re, z.im])
}

/// Determinant of `d(x, y)/d(r, theta)` of the extension; positive for an orientation-preserving
/// diffeomorphism away from `r = 0`.
pub fn extension_jacobian(map: &FourierBoundaryMap, r: f64, theta: f64) -> Result<f64> {
    check_radius(r)?;
    let n = map.order() as i64;
    let mut dr = Complex64::new(0.0, 0.0);
    let mut dt = Complex64::new(0.0, 0.0);
    for j in -n..=n {
        if j == 0 {
            continue;
        }
        let a = j.unsigned_abs() as i32;
        let e = map.coeff(j) * Complex64::from_polar(1.0, j as f64 * theta);
        dr += e * a as f64 * r.powi(a - 1);
        dt += e * Complex64::new(0.0, j as f64) * r.powi(a);
    }
    Ok(dr.re * dt.im - dr.im * dt.re)
}

/// Real support function `g(theta) = sum beta_n e^{i n theta}` of a strictly convex curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportFunction {
    /// `beta_{-N}, ..., beta_N` with `beta_{-n} = conj(beta_n)`.
    pub beta: Vec<Complex64>,
}

impl SupportFunction {
    /// Validates symmetry and the convexity condition `g + g'' > 0` on a uniform grid.
    pub fn new(beta: Vec<Complex64>) -> Result<Self> {
        if beta.len() % 2 != 1 {
            return invalid(format!("coefficient list must have odd length, got {}", beta.len()));
        }
        let n = beta.len() / 2;
        for j in 0..=n {
            let a = beta[n + j];
            let b = beta[n - j].conj();
            if (a - b).norm() > 1e-14 * (1.0 + a.norm()) {
                return invalid(format!("support coefficients are not conjugate-symmetric at n = {j}"));
            }
        }
        let s = Self { beta };
        for i in 0..CONVEXITY_GRID {
            let t = 2.0 * PI * i as f64 / CONVEXITY_GRID as f64;
            let rho = s.radius_of_curvature(t);
            if !(rho > 0.0) {
                return invalid(format!("support function fails g + g'' > 0 at theta = {t} (value {rho})"));
            }
        }
        Ok(s)
    }

    /// `g = R`.
    pub fn circle(radius: f64) -> Result<Self> {
        Self::new(vec![Complex64::new(radius, 0.0)])
    }

    /// Support function of a smooth real periodic `g`, fitted by FFT.
    pub fn fit<F: Fn(f64) -> f64>(g: F) -> Result<Self> {
        let map = FourierBoundaryMap::fit(|t| [g(t), 0.0])?;
        let n = map.order();
        let beta = (0..=2 * n)
            .map(|i| {
                let j = i as i64 - n as i64;
                // Real data: symmetrize away rounding in the imaginary parts.
                0.5 * (map.coeff(j) + map.coeff(-j).conj())
            })
            .collect();
        Self::new(beta)
    }

    /// Support function of the axis-aligned ellipse with semi-axes `a`, `b`.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::fit(|t| (a * a * t.cos().powi(2) + b * b * t.sin().powi(2)).sqrt())
    }

    /// Square of side `side` centred at the origin, its support function convolved in the angle
    /// with the kernel at angular width `h`, plus a disc of radius `rho`. Coefficients are exact:
    /// the square's support function is `side (2/pi - (4/pi) sum_j cos(4 j theta)/(16 j^2 - 1))`.
    pub fn smoothed_square(side: f64, kernel: &SmoothingKernel, h: f64, rho: f64) -> Result<Self> {
        if !(side > 0.0 && h > 0.0 && rho > 0.0) {
            return invalid("smoothed square needs positive side, width and disc radius");
        }
        let mut terms = vec![Complex64::new(side * 2.0 / PI + rho, 0.0)];
        let mut j = 1usize;
        // Stop after a run of negligible terms; single terms can vanish at zeros of the
        // kernel's transform.
        let mut small = 0;
        loop {
            let n = 4 * j;
            let raw = -side * (2.0 / PI) / (16.0 * (j * j) as f64 - 1.0);
            let c = raw * kernel_fourier(kernel, h * n as f64 / (2.0 * PI));
            small = if c.abs() < 1e-2 * COEFF_TOL * side { small + 1 } else { 0 };
            if small >= 8 {
                break;
            }
            terms.extend([Complex64::new(0.0, 0.0); 3]);
            terms.push(Complex64::new(c, 0.0));
            j += 1;
            if j > 1 << 16 {
                return Err(Error::InfeasibleTolerance("smoothed square coefficients decay too slowly".into()));
            }
        }
        let n = terms.len() - 1;
        let mut beta: Vec<Complex64> = terms[1..].iter().rev().map(|c| c.conj()).collect();
        beta.extend(terms);
        debug_assert_eq!(beta.len(), 2 * n + 1);
        Self::new(beta)
    }

    pub fn order(&self) -> usize {
        self.beta.len() / 2
    }

    pub fn coeff(&self, j: i64) -> Complex64 {
        let n = self.order() as i64;
        if j.abs() > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.beta[(j + n) as usize]
        }
    }

    /// `(g, g', g'')` at `theta`.
    pub fn derivatives(&self, theta: f64) -> (f64, f64, f64) {
        let n = self.order() as i64;
        let (mut g, mut g1, mut g2) = (self.coeff(0).re, 0.0, 0.0);
        for j in 1..=n {
            let b = self.coeff(j);
            let e = Complex64::from_polar(1.0, j as f64 * theta);
            let v = b * e;
            let jf = j as f64;
            // beta_j e^{ij t} + conj = 2 Re(.)
            g += 2.0 * v.re;
            g1 += -2.0 * jf * v.im;
            g2 += -2.0 * jf * jf * v.re;
        }
        (g, g1, g2)
    }

    /// `g + g''`.
    pub fn radius_of_curvature(&self, theta: f64) -> f64 {
        let (g, _, g2) = self.derivatives(theta);
        g + g2
    }

    /// Coefficients `beta_{n-1} (2 - n)` of the extension of `(g + i g') e^{i theta}`.
    pub fn extension_map(&self) -> FourierBoundaryMap {
        let n = self.order() as i64;
        let coeffs = (-(n + 1)..=(n + 1)).map(|m| self.coeff(m - 1) * (2 - m) as f64).collect();
        FourierBoundaryMap { coeffs }
    }
}

/// `G(theta) = g(theta)(cos theta, sin theta) + g'(theta)(-sin theta, cos theta)`.
pub fn gauss_map_curve(support: &SupportFunction, theta: f64) -> Point {
    let (g, g1, _) = support.derivatives(theta);
    let (s, c) = theta.sin_cos();
    [g * c - g1 * s, g * s + g1 * c]
}

/// Harmonic extension `G(theta, r) = sum beta_{n-1} (2 - n) r^{|n|} e^{i n theta}`.
pub fn gauss_map_extension(support: &SupportFunction, r: f64, theta: f64) -> Result<Point> {
    harmonic_extension(&support.extension_map(), r, theta)
}

/// Writes `(r, theta, x, y)` rows for an `nr` by `nt` polar grid over the closed disc.
pub fn write_map_csv<W: Write>(map: &FourierBoundaryMap, nr: usize, nt: usize, out: &mut W, header: &[String]) -> Result<()> {
    if nr < 2 || nt < 1 {
        return invalid("sample grid needs at least 2 radii and 1 angle");
    }
    for h in header {
        writeln!(out, "# {h}")?;
    }
    writeln!(out, "r,theta,x,y")?;
    for i in 0..nr {
        let r = i as f64 / (nr - 1) as f64;
        for j in 0..nt {
            let t = 2.0 * PI * j as f64 / nt as f64;
            let p = harmonic_extension(map, r, t)?;
            writeln!(out, "{:.17e},{:.17e},{:.17e},{:.17e}", r, t, p[0], p[1])?;
        }
    }
    Ok(())
}

/// Coefficients as a JSON array of `[re, im]` pairs from index `-N` to `N`.
pub fn coeffs_to_json(coeffs: &[Complex64]) -> Result<String> {
    let pairs: Vec<[f64; 2]> = coeffs.iter().map(|c| [c.re, c.im]).collect();
    Ok(serde_json::to_string_pretty(&pairs)?)
}

/// Inverse of [`coeffs_to_json`].
pub fn coeffs_from_json(s: &str) -> Result<Vec<Complex64>> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(s)?;
    Ok(pairs.into_iter().map(|p| Complex64::new(p[0], p[1])).collect())
}
