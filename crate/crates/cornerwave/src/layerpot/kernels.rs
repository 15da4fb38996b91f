use crate::error::{Error, Result};
use crate::geometry::vec2::{dot, norm, sub, Point};
use crate::specfun::hankel01;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Target-source geometry entering the kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    /// `|x - y|`.
    pub r: f64,
    /// `<x - y, n_y>`.
    pub source_offset: f64,
    /// `<x - y, n_x>`.
    pub target_offset: f64,
}

impl PairGeometry {
    pub fn from_points(x: Point, y: Point, n_x: Point, n_y: Point) -> Self {
        let d = sub(x, y);
        Self { r: norm(d), source_offset: dot(d, n_y), target_offset: dot(d, n_x) }
    }
}

/// Kernels `K(x, y)` integrated against the density in `ds(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelTag {
    /// `g_k = (i/4) H_0(k r)`.
    Slp,
    /// `dg_k/dn_y`.
    Dlp,
    /// `dg_k/dn_x`.
    Sprime,
    /// `g_k + i eta dg_k/dn_y`.
    Combined { eta: Complex64 },
    /// `-(1/2pi) ln r`.
    LaplaceSlp,
    /// `(1/2pi) <x - y, n_y> / r^2`.
    LaplaceDlp,
    /// Constant 1.
    One,
}

impl KernelTag {
    /// Kernel value; `g.r` must be positive.
    #[inline]
    pub fn eval(&self, k: Complex64, g: &PairGeometry) -> Complex64 {
        let quarter_i = Complex64::new(0.0, 0.25);
        match *self {
            KernelTag::Slp => quarter_i * hankel01(k * g.r).0,
            KernelTag::Dlp => quarter_i * k * hankel01(k * g.r).1 * (g.source_offset / g.r),
            KernelTag::Sprime => -quarter_i * k * hankel01(k * g.r).1 * (g.target_offset / g.r),
            KernelTag::Combined { eta } => {
                let (h0, h1) = hankel01(k * g.r);
                quarter_i * (h0 + Complex64::i() * eta * k * h1 * (g.source_offset / g.r))
            }
            KernelTag::LaplaceSlp => Complex64::new(-g.r.ln() / (2.0 * PI), 0.0),
            KernelTag::LaplaceDlp => Complex64::new(g.source_offset / (2.0 * PI * g.r * g.r), 0.0),
            KernelTag::One => Complex64::new(1.0, 0.0),
        }
    }
}

fn check_distinct(x: Point, y: Point) -> Result<()> {
    if x == y {
        return Err(Error::Singularity(format!("kernel evaluated at coincident points ({}, {})", x[0], x[1])));
    }
    Ok(())
}

/// Single-layer kernel `(i/4) H_0^(1)(k |x - y|)`.
pub fn kernel_slp(x: Point, y: Point, k: Complex64) -> Result<Complex64> {
    check_distinct(x, y)?;
    Ok(KernelTag::Slp.eval(k, &PairGeometry::from_points(x, y, [0.0, 0.0], [0.0, 0.0])))
}

/// Double-layer kernel: normal derivative of `g_k(x, y)` in the source normal `n_y`.
pub fn kernel_dlp(x: Point, y: Point, n_y: Point, k: Complex64) -> Result<Complex64> {
    check_distinct(x, y)?;
    Ok(KernelTag::Dlp.eval(k, &PairGeometry::from_points(x, y, [0.0, 0.0], n_y)))
}

/// Adjoint double-layer kernel: normal derivative of `g_k(x, y)` in the target normal `n_x`.
pub fn kernel_sprime(x: Point, y: Point, n_x: Point, k: Complex64) -> Result<Complex64> {
    check_distinct(x, y)?;
    Ok(KernelTag::Sprime.eval(k, &PairGeometry::from_points(x, y, n_x, [0.0, 0.0])))
}
