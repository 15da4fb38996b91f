//! Incident fields, off-surface evaluation, cross sections, error metrics and order fitting.

use crate::error::{invalid, Error, Result};
use crate::geometry::vec2::{dot, norm, sub, Point};
use crate::geometry::{Polygon, SmoothingKernel};
use crate::layerpot::{KernelTag, PairGeometry, Wavenumber};
use crate::panels::polyline_contains;
use crate::solver::{BoundaryCondition, Density, FactoredOperator, GeometrySource, Incidence, ScatteringProblem};
use crate::specfun::{bessel_jn_seq, bessel_yn_seq, hankel01};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

/// Plane wave `e^{ik(x cos phi + y sin phi)}` and its gradient.
pub fn plane_wave(phi: f64, k: Complex64, x: Point) -> (Complex64, [Complex64; 2]) {
    let (s, c) = phi.sin_cos();
    let ik = Complex64::i() * k;
    let u = (ik * (x[0] * c + x[1] * s)).exp();
    (u, [ik * c * u, ik * s * u])
}

/// Free-space Green's function `g_k(x, x0)` and its gradient in `x`.
pub fn point_source(x0: Point, k: Complex64, x: Point) -> (Complex64, [Complex64; 2]) {
    let d = sub(x, x0);
    let r = norm(d);
    let (h0, h1) = hankel01(k * r);
    let quarter_i = Complex64::new(0.0, 0.25);
    let dr = -quarter_i * k * h1 / r;
    (quarter_i * h0, [dr * d[0], dr * d[1]])
}

/// Evaluates the density's representation at off-surface targets with the plain panel rule.
pub fn eval_field(density: &Density, targets: &[Point]) -> Result<Vec<Complex64>> {
    let mesh = &density.mesh;
    let pts = mesh.points();
    for (i, &t) in targets.iter().enumerate() {
        if !t[0].is_finite() || !t[1].is_finite() {
            return invalid(format!("target {i} is not finite"));
        }
        for (p, panel) in mesh.panels().iter().enumerate() {
            let nodes = &pts[16 * p..16 * p + 16];
            let d = nodes.iter().map(|&q| norm(sub(t, q))).fold(f64::INFINITY, f64::min);
            if d <= 2.0 * panel.length {
                return Err(Error::NearBoundary { index: i, x: t[0], y: t[1] });
            }
        }
    }
    let k = density.k.value();
    let kernel = density.formulation.representation(k);
    let normals = mesh.normals();
    let weights = mesh.weights();
    Ok(targets
        .par_iter()
        .map(|&t| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..pts.len() {
                let g = PairGeometry::from_points(t, pts[j], [0.0, 0.0], normals[j]);
                acc += kernel.eval(k, &g) * density.values[j] * weights[j];
            }
            acc
        })
        .collect())
}

/// Which cross section a sample set represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossSectionKind {
    MonoStatic,
    BiStatic,
    FarField,
}

/// Complex samples of the scattered field on a uniform angle grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    pub kind: CrossSectionKind,
    /// Circle radius for near-field kinds.
    pub radius: Option<f64>,
    pub center: Point,
    pub thetas: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Free-form provenance, e.g. the far-field prefactor convention.
    pub meta: Vec<(String, String)>,
}

/// Uniform grid `2 pi i / m`.
pub fn angle_grid(m: usize) -> Vec<f64> {
    (0..m).map(|i| 2.0 * PI * i as f64 / m as f64).collect()
}

fn circle_targets(density: &Density, radius: f64, thetas: &[f64]) -> Result<Vec<Point>> {
    if !(radius > 0.0) || !radius.is_finite() {
        return invalid(format!("cross-section radius must be positive, got {radius}"));
    }
    let c = density.center;
    let targets: Vec<Point> = thetas.iter().map(|t| [c[0] + radius * t.cos(), c[1] + radius * t.sin()]).collect();
    for (i, &t) in targets.iter().enumerate() {
        if polyline_contains(density.mesh.points(), t) {
            return invalid(format!("evaluation circle of radius {radius} enters the scatterer at sample {i}"));
        }
    }
    Ok(targets)
}

fn near_error(e: Error, radius: f64) -> Error {
    match e {
        Error::NearBoundary { index, x, y } => Error::InvalidArgument(format!(
            "evaluation circle of radius {radius} passes too close to the boundary at sample {index} ({x}, {y})"
        )),
        e => e,
    }
}

/// Bi-static section: the scattered field on the circle of radius `d` about the centre.
pub fn cross_section_near(density: &Density, d: f64, m: usize) -> Result<CrossSection> {
    if m < 8 {
        return invalid(format!("need at least 8 angles, got {m}"));
    }
    let thetas = angle_grid(m);
    let targets = circle_targets(density, d, &thetas)?;
    let values = eval_field(density, &targets).map_err(|e| near_error(e, d))?;
    Ok(CrossSection {
        kind: CrossSectionKind::BiStatic,
        radius: Some(d),
        center: density.center,
        thetas,
        values,
        meta: vec![("samples".into(), m.to_string())],
    })
}

/// Mono-static section: for each angle `theta` the backscatter at `theta` of the plane wave
/// incident from `theta + pi`, reusing one factorization.
pub fn cross_section_mono(op: &FactoredOperator, d: f64, m: usize) -> Result<CrossSection> {
    if m < 8 {
        return invalid(format!("need at least 8 angles, got {m}"));
    }
    let thetas = angle_grid(m);
    let mut values = Vec::with_capacity(m);
    for &t in &thetas {
        let phi = (t + PI).rem_euclid(2.0 * PI);
        let density = op.solve(&Incidence::PlaneWave { phi })?;
        let target = circle_targets(&density, d, &[t])?;
        values.push(eval_field(&density, &target).map_err(|e| near_error(e, d))?[0]);
    }
    Ok(CrossSection {
        kind: CrossSectionKind::MonoStatic,
        radius: Some(d),
        center: op.center,
        thetas,
        values,
        meta: vec![("samples".into(), m.to_string())],
    })
}

/// Far-field signature `F`, normalised so that
/// `u(c + rho (cos t, sin t)) ~ sqrt(1/(8 pi k)) e^{i pi/4} e^{ik rho} / sqrt(rho) F(t)`.
pub fn cross_section_far(density: &Density, m: usize) -> Result<CrossSection> {
    if m < 8 {
        return invalid(format!("need at least 8 angles, got {m}"));
    }
    let k = density.k.value();
    let kernel = density.formulation.representation(k);
    let mesh = &density.mesh;
    let c = density.center;
    let thetas = angle_grid(m);
    let mut values = Vec::with_capacity(m);
    for &t in &thetas {
        let rhat = [t.cos(), t.sin()];
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..mesh.len() {
            let y = sub(mesh.points()[j], c);
            let factor = match kernel {
                KernelTag::Slp => Complex64::new(1.0, 0.0),
                KernelTag::Combined { eta } => 1.0 + eta * k * dot(rhat, mesh.normals()[j]),
                _ => return invalid("far field is only defined for Helmholtz representations"),
            };
            acc += factor * (-Complex64::i() * k * dot(rhat, y)).exp() * density.values[j] * mesh.weights()[j];
        }
        values.push(acc);
    }
    Ok(CrossSection {
        kind: CrossSectionKind::FarField,
        radius: None,
        center: c,
        thetas,
        values,
        meta: vec![
            ("samples".into(), m.to_string()),
            ("prefactor".into(), "sqrt(1/(8 pi k)) e^{i pi/4} e^{ik|x|}/sqrt(|x|)".into()),
            ("origin".into(), format!("{} {}", c[0], c[1])),
        ],
    })
}

/// `sqrt(1/(8 pi k)) e^{i pi/4} e^{ik rho} / sqrt(rho)`.
pub fn far_field_prefactor(k: Complex64, rho: f64) -> Complex64 {
    (1.0 / (8.0 * PI * k)).sqrt() * Complex64::from_polar(1.0, PI / 4.0) * (Complex64::i() * k * rho).exp() / rho.sqrt()
}

/// Decibel values with a note for every zero sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Decibels {
    pub values: Vec<f64>,
    pub warnings: Vec<String>,
}

/// `10 log10 |u|`; zero samples give negative infinity.
pub fn to_db(c: &CrossSection) -> Decibels {
    let mut warnings = Vec::new();
    let values = c
        .values
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let a = u.norm();
            if a == 0.0 {
                warnings.push(format!("sample {i} at theta {} has zero magnitude", c.thetas[i]));
                f64::NEG_INFINITY
            } else {
                10.0 * a.log10()
            }
        })
        .collect();
    Decibels { values, warnings }
}

/// Error of `a` against the reference `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rmse: f64,
    pub rel_l2: f64,
}

/// RMSE and relative l2 error of complex samples.
pub fn compare(a: &CrossSection, b: &CrossSection) -> Result<Comparison> {
    if a.kind != b.kind {
        return invalid(format!("cannot compare {:?} with {:?}", a.kind, b.kind));
    }
    let same_radius = match (a.radius, b.radius) {
        (Some(x), Some(y)) => (x - y).abs() <= 1e-12 * x.abs().max(1.0),
        (None, None) => true,
        _ => false,
    };
    if !same_radius {
        return invalid("cross sections sampled on different radii");
    }
    if a.thetas.len() != b.thetas.len() || a.thetas.iter().zip(&b.thetas).any(|(x, y)| (x - y).abs() > 1e-12) {
        return invalid("cross sections sampled on different angle grids");
    }
    if a.thetas.is_empty() {
        return invalid("empty cross sections");
    }
    let mut diff = 0.0;
    let mut refn = 0.0;
    for (x, y) in a.values.iter().zip(&b.values) {
        diff += (x - y).norm_sqr();
        refn += y.norm_sqr();
    }
    let rel_l2 = if refn > 0.0 { (diff / refn).sqrt() } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
    Ok(Comparison { rmse: (diff / a.values.len() as f64).sqrt(), rel_l2 })
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub n: usize,
    pub rmse: f64,
    pub rel_l2: f64,
}

/// Errors of a sweep over rounding widths against a reference solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub rows: Vec<ConvergenceRow>,
    /// Node count of the reference solve (the `h = 0` row).
    pub reference_n: usize,
    pub fitted_order: Option<f64>,
    pub samples: usize,
    pub radius: f64,
}

impl ConvergenceRecord {
    pub fn new(rows: Vec<ConvergenceRow>, reference_n: usize, samples: usize, radius: f64) -> Result<Self> {
        if rows.windows(2).any(|w| !(w[1].h < w[0].h)) {
            return invalid("convergence rows must have strictly decreasing h");
        }
        if rows.iter().any(|r| !(r.rmse >= 0.0) || !(r.rel_l2 >= 0.0)) {
            return invalid("convergence errors must be nonnegative");
        }
        let mut rec = Self { rows, reference_n, fitted_order: None, samples, radius };
        rec.fitted_order = fit_order(&rec).ok();
        Ok(rec)
    }

    /// Whether the relative errors decrease strictly with `h`.
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].rel_l2 < w[0].rel_l2)
    }
}

/// Least-squares slope of `ln rel_l2` against `ln h`.
pub fn fit_order(record: &ConvergenceRecord) -> Result<f64> {
    let pts: Vec<(f64, f64)> = record.rows.iter().map(|r| (r.h, r.rel_l2)).collect();
    fit_loglog(&pts)
}

/// Least-squares slope of `ln e` against `ln h` for `(h, e)` pairs.
pub fn fit_loglog(pts: &[(f64, f64)]) -> Result<f64> {
    if pts.len() < 3 {
        return invalid(format!("order fit needs at least 3 points, got {}", pts.len()));
    }
    if pts.iter().any(|&(h, e)| !(h > 0.0) || !(e > 0.0)) {
        return invalid("order fit needs positive h and errors");
    }
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return invalid("order fit needs distinct h values");
    }
    Ok(sxy / sxx)
}

/// Parameters of an h-sweep against the corner reference.
#[derive(Debug, Clone)]
pub struct SweepSetup {
    pub polygon: Polygon,
    pub kernel: SmoothingKernel,
    pub hs: Vec<f64>,
    pub bc: BoundaryCondition,
    pub k: Wavenumber,
    pub phi: f64,
    pub radius: f64,
    pub samples: usize,
    pub tol: f64,
    pub depth_scale: f64,
    pub node_budget: usize,
}

/// Outcome of a sweep: the record plus the sampled sections, reference first.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub record: ConvergenceRecord,
    pub reference: CrossSection,
    pub sections: Vec<CrossSection>,
}

impl SweepSetup {
    fn run(&self, geometry: GeometrySource) -> Result<(usize, CrossSection)> {
        let mut p = ScatteringProblem::new(geometry, self.bc, self.k, Incidence::PlaneWave { phi: self.phi });
        p.tol = self.tol;
        p.node_budget = self.node_budget;
        let d = crate::solver::solve(&p)?;
        Ok((d.mesh.len(), cross_section_near(&d, self.radius, self.samples)?))
    }

    /// Node count and bi-static section of the corner-reference solve.
    pub fn run_reference(&self) -> Result<(usize, CrossSection)> {
        self.run(GeometrySource::CornerReference { polygon: self.polygon.clone(), depth_scale: self.depth_scale })
    }

    /// Node count and bi-static section for rounding width `h`.
    pub fn run_smoothed(&self, h: f64) -> Result<(usize, CrossSection)> {
        self.run(GeometrySource::Smoothed { polygon: self.polygon.clone(), h, kernel: self.kernel })
    }
}

/// Solves the reference and every smoothed geometry, runs up to `jobs` solves at once.
pub fn convergence_sweep(setup: &SweepSetup, jobs: usize) -> Result<SweepResult> {
    let (reference_n, reference) = setup.run_reference()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<(usize, CrossSection)>> =
        pool.install(|| setup.hs.par_iter().map(|&h| setup.run_smoothed(h)).collect());
    let mut rows = Vec::new();
    let mut sections = Vec::new();
    for (&h, r) in setup.hs.iter().zip(results) {
        let (n, cs) = r?;
        let c = compare(&cs, &reference)?;
        rows.push(ConvergenceRow { h, n, rmse: c.rmse, rel_l2: c.rel_l2 });
        sections.push(cs);
    }
    let record = ConvergenceRecord::new(rows, reference_n, setup.samples, setup.radius)?;
    Ok(SweepResult { record, reference, sections })
}

/// Scattered field of the plane wave at angle `phi` by the disc of radius `a` centred at the
/// origin, by separation of variables. `k` must be real.
pub fn disc_scattered(bc: BoundaryCondition, k: f64, a: f64, phi: f64, x: Point) -> Result<Complex64> {
    let r = norm(x);
    if !(k > 0.0) || !(a > 0.0) {
        return invalid("disc series needs positive k and radius");
    }
    if r <= a {
        return invalid(format!("point at radius {r} is not outside the disc of radius {a}"));
    }
    let psi = x[1].atan2(x[0]) - phi;
    let nmax = (k * a + 40.0 + 4.0 * (k * a).cbrt()).ceil() as usize;
    let ja = bessel_jn_seq(nmax + 1, k * a)?;
    let ya = bessel_yn_seq(nmax + 1, k * a)?;
    let jr = bessel_jn_seq(nmax, k * r)?;
    let yr = bessel_yn_seq(nmax, k * r)?;
    let coef = |n: usize| -> Complex64 {
        match bc {
            BoundaryCondition::Dirichlet => Complex64::new(ja[n], 0.0) / Complex64::new(ja[n], ya[n]),
            BoundaryCondition::Neumann => {
                let (dj, dy) = if n == 0 {
                    (-ja[1], -ya[1])
                } else {
                    (0.5 * (ja[n - 1] - ja[n + 1]), 0.5 * (ya[n - 1] - ya[n + 1]))
                };
                Complex64::new(dj, 0.0) / Complex64::new(dj, dy)
            }
        }
    };
    let mut sum = coef(0) * Complex64::new(jr[0], yr[0]);
    let mut ipow = Complex64::new(1.0, 0.0);
    for n in 1..=nmax {
        ipow *= Complex64::i();
        let term = 2.0 * ipow * coef(n) * Complex64::new(jr[n], yr[n]) * (n as f64 * psi).cos();
        if term.norm().is_finite() {
            sum += term;
        }
    }
    Ok(-sum)
}

/// Writes a cross section as CSV with columns theta, re, im, db.
pub fn write_cross_section_csv<W: Write>(c: &CrossSection, out: &mut W, header: &[String]) -> Result<()> {
    for h in header {
        writeln!(out, "# {h}")?;
    }
    for (key, value) in &c.meta {
        writeln!(out, "# {key}: {value}")?;
    }
    writeln!(out, "theta,re,im,db")?;
    let db = to_db(c);
    for i in 0..c.values.len() {
        writeln!(out, "{:.17e},{:.17e},{:.17e},{:.17e}", c.thetas[i], c.values[i].re, c.values[i].im, db.values[i])?;
    }
    Ok(())
}
