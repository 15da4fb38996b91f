//! Dense direct solution of the discretized integral equations, the corner-reference mesh,
//! and known-solution verification.

use crate::error::{invalid, Error, Result};
use crate::fields::{eval_field, plane_wave, point_source};
use crate::geometry::vec2::{norm, sub, Point};
use crate::geometry::{round_polygon, PiecewiseCurve, Polygon, SmoothingKernel};
use crate::layerpot::{assemble_with, l2_weight, AssemblyMode, Formulation, NystromMatrix, Wavenumber, Weighting};
use crate::panels::{corner_reference_mesh, discretize, interior_point, polyline_contains, BoundaryMesh};
use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

/// Fixes the split degree of the dense kernels once per process. Left at its default, faer
/// follows the size of whichever rayon pool the call runs in, so the same solve inside a
/// sweep worker pool and on the global pool would round differently.
fn pin_dense_parallelism() {
    static PIN: std::sync::Once = std::sync::Once::new();
    PIN.call_once(|| {
        let n = std::thread::available_parallelism().map_or(1, |n| n.get());
        faer::set_global_parallelism(faer::Par::rayon(n));
    });
}

/// Default cap on the number of unknowns of a dense solve.
pub const DEFAULT_NODE_BUDGET: usize = 20_000;

/// Sound-soft or sound-hard scatterer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    pub fn formulation(&self) -> Formulation {
        match self {
            Self::Dirichlet => Formulation::dirichlet(),
            Self::Neumann => Formulation::NeumannSingleLayer,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(Self::Dirichlet),
            "neumann" => Ok(Self::Neumann),
            _ => invalid(format!("unknown boundary condition '{s}', expected dirichlet or neumann")),
        }
    }
}

/// Where the scatterer boundary comes from.
#[derive(Debug, Clone)]
pub enum GeometrySource {
    /// Polygon rounded with the kernel at width `h`.
    Smoothed { polygon: Polygon, h: f64, kernel: SmoothingKernel },
    /// Unrounded polygon on a dyadically graded mesh.
    CornerReference { polygon: Polygon, depth_scale: f64 },
    /// Any closed curve, e.g. a circle.
    Curve { curve: PiecewiseCurve },
}

impl GeometrySource {
    /// Centre of cross-section circles: the polygon's area centroid, or the curve's.
    pub fn center(&self, mesh: &BoundaryMesh) -> Point {
        match self {
            Self::Smoothed { polygon, .. } | Self::CornerReference { polygon, .. } => polygon.centroid(),
            Self::Curve { .. } => interior_point(mesh),
        }
    }

    /// Builds the mesh at resolution tolerance `tol` for wavelength of `k`.
    pub fn mesh(&self, k: Wavenumber, tol: f64) -> Result<BoundaryMesh> {
        let lam = k.wavelength();
        match self {
            Self::Smoothed { polygon, h, kernel } => {
                discretize(Arc::new(round_polygon(polygon, *h, kernel)?), tol, lam)
            }
            Self::CornerReference { polygon, depth_scale } => corner_reference_mesh(polygon, lam, *depth_scale),
            Self::Curve { curve } => discretize(Arc::new(curve.clone()), tol, lam),
        }
    }
}

/// Incident field driving the problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Incidence {
    /// `e^{ik(x cos phi + y sin phi)}`; the scattered field cancels its trace.
    PlaneWave { phi: f64 },
    /// Boundary data of `g_k(., x0)` for a source strictly inside the scatterer, whose exterior
    /// solution is `g_k(., x0)` itself.
    PointSource { x0: Point },
}

/// A complete scattering problem.
#[derive(Debug, Clone)]
pub struct ScatteringProblem {
    pub geometry: GeometrySource,
    pub bc: BoundaryCondition,
    pub k: Wavenumber,
    pub incidence: Incidence,
    /// Panel resolution tolerance.
    pub tol: f64,
    pub node_budget: usize,
    pub mode: AssemblyMode,
}

impl ScatteringProblem {
    pub fn new(geometry: GeometrySource, bc: BoundaryCondition, k: Wavenumber, incidence: Incidence) -> Self {
        Self { geometry, bc, k, incidence, tol: 1e-10, node_budget: DEFAULT_NODE_BUDGET, mode: AssemblyMode::Parallel }
    }

    pub fn validate(&self) -> Result<()> {
        if let Incidence::PlaneWave { phi } = self.incidence {
            if !(0.0..2.0 * PI).contains(&phi) {
                return invalid(format!("incidence angle must lie in [0, 2pi), got {phi}"));
            }
        }
        Ok(())
    }
}

/// Wall-clock seconds spent in each phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub mesh: f64,
    pub assembly: f64,
    pub factor: f64,
    pub solve: f64,
}

/// Layer-potential density on a mesh.
#[derive(Debug, Clone)]
pub struct Density {
    pub mesh: Arc<BoundaryMesh>,
    pub values: Vec<Complex64>,
    pub formulation: Formulation,
    pub k: Wavenumber,
    /// Centre used for cross sections.
    pub center: Point,
    /// `||A s - b|| / ||b||` of the weighted system.
    pub residual: f64,
    pub timings: Timings,
}

/// LU-factored, L2-weighted (unless requested otherwise) Nyström system.
pub struct FactoredOperator {
    pub mesh: Arc<BoundaryMesh>,
    pub bc: BoundaryCondition,
    pub k: Wavenumber,
    pub center: Point,
    matrix: NystromMatrix,
    lu: PartialPivLu<Complex64>,
    sqrt_h: Vec<f64>,
    pub timings: Timings,
}

impl FactoredOperator {
    /// Assembles, weights and factors the system for `bc` on `mesh`.
    pub fn new(
        mesh: Arc<BoundaryMesh>,
        bc: BoundaryCondition,
        k: Wavenumber,
        center: Point,
        weighting: Weighting,
        mode: AssemblyMode,
    ) -> Result<Self> {
        if mesh.is_corner_reference() && weighting == Weighting::Plain {
            return invalid("corner-reference meshes must be solved with L2 weighting");
        }
        let t0 = Instant::now();
        let mut matrix = assemble_with(&mesh, bc.formulation(), k, mode)?;
        let assembly = t0.elapsed().as_secs_f64();
        let sqrt_h: Vec<f64> = if weighting == Weighting::L2 {
            let mut dummy = vec![Complex64::new(0.0, 0.0); mesh.len()];
            l2_weight(&mut matrix, &mut dummy, mesh.weights())?;
            mesh.weights().iter().map(|w| w.sqrt()).collect()
        } else {
            vec![1.0; mesh.len()]
        };
        let t1 = Instant::now();
        pin_dense_parallelism();
        let lu = matrix.matrix.partial_piv_lu();
        let factor = t1.elapsed().as_secs_f64();
        let op = Self {
            mesh,
            bc,
            k,
            center,
            matrix,
            lu,
            sqrt_h,
            timings: Timings { mesh: 0.0, assembly, factor, solve: 0.0 },
        };
        let rcond = 1.0 / op.condition_estimate();
        if !(rcond > 1e-14) {
            return Err(Error::NearResonance { re: k.re, im: k.im });
        }
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.sqrt_h.len()
    }

    pub fn weighting(&self) -> Weighting {
        self.matrix.weighting
    }

    /// Solves for the unweighted density given boundary data; returns the density and the
    /// relative residual of the (weighted) system.
    pub fn solve_data(&self, data: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
        let n = self.dim();
        if data.len() != n {
            return invalid(format!("boundary data has {} entries, expected {n}", data.len()));
        }
        let b = Mat::from_fn(n, 1, |i, _| data[i] * self.sqrt_h[i]);
        let x = self.lu.solve(&b);
        let ax = &self.matrix.matrix * &x;
        let mut rn = 0.0;
        let mut bn = 0.0;
        for i in 0..n {
            rn += (ax[(i, 0)] - b[(i, 0)]).norm_sqr();
            bn += b[(i, 0)].norm_sqr();
        }
        let residual = if bn > 0.0 { (rn / bn).sqrt() } else { rn.sqrt() };
        let sigma = (0..n).map(|i| x[(i, 0)] / self.sqrt_h[i]).collect::<Vec<_>>();
        if sigma.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NearResonance { re: self.k.re, im: self.k.im });
        }
        Ok((sigma, residual))
    }

    /// Density for an incident field.
    pub fn solve(&self, incidence: &Incidence) -> Result<Density> {
        let t0 = Instant::now();
        let data = boundary_data(&self.mesh, self.bc, self.k, incidence);
        let (values, residual) = self.solve_data(&data)?;
        let mut timings = self.timings;
        timings.solve = t0.elapsed().as_secs_f64();
        Ok(Density {
            mesh: self.mesh.clone(),
            values,
            formulation: self.bc.formulation(),
            k: self.k,
            center: self.center,
            residual,
            timings,
        })
    }

    /// Estimated 1-norm condition number of the factored matrix.
    pub fn condition_estimate(&self) -> f64 {
        condition_estimate_1norm(&self.matrix.matrix, &self.lu)
    }
}

/// Boundary data for the formulation: the incident trace with a minus sign for plane waves, the
/// source trace itself for interior point sources.
pub fn boundary_data(mesh: &BoundaryMesh, bc: BoundaryCondition, k: Wavenumber, incidence: &Incidence) -> Vec<Complex64> {
    let kv = k.value();
    mesh.points()
        .iter()
        .zip(mesh.normals())
        .map(|(&x, &n)| {
            let (u, g) = match *incidence {
                Incidence::PlaneWave { phi } => {
                    let (u, g) = plane_wave(phi, kv, x);
                    (-u, [-g[0], -g[1]])
                }
                Incidence::PointSource { x0 } => point_source(x0, kv, x),
            };
            match bc {
                BoundaryCondition::Dirichlet => u,
                BoundaryCondition::Neumann => g[0] * n[0] + g[1] * n[1],
            }
        })
        .collect()
}

/// Builds the mesh, factors the weighted system and solves for the density.
pub fn solve(problem: &ScatteringProblem) -> Result<Density> {
    problem.validate()?;
    let t0 = Instant::now();
    let mesh = problem.geometry.mesh(problem.k, problem.tol)?;
    let mesh_time = t0.elapsed().as_secs_f64();
    if mesh.len() > problem.node_budget {
        return Err(Error::Budget { n: mesh.len(), budget: problem.node_budget });
    }
    let center = problem.geometry.center(&mesh);
    if let Incidence::PointSource { x0 } = problem.incidence {
        if !polyline_contains(mesh.points(), x0) {
            return invalid(format!("point source ({}, {}) is not inside the scatterer", x0[0], x0[1]));
        }
    }
    let op = FactoredOperator::new(Arc::new(mesh), problem.bc, problem.k, center, Weighting::L2, problem.mode)?;
    let mut density = op.solve(&problem.incidence)?;
    density.timings.mesh = mesh_time;
    Ok(density)
}

/// Solves a point-source problem and returns `max_j |u(t_j) - g_k(t_j, x0)| / max_j |g_k(t_j, x0)|`
/// over `m` points on the circle of radius `radius` about the cross-section centre.
pub fn verify_known_solution(problem: &ScatteringProblem, radius: f64, m: usize) -> Result<f64> {
    let x0 = match problem.incidence {
        Incidence::PointSource { x0 } => x0,
        _ => return invalid("known-solution verification needs point-source data"),
    };
    let density = solve(problem)?;
    known_solution_error(&density, x0, radius, m)
}

/// Error of a point-source density against the exact exterior field on a circle.
pub fn known_solution_error(density: &Density, x0: Point, radius: f64, m: usize) -> Result<f64> {
    let c = density.center;
    let targets: Vec<Point> = (0..m)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / m as f64;
            [c[0] + radius * t.cos(), c[1] + radius * t.sin()]
        })
        .collect();
    let u = eval_field(density, &targets)?;
    let kv = density.k.value();
    let mut err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (t, v) in targets.iter().zip(&u) {
        let exact = point_source(x0, kv, *t).0;
        err = err.max((v - exact).norm());
        scale = scale.max(exact.norm());
    }
    Ok(err / scale)
}

/// Point strictly inside the scatterer, suitable for a known-solution source.
pub fn source_point(mesh: &BoundaryMesh) -> Point {
    interior_point(mesh)
}

/// Hager-Higham estimate of `||A||_1 ||A^{-1}||_1`.
pub fn condition_estimate_1norm(a: &Mat<Complex64>, lu: &PartialPivLu<Complex64>) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 0.0;
    }
    let mut a_norm: f64 = 0.0;
    for j in 0..n {
        let mut s = 0.0;
        for i in 0..n {
            s += a[(i, j)].norm();
        }
        a_norm = a_norm.max(s);
    }
    let mut x = Mat::from_fn(n, 1, |_, _| Complex64::new(1.0 / n as f64, 0.0));
    let mut est: f64 = 0.0;
    let mut last_j = usize::MAX;
    for _ in 0..5 {
        let y = lu.solve(&x);
        let ny: f64 = (0..n).map(|i| y[(i, 0)].norm()).sum();
        if !ny.is_finite() {
            return f64::INFINITY;
        }
        est = est.max(ny);
        let xi = Mat::from_fn(n, 1, |i, _| {
            let v = y[(i, 0)];
            let m = v.norm();
            if m > 0.0 {
                v / m
            } else {
                Complex64::new(1.0, 0.0)
            }
        });
        let z = lu.solve_adjoint(&xi);
        let (mut jmax, mut zmax) = (0, 0.0);
        for i in 0..n {
            let m = z[(i, 0)].norm();
            if m > zmax {
                zmax = m;
                jmax = i;
            }
        }
        let ztx: f64 = (0..n).map(|i| (z[(i, 0)].conj() * x[(i, 0)]).re).sum();
        if zmax <= ztx || jmax == last_j {
            break;
        }
        last_j = jmax;
        x = Mat::from_fn(n, 1, |i, _| Complex64::new(if i == jmax { 1.0 } else { 0.0 }, 0.0));
    }
    // Alternating test vector guards against the classic failure cases of the power iteration.
    let alt = Mat::from_fn(n, 1, |i, _| {
        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(s * (1.0 + i as f64 / (n.max(2) - 1) as f64), 0.0)
    });
    let y = lu.solve(&alt);
    let alt_est = 2.0 * (0..n).map(|i| y[(i, 0)].norm()).sum::<f64>() / (3.0 * n as f64);
    a_norm * est.max(alt_est)
}

/// Exterior distance from `p` to the nearest mesh node.
pub fn distance_to_mesh(mesh: &BoundaryMesh, p: Point) -> f64 {
    mesh.points().iter().map(|&q| norm(sub(p, q))).fold(f64::INFINITY, f64::min)
}
