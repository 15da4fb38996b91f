use super::kernels::{KernelTag, PairGeometry};
use crate::error::{invalid, Result};
use crate::geometry::vec2::{dot, norm, Point};
use crate::geometry::PiecewiseCurve;
use crate::panels::{BoundaryMesh, ORDER};
use crate::quadrature::{gl16, gl16_barycentric, lagrange_basis, tanh_sinh_unit};
use num_complex::Complex64;
use std::sync::OnceLock;

const TANH_SINH_STEP: f64 = 1.0 / 12.0;
const MIN_RHO: f64 = 3.5;

fn tanh_sinh() -> &'static [(f64, f64)] {
    static R: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    R.get_or_init(|| tanh_sinh_unit(TANH_SINH_STEP, 1e-16))
}

/// Whether panel `q` is the panel of node `j` or shares an endpoint with it.
pub fn is_near(mesh: &BoundaryMesh, j: usize, q: usize) -> bool {
    let np = mesh.panels().len();
    let p = mesh.panel_of(j);
    q == p || q == (p + 1) % np || (q + 1) % np == p
}

/// Geometry between a target curve point and a source curve point, free of cancellation for
/// nearby points.
pub(crate) fn pair_geometry(
    curve: &PiecewiseCurve,
    x: (usize, f64),
    n_x: Point,
    y: (usize, f64),
    n_y: Point,
) -> PairGeometry {
    let sep = curve.separation(x, y);
    let r = norm(sep);
    if x.0 == y.0 {
        let seg = &curve.segments()[x.0];
        PairGeometry {
            r,
            source_offset: seg.normal_offset(x.1, y.1),
            target_offset: -seg.normal_offset(y.1, x.1),
        }
    } else {
        PairGeometry { r, source_offset: dot(sep, n_y), target_offset: dot(sep, n_x) }
    }
}

/// Weights `w` with `sum_l w_l sigma_l ~ int_panel K(x_j, y) sigma(y) ds(y)` for densities in the
/// degree-15 interpolation space on panel `q`, where node `j` lies on `q` or a neighbor of `q`.
pub fn panel_product_quadrature(
    mesh: &BoundaryMesh,
    j: usize,
    q: usize,
    kernel: KernelTag,
    k: Complex64,
) -> Result<[Complex64; ORDER]> {
    if j >= mesh.len() || q >= mesh.panels().len() {
        return invalid(format!("node {j} or panel {q} out of range"));
    }
    if !is_near(mesh, j, q) {
        return invalid(format!("panel {q} is not adjacent to the panel of node {j}"));
    }
    let mut w = [Complex64::new(0.0, 0.0); ORDER];
    near_weights(mesh, j, q, kernel, k, &mut w);
    Ok(w)
}

pub(crate) fn near_weights(
    mesh: &BoundaryMesh,
    j: usize,
    q: usize,
    kernel: KernelTag,
    k: Complex64,
    out: &mut [Complex64; ORDER],
) {
    out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
    let curve = mesh.curve();
    let panel = mesh.panels()[q];
    let seg = &curve.segments()[panel.segment];
    let target = mesh.params()[j];
    let n_x = mesh.normals()[j];
    let rule = gl16();
    let bary = gl16_barycentric();
    let mut basis = [0.0; ORDER];
    let mut add = |u: f64, wu: f64, out: &mut [Complex64; ORDER]| {
        let tau = panel.mid() + panel.half() * u;
        let (_, d1, _) = seg.eval(tau);
        let sp = norm(d1);
        let n_y = [d1[1] / sp, -d1[0] / sp];
        let g = pair_geometry(curve, target, n_x, (panel.segment, tau), n_y);
        if g.r == 0.0 {
            return;
        }
        let kv = kernel.eval(k, &g) * (wu * panel.half() * sp);
        lagrange_basis(&rule.nodes, bary, u, &mut basis);
        for l in 0..ORDER {
            out[l] += kv * basis[l];
        }
    };
    if mesh.panel_of(j) == q {
        let uj = rule.nodes[j % ORDER];
        for &(x, w) in tanh_sinh() {
            let left = uj + 1.0;
            add(uj - left * x, left * w, out);
            let right = 1.0 - uj;
            add(uj + right * x, right * w, out);
        }
        return;
    }
    // Bisect toward the target until each piece sees it outside a Bernstein ellipse of
    // parameter MIN_RHO.
    let mut stack = vec![(-1.0f64, 1.0f64)];
    while let Some((a, b)) = stack.pop() {
        let uc = 0.5 * (a + b);
        let hu = 0.5 * (b - a);
        let tau_c = panel.mid() + panel.half() * uc;
        let (_, d1, _) = seg.eval(tau_c);
        let sp = norm(d1);
        let t = [d1[0] / sp, d1[1] / sp];
        let sep = curve.separation(target, (panel.segment, tau_c));
        let hl = hu * panel.half() * sp;
        let z = Complex64::new(dot(sep, t), dot(sep, [t[1], -t[0]])) / hl;
        let s = (z * z - 1.0).sqrt();
        let rho = (z + s).norm().max((z - s).norm());
        if rho >= MIN_RHO || hu < 1e-15 {
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                add(uc + hu * x, hu * w, out);
            }
        } else {
            stack.push((uc, b));
            stack.push((a, uc));
        }
    }
}
