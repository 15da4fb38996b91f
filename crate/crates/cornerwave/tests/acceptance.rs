//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use common::{disc_series, disc_terms, integrate};
use cornerwave::diffeo::{
    extension_jacobian, gauss_map_curve, gauss_map_extension, harmonic_extension, FourierBoundaryMap, SupportFunction,
};
use cornerwave::fields::{cross_section_near, convergence_sweep, fit_loglog, SweepSetup};
use cornerwave::geometry::{
    gaussian_corner_profile, kernel_eval, kernel_fourier, round_polygon, PiecewiseCurve, Point, Polygon, SmoothingKernel,
};
use cornerwave::layerpot::{assemble, l2_weight, Wavenumber};
use cornerwave::panels::corner_reference_mesh;
use cornerwave::solver::{
    condition_estimate_1norm, solve, verify_known_solution, BoundaryCondition, GeometrySource, Incidence,
    ScatteringProblem,
};
use cornerwave::Complex64;
use rand::{Rng, SeedableRng};
use std::f64::consts::{E, PI};
use std::path::PathBuf;
use std::time::Instant;

const HS: [f64; 6] = [0.4, 0.2, 0.1, 0.05, 0.025, 0.0125];

struct Outcome {
    pass: bool,
    detail: String,
}

fn fixture(name: &str) -> Polygon {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    Polygon::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn criterion_1() -> Outcome {
    let mut norm_err: f64 = 0.0;
    let mut ft_err: f64 = 0.0;
    let mut bound_ratio: f64 = 0.0;
    for k in [2u32, 4, 8, 16] {
        let kernel = SmoothingKernel::polynomial(k).unwrap();
        for h in [0.0125, 0.025, 0.05, 0.1, 0.2, 0.4] {
            let total = integrate(|x| kernel_eval(&kernel, x, h).unwrap(), -h, h, 8, 24);
            norm_err = norm_err.max((total - 1.0).abs());
        }
        let ck = 1.0 / integrate(|x| (1.0 - x * x).powi(k as i32), -1.0, 1.0, 8, 24);
        for xi in [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0] {
            let num = integrate(|x| ck * (1.0 - x * x).powi(k as i32) * (2.0 * PI * xi * x).cos(), -1.0, 1.0, 200, 24);
            ft_err = ft_err.max((num - kernel_fourier(&kernel, xi)).abs());
        }
        let kf = k as f64;
        for j in 1..=400 {
            let xi = 4.0 * kf * (1.0 + j as f64 / 40.0);
            let bound = E * PI.sqrt() / kf * (2.0 * kf / (E * xi)).powf(kf + 1.0);
            bound_ratio = bound_ratio.max(kernel_fourier(&kernel, xi).abs() / bound);
        }
    }
    Outcome {
        pass: norm_err < 1e-12 && ft_err < 1e-10 && bound_ratio <= 2.0,
        detail: format!(
            "max |int psi - 1| = {norm_err:.1e} (< 1e-12), max transform error = {ft_err:.1e} (< 1e-10), max |psi_hat|/bound = {bound_ratio:.1e} (<= 2)"
        ),
    }
}

fn criterion_2() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(20);
    let mut lin_err: f64 = 0.0;
    let kernels = [
        SmoothingKernel::polynomial(2).unwrap(),
        SmoothingKernel::polynomial(4).unwrap(),
        SmoothingKernel::polynomial(8).unwrap(),
        SmoothingKernel::polynomial(16).unwrap(),
        SmoothingKernel::gaussian(1e-15).unwrap(),
    ];
    for kernel in &kernels {
        for _ in 0..20 {
            let a: f64 = rng.gen_range(-3.0..3.0);
            let b: f64 = rng.gen_range(-3.0..3.0);
            let h: f64 = rng.gen_range(0.01..0.5);
            let x: f64 = rng.gen_range(-2.0..2.0);
            let reach = if matches!(kernel, SmoothingKernel::Gaussian { .. }) { 12.0 * h } else { h };
            let conv = integrate(|t| kernel_eval(kernel, t, h).unwrap() * (a * (x - t) + b), -reach, reach, 16, 24);
            lin_err = lin_err.max((conv - (a * x + b)).abs());
        }
    }
    let mut gauss_err: f64 = 0.0;
    for _ in 0..100 {
        let a: f64 = rng.gen_range(-3.0..3.0);
        let b: f64 = rng.gen_range(-3.0..3.0);
        let h: f64 = rng.gen_range(0.01..0.5);
        let x: f64 = rng.gen_range(-4.0 * h..4.0 * h);
        let phi = |t: f64| (-0.5 * (t / h).powi(2)).exp() / ((2.0 * PI).sqrt() * h);
        let f = |t: f64| phi(t) * (a * (x - t).abs() + b);
        let lo = -12.0 * h;
        let hi = 12.0 * h;
        let brute = integrate(f, lo, x, 32, 24) + integrate(f, x, hi, 32, 24);
        gauss_err = gauss_err.max((brute - gaussian_corner_profile(a, b, h, x)).abs());
    }
    Outcome {
        pass: lin_err < 1e-12 && gauss_err < 1e-12,
        detail: format!(
            "linear reproduction error = {lin_err:.1e} (< 1e-12), gaussian closed form vs quadrature = {gauss_err:.1e} (< 1e-12)"
        ),
    }
}

// Terms `i^n c_n H_n(k r)` of plane-wave scattering by the disc of radius `a` about the origin,
// from Bessel integral representations.
fn criterion_3() -> Outcome {
    let k = Wavenumber::new(10.0, 0.0).unwrap();
    let phi = 0.3;
    let mut detail = Vec::new();
    let mut pass = true;
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        let geometry = GeometrySource::Curve { curve: PiecewiseCurve::circle([0.0, 0.0], 1.0).unwrap() };
        let d = solve(&ScatteringProblem::new(geometry, bc, k, Incidence::PlaneWave { phi })).unwrap();
        let cs = cross_section_near(&d, 5.0, 360).unwrap();
        let terms = disc_terms(bc == BoundaryCondition::Neumann, 10.0, 1.0, 5.0);
        let mut num = 0.0;
        let mut den = 0.0;
        for (t, u) in cs.thetas.iter().zip(&cs.values) {
            let (er, ei) = disc_series(&terms, t - phi);
            let exact = Complex64::new(er, ei);
            num += (u - exact).norm_sqr();
            den += exact.norm_sqr();
        }
        let rel = (num / den).sqrt();
        pass &= rel < 1e-8;
        detail.push(format!("{bc:?} rel l2 = {rel:.1e}"));
    }
    Outcome { pass, detail: format!("{} (< 1e-8)", detail.join(", ")) }
}

fn criterion_4() -> Outcome {
    let polygon = fixture("square.json");
    let k = Wavenumber::new(12.43, 1e-5).unwrap();
    let geometry = GeometrySource::Smoothed { polygon, h: 0.1, kernel: SmoothingKernel::polynomial(8).unwrap() };
    let p = ScatteringProblem::new(geometry, BoundaryCondition::Dirichlet, k, Incidence::PointSource { x0: [0.4, 0.55] });
    let err = verify_known_solution(&p, 3.0, 200).unwrap();
    Outcome { pass: err < 1e-9, detail: format!("max relative error = {err:.1e} (< 1e-9)") }
}

fn triangle_sweep(bc: BoundaryCondition) -> Outcome {
    let setup = SweepSetup {
        polygon: fixture("triangle.json"),
        kernel: SmoothingKernel::polynomial(8).unwrap(),
        hs: HS.to_vec(),
        bc,
        k: Wavenumber::new(7.77, 1e-6).unwrap(),
        phi: 7.0 * PI / 4.0,
        radius: 10.0,
        samples: 360,
        tol: 1e-10,
        depth_scale: 1e-10,
        node_budget: cornerwave::solver::DEFAULT_NODE_BUDGET,
    };
    let res = convergence_sweep(&setup, 2).unwrap();
    let order = res.record.fitted_order.unwrap_or(f64::NAN);
    let last = res.record.rows.last().unwrap().rel_l2;
    let monotone = res.record.is_monotone();
    let errs: Vec<String> = res.record.rows.iter().map(|r| format!("{:.1e}", r.rel_l2)).collect();
    let mut pass = (1.0..=1.6).contains(&order) && monotone;
    let mut detail = format!("order = {order:.3} (in [1.0, 1.6]), monotone = {monotone}, errors [{}]", errs.join(", "));
    if bc == BoundaryCondition::Dirichlet {
        pass &= last < 1e-2;
        detail.push_str(&format!(", h=0.0125 error {last:.1e} (< 1e-2)"));
    }
    Outcome { pass, detail }
}

fn criterion_7() -> Outcome {
    let rel = [3.9e-1, 1.5e-1, 5.9e-2, 2.5e-2, 1.0e-2, 4.7e-3];
    let pts: Vec<(f64, f64)> = HS.iter().copied().zip(rel).collect();
    let slope = fit_loglog(&pts).unwrap();
    Outcome { pass: (slope - 1.28).abs() <= 0.05, detail: format!("slope = {slope:.4} (1.28 +- 0.05)") }
}

fn criterion_8() -> Outcome {
    let polygon = fixture("triangle.json");
    let k = Wavenumber::new(7.77, 1e-6).unwrap();
    let mut plain = Vec::new();
    let mut weighted = Vec::new();
    for d in [4, 6, 8, 10] {
        let mesh = corner_reference_mesh(&polygon, k.wavelength(), 10f64.powi(-d)).unwrap();
        let mut m = assemble(&mesh, BoundaryCondition::Dirichlet.formulation(), k).unwrap();
        let lu = m.matrix.partial_piv_lu();
        plain.push(condition_estimate_1norm(&m.matrix, &lu));
        let mut rhs = vec![Complex64::new(0.0, 0.0); mesh.len()];
        l2_weight(&mut m, &mut rhs, mesh.weights()).unwrap();
        let lu = m.matrix.partial_piv_lu();
        weighted.push(condition_estimate_1norm(&m.matrix, &lu));
    }
    let gp = plain[3] / plain[0];
    let gw = weighted[3] / weighted[0];
    let fmt = |v: &[f64]| v.iter().map(|c| format!("{c:.2e}")).collect::<Vec<_>>().join(", ");
    Outcome {
        pass: gw < gp,
        detail: format!(
            "growth weighted = {gw:.3e} < unweighted = {gp:.3e}; cond weighted [{}], unweighted [{}]",
            fmt(&weighted),
            fmt(&plain)
        ),
    }
}

// Checks of one extension against its boundary function; returns the worst boundary
// mismatch, mean-value error, maximum-principle violation and minimum Jacobian.
struct ExtensionReport {
    boundary: f64,
    mean: f64,
    hull: f64,
    min_jac: f64,
    winding: f64,
}

fn check_extension<B: Fn(f64) -> Point, X: Fn(f64, f64) -> Point>(
    boundary: B,
    ext: X,
    map: &FourierBoundaryMap,
) -> ExtensionReport {
    let m = 4096;
    let bpts: Vec<Point> = (0..m).map(|i| boundary(2.0 * PI * i as f64 / m as f64)).collect();
    let mut bnd: f64 = 0.0;
    for (i, b) in bpts.iter().enumerate() {
        let e = ext(1.0, 2.0 * PI * i as f64 / m as f64);
        bnd = bnd.max((e[0] - b[0]).hypot(e[1] - b[1]));
    }
    let scale = bpts.iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
    let mean = [bpts.iter().map(|p| p[0]).sum::<f64>() / m as f64, bpts.iter().map(|p| p[1]).sum::<f64>() / m as f64];
    let c = ext(0.0, 0.0);
    let mean_err = (c[0] - mean[0]).hypot(c[1] - mean[1]);
    // Convex hull test against the sampled boundary polygon (counterclockwise).
    let mut hull: f64 = f64::NEG_INFINITY;
    let (mut xmax, mut ymax) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &bpts {
        xmax = xmax.max(p[0]);
        ymax = ymax.max(p[1]);
    }
    let mut comp_excess: f64 = f64::NEG_INFINITY;
    for ir in 0..40 {
        let r = 0.98 * ir as f64 / 39.0;
        for it in 0..128 {
            let p = ext(r, 2.0 * PI * it as f64 / 128.0);
            comp_excess = comp_excess.max(p[0] - xmax).max(p[1] - ymax);
            let mut worst: f64 = f64::NEG_INFINITY;
            for i in 0..m {
                let a = bpts[i];
                let b = bpts[(i + 1) % m];
                let d = [b[0] - a[0], b[1] - a[1]];
                let cr = d[0] * (p[1] - a[1]) - d[1] * (p[0] - a[0]);
                worst = worst.max(-cr / d[0].hypot(d[1]));
            }
            hull = hull.max(worst);
        }
    }
    let mut min_jac = f64::INFINITY;
    for ir in 1..=100 {
        let r = ir as f64 / 100.0;
        for it in 0..256 {
            let t = 2.0 * PI * it as f64 / 256.0;
            min_jac = min_jac.min(extension_jacobian(map, r, t).unwrap() / r);
        }
    }
    let mut wind = 0.0;
    for i in 0..m {
        let a = [bpts[i][0] - c[0], bpts[i][1] - c[1]];
        let b = [bpts[(i + 1) % m][0] - c[0], bpts[(i + 1) % m][1] - c[1]];
        wind += (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
    }
    ExtensionReport {
        boundary: bnd / scale,
        mean: mean_err / scale,
        hull: hull.max(comp_excess),
        min_jac,
        winding: wind / (2.0 * PI),
    }
}

fn criterion_9() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    let mut record = |name: &str, r: ExtensionReport| {
        let ok = r.boundary < 1e-12 && r.mean < 1e-12 && r.hull <= 0.0 && r.min_jac > 0.0 && (r.winding - 1.0).abs() < 1e-9;
        pass &= ok;
        lines.push(format!(
            "{name}: boundary {:.0e}, mean {:.0e}, hull excess {:.0e}, min jac {:.2e}",
            r.boundary, r.mean, r.hull, r.min_jac
        ));
    };

    // Method 2: extension of a fitted boundary parameterization.
    let circle = |t: f64| [0.3 + 1.5 * t.cos(), -0.2 + 1.5 * t.sin()];
    let map = FourierBoundaryMap::fit(circle).unwrap();
    record("m2 circle", check_extension(circle, |r, t| harmonic_extension(&map, r, t).unwrap(), &map));
    let ellipse = |t: f64| [2.0 * t.cos(), t.sin()];
    let map = FourierBoundaryMap::fit(ellipse).unwrap();
    record("m2 ellipse", check_extension(ellipse, |r, t| harmonic_extension(&map, r, t).unwrap(), &map));
    let square = Polygon::new(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]).unwrap();
    let curve = round_polygon(&square, 0.1, &SmoothingKernel::gaussian(1e-15).unwrap()).unwrap();
    let total = curve.total_length();
    let on_curve = |t: f64| curve.eval(total * t / (2.0 * PI)).point;
    let map = FourierBoundaryMap::from_curve(&curve).unwrap();
    record("m2 rounded square", check_extension(on_curve, |r, t| harmonic_extension(&map, r, t).unwrap(), &map));

    // Method 3: Gauss-map extension of a support function.
    let supports = [
        ("m3 circle", SupportFunction::circle(1.2).unwrap()),
        ("m3 ellipse", SupportFunction::ellipse(2.0, 1.0).unwrap()),
        ("m3 smoothed square", SupportFunction::smoothed_square(1.0, &SmoothingKernel::polynomial(8).unwrap(), 0.3, 0.1).unwrap()),
    ];
    for (name, s) in &supports {
        let map = s.extension_map();
        record(name, check_extension(|t| gauss_map_curve(s, t), |r, t| gauss_map_extension(s, r, t).unwrap(), &map));
    }
    Outcome { pass, detail: lines.join("; ") }
}

fn main() {
    let criteria: Vec<(u32, &str, f64, fn() -> Outcome)> = vec![
        (1, "kernel analytics", 5.0, criterion_1),
        (2, "linear reproduction and gaussian closed form", 5.0, criterion_2),
        (3, "disc oracle", 30.0, criterion_3),
        (4, "known-solution verification", 120.0, criterion_4),
        (5, "convergence order, dirichlet", 1200.0, || triangle_sweep(BoundaryCondition::Dirichlet)),
        (6, "convergence order, neumann", 1200.0, || triangle_sweep(BoundaryCondition::Neumann)),
        (7, "comb table slope", f64::INFINITY, criterion_7),
        (8, "L2 weighting condition growth", 600.0, criterion_8),
        (9, "diffeomorphism suite", 60.0, criterion_9),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t0 = Instant::now();
        let out = run();
        let secs = t0.elapsed().as_secs_f64();
        let pass = out.pass && secs < limit;
        if !pass {
            failed += 1;
        }
        let limit = if limit.is_finite() { format!(" (limit {limit:.0} s)") } else { String::new() };
        println!(
            "criterion {id} {}: {name}: {}; {secs:.1} s{limit}",
            if pass { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
