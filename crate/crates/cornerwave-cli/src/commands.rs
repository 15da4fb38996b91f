//! Subcommand implementations.

use crate::config::{Settings, Shape};
use crate::CliError;
use cornerwave::diffeo::{write_map_csv, FourierBoundaryMap, SupportFunction};
use cornerwave::fields::{
    compare, cross_section_far, cross_section_mono, cross_section_near, disc_scattered, eval_field,
    write_cross_section_csv, ConvergenceRecord, ConvergenceRow, CrossSection, SweepSetup,
};
use cornerwave::geometry::{round_polygon, PiecewiseCurve, Polygon};
use cornerwave::io::{json_with_provenance, write_atomic, Provenance};
use cornerwave::layerpot::{AssemblyMode, Weighting};
use cornerwave::panels::BoundaryMesh;
use cornerwave::solver::{known_solution_error, source_point, FactoredOperator, GeometrySource, Incidence};
use cornerwave::{Complex64, Error};
use rayon::prelude::*;
use serde_json::json;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

struct Run {
    tag: String,
    h: f64,
    source: GeometrySource,
}

fn runs(s: &Settings) -> Result<Vec<Run>, CliError> {
    match s.shape()? {
        Shape::Circle { center, radius } => Ok(vec![Run {
            tag: "disc".into(),
            h: 0.0,
            source: GeometrySource::Curve { curve: PiecewiseCurve::circle(center, radius)? },
        }]),
        Shape::Polygon(p) => Ok(s
            .widths()?
            .iter()
            .map(|&h| {
                if h == 0.0 {
                    Run {
                        tag: "reference".into(),
                        h,
                        source: GeometrySource::CornerReference { polygon: p.clone(), depth_scale: s.depth_scale },
                    }
                } else {
                    Run { tag: format!("h{h}"), h, source: GeometrySource::Smoothed { polygon: p.clone(), h, kernel: s.kernel } }
                }
            })
            .collect()),
    }
}

fn polygon(s: &Settings) -> Result<Polygon, CliError> {
    match s.shape()? {
        Shape::Polygon(p) => Ok(p),
        Shape::Circle { .. } => Err(CliError::Usage("this command needs a polygon geometry".into())),
    }
}

fn write(s: &Settings, name: &str, text: &str) -> Result<(), CliError> {
    write_atomic(&s.out.join(name), text.as_bytes())?;
    Ok(())
}

fn provenance(command: &str, s: &Settings) -> Result<Provenance, CliError> {
    Ok(Provenance::new(command, s)?)
}

fn mesh(s: &Settings, run: &Run) -> Result<BoundaryMesh, CliError> {
    let m = run.source.mesh(s.wavenumber()?, s.tol)?;
    if m.len() > s.node_budget {
        return Err(Error::Budget { n: m.len(), budget: s.node_budget }.into());
    }
    Ok(m)
}

fn operator(s: &Settings, run: &Run) -> Result<FactoredOperator, CliError> {
    let m = mesh(s, run)?;
    let center = run.source.center(&m);
    Ok(FactoredOperator::new(Arc::new(m), s.bc, s.wavenumber()?, center, Weighting::L2, AssemblyMode::Parallel)?)
}

fn check_phi(s: &Settings) -> Result<(), CliError> {
    if !(0.0..2.0 * PI).contains(&s.phi) {
        return Err(CliError::Usage(format!("--phi must lie in [0, 2pi), got {}", s.phi)));
    }
    Ok(())
}

pub fn smooth(s: &Settings) -> Result<(), CliError> {
    let p = polygon(s)?;
    let prov = provenance("smooth", s)?;
    for &h in s.widths()? {
        let curve = round_polygon(&p, h, &s.kernel)?;
        let tag = format!("h{h}");
        let doc = json!({ "h": h, "kernel": s.kernel, "total_length": curve.total_length(), "curve": curve });
        write(s, &format!("curve_{tag}.json"), &json_with_provenance(&prov, &doc)?)?;
        let mut csv = String::new();
        for l in prov.header_lines() {
            writeln!(csv, "# {l}").unwrap();
        }
        writeln!(csv, "t,x,y,curvature").unwrap();
        for r in curve.polyline(s.samples) {
            writeln!(csv, "{:.17e},{:.17e},{:.17e},{:.17e}", r[0], r[1], r[2], r[3]).unwrap();
        }
        write(s, &format!("polyline_{tag}.csv"), &csv)?;
    }
    Ok(())
}

pub fn discretize(s: &Settings) -> Result<(), CliError> {
    let prov = provenance("discretize", s)?;
    for run in runs(s)? {
        let m = mesh(s, &run)?;
        let mut buf = Vec::new();
        m.write_csv(&mut buf, &prov.header_lines())?;
        write_atomic(&s.out.join(format!("mesh_{}.csv", run.tag)), &buf)?;
    }
    Ok(())
}

/// Distance from the centre to the verification circle: outside the boundary by at least
/// 2.5 panel lengths.
fn default_verify_radius(m: &BoundaryMesh, c: [f64; 2]) -> f64 {
    let rmax = m.points().iter().map(|p| (p[0] - c[0]).hypot(p[1] - c[1])).fold(0.0, f64::max);
    rmax + 2.5 * m.max_panel_length()
}

pub fn solve(s: &Settings) -> Result<(), CliError> {
    check_phi(s)?;
    let prov = provenance("solve", s)?;
    let k = s.wavenumber()?;
    for run in runs(s)? {
        let t0 = Instant::now();
        let op = operator(s, &run)?;
        let density = op.solve(&Incidence::PlaneWave { phi: s.phi })?;
        let mut meta = json!({
            "tag": run.tag,
            "h": run.h,
            "n": density.mesh.len(),
            "residual": density.residual,
            "formulation": density.formulation,
            "k": k,
            "phi": s.phi,
            "center": density.center,
        });
        let radius = s.verify_radius.unwrap_or_else(|| default_verify_radius(&density.mesh, density.center));
        if s.verify {
            let x0 = source_point(&density.mesh);
            let ps = op.solve(&Incidence::PointSource { x0 })?;
            meta["verification_error"] = json!(known_solution_error(&ps, x0, radius, s.samples)?);
            meta["verification_radius"] = json!(radius);
            meta["source"] = json!(x0);
        }
        if let (GeometrySource::Curve { .. }, Shape::Circle { center, radius: a }) = (&run.source, s.shape()?) {
            if k.im == 0.0 {
                meta["series_error"] = json!(disc_series_error(&density, s, center, a, radius)?);
            }
        }
        if !s.deterministic {
            meta["timings"] = json!(density.timings);
            meta["wall_time"] = json!(t0.elapsed().as_secs_f64());
        }
        write(s, &format!("solve_{}.json", run.tag), &json_with_provenance(&prov, &meta)?)?;
        let mut csv = String::new();
        for l in prov.header_lines() {
            writeln!(csv, "# {l}").unwrap();
        }
        writeln!(csv, "j,x,y,re,im").unwrap();
        for (j, (p, v)) in density.mesh.points().iter().zip(&density.values).enumerate() {
            writeln!(csv, "{j},{:.17e},{:.17e},{:.17e},{:.17e}", p[0], p[1], v.re, v.im).unwrap();
        }
        write(s, &format!("density_{}.csv", run.tag), &csv)?;
    }
    Ok(())
}

/// Relative l2 error against the separation-of-variables series on the verification circle.
fn disc_series_error(
    density: &cornerwave::solver::Density,
    s: &Settings,
    center: [f64; 2],
    a: f64,
    radius: f64,
) -> Result<f64, CliError> {
    let m = s.samples.max(8);
    let targets: Vec<[f64; 2]> = (0..m)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / m as f64;
            [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
        })
        .collect();
    let u = eval_field(density, &targets)?;
    let k = s.wavenumber()?.re;
    // The series is for a disc at the origin; translating the incident wave multiplies by its
    // phase at the centre.
    let shift = (Complex64::i() * k * (center[0] * s.phi.cos() + center[1] * s.phi.sin())).exp();
    let (mut num, mut den) = (0.0, 0.0);
    for (t, v) in targets.iter().zip(&u) {
        let exact = shift * disc_scattered(s.bc, k, a, s.phi, [t[0] - center[0], t[1] - center[1]])?;
        num += (v - exact).norm_sqr();
        den += exact.norm_sqr();
    }
    Ok((num / den).sqrt())
}

fn section(s: &Settings, run: &Run) -> Result<CrossSection, CliError> {
    let op = operator(s, run)?;
    match s.kind.as_str() {
        "mono" => Ok(cross_section_mono(&op, s.radius, s.samples)?),
        kind => {
            check_phi(s)?;
            let d = op.solve(&Incidence::PlaneWave { phi: s.phi })?;
            if kind == "far" {
                Ok(cross_section_far(&d, s.samples)?)
            } else {
                Ok(cross_section_near(&d, s.radius, s.samples)?)
            }
        }
    }
}

fn section_csv(prov: &Provenance, c: &CrossSection) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_cross_section_csv(c, &mut buf, &prov.header_lines())?;
    Ok(buf)
}

pub fn xsection(s: &Settings) -> Result<(), CliError> {
    let prov = provenance("xsection", s)?;
    for run in runs(s)? {
        let c = section(s, &run)?;
        write_atomic(&s.out.join(format!("xsection_{}_{}.csv", s.kind, run.tag)), &section_csv(&prov, &c)?)?;
    }
    Ok(())
}

pub fn converge(s: &Settings) -> Result<(), CliError> {
    check_phi(s)?;
    let p = polygon(s)?;
    let hs = s.widths()?.to_vec();
    if hs.iter().any(|&h| h <= 0.0) || hs.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(CliError::Usage("--h must be strictly decreasing and positive for a sweep".into()));
    }
    if s.kind != "bi" {
        return Err(CliError::Usage("convergence sweeps use bi-static sections".into()));
    }
    let prov = provenance("converge", s)?;
    let setup = SweepSetup {
        polygon: p,
        kernel: s.kernel,
        hs: hs.clone(),
        bc: s.bc,
        k: s.wavenumber()?,
        phi: s.phi,
        radius: s.radius,
        samples: s.samples,
        tol: s.tol,
        depth_scale: s.depth_scale,
        node_budget: s.node_budget,
    };
    let (reference_n, reference) = setup.run_reference()?;
    write_atomic(&s.out.join("xsection_bi_reference.csv"), &section_csv(&prov, &reference)?)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(s.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", s.jobs)))?;
    let results: Vec<Result<(usize, CrossSection), CliError>> = pool.install(|| {
        hs.par_iter()
            .map(|&h| {
                let (n, c) = setup.run_smoothed(h)?;
                write_atomic(&s.out.join(format!("xsection_bi_h{h}.csv")), &section_csv(&prov, &c)?)?;
                Ok((n, c))
            })
            .collect()
    });
    let mut rows = Vec::new();
    let mut failure = None;
    for (&h, r) in hs.iter().zip(results) {
        match r {
            Ok((n, c)) => {
                let e = compare(&c, &reference)?;
                rows.push(ConvergenceRow { h, n, rmse: e.rmse, rel_l2: e.rel_l2 });
            }
            Err(e) => {
                eprintln!("error: run h = {h} failed: {e}");
                failure.get_or_insert(e);
            }
        }
    }
    let record = ConvergenceRecord::new(rows, reference_n, s.samples, s.radius)?;
    let doc = json!({
        "rows": record.rows,
        "reference": { "h": 0.0, "n": record.reference_n },
        "fitted_order": record.fitted_order,
        "monotone": record.is_monotone(),
        "samples": record.samples,
        "radius": record.radius,
        "kernel": s.kernel,
        "bc": s.bc,
        "k": setup.k,
        "phi": s.phi,
    });
    let text = json_with_provenance(&prov, &doc)?;
    match failure {
        Some(e) => {
            write(s, "convergence_partial.json", &text)?;
            Err(e)
        }
        None => write(s, "convergence.json", &text),
    }
}

pub fn diffeo(s: &Settings) -> Result<(), CliError> {
    let prov = provenance("diffeo", s)?;
    let map = match s.method.as_str() {
        "gauss-map" => {
            let path = s.support.as_ref().ok_or_else(|| CliError::Usage("gauss-map needs --support".into()))?;
            SupportFunction::new(read_coeffs(path)?)?.extension_map()
        }
        _ => match s.shape()? {
            Shape::Circle { center, radius } => FourierBoundaryMap::circle(center, radius),
            Shape::Polygon(p) => {
                let h = match s.widths()? {
                    [h] if *h > 0.0 => *h,
                    _ => return Err(CliError::Usage("harmonic extension of a polygon needs one positive --h".into())),
                };
                let m = FourierBoundaryMap::from_curve(&round_polygon(&p, h, &s.kernel)?)?;
                if !m.is_convex() {
                    return Err(Error::InvalidArgument("rounded polygon is not convex".into()).into());
                }
                m
            }
        },
    };
    let doc = json!({
        "method": s.method,
        "order": map.order(),
        "coeffs": map.coeffs.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
    });
    write(s, "diffeo_coeffs.json", &json_with_provenance(&prov, &doc)?)?;
    let mut buf = Vec::new();
    write_map_csv(&map, 33, s.samples, &mut buf, &prov.header_lines())?;
    write_atomic(&s.out.join("diffeo_map.csv"), &buf)?;
    Ok(())
}

fn read_coeffs(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read coefficients {}: {e}", path.display())))?;
    Ok(cornerwave::diffeo::coeffs_from_json(&text)?)
}
