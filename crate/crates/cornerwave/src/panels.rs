//! Adaptive decomposition of a curve into resolved 16-node Gauss-Legendre panels.

use crate::error::{invalid, Error, Result};
use crate::geometry::vec2::{cross, dot, sub, Point};
use crate::geometry::{PiecewiseCurve, Polygon};
use crate::quadrature::{gl16, gl32, legendre_coefficients};
use std::io::Write;
use std::sync::Arc;

/// Nodes per panel.
pub const ORDER: usize = 16;

/// A parameter interval on one curve segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub segment: usize,
    pub a: f64,
    pub b: f64,
    /// Arclength of the panel.
    pub length: f64,
    /// Legendre tail estimate from `resolution_estimate`.
    pub tail: f64,
}

impl Panel {
    pub fn mid(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn half(&self) -> f64 {
        0.5 * (self.b - self.a)
    }
}

/// Ordered panels with node positions, outward normals and arclength weights.
#[derive(Debug, Clone)]
pub struct BoundaryMesh {
    curve: Arc<PiecewiseCurve>,
    panels: Vec<Panel>,
    points: Vec<Point>,
    normals: Vec<Point>,
    weights: Vec<f64>,
    params: Vec<(usize, f64)>,
    wavelength: f64,
    corner_reference: bool,
}

impl BoundaryMesh {
    /// Builds node data for the given panels.
    pub fn from_panels(curve: Arc<PiecewiseCurve>, panels: Vec<Panel>, wavelength: f64, corner_reference: bool) -> Self {
        let rule = gl16();
        let n = panels.len() * ORDER;
        let mut points = Vec::with_capacity(n);
        let mut normals = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut params = Vec::with_capacity(n);
        for p in &panels {
            let seg = &curve.segments()[p.segment];
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let tau = p.mid() + p.half() * x;
                let (pos, d1, _) = seg.eval(tau);
                let sp = d1[0].hypot(d1[1]);
                points.push(pos);
                normals.push([d1[1] / sp, -d1[0] / sp]);
                weights.push(w * p.half() * sp);
                params.push((p.segment, tau));
            }
        }
        Self { curve, panels, points, normals, weights, params, wavelength, corner_reference }
    }

    pub fn curve(&self) -> &PiecewiseCurve {
        &self.curve
    }

    pub fn curve_arc(&self) -> Arc<PiecewiseCurve> {
        self.curve.clone()
    }

    pub fn panels(&self) -> &[Panel] {
        &self.panels
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    /// Arclength quadrature weights `h_j`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// (segment, parameter) of each node.
    pub fn params(&self) -> &[(usize, f64)] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// True for dyadically graded meshes of an unrounded polygon, which must be solved with
    /// L2 weighting.
    pub fn is_corner_reference(&self) -> bool {
        self.corner_reference
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn max_panel_length(&self) -> f64 {
        self.panels.iter().map(|p| p.length).fold(0.0, f64::max)
    }

    /// Panel index of node `j`.
    pub fn panel_of(&self, j: usize) -> usize {
        j / ORDER
    }

    /// Writes `panel,x,y,nx,ny,weight` rows after the given header lines.
    pub fn write_csv<W: Write>(&self, out: &mut W, header: &[String]) -> Result<()> {
        for h in header {
            writeln!(out, "# {h}")?;
        }
        writeln!(out, "panel,x,y,nx,ny,weight")?;
        for j in 0..self.len() {
            let p = self.points[j];
            let nn = self.normals[j];
            writeln!(
                out,
                "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                j / ORDER,
                p[0],
                p[1],
                nn[0],
                nn[1],
                self.weights[j]
            )?;
        }
        Ok(())
    }
}

/// Largest relative magnitude among the top 4 of 32 Legendre coefficients of x, y (scaled by
/// half the panel length) and speed (scaled by its mean) on `[a, b]` of `segment`.
pub fn resolution_estimate(curve: &PiecewiseCurve, segment: usize, a: f64, b: f64) -> f64 {
    let seg = &curve.segments()[segment];
    let rule = gl32();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let m = rule.nodes.len();
    let mut xs = vec![0.0; m];
    let mut ys = vec![0.0; m];
    let mut sp = vec![0.0; m];
    // Positions relative to the panel midpoint, so that absolute coordinates do not set a
    // rounding floor of eps |x| / half on the coefficients.
    for (i, x) in rule.nodes.iter().enumerate() {
        let tau = mid + half * x;
        let p = seg.displacement(mid, half * x);
        let d1 = seg.eval(tau).1;
        xs[i] = p[0];
        ys[i] = p[1];
        sp[i] = d1[0].hypot(d1[1]);
    }
    let cx = legendre_coefficients(rule, &xs);
    let cy = legendre_coefficients(rule, &ys);
    let cs = legendre_coefficients(rule, &sp);
    let length = half * sp.iter().zip(&rule.weights).map(|(s, w)| s * w).sum::<f64>();
    let pos_scale = 0.5 * length;
    let sp_scale = cs[0].abs();
    let mut tail: f64 = 0.0;
    for k in m - 4..m {
        tail = tail.max(cx[k].abs() / pos_scale).max(cy[k].abs() / pos_scale).max(cs[k].abs() / sp_scale);
    }
    tail
}

fn panel_length(curve: &PiecewiseCurve, segment: usize, a: f64, b: f64) -> f64 {
    let seg = &curve.segments()[segment];
    let rule = gl16();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    half * rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * seg.speed(mid + half * x)).sum::<f64>()
}

fn make_panel(curve: &PiecewiseCurve, segment: usize, a: f64, b: f64) -> Panel {
    Panel { segment, a, b, length: panel_length(curve, segment, a, b), tail: resolution_estimate(curve, segment, a, b) }
}

fn bisect(curve: &PiecewiseCurve, p: &Panel) -> [Panel; 2] {
    let m = p.mid();
    [make_panel(curve, p.segment, p.a, m), make_panel(curve, p.segment, m, p.b)]
}

/// Splits panels flagged by `split` in place; returns whether anything changed.
fn split_where(curve: &PiecewiseCurve, panels: &mut Vec<Panel>, split: &[bool]) -> bool {
    if !split.iter().any(|&s| s) {
        return false;
    }
    let mut out = Vec::with_capacity(panels.len() + split.len());
    for (p, &s) in panels.iter().zip(split) {
        if s {
            out.extend(bisect(curve, p));
        } else {
            out.push(*p);
        }
    }
    *panels = out;
    true
}

/// Enforces the 2:1 neighbor rule and the `cap` on panel length, to a fixed point.
// Lengths of panels ending near a segment's far endpoint carry absolute rounding of order
// `eps * segment length`, which at depth 1e-10 is a relative error near 1e-6.
const BALANCE_SLACK: f64 = 1.0 + 1e-5;

fn balance_and_cap(curve: &PiecewiseCurve, panels: &mut Vec<Panel>, cap: f64) -> Result<()> {
    for _ in 0..10_000 {
        let mut changed = false;
        loop {
            let n = panels.len();
            let split: Vec<bool> = (0..n)
                .map(|i| {
                    let l = panels[i].length;
                    let prev = panels[(i + n - 1) % n].length;
                    let next = panels[(i + 1) % n].length;
                    l > 2.0 * prev * BALANCE_SLACK || l > 2.0 * next * BALANCE_SLACK
                })
                .collect();
            if !split_where(curve, panels, &split) {
                break;
            }
            changed = true;
        }
        let split: Vec<bool> = panels.iter().map(|p| p.length > cap).collect();
        changed |= split_where(curve, panels, &split);
        if !changed {
            return Ok(());
        }
    }
    Err(Error::DegenerateGeometry("panel balancing did not reach a fixed point".into()))
}

/// Resolved, balanced, wavelength-capped panel mesh of `curve`.
pub fn discretize(curve: Arc<PiecewiseCurve>, tol: f64, wavelength: f64) -> Result<BoundaryMesh> {
    if !(1e-14..=1e-6).contains(&tol) {
        return invalid(format!("resolution tolerance must lie in [1e-14, 1e-6], got {tol}"));
    }
    if !(wavelength > 0.0) || !wavelength.is_finite() {
        return invalid(format!("wavelength must be positive, got {wavelength}"));
    }
    let mut done = Vec::new();
    for (i, seg) in curve.segments().iter().enumerate() {
        let (a, b) = seg.range();
        let mut stack = vec![make_panel(&curve, i, a, b)];
        let mut resolved = Vec::new();
        while let Some(p) = stack.pop() {
            if p.tail < tol {
                resolved.push(p);
                continue;
            }
            if p.length < 1e-13 {
                return Err(Error::DegenerateGeometry(format!(
                    "segment {i} is unresolved at parameter {} with panel length {:e}",
                    p.mid(),
                    p.length
                )));
            }
            let [l, r] = bisect(&curve, &p);
            stack.push(r);
            stack.push(l);
        }
        done.extend(resolved);
    }
    balance_and_cap(&curve, &mut done, 2.0 * wavelength)?;
    Ok(BoundaryMesh::from_panels(curve, done, wavelength, false))
}

/// Dyadically graded mesh of the unrounded polygon: each edge is split at its midpoint and the
/// panels touching the vertices are halved until they are at most `depth_scale` times the edge
/// length; then the wavelength cap and 2:1 balancing are applied.
pub fn corner_reference_mesh(p: &Polygon, wavelength: f64, depth_scale: f64) -> Result<BoundaryMesh> {
    if !(depth_scale > 0.0 && depth_scale < 0.5) {
        return invalid(format!("depth scale must lie in (0, 0.5), got {depth_scale}"));
    }
    if !(wavelength > 0.0) || !wavelength.is_finite() {
        return invalid(format!("wavelength must be positive, got {wavelength}"));
    }
    let curve = Arc::new(PiecewiseCurve::from_polygon(p));
    let mut panels = Vec::new();
    for (i, seg) in curve.segments().iter().enumerate() {
        let (_, len) = seg.range();
        let target = depth_scale * len * (1.0 + 1e-12);
        let mut left = vec![];
        let mut b = 0.5 * len;
        while b > target {
            let a = 0.5 * b;
            left.push((a, b));
            b = a;
        }
        left.push((0.0, b));
        left.reverse();
        for &(a, b) in &left {
            panels.push(make_panel(&curve, i, a, b));
        }
        for &(a, b) in left.iter().rev() {
            panels.push(make_panel(&curve, i, len - b, len - a));
        }
    }
    balance_and_cap(&curve, &mut panels, 2.0 * wavelength)?;
    Ok(BoundaryMesh::from_panels(curve, panels, wavelength, true))
}

/// Area centroid of the region bounded by the mesh, or the midpoint of the longest interior
/// chord on a horizontal ray through it when the centroid falls outside.
pub fn interior_point(mesh: &BoundaryMesh) -> Point {
    let mut area = 0.0;
    let mut mx = 0.0;
    let mut my = 0.0;
    for j in 0..mesh.len() {
        let p = mesh.points[j];
        let n = mesh.normals[j];
        let w = mesh.weights[j];
        area += 0.5 * dot(p, n) * w;
        mx += 0.5 * p[0] * p[0] * n[0] * w;
        my += 0.5 * p[1] * p[1] * n[1] * w;
    }
    let c = [mx / area, my / area];
    if polyline_contains(&mesh.points, c) {
        return c;
    }
    // Crossings of the closed node polyline with the line y = c.y.
    let pts = &mesh.points;
    let m = pts.len();
    let mut xs = Vec::new();
    for i in 0..m {
        let a = pts[i];
        let b = pts[(i + 1) % m];
        if (a[1] > c[1]) != (b[1] > c[1]) {
            xs.push(a[0] + (c[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]));
        }
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best = c;
    let mut best_len = -1.0;
    for pair in xs.chunks(2) {
        if pair.len() == 2 && pair[1] - pair[0] > best_len {
            best_len = pair[1] - pair[0];
            best = [0.5 * (pair[0] + pair[1]), c[1]];
        }
    }
    best
}

pub(crate) fn polyline_contains(pts: &[Point], p: Point) -> bool {
    let m = pts.len();
    let mut wind = 0.0;
    for i in 0..m {
        let a = sub(pts[i], p);
        let b = sub(pts[(i + 1) % m], p);
        wind += cross(a, b).atan2(dot(a, b));
    }
    wind.abs() > std::f64::consts::PI
}
