use super::kernel::{gaussian_threshold, poly_profile, select_delta, SmoothingKernel};
use super::polygon::Polygon;
use super::vec2::{add, cross, dot, norm, right_normal, scale, sub, unit, Point};
use crate::error::{invalid, Result};
use crate::quadrature::{adaptive_gl, gl16};
use crate::specfun::erf;
use serde::Serialize;
use std::f64::consts::PI;

/// Shape of the smoothed `s|xi|` graph inside a rounding zone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProfileShape {
    /// Convolution with the order-`order` polynomial kernel of graph half-width `width`.
    Polynomial { order: u32, width: f64 },
    /// Convolution with a Gaussian of standard deviation `delta`.
    Gaussian { delta: f64, eps: f64 },
}

/// A rounded vertex: the graph `eta = F(xi)` in the frame centred at the vertex, with `xi`
/// along the traversal direction `tangent` and `eta` along the outward `normal`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CornerProfile {
    pub vertex: Point,
    pub tangent: Point,
    pub normal: Point,
    /// Slope `a` of the unsmoothed graph `a|xi| + b`; negative at convex vertices.
    pub slope: f64,
    /// Offset `b`; zero because the frame is centred at the vertex.
    pub offset: f64,
    /// Half-width of the rounding zone in graph coordinates.
    pub half_width: f64,
    /// Distance from the vertex along either edge where the zone ends.
    pub edge_extent: f64,
    pub shape: ProfileShape,
}

impl CornerProfile {
    /// `(F, F', F'')` at graph coordinate `xi`.
    pub fn graph(&self, xi: f64) -> (f64, f64, f64) {
        let s = self.slope;
        match self.shape {
            ProfileShape::Polynomial { order, width } => {
                let (a, a1, a2) = poly_profile(order, xi / width);
                (s * width * a + self.offset, s * a1, s * a2 / width)
            }
            ProfileShape::Gaussian { delta, .. } => {
                let u = xi / delta;
                let e = (-0.5 * u * u).exp();
                let f = xi * erf(u / std::f64::consts::SQRT_2) + (2.0 / PI).sqrt() * delta * e;
                let f1 = erf(u / std::f64::consts::SQRT_2);
                let f2 = (2.0 / PI).sqrt() * e / delta;
                (s * f + self.offset, s * f1, s * f2)
            }
        }
    }

    fn scale_length(&self) -> f64 {
        match self.shape {
            ProfileShape::Polynomial { width, .. } => width,
            ProfileShape::Gaussian { delta, .. } => delta,
        }
    }

    // int_a^b (b - u) F''(u) du, accurate when b is close to a.
    fn taylor_remainder(&self, a: f64, b: f64) -> f64 {
        let r = gl16();
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            let u = c + h * x;
            acc += w * (b - u) * self.graph(u).2;
        }
        acc * h
    }
}

/// One piece of a piecewise smooth closed curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Segment {
    /// `start + tau * dir` for `tau` in `[0, length]`, `dir` a unit vector.
    Line { start: Point, dir: Point, length: f64 },
    /// Rounded vertex parameterized by the graph coordinate in `[-half_width, half_width]`.
    Corner(CornerProfile),
    /// Counterclockwise arc `center + radius (cos a, sin a)` for `a` in `[start_angle, start_angle + sweep]`.
    Arc { center: Point, radius: f64, start_angle: f64, sweep: f64 },
}

impl Segment {
    /// Parameter interval.
    pub fn range(&self) -> (f64, f64) {
        match self {
            Segment::Line { length, .. } => (0.0, *length),
            Segment::Corner(c) => (-c.half_width, c.half_width),
            Segment::Arc { start_angle, sweep, .. } => (*start_angle, start_angle + sweep),
        }
    }

    /// Position and first two parameter derivatives.
    pub fn eval(&self, tau: f64) -> (Point, Point, Point) {
        match self {
            Segment::Line { start, dir, .. } => (add(*start, scale(*dir, tau)), *dir, [0.0, 0.0]),
            Segment::Corner(c) => {
                let (f, f1, f2) = c.graph(tau);
                let p = add(c.vertex, add(scale(c.tangent, tau), scale(c.normal, f)));
                let d1 = add(c.tangent, scale(c.normal, f1));
                (p, d1, scale(c.normal, f2))
            }
            Segment::Arc { center, radius, .. } => {
                let (s, co) = tau.sin_cos();
                (
                    [center[0] + radius * co, center[1] + radius * s],
                    [-radius * s, radius * co],
                    [-radius * co, -radius * s],
                )
            }
        }
    }

    pub fn position(&self, tau: f64) -> Point {
        self.eval(tau).0
    }

    /// Outward unit normal.
    pub fn normal(&self, tau: f64) -> Point {
        right_normal(unit(self.eval(tau).1))
    }

    /// `|c'(tau)|`.
    pub fn speed(&self, tau: f64) -> f64 {
        norm(self.eval(tau).1)
    }

    /// `c(to) - c(from)` without cancellation for nearby parameters.
    pub fn chord(&self, from: f64, to: f64) -> Point {
        self.displacement(from, to - from)
    }

    /// `c(from + d) - c(from)` for an exactly known offset `d`.
    pub fn displacement(&self, from: f64, d: f64) -> Point {
        let to = from + d;
        match self {
            Segment::Line { dir, .. } => scale(*dir, d),
            Segment::Arc { radius, .. } => {
                let mid = 0.5 * (from + to);
                let m = 2.0 * radius * (0.5 * d).sin();
                [-m * mid.sin(), m * mid.cos()]
            }
            Segment::Corner(c) => {
                let rise = if d.abs() <= 0.5 * c.scale_length() {
                    c.graph(from).1 * d + c.taylor_remainder(from, to)
                } else {
                    c.graph(to).0 - c.graph(from).0
                };
                add(scale(c.tangent, d), scale(c.normal, rise))
            }
        }
    }

    /// `<c(target) - c(source), n(source)>` with `n` the outward unit normal at `source`.
    pub fn normal_offset(&self, target: f64, source: f64) -> f64 {
        match self {
            Segment::Line { .. } => 0.0,
            Segment::Arc { radius, .. } => {
                let s = (0.5 * (target - source)).sin();
                -2.0 * radius * s * s
            }
            Segment::Corner(c) => {
                let d = target - source;
                if d.abs() <= 0.5 * c.scale_length() {
                    let f1 = c.graph(source).1;
                    c.taylor_remainder(source, target) / (1.0 + f1 * f1).sqrt()
                } else {
                    dot(self.chord(source, target), self.normal(source))
                }
            }
        }
    }

    /// Arclength between two parameters.
    pub fn arclength(&self, from: f64, to: f64) -> f64 {
        match self {
            Segment::Line { .. } => to - from,
            Segment::Arc { radius, .. } => radius * (to - from),
            Segment::Corner(_) => adaptive_gl(&|t| self.speed(t), from, to, 1e-15),
        }
    }

    pub fn length(&self) -> f64 {
        let (a, b) = self.range();
        self.arclength(a, b)
    }
}

/// Position, unit tangent and signed curvature at an arclength parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub point: Point,
    pub tangent: Point,
    pub curvature: f64,
    pub segment: usize,
    pub param: f64,
}

/// Closed, counterclockwise curve made of lines, rounded corners and arcs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseCurve {
    segments: Vec<Segment>,
    starts: Vec<f64>,
    total: f64,
}

impl PiecewiseCurve {
    /// Builds a curve from segments given in traversal order.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return invalid("curve needs at least one segment");
        }
        let mut starts = Vec::with_capacity(segments.len());
        let mut total = 0.0;
        for s in &segments {
            starts.push(total);
            total += s.length();
        }
        Ok(Self { segments, starts, total })
    }

    /// Circle traversed counterclockwise starting at angle 0.
    pub fn circle(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return invalid(format!("radius must be positive, got {radius}"));
        }
        Self::new(vec![Segment::Arc { center, radius, start_angle: 0.0, sweep: 2.0 * PI }])
    }

    /// The polygon itself as a chain of line segments.
    pub fn from_polygon(p: &Polygon) -> Self {
        let n = p.len();
        let segments = (0..n)
            .map(|i| {
                let a = p.vertex(i);
                let d = sub(p.vertex(i + 1), a);
                Segment::Line { start: a, dir: unit(d), length: norm(d) }
            })
            .collect();
        Self::new(segments).expect("polygon has edges")
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_length(&self) -> f64 {
        self.total
    }

    /// Arclength at which segment `i` begins.
    pub fn segment_start(&self, i: usize) -> f64 {
        self.starts[i]
    }

    /// Evaluates the curve at arclength `t`, wrapped into `[0, total)`.
    pub fn eval(&self, t: f64) -> CurveSample {
        let t = t.rem_euclid(self.total);
        let i = match self.starts.binary_search_by(|s| s.partial_cmp(&t).unwrap()) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let seg = &self.segments[i];
        let target = t - self.starts[i];
        let (a, b) = seg.range();
        let len = self.segment_length(i);
        let mut tau = a + (b - a) * (target / len).clamp(0.0, 1.0);
        if !matches!(seg, Segment::Line { .. } | Segment::Arc { .. }) {
            for _ in 0..50 {
                let err = seg.arclength(a, tau) - target;
                let step = err / seg.speed(tau);
                tau = (tau - step).clamp(a, b);
                if step.abs() <= 1e-15 * (b - a) {
                    break;
                }
            }
        }
        self.sample(i, tau)
    }

    fn segment_length(&self, i: usize) -> f64 {
        let next = if i + 1 < self.starts.len() { self.starts[i + 1] } else { self.total };
        next - self.starts[i]
    }

    /// Sample at a segment parameter.
    pub fn sample(&self, segment: usize, tau: f64) -> CurveSample {
        let (p, d1, d2) = self.segments[segment].eval(tau);
        let sp = norm(d1);
        CurveSample {
            point: p,
            tangent: scale(d1, 1.0 / sp),
            curvature: cross(d1, d2) / (sp * sp * sp),
            segment,
            param: tau,
        }
    }

    /// `x - y` for curve points given as (segment, parameter), accurate for nearby points on
    /// the same or adjacent segments.
    pub fn separation(&self, a: (usize, f64), b: (usize, f64)) -> Point {
        let n = self.segments.len();
        let (sa, ta) = a;
        let (sb, tb) = b;
        if sa == sb {
            return self.segments[sa].chord(tb, ta);
        }
        let a_after_b = (sb + 1) % n == sa;
        let b_after_a = (sa + 1) % n == sb;
        let via_start_of_a = || {
            // Junction = start of segment a = end of segment b.
            let ja = self.segments[sa].chord(self.segments[sa].range().0, ta);
            let jb = self.segments[sb].chord(self.segments[sb].range().1, tb);
            sub(ja, jb)
        };
        let via_start_of_b = || {
            let ja = self.segments[sa].chord(self.segments[sa].range().1, ta);
            let jb = self.segments[sb].chord(self.segments[sb].range().0, tb);
            sub(ja, jb)
        };
        match (a_after_b, b_after_a) {
            (true, false) => via_start_of_a(),
            (false, true) => via_start_of_b(),
            (true, true) => {
                let d1 = via_start_of_a();
                let d2 = via_start_of_b();
                let (a0, a1) = self.segments[sa].range();
                if (ta - a0).abs() <= (a1 - ta).abs() {
                    d1
                } else {
                    d2
                }
            }
            _ => sub(self.segments[sa].position(ta), self.segments[sb].position(tb)),
        }
    }

    /// `<x - y, n_y>` for curve points x and y with `n_y` the outward normal at y.
    pub fn normal_offset(&self, x: (usize, f64), y: (usize, f64)) -> f64 {
        if x.0 == y.0 {
            return self.segments[x.0].normal_offset(x.1, y.1);
        }
        dot(self.separation(x, y), self.segments[y.0].normal(y.1))
    }

    /// Dense polyline sampling `(t, x, y, curvature)` with `m` uniform arclength samples.
    pub fn polyline(&self, m: usize) -> Vec<[f64; 4]> {
        (0..m)
            .map(|i| {
                let t = self.total * i as f64 / m as f64;
                let s = self.eval(t);
                [t, s.point[0], s.point[1], s.curvature]
            })
            .collect()
    }

    /// Whether `p` lies inside the curve, by winding number of a fine polyline.
    pub fn contains(&self, p: Point) -> bool {
        let m = 4096;
        let pts: Vec<Point> = (0..m).map(|i| self.eval(self.total * i as f64 / m as f64).point).collect();
        let mut wind = 0.0;
        for i in 0..m {
            let a = sub(pts[i], p);
            let b = sub(pts[(i + 1) % m], p);
            wind += cross(a, b).atan2(dot(a, b));
        }
        wind.abs() > PI
    }
}

/// Rounds every vertex of `p` by convolving its local graph with the scaled kernel.
///
/// `h` is the distance along each edge from the vertex to the end of the rounding zone for
/// polynomial kernels and the Gaussian's standard deviation (before the tolerance fit) for
/// Gaussian kernels, whose zones extend `h * x_eps` along each edge.
pub fn round_polygon(p: &Polygon, h: f64, kernel: &SmoothingKernel) -> Result<PiecewiseCurve> {
    kernel.validate()?;
    if !(h > 0.0) || !h.is_finite() {
        return invalid(format!("smoothing width must be positive, got {h}"));
    }
    let min_edge = p.min_edge();
    if h >= 0.5 * min_edge {
        return invalid(format!(
            "smoothing width {h} must be smaller than half the minimum edge length {min_edge}"
        ));
    }
    let extent = match *kernel {
        SmoothingKernel::Polynomial { .. } => h,
        SmoothingKernel::Gaussian { eps } => h * gaussian_threshold(eps),
    };
    if 2.0 * extent >= min_edge {
        return invalid(format!(
            "gaussian rounding zones of length {extent} overlap on the minimum edge length {min_edge}"
        ));
    }
    let n = p.len();
    let mut segments = Vec::with_capacity(2 * n);
    for i in 0..n {
        let prev = p.vertex(i + n - 1);
        let v = p.vertex(i);
        let next = p.vertex(i + 1);
        let e_in = unit(sub(v, prev));
        let e_out = unit(sub(next, v));
        let turn = cross(e_in, e_out).atan2(dot(e_in, e_out));
        let tangent = unit(add(e_in, e_out));
        let normal = right_normal(tangent);
        let half = 0.5 * turn;
        let slope = -half.tan();
        let half_width = extent * half.cos();
        let shape = match *kernel {
            SmoothingKernel::Polynomial { order } => ProfileShape::Polynomial { order, width: half_width },
            SmoothingKernel::Gaussian { eps } => {
                ProfileShape::Gaussian { delta: select_delta(2.0 * half_width, slope, eps)?, eps }
            }
        };
        segments.push(Segment::Corner(CornerProfile {
            vertex: v,
            tangent,
            normal,
            slope,
            offset: 0.0,
            half_width,
            edge_extent: extent,
            shape,
        }));
        let len = norm(sub(next, v)) - 2.0 * extent;
        segments.push(Segment::Line { start: add(v, scale(e_out, extent)), dir: e_out, length: len });
    }
    PiecewiseCurve::new(segments)
}
