use super::vec2::{cross, norm, sub, Point};
use crate::error::{invalid, Result};
use serde::Deserialize;

/// A simple closed polygon with counterclockwise vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Validates the vertex list and reorders it counterclockwise.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return invalid(format!("polygon needs at least 3 vertices, got {n}"));
        }
        if vertices.iter().any(|v| !v[0].is_finite() || !v[1].is_finite()) {
            return invalid("polygon vertices must be finite");
        }
        for i in 0..n {
            let j = (i + 1) % n;
            if vertices[i] == vertices[j] {
                return invalid(format!("vertices {i} and {j} coincide"));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (a0, a1) = (vertices[i], vertices[(i + 1) % n]);
                let (b0, b1) = (vertices[j], vertices[(j + 1) % n]);
                if adjacent {
                    // Adjacent edges may only share their common vertex.
                    let (shared, pa, pb) = if j == i + 1 { (a1, a0, b1) } else { (a0, a1, b0) };
                    let da = sub(pa, shared);
                    let db = sub(pb, shared);
                    if cross(da, db).abs() <= 1e-14 * norm(da) * norm(db) && da[0] * db[0] + da[1] * db[1] > 0.0 {
                        return invalid(format!("edges {i} and {j} overlap"));
                    }
                } else if segments_intersect(a0, a1, b0, b1) {
                    return invalid(format!("edges {i} and {j} intersect"));
                }
            }
        }
        let area = signed_area(&vertices);
        if area == 0.0 {
            return invalid("polygon has zero area");
        }
        if area < 0.0 {
            vertices.reverse();
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex `i` modulo the vertex count.
    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        norm(sub(self.vertex(i + 1), self.vertex(i)))
    }

    pub fn min_edge(&self) -> f64 {
        (0..self.len()).map(|i| self.edge_length(i)).fold(f64::INFINITY, f64::min)
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.len()).map(|i| self.edge_length(i)).sum()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let n = self.len();
        let mut cx = 0.0;
        let mut cy = 0.0;
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let c = cross(p, q);
            cx += (p[0] + q[0]) * c;
            cy += (p[1] + q[1]) * c;
        }
        let a6 = 6.0 * self.area();
        [cx / a6, cy / a6]
    }

    /// Whether `p` lies strictly inside (even-odd rule).
    pub fn contains(&self, p: Point) -> bool {
        let n = self.len();
        let mut inside = false;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if p[0] < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Reads `{"vertices": [[x, y], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct File {
            vertices: Vec<Point>,
        }
        let f: File = serde_json::from_str(text)?;
        Self::new(f.vertices)
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "vertices": self.vertices }).to_string()
    }

    /// Applies a rigid motion `x -> R(angle) x + shift`.
    pub fn transformed(&self, angle: f64, shift: Point) -> Self {
        let vertices = self
            .vertices
            .iter()
            .map(|&v| {
                let r = super::vec2::rotate(v, angle);
                [r[0] + shift[0], r[1] + shift[1]]
            })
            .collect();
        Self { vertices }
    }
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| cross(v[i], v[(i + 1) % n])).sum::<f64>()
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    cross(sub(b, a), sub(c, a))
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

fn segments_intersect(a0: Point, a1: Point, b0: Point, b1: Point) -> bool {
    let d1 = orient(b0, b1, a0);
    let d2 = orient(b0, b1, a1);
    let d3 = orient(a0, a1, b0);
    let d4 = orient(a0, a1, b1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(b0, b1, a0))
        || (d2 == 0.0 && on_segment(b0, b1, a1))
        || (d3 == 0.0 && on_segment(a0, a1, b0))
        || (d4 == 0.0 && on_segment(a0, a1, b1))
}
