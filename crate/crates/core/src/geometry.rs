//! Planar primitives shared by the scene model, the metric engine and the
//! plan renderer. Coordinates are meters, x east-positive, y north-positive.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn length(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).length()
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Counter-clockwise rotation about the origin.
    pub fn rotated(self, degrees: f64) -> Vec2 {
        let (s, c) = degrees.to_radians().sin_cos();
        Vec2::new(self.x * c - self.y * s, self.x * s + self.y * c)
    }

    /// Unit vector for a compass bearing (degrees clockwise from north).
    pub fn from_bearing(bearing_deg: f64) -> Vec2 {
        let (s, c) = bearing_deg.to_radians().sin_cos();
        Vec2::new(s, c)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

/// Axis-aligned rectangle, used for the lot boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Vec2,
    pub max: Vec2,
}

impl Rect {
    pub fn new(min: Vec2, max: Vec2) -> Self {
        Self { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Vec2 {
        Vec2::new(
            (self.min.x + self.max.x) / 2.0,
            (self.min.y + self.max.y) / 2.0,
        )
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn to_polygon(&self) -> Polygon {
        Polygon::new(vec![
            self.min,
            Vec2::new(self.max.x, self.min.y),
            self.max,
            Vec2::new(self.min.x, self.max.y),
        ])
    }
}

/// A simple polygon stored as an open ring (first vertex not repeated).
///
/// Every polygon produced by this crate is convex and counter-clockwise; an
/// empty vertex list denotes the empty set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<Vec2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2>) -> Self {
        Self { vertices }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 3
    }

    pub fn signed_area(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let n = self.vertices.len();
        let twice: f64 = (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum();
        twice / 2.0
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn is_counter_clockwise(&self) -> bool {
        self.signed_area() > 0.0
    }

    /// Area centroid; falls back to the vertex mean for degenerate rings.
    pub fn centroid(&self) -> Vec2 {
        let n = self.vertices.len();
        if n == 0 {
            return Vec2::ZERO;
        }
        let a = self.signed_area();
        if a.abs() < 1e-12 {
            let sum = self.vertices.iter().fold(Vec2::ZERO, |acc, v| acc + *v);
            return sum * (1.0 / n as f64);
        }
        let (mut cx, mut cy) = (0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let k = p.cross(q);
            cx += (p.x + q.x) * k;
            cy += (p.y + q.y) * k;
        }
        Vec2::new(cx / (6.0 * a), cy / (6.0 * a))
    }

    pub fn translated(&self, by: Vec2) -> Polygon {
        Polygon::new(self.vertices.iter().map(|v| *v + by).collect())
    }

    /// Even-odd point containment; boundary points count as inside.
    pub fn contains(&self, p: Vec2) -> bool {
        if self.is_empty() {
            return false;
        }
        let n = self.vertices.len();
        let mut inside = false;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            if on_segment(p, a, b) {
                return true;
            }
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Clips a convex polygon against an axis-aligned rectangle
    /// (Sutherland-Hodgman). The result is convex and keeps the winding.
    pub fn clip_to_rect(&self, rect: &Rect) -> Polygon {
        let mut out = self.vertices.clone();
        let edges: [fn(Vec2, &Rect) -> f64; 4] = [
            |p, r| p.x - r.min.x,
            |p, r| r.max.x - p.x,
            |p, r| p.y - r.min.y,
            |p, r| r.max.y - p.y,
        ];
        for dist in edges {
            if out.is_empty() {
                break;
            }
            let input = std::mem::take(&mut out);
            let n = input.len();
            for i in 0..n {
                let cur = input[i];
                let next = input[(i + 1) % n];
                let dc = dist(cur, rect);
                let dn = dist(next, rect);
                if dc >= 0.0 {
                    out.push(cur);
                }
                if (dc >= 0.0) != (dn >= 0.0) {
                    let t = dc / (dc - dn);
                    out.push(cur + (next - cur) * t);
                }
            }
        }
        out.dedup_by(|a, b| a.distance(*b) < 1e-12);
        if out.len() > 1 && out[0].distance(out[out.len() - 1]) < 1e-12 {
            out.pop();
        }
        let clipped = Polygon::new(out);
        if clipped.area() < 1e-12 {
            Polygon::default()
        } else {
            clipped
        }
    }

    /// Separating-axis test for two convex polygons. Shapes that only touch
    /// along an edge or at a vertex do not overlap.
    pub fn overlaps_convex(&self, other: &Polygon) -> bool {
        if self.is_empty() || other.is_empty() {
            return false;
        }
        for poly in [self, other] {
            let n = poly.vertices.len();
            for i in 0..n {
                let edge = poly.vertices[(i + 1) % n] - poly.vertices[i];
                let axis = Vec2::new(-edge.y, edge.x);
                if axis.length() < 1e-15 {
                    continue;
                }
                let (a_min, a_max) = project(self, axis);
                let (b_min, b_max) = project(other, axis);
                let scale = axis.length();
                if a_max <= b_min + 1e-12 * scale || b_max <= a_min + 1e-12 * scale {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_geo(&self) -> geo::Polygon<f64> {
        let ring: Vec<geo::Coord<f64>> = self
            .vertices
            .iter()
            .map(|v| geo::Coord { x: v.x, y: v.y })
            .collect();
        geo::Polygon::new(geo::LineString::from(ring), vec![])
    }
}

fn project(poly: &Polygon, axis: Vec2) -> (f64, f64) {
    poly.vertices
        .iter()
        .map(|v| v.dot(axis))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
            (lo.min(d), hi.max(d))
        })
}

fn on_segment(p: Vec2, a: Vec2, b: Vec2) -> bool {
    let ab = b - a;
    let ap = p - a;
    if ab.cross(ap).abs() > 1e-9 * ab.length().max(1.0) {
        return false;
    }
    let t = ap.dot(ab);
    t >= -1e-12 && t <= ab.dot(ab) + 1e-12
}

/// Number of sides used whenever a disc is approximated by a polygon.
pub const CIRCLE_SEGMENTS: usize = 24;

/// Regular `segments`-gon whose area equals that of the disc of `radius`.
///
/// The circumradius is inflated by `sqrt(pi / (n/2 * sin(2pi/n)))` so area
/// sums carry no systematic polygonization bias; the symmetric difference to
/// the true disc stays under 1% of its area for 24 sides.
pub fn disc_polygon(center: Vec2, radius: f64, segments: usize) -> Polygon {
    if radius <= 0.0 || segments < 3 {
        return Polygon::default();
    }
    let n = segments as f64;
    let inscribed_area_factor = n / 2.0 * (2.0 * PI / n).sin();
    let r = radius * (PI / inscribed_area_factor).sqrt();
    let vertices = (0..segments)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n;
            Vec2::new(center.x + r * theta.cos(), center.y + r * theta.sin())
        })
        .collect();
    Polygon::new(vertices)
}
