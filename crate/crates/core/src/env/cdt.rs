//! Constrained Delaunay triangulation of the free sea area and uniform
//! sampling over it.

use rand::Rng;
use serde::{Deserialize, Serialize};
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};

use super::geometry::{orient, ring_edges, Point};
use super::hazards::HazardMap;
use crate::error::{Error, Result};

/// Triangles with an area below this are dropped.
pub const MIN_TRIANGLE_AREA: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub a: Point,
    pub b: Point,
    pub c: Point,
}

impl Triangle {
    pub fn area(&self) -> f64 {
        orient(self.a, self.b, self.c).abs() / 2.0
    }

    pub fn centroid(&self) -> Point {
        (self.a + self.b + self.c) * (1.0 / 3.0)
    }

    /// Maps `r1, r2 ∈ [0, 1]` to a point of the triangle; uniform when both are
    /// uniform.
    pub fn point_at(&self, r1: f64, r2: f64) -> Point {
        let s = r1.sqrt();
        self.a * (1.0 - s) + self.b * (s * (1.0 - r2)) + self.c * (s * r2)
    }

    /// Closed containment test.
    pub fn contains(&self, p: Point) -> bool {
        let d1 = orient(self.a, self.b, p);
        let d2 = orient(self.b, self.c, p);
        let d3 = orient(self.c, self.a, p);
        let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
        let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
        !(neg && pos)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SafeSeaTriangulation {
    pub triangles: Vec<Triangle>,
    pub areas: Vec<f64>,
    pub cumulative_weights: Vec<f64>,
}

impl SafeSeaTriangulation {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Index of the triangle selected by `u ∈ [0, 1)` under the area weights.
    pub fn pick(&self, u: f64) -> usize {
        self.cumulative_weights
            .partition_point(|&w| w <= u)
            .min(self.triangles.len() - 1)
    }

    /// Deterministic form of [`sample_free_position`].
    pub fn point_at(&self, u: f64, r1: f64, r2: f64) -> Point {
        self.triangles[self.pick(u)].point_at(r1, r2)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let u: f64 = rng.random();
        let r1: f64 = rng.random();
        let r2: f64 = rng.random();
        self.point_at(u, r1, r2)
    }
}

/// Draws a uniformly distributed point of the free sea area.
pub fn sample_free_position<R: Rng + ?Sized>(tri: &SafeSeaTriangulation, rng: &mut R) -> Point {
    tri.sample(rng)
}

fn p2(p: Point) -> Point2<f64> {
    Point2::new(p.x, p.y)
}

/// Triangulates the map bounds with every hazard edge as a constraint and keeps
/// the triangles outside the hazards.
pub fn build_safe_sea_cdt(map: &HazardMap) -> Result<SafeSeaTriangulation> {
    let bounds = map.bounds();
    if bounds.area() <= map.hazard_area() {
        return Err(Error::InfeasibleEnvironment("hazards cover the whole map".into()));
    }
    let mut cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::new();
    let insert_err = |e: spade::InsertionError| Error::InfeasibleEnvironment(format!("triangulation failed: {e:?}"));
    for c in bounds.corners() {
        cdt.insert(p2(c)).map_err(insert_err)?;
    }
    for poly in map.hazards() {
        let mut handles = Vec::with_capacity(poly.exterior.len());
        for &v in &poly.exterior {
            handles.push(cdt.insert(p2(v)).map_err(insert_err)?);
        }
        for i in 0..handles.len() {
            let (a, b) = (handles[i], handles[(i + 1) % handles.len()]);
            if a != b {
                cdt.add_constraint_and_split(a, b, |p| p);
            }
        }
    }

    let mut triangles = Vec::new();
    for face in cdt.inner_faces() {
        let [a, b, c] = face.vertices().map(|v| {
            let p = v.position();
            Point::new(p.x, p.y)
        });
        let t = Triangle { a, b, c };
        if t.area() < MIN_TRIANGLE_AREA || map.in_hazard(t.centroid()) {
            continue;
        }
        triangles.push(t);
    }
    if triangles.is_empty() {
        return Err(Error::InfeasibleEnvironment("no free-space triangles".into()));
    }
    let areas: Vec<f64> = triangles.iter().map(Triangle::area).collect();
    let total: f64 = areas.iter().sum();
    let mut acc = 0.0;
    let mut cumulative_weights: Vec<f64> = areas
        .iter()
        .map(|a| {
            acc += a;
            acc / total
        })
        .collect();
    *cumulative_weights.last_mut().unwrap() = 1.0;
    Ok(SafeSeaTriangulation {
        triangles,
        areas,
        cumulative_weights,
    })
}

/// All hazard edges appear as (unions of) triangle edges of `tri`. Used in tests.
#[doc(hidden)]
pub fn hazard_edges_covered(tri: &SafeSeaTriangulation, map: &HazardMap) -> bool {
    let edges: Vec<(Point, Point)> = tri
        .triangles
        .iter()
        .flat_map(|t| [(t.a, t.b), (t.b, t.c), (t.c, t.a)])
        .collect();
    map.hazards().iter().all(|h| {
        ring_edges(&h.exterior).all(|(a, b)| {
            let mid = (a + b) * 0.5;
            edges.iter().any(|&(p, q)| {
                orient(p, q, a).abs() < 1e-9
                    && orient(p, q, b).abs() < 1e-9
                    && super::geometry::point_segment_distance(mid, p, q) < 1e-9
            })
        })
    })
}
