//! Hazard polygons: validation, buffering and merging, spatial indexing, and
//! the point/trajectory queries the planners run against them.

use geo::algorithm::buffer::{Buffer, BufferStyle, LineCap, LineJoin};
use geo::{BooleanOps, Coord, LineString, MultiPolygon};
use rstar::primitives::{GeomWithData, Rectangle};
use rstar::{PointDistance, RTree, RTreeObject, AABB};
use serde::{Deserialize, Serialize};

use super::geometry::{
    point_in_ring, point_segment_distance_2, ring_edges, ring_self_intersects, ring_signed_area,
    segment_intersects_rect, segments_intersect, Point, Rect,
};
use crate::error::{Error, Result};
use crate::vessel::TrajectorySegment;

/// Segments per quarter circle used for round buffer joins.
pub const BUFFER_SEGMENTS_PER_QUARTER: u32 = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    pub exterior: Vec<Point>,
    #[serde(default)]
    pub holes: Vec<Vec<Point>>,
}

impl Polygon {
    pub fn new(exterior: Vec<Point>) -> Self {
        Polygon {
            exterior,
            holes: Vec::new(),
        }
    }

    pub fn rect(r: Rect) -> Self {
        Polygon::new(r.corners().to_vec())
    }

    /// Drops an explicit closing vertex from every ring.
    pub fn normalized(mut self) -> Self {
        fn open(ring: &mut Vec<Point>) {
            if ring.len() > 1 && ring.first() == ring.last() {
                ring.pop();
            }
        }
        open(&mut self.exterior);
        self.holes.iter_mut().for_each(open);
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (k, ring) in std::iter::once(&self.exterior).chain(&self.holes).enumerate() {
            let what = if k == 0 { "exterior" } else { "hole" };
            if ring.len() < 3 {
                return Err(Error::invalid(format!("{what} ring has fewer than 3 vertices")));
            }
            if ring.iter().any(|p| !p.is_finite()) {
                return Err(Error::invalid(format!("{what} ring has non-finite coordinates")));
            }
            if ring_self_intersects(ring) {
                return Err(Error::invalid(format!("{what} ring self-intersects")));
            }
            if ring_signed_area(ring) == 0.0 {
                return Err(Error::invalid(format!("{what} ring has zero area")));
            }
        }
        Ok(())
    }

    /// Containment including the boundary. Holes are honored.
    pub fn contains(&self, p: Point) -> bool {
        point_in_ring(p, &self.exterior) && !self.holes.iter().any(|h| hole_strictly_contains(h, p))
    }

    pub fn area(&self) -> f64 {
        ring_signed_area(&self.exterior).abs()
            - self.holes.iter().map(|h| ring_signed_area(h).abs()).sum::<f64>()
    }

    pub fn bounding_rect(&self) -> Rect {
        Rect::from_points(&self.exterior).expect("validated ring")
    }

    /// Distance from `p` to the polygon; zero inside or on the boundary.
    pub fn distance(&self, p: Point) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        std::iter::once(&self.exterior)
            .chain(&self.holes)
            .flat_map(|r| ring_edges(r))
            .map(|(a, b)| point_segment_distance_2(p, a, b))
            .fold(f64::INFINITY, f64::min)
            .sqrt()
    }
}

fn hole_strictly_contains(hole: &[Point], p: Point) -> bool {
    point_in_ring(p, hole) && !ring_edges(hole).any(|(a, b)| point_segment_distance_2(p, a, b) == 0.0)
}

fn to_geo(poly: &Polygon) -> geo::Polygon<f64> {
    let ring = |r: &[Point]| LineString::from(r.iter().map(|p| Coord { x: p.x, y: p.y }).collect::<Vec<_>>());
    geo::Polygon::new(ring(&poly.exterior), poly.holes.iter().map(|h| ring(h)).collect())
}

fn from_geo_ring(ls: &LineString<f64>) -> Vec<Point> {
    let mut pts: Vec<Point> = ls.coords().map(|c| Point::new(c.x, c.y)).collect();
    if pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    pts
}

fn exteriors(mp: &MultiPolygon<f64>) -> Vec<geo::Polygon<f64>> {
    mp.iter()
        .map(|p| geo::Polygon::new(p.exterior().clone(), Vec::new()))
        .collect()
}

/// Buffers every raw polygon outward by `d_safe`, merges the results, clips
/// them to `bounds` and removes interior holes.
///
/// Round joins use [`BUFFER_SEGMENTS_PER_QUARTER`] chords per quarter circle. The
/// offset distance is inflated so that the chords circumscribe the true offset
/// curve, so every point closer than `d_safe` to a raw polygon is covered.
pub fn preprocess_hazards(raw: &[Polygon], d_safe: f64, bounds: Rect) -> Result<HazardMap> {
    if !(d_safe >= 0.0) || !d_safe.is_finite() {
        return Err(Error::invalid("d_safe must be finite and non-negative"));
    }
    if !bounds.is_valid() {
        return Err(Error::invalid("bounds must be a finite, non-empty rectangle"));
    }
    let mut parts = Vec::with_capacity(raw.len());
    for poly in raw {
        let poly = poly.clone().normalized();
        poly.validate()?;
        let g = to_geo(&poly);
        if d_safe > 0.0 {
            let step = std::f64::consts::FRAC_PI_2 / BUFFER_SEGMENTS_PER_QUARTER as f64;
            let distance = d_safe / (step / 2.0).cos() * (1.0 + 1e-9);
            let style = BufferStyle::new(distance)
                .line_join(LineJoin::Round(step))
                .line_cap(LineCap::Round(step));
            parts.extend(g.buffer_with_style(style));
        } else {
            parts.push(g);
        }
    }
    let merged = geo::unary_union(&parts);
    let clip = MultiPolygon::new(vec![to_geo(&Polygon::rect(bounds))]);
    let clipped = merged.intersection(&clip);
    // Removing holes can leave islands nested inside their former lake; a
    // second union folds them into the surrounding polygon.
    let filled = geo::unary_union(&exteriors(&clipped));
    let hazards = filled
        .iter()
        .map(|p| Polygon::new(from_geo_ring(p.exterior())))
        .filter(|p| p.exterior.len() >= 3 && ring_signed_area(&p.exterior).abs() > 1e-12)
        .collect();
    Ok(HazardMap::new(bounds, hazards, d_safe))
}

/// Identifies one boundary edge: `(polygon, edge)` where edge `i` runs from
/// vertex `i` to vertex `i + 1` of the exterior ring.
pub type EdgeId = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq)]
struct HazardEdge {
    a: Point,
    b: Point,
    id: EdgeId,
}

impl RTreeObject for HazardEdge {
    type Envelope = AABB<[f64; 2]>;

    fn envelope(&self) -> Self::Envelope {
        AABB::from_corners(self.a.into(), self.b.into())
    }
}

impl PointDistance for HazardEdge {
    fn distance_2(&self, point: &[f64; 2]) -> f64 {
        point_segment_distance_2(Point::from(*point), self.a, self.b)
    }
}

type PolygonBox = GeomWithData<Rectangle<[f64; 2]>, usize>;

/// Buffered, merged, hole-free hazard polygons inside a rectangular map, with
/// R-trees over hazard edges and hazard bounding boxes.
///
/// Immutable after construction and shareable between threads.
#[derive(Debug, Clone)]
pub struct HazardMap {
    hazards: Vec<Polygon>,
    bounds: Rect,
    d_safe: f64,
    edges: RTree<HazardEdge>,
    boxes: RTree<PolygonBox>,
}

impl HazardMap {
    /// Builds the indices over already preprocessed hazards. Exterior rings are
    /// reoriented counter-clockwise; holes are discarded.
    pub fn new(bounds: Rect, hazards: Vec<Polygon>, d_safe: f64) -> Self {
        let hazards: Vec<Polygon> = hazards
            .into_iter()
            .map(|p| {
                let mut ext = p.normalized().exterior;
                if ring_signed_area(&ext) < 0.0 {
                    ext.reverse();
                }
                Polygon::new(ext)
            })
            .collect();
        let mut edges = Vec::new();
        let mut boxes = Vec::new();
        for (pi, poly) in hazards.iter().enumerate() {
            for (ei, (a, b)) in ring_edges(&poly.exterior).enumerate() {
                edges.push(HazardEdge { a, b, id: (pi, ei) });
            }
            let r = poly.bounding_rect();
            boxes.push(GeomWithData::new(
                Rectangle::from_corners(r.min.into(), r.max.into()),
                pi,
            ));
        }
        HazardMap {
            hazards,
            bounds,
            d_safe,
            edges: RTree::bulk_load(edges),
            boxes: RTree::bulk_load(boxes),
        }
    }

    /// A map without hazards.
    pub fn open(bounds: Rect) -> Self {
        HazardMap::new(bounds, Vec::new(), 0.0)
    }

    pub fn hazards(&self) -> &[Polygon] {
        &self.hazards
    }

    pub fn bounds(&self) -> Rect {
        self.bounds
    }

    pub fn d_safe(&self) -> f64 {
        self.d_safe
    }

    pub fn hazard_area(&self) -> f64 {
        self.hazards.iter().map(Polygon::area).sum()
    }

    /// Index of a hazard containing `p` (boundary included).
    pub fn hazard_at(&self, p: Point) -> Option<usize> {
        let mut hits: Vec<usize> = self
            .boxes
            .locate_all_at_point(&p.into())
            .map(|b| b.data)
            .filter(|&i| self.hazards[i].contains(p))
            .collect();
        hits.sort_unstable();
        hits.first().copied()
    }

    pub fn in_hazard(&self, p: Point) -> bool {
        self.boxes
            .locate_all_at_point(&p.into())
            .any(|b| self.hazards[b.data].contains(p))
    }

    /// Point in the map bounds and outside every hazard.
    pub fn is_free(&self, p: Point) -> bool {
        self.bounds.contains(p) && !self.in_hazard(p)
    }

    /// Minimum distance from `p` to any hazard: zero inside or on a hazard,
    /// `f64::INFINITY` when the map has no hazards.
    pub fn distance_to_nearest_obstacle(&self, p: Point) -> f64 {
        if self.hazards.is_empty() {
            return f64::INFINITY;
        }
        if self.in_hazard(p) {
            return 0.0;
        }
        self.edges
            .nearest_neighbor(&p.into())
            .map(|e| e.distance_2(&p.into()).sqrt())
            .unwrap_or(f64::INFINITY)
    }

    /// True when no chord of the polyline touches a hazard boundary and no
    /// vertex lies inside a hazard.
    pub fn path_is_free(&self, points: &[Point]) -> bool {
        let Some(&first) = points.first() else {
            return true;
        };
        if self.hazards.is_empty() {
            return true;
        }
        if self.in_hazard(first) {
            return false;
        }
        // With the first vertex outside, the path can only enter a hazard by
        // crossing or touching its boundary.
        let Some(bbox) = Rect::from_points(points) else {
            return true;
        };
        let env = AABB::from_corners(bbox.min.into(), bbox.max.into());
        let near: Vec<&HazardEdge> = self.edges.locate_in_envelope_intersecting(&env).collect();
        if near.is_empty() {
            return true;
        }
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            let chord = Rect::from_points(&[a, b]).expect("two points");
            let hit = near.iter().any(|e| {
                let r = Rect::from_points(&[e.a, e.b]).expect("two points");
                r.intersects(&chord) && segments_intersect(a, b, e.a, e.b)
            });
            if hit {
                return false;
            }
        }
        true
    }

    pub fn path_within_bounds(&self, points: &[Point]) -> bool {
        points.iter().all(|p| self.bounds.contains(*p))
    }

    /// All boundary edges, in polygon/ring order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Point, Point)> + '_ {
        self.hazards.iter().enumerate().flat_map(|(pi, poly)| {
            ring_edges(&poly.exterior)
                .enumerate()
                .map(move |(ei, (a, b))| ((pi, ei), a, b))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.size()
    }

    /// Edges that intersect the closed query rectangle, sorted by id.
    pub fn edges_in_rect(&self, rect: &Rect) -> Vec<EdgeId> {
        let env = AABB::from_corners(rect.min.into(), rect.max.into());
        let mut ids: Vec<EdgeId> = self
            .edges
            .locate_in_envelope_intersecting(&env)
            .filter(|e| segment_intersects_rect(e.a, e.b, rect))
            .map(|e| e.id)
            .collect();
        ids.sort_unstable();
        ids
    }

    /// The `k` edges closest to `p` with their distances, nearest first.
    pub fn nearest_edges(&self, p: Point, k: usize) -> Vec<(EdgeId, f64)> {
        self.edges
            .nearest_neighbor_iter_with_distance_2(&p.into())
            .take(k)
            .map(|(e, d2)| (e.id, d2.sqrt()))
            .collect()
    }
}

/// Collision check of a sampled trajectory against the hazards: every sample
/// must lie outside all hazards and every chord between consecutive samples
/// must stay clear of hazard boundaries.
///
/// This is a sampled check. Motion between samples is approximated by the
/// chord, so a hazard corner clipped by the true curved path between two
/// samples can be missed.
pub fn is_collision_free(traj: &TrajectorySegment, map: &HazardMap) -> bool {
    map.path_is_free(&traj.positions())
}

/// Free function form of [`HazardMap::distance_to_nearest_obstacle`].
pub fn distance_to_nearest_obstacle(map: &HazardMap, p: Point) -> f64 {
    map.distance_to_nearest_obstacle(p)
}
