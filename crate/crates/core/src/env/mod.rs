//! Map geometry: hazard preprocessing, spatial queries, collision checks and
//! free-space triangulation.

mod cdt;
mod geometry;
mod hazards;
mod map_file;
mod simplify;

pub use cdt::{
    build_safe_sea_cdt, hazard_edges_covered, sample_free_position, SafeSeaTriangulation,
    Triangle, MIN_TRIANGLE_AREA,
};
pub use geometry::{
    angle_diff, orient, point_in_ring, ring_boundary_distance, point_segment_distance, point_segment_distance_2,
    polyline_length, ring_edges, ring_signed_area, segment_intersects_rect, segments_intersect,
    wrap_angle, Point, Rect,
};
pub use hazards::{
    distance_to_nearest_obstacle, is_collision_free, preprocess_hazards, EdgeId, HazardMap,
    Polygon, BUFFER_SEGMENTS_PER_QUARTER,
};
pub use map_file::MapFile;
pub use simplify::{simplify_polyline, simplify_ring};
