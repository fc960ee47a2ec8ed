//! Informed (ellipse) sampling and potential-field sample adjustment.

use std::f64::consts::TAU;

use rand::Rng;

use crate::env::{HazardMap, Point, SafeSeaTriangulation};
use crate::error::{Error, Result};

/// Relative slack when comparing `c_best` against `c_min`.
const C_TOL: f64 = 1e-9;

/// Shape of the unit set mapped onto the informed ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BallShape {
    /// Uniform over the unit disk; the image is the whole ellipse.
    #[default]
    Disk,
    /// Uniform over `[0, 1]²`; the image covers one quadrant of the ellipse.
    UnitSquare,
}

impl BallShape {
    pub fn draw<R: Rng + ?Sized>(self, rng: &mut R) -> Point {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        match self {
            BallShape::Disk => {
                let r = u.sqrt();
                let (s, c) = (TAU * v).sin_cos();
                Point::new(r * c, r * s)
            }
            BallShape::UnitSquare => Point::new(u, v),
        }
    }
}

/// Semi-axes `(a, b)` of the informed ellipse.
fn semi_axes(c_best: f64, c_min: f64) -> (f64, f64) {
    (c_best / 2.0, (c_best * c_best - c_min * c_min).max(0.0).sqrt() / 2.0)
}

/// Maps `p_ball` onto the ellipse with foci `start`, `goal` and major axis
/// `c_best`.
pub fn ellipse_point(start: Point, goal: Point, c_best: f64, p_ball: Point) -> Point {
    let c_min = start.distance(goal);
    let (a, b) = semi_axes(c_best, c_min);
    let theta = (goal.y - start.y).atan2(goal.x - start.x);
    let (s, c) = theta.sin_cos();
    let (lx, ly) = (a * p_ball.x, b * p_ball.y);
    (start + goal) * 0.5 + Point::new(c * lx - s * ly, s * lx + c * ly)
}

/// Membership in the closed informed ellipse, with a small tolerance for
/// rounding. A zero minor axis degenerates to the start–goal segment.
pub fn in_informed_ellipse(start: Point, goal: Point, c_best: f64, p: Point) -> bool {
    let c_min = start.distance(goal);
    let (a, b) = semi_axes(c_best, c_min);
    let theta = (goal.y - start.y).atan2(goal.x - start.x);
    let (s, c) = theta.sin_cos();
    let d = p - (start + goal) * 0.5;
    let (u, v) = (c * d.x + s * d.y, -s * d.x + c * d.y);
    let tol = 1e-9 * c_best.max(1.0);
    if b <= tol {
        return v.abs() <= tol && u.abs() <= a + tol;
    }
    (u / a).powi(2) + (v / b).powi(2) <= 1.0 + 1e-9
}

/// Draws from the informed set for the current best cost, or from the free
/// space triangulation while no solution exists (`c_best` infinite).
pub fn informed_sample<R: Rng + ?Sized>(
    start: Point,
    goal: Point,
    c_best: f64,
    tri: &SafeSeaTriangulation,
    shape: BallShape,
    rng: &mut R,
) -> Result<Point> {
    if c_best.is_infinite() {
        return Ok(tri.sample(rng));
    }
    let c_min = start.distance(goal);
    if c_best.is_nan() || c_best < c_min * (1.0 - C_TOL) {
        return Err(Error::invalid(format!("c_best {c_best} is below c_min {c_min}")));
    }
    Ok(ellipse_point(start, goal, c_best.max(c_min), shape.draw(rng)))
}

/// Moves a sample towards the goal in steps of `lambda` for at most `n_sa_max`
/// steps, stopping as soon as it comes within `d_margin` of a hazard.
pub fn adjust_sample(z_rand: Point, goal: Point, map: &HazardMap, n_sa_max: usize, lambda: f64, d_margin: f64) -> Point {
    let mut p = z_rand;
    for _ in 0..n_sa_max {
        let f = goal - p;
        if map.distance_to_nearest_obstacle(p) < d_margin {
            return p;
        }
        let norm = f.norm();
        if norm == 0.0 {
            return p;
        }
        p = p + f * (lambda / norm);
    }
    p
}
