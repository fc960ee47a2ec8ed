//! Ramer-Douglas-Peucker polyline simplification.

use super::geometry::{point_segment_distance, Point};
use crate::error::{Error, Result};

/// Simplifies `points` so that every dropped vertex lies within `epsilon` of the
/// retained chain. The first and last points are always kept.
pub fn simplify_polyline(points: &[Point], epsilon: f64) -> Result<Vec<Point>> {
    if points.len() < 2 {
        return Err(Error::invalid("polyline needs at least two points"));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::invalid("epsilon must be non-negative"));
    }
    let mut keep = vec![false; points.len()];
    keep[0] = true;
    keep[points.len() - 1] = true;

    // explicit stack instead of recursion; coastlines can have many vertices
    let mut stack = vec![(0usize, points.len() - 1)];
    while let Some((first, last)) = stack.pop() {
        if last <= first + 1 {
            continue;
        }
        let (a, b) = (points[first], points[last]);
        let mut max_dist = -1.0;
        let mut index = first;
        for (i, p) in points.iter().enumerate().take(last).skip(first + 1) {
            let d = point_segment_distance(*p, a, b);
            if d > max_dist {
                max_dist = d;
                index = i;
            }
        }
        if max_dist > epsilon {
            keep[index] = true;
            stack.push((first, index));
            stack.push((index, last));
        }
    }
    Ok(points
        .iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(*p))
        .collect())
}

/// Simplifies an implicitly closed ring. Falls back to the input ring if the
/// result would have fewer than three vertices.
pub fn simplify_ring(ring: &[Point], epsilon: f64) -> Result<Vec<Point>> {
    if ring.len() < 3 {
        return Err(Error::invalid("ring needs at least three vertices"));
    }
    let mut closed = ring.to_vec();
    closed.push(ring[0]);
    let mut out = simplify_polyline(&closed, epsilon)?;
    out.pop();
    if out.len() < 3 {
        return Ok(ring.to_vec());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn collinear_point_removed() {
        let out = simplify_polyline(&pts(&[(0.0, 0.0), (5.0, 0.0), (10.0, 0.0)]), 0.1).unwrap();
        assert_eq!(out, pts(&[(0.0, 0.0), (10.0, 0.0)]));
    }

    #[test]
    fn peak_above_tolerance_is_kept() {
        let input = pts(&[(0.0, 0.0), (5.0, 3.0), (10.0, 0.0)]);
        // the peak sits 3 m from the chord
        assert_eq!(point_segment_distance(input[1], input[0], input[2]), 3.0);
        assert_eq!(simplify_polyline(&input, 2.0).unwrap(), input);
        assert_eq!(simplify_polyline(&input, 3.0).unwrap(), pts(&[(0.0, 0.0), (10.0, 0.0)]));
    }

    #[test]
    fn too_short() {
        assert!(simplify_polyline(&pts(&[(1.0, 1.0)]), 1.0).is_err());
    }

    #[test]
    fn ring_keeps_square() {
        let sq = pts(&[(0.0, 0.0), (5.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)]);
        let out = simplify_ring(&sq, 0.5).unwrap();
        assert_eq!(out, pts(&[(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)]));
    }

    fn distance_to_chain(p: Point, chain: &[Point]) -> f64 {
        chain
            .windows(2)
            .map(|w| point_segment_distance(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
    }

    proptest! {
        #[test]
        fn zero_epsilon_keeps_non_collinear(coords in prop::collection::vec((-100.0..100.0f64, -100.0..100.0f64), 2..40)) {
            let input = pts(&coords);
            let out = simplify_polyline(&input, 0.0).unwrap();
            // every removed point lies exactly on the simplified chain
            for p in &input {
                if !out.contains(p) {
                    prop_assert!(distance_to_chain(*p, &out) == 0.0);
                }
            }
        }

        #[test]
        fn removed_points_within_epsilon(
            coords in prop::collection::vec((-100.0..100.0f64, -100.0..100.0f64), 2..60),
            eps in 0.0..30.0f64,
        ) {
            let input = pts(&coords);
            let out = simplify_polyline(&input, eps).unwrap();
            prop_assert_eq!(out[0], input[0]);
            prop_assert_eq!(*out.last().unwrap(), *input.last().unwrap());
            // output is a subsequence
            let mut it = input.iter();
            for q in &out {
                prop_assert!(it.any(|p| p == q));
            }
            for p in &input {
                prop_assert!(distance_to_chain(*p, &out) <= eps + 1e-9);
            }
        }
    }
}
