//! Minimal SVG rendering of maps, trees and trajectories.
//!
//! North (`x`) points up and east (`y`) to the right.

use std::fmt::Write as _;

use crate::env::{HazardMap, Point, Rect};
use crate::tree::Tree;

pub struct Svg {
    bounds: Rect,
    body: String,
}

impl Svg {
    pub fn new(bounds: Rect) -> Self {
        Svg {
            bounds,
            body: String::new(),
        }
    }

    fn xy(&self, p: Point) -> (f64, f64) {
        (p.y - self.bounds.min.y, self.bounds.max.x - p.x)
    }

    fn path_data(&self, pts: &[Point], out: &mut String) {
        for (i, &p) in pts.iter().enumerate() {
            let (x, y) = self.xy(p);
            let _ = write!(out, "{}{x:.2},{y:.2}", if i == 0 { "M" } else { "L" });
        }
    }

    pub fn hazards(&mut self, map: &HazardMap) -> &mut Self {
        let mut d = String::new();
        for poly in map.hazards() {
            self.path_data(&poly.exterior, &mut d);
            d.push('Z');
        }
        if !d.is_empty() {
            let _ = writeln!(self.body, r##"<path d="{d}" fill="#c8b88a" stroke="#7a6a3a" stroke-width="0.5"/>"##);
        }
        self
    }

    /// Every tree edge in one stroke.
    pub fn tree(&mut self, tree: &Tree) -> &mut Self {
        let mut d = String::new();
        for node in tree.nodes().iter().skip(1) {
            self.path_data(&node.edge.positions(), &mut d);
        }
        if !d.is_empty() {
            let _ = writeln!(
                self.body,
                r##"<path d="{d}" fill="none" stroke="#8aa" stroke-width="0.4" stroke-opacity="0.7"/>"##
            );
        }
        self
    }

    pub fn polyline(&mut self, pts: &[Point], color: &str, width: f64) -> &mut Self {
        if pts.len() >= 2 {
            let mut d = String::new();
            self.path_data(pts, &mut d);
            let _ = writeln!(
                self.body,
                r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="{width}" stroke-linejoin="round"/>"#
            );
        }
        self
    }

    pub fn circle(&mut self, p: Point, r: f64, color: &str) -> &mut Self {
        let (x, y) = self.xy(p);
        let _ = writeln!(self.body, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="{color}"/>"#);
        self
    }

    pub fn finish(&self) -> String {
        let (w, h) = (self.bounds.height(), self.bounds.width());
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\" width=\"{w}\" height=\"{h}\">\n\
             <rect width=\"{w}\" height=\"{h}\" fill=\"#eef4f8\"/>\n{}</svg>\n",
            self.body
        )
    }
}
