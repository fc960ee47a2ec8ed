//! JSON map files.
//!
//! ```json
//! {
//!   "bounds": [xmin, ymin, xmax, ymax],
//!   "hazards": [ { "exterior": [[x, y], ...], "holes": [[[x, y], ...]] } ],
//!   "start": { "x": 50, "y": 250, "chi": 0, "U": 4 },
//!   "goal": { "x": 450, "y": 250, "chi": 0, "U": 0 }
//! }
//! ```
//!
//! Coordinates are planar meters. Rings may repeat the first vertex at the end.
//! `holes`, `start` and `goal` are optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::geometry::Rect;
use super::hazards::{preprocess_hazards, HazardMap, Polygon};
use super::simplify::simplify_ring;
use crate::error::{Error, Result};
use crate::vessel::VesselState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapFile {
    pub bounds: Rect,
    #[serde(default)]
    pub hazards: Vec<Polygon>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<VesselState>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<VesselState>,
}

impl MapFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let map: MapFile = serde_json::from_str(text)?;
        if !map.bounds.is_valid() {
            return Err(Error::invalid("bounds must be [xmin, ymin, xmax, ymax] with min < max"));
        }
        Ok(map)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// Simplifies every ring with tolerance `epsilon` and then buffers and
    /// merges the hazards by `d_safe`.
    pub fn build(&self, epsilon: f64, d_safe: f64) -> Result<HazardMap> {
        let mut raw = Vec::with_capacity(self.hazards.len());
        for poly in &self.hazards {
            let poly = poly.clone().normalized();
            poly.validate()?;
            let exterior = simplify_ring(&poly.exterior, epsilon)?;
            let holes = poly
                .holes
                .iter()
                .map(|h| simplify_ring(h, epsilon))
                .collect::<Result<Vec<_>>>()?;
            raw.push(Polygon { exterior, holes });
        }
        preprocess_hazards(&raw, d_safe, self.bounds)
    }
}
