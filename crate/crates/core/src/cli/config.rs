//! Flat `key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Planner keys use the
//! parameter names of [`PlannerConfig`]; `case = small|large` selects the
//! preset the other keys modify and is applied first wherever it appears.
//! Angles are in radians unless the key ends in `_deg`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::env::wrap_angle;
use crate::error::{Error, Result};
use crate::planners::{PlannerConfig, PlannerKind};
use crate::scenario::{AnchorMode, EncounterSpec};
use crate::tree::CostMetric;
use crate::vessel::VesselState;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub planner: PlannerKind,
    /// Planners compared by `benchmark`.
    pub planners: Vec<PlannerKind>,
    pub cfg: PlannerConfig,
    pub start: StateOverride,
    pub goal: StateOverride,
    /// Hazard buffer distance, m.
    pub d_safe: f64,
    /// Simplification tolerance applied to hazard rings, m.
    pub rdp_epsilon: f64,
    pub n_mc: usize,
    pub alpha: f64,
    pub jobs: usize,
    pub encounter: EncounterSpec,
    /// Target-ship spawn state for `scenario`; the map start when absent.
    pub spawn: StateOverride,
    /// Seed of the scenario query stream; the planner seed when absent.
    pub query_seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::for_case(false)
    }
}

impl RunConfig {
    fn for_case(large: bool) -> Self {
        RunConfig {
            planner: PlannerKind::PqRrtStar,
            planners: PlannerKind::ALL.to_vec(),
            cfg: if large {
                PlannerConfig::large_case()
            } else {
                PlannerConfig::small_case()
            },
            start: StateOverride::default(),
            goal: StateOverride::default(),
            d_safe: if large { 5.0 } else { 0.0 },
            rdp_epsilon: 1.0,
            n_mc: 100,
            alpha: 0.05,
            jobs: 1,
            encounter: EncounterSpec::default(),
            spawn: StateOverride::default(),
            query_seed: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut order = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("line {}: expected key = value", i + 1)))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if entries.insert(k.clone(), v.clone()).is_some() {
                return Err(Error::invalid(format!("line {}: duplicate key '{k}'", i + 1)));
            }
            order.push((k, v));
        }
        let mut rc = match entries.get("case").map(String::as_str) {
            None | Some("small") => RunConfig::for_case(false),
            Some("large") => RunConfig::for_case(true),
            Some(other) => return Err(Error::invalid(format!("unknown case '{other}' (small or large)"))),
        };
        for (k, v) in order {
            if k != "case" {
                rc.set(&k, &v)?;
            }
        }
        Ok(rc)
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let c = &mut self.cfg;
        match key {
            "planner" => self.planner = value.parse()?,
            "planners" => {
                self.planners = value
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<Result<Vec<_>>>()?;
            }
            "n_node_max" => c.n_node_max = num(key, value)?,
            "n_iter_max" => c.n_iter_max = num(key, value)?,
            "delta_goal" => c.delta_goal = num(key, value)?,
            "d_node_min" => c.d_node_min = num(key, value)?,
            "gamma" => c.gamma = num(key, value)?,
            "t_min" => c.t_min = num(key, value)?,
            "t_max" => c.t_max = num(key, value)?,
            "r_a" => c.r_a = num(key, value)?,
            "delta_sim" => c.delta_sim = num(key, value)?,
            "u_d" => c.u_d = num(key, value)?,
            "d_margin" => c.d_margin = num(key, value)?,
            "n_ancestry" => c.n_ancestry = num(key, value)?,
            "n_sa_max" => c.n_sa_max = num(key, value)?,
            "lambda" | "lambda_sample" => c.lambda_sample = num(key, value)?,
            "max_wall_time" => c.max_wall_time = num(key, value)?,
            "seed" => c.seed = num(key, value)?,
            "n_nn_max" => c.n_nn_max = num(key, value)?,
            "l_max" => c.l_max = Some(num(key, value)?),
            "connect_radius" => c.connect_radius = num(key, value)?,
            "cost_metric" => {
                c.cost_metric = match value {
                    "polyline" => CostMetric::Polyline,
                    "endpoint" => CostMetric::Endpoint,
                    _ => return Err(Error::invalid(format!("cost_metric: unknown value '{value}'"))),
                }
            }
            "unit_square_ball" => c.unit_square_ball = num(key, value)?,
            "max_redraws" => c.max_redraws = num(key, value)?,
            "t_chi" => c.ship.t_chi = num(key, value)?,
            "t_u" => c.ship.t_u = num(key, value)?,
            "r_max" => c.ship.r_max = num(key, value)?,
            "r_max_deg" => c.ship.r_max = num::<f64>(key, value)?.to_radians(),
            "u_min" => c.ship.u_min = num(key, value)?,
            "u_max" => c.ship.u_max = num(key, value)?,
            "delta" => c.guidance.delta = num(key, value)?,
            "wp_switch_radius" => c.guidance.wp_switch_radius = num(key, value)?,
            "d_safe" => self.d_safe = num(key, value)?,
            "rdp_epsilon" => self.rdp_epsilon = num(key, value)?,
            "n_mc" => self.n_mc = num(key, value)?,
            "alpha" => self.alpha = num(key, value)?,
            "jobs" => self.jobs = num(key, value)?,
            "query_seed" => self.query_seed = Some(num(key, value)?),
            "mode" => {
                self.encounter.mode = match value {
                    "corridor" => AnchorMode::Corridor,
                    "cpa" => AnchorMode::Cpa,
                    _ => return Err(Error::invalid(format!("mode: unknown value '{value}' (corridor or cpa)"))),
                }
            }
            "u_d_os" => self.encounter.u_d_os = num(key, value)?,
            "t_sim" => self.encounter.t_sim = num(key, value)?,
            "d_corr" => self.encounter.d_corr = num(key, value)?,
            "sigma_xx" => self.encounter.sigma[0][0] = num(key, value)?,
            "sigma_yy" => self.encounter.sigma[1][1] = num(key, value)?,
            "sigma_xy" => {
                let v = num(key, value)?;
                self.encounter.sigma[0][1] = v;
                self.encounter.sigma[1][0] = v;
            }
            "behavior_count" => self.encounter.behavior_count = num(key, value)?,
            "ownship_end_x" => self.encounter.ownship_end.x = num(key, value)?,
            "ownship_end_y" => self.encounter.ownship_end.y = num(key, value)?,
            _ => {
                if let Some((prefix, field)) = key.split_once('_') {
                    let slot = match prefix {
                        "start" => Some(&mut self.start),
                        "goal" => Some(&mut self.goal),
                        "spawn" => Some(&mut self.spawn),
                        _ => None,
                    };
                    if let Some(slot) = slot {
                        return slot.set(key, field, value);
                    }
                    if let Some(field) = key.strip_prefix("ownship_start_") {
                        let mut o = StateOverride::default();
                        o.set(key, field, value)?;
                        self.encounter.ownship_start = o.apply(self.encounter.ownship_start);
                        return Ok(());
                    }
                }
                return Err(Error::invalid(format!("unknown config key '{key}'")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.cfg.validate()?;
        if !(self.d_safe >= 0.0) || !(self.rdp_epsilon >= 0.0) {
            return Err(Error::invalid("d_safe and rdp_epsilon must be non-negative"));
        }
        if self.planners.is_empty() {
            return Err(Error::invalid("planners must name at least one planner"));
        }
        Ok(())
    }
}

/// Per-field overrides of a start, goal or spawn state given in the map file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StateOverride {
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub chi: Option<f64>,
    pub u: Option<f64>,
}

impl StateOverride {
    fn set(&mut self, key: &str, field: &str, value: &str) -> Result<()> {
        match field {
            "x" => self.x = Some(num(key, value)?),
            "y" => self.y = Some(num(key, value)?),
            "chi" => self.chi = Some(wrap_angle(num(key, value)?)),
            "chi_deg" => self.chi = Some(wrap_angle(num::<f64>(key, value)?.to_radians())),
            "u" => self.u = Some(num(key, value)?),
            _ => return Err(Error::invalid(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    fn apply(&self, s: VesselState) -> VesselState {
        VesselState::new(
            self.x.unwrap_or(s.x),
            self.y.unwrap_or(s.y),
            self.chi.unwrap_or(s.chi),
            self.u.unwrap_or(s.u),
        )
    }

    /// `base` with the overridden fields replaced. Without a base both
    /// coordinates must be given; course and speed default to zero.
    pub fn resolve(&self, base: Option<VesselState>) -> Option<VesselState> {
        match base {
            Some(b) => Some(self.apply(b)),
            None => Some(VesselState::new(self.x?, self.y?, self.chi.unwrap_or(0.0), self.u.unwrap_or(0.0))),
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::invalid(format!("{key}: cannot parse '{value}'")))
}
