//! Random target-ship behaviors drawn from a prebuilt tree.
//!
//! A tree is grown once from the target ship's spawn state without accepting
//! solutions. Query positions are then drawn either uniformly in a corridor
//! ahead of the own ship or from a Gaussian around the predicted closest point
//! of approach, and the root path to the node nearest each query becomes one
//! behavior.

use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::env::Point;
use crate::error::{Error, Result};
use crate::planners::{plan_with_tree, Environment, PlannerConfig, PlannerKind};
use crate::tree::{NodeId, Tree};
use crate::vessel::{SteerCommand, Steering, TrajectorySegment, VesselState};

/// How query positions are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnchorMode {
    #[default]
    Corridor,
    Cpa,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncounterSpec {
    pub ownship_start: VesselState,
    pub ownship_end: Point,
    /// Own-ship desired speed, m/s.
    pub u_d_os: f64,
    /// Prediction horizon, s.
    pub t_sim: f64,
    /// Corridor width, m.
    pub d_corr: f64,
    /// Covariance of CPA samples, m².
    pub sigma: [[f64; 2]; 2],
    pub behavior_count: usize,
    pub mode: AnchorMode,
}

impl Default for EncounterSpec {
    fn default() -> Self {
        EncounterSpec {
            ownship_start: VesselState::new(0.0, 0.0, 0.0, 5.0),
            ownship_end: Point::new(1000.0, 0.0),
            u_d_os: 5.0,
            t_sim: 100.0,
            d_corr: 200.0,
            sigma: [[2500.0, 0.0], [0.0, 2500.0]],
            behavior_count: 10,
            mode: AnchorMode::Corridor,
        }
    }
}

impl EncounterSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.ownship_start.is_finite() || !self.ownship_end.is_finite() {
            return Err(Error::invalid("own-ship start and end must be finite"));
        }
        if self.ownship_start.position() == self.ownship_end {
            return Err(Error::invalid("own-ship start and end coincide"));
        }
        if !(self.t_sim > 0.0) || !self.t_sim.is_finite() {
            return Err(Error::invalid("t_sim must be positive"));
        }
        if !(self.d_corr > 0.0) || !self.d_corr.is_finite() {
            return Err(Error::invalid("d_corr must be positive"));
        }
        if !(self.u_d_os >= 0.0) || !self.u_d_os.is_finite() {
            return Err(Error::invalid("u_d_os must be non-negative"));
        }
        covariance_sqrt(self.sigma).map(|_| ())
    }

    /// Course of the own-ship start → end line.
    pub fn course(&self) -> f64 {
        let d = self.ownship_end - self.ownship_start.position();
        d.y.atan2(d.x)
    }

    /// Own ship moving along its course at `u_d_os`.
    pub fn ownship(&self) -> VesselState {
        VesselState::at(self.ownship_start.position(), self.course(), self.u_d_os)
    }

    /// Corridor point at along-track `x_corr` and cross-track `y_corr`.
    pub fn corridor_point(&self, x_corr: f64, y_corr: f64) -> Result<Point> {
        if self.ownship_start.position() == self.ownship_end {
            return Err(Error::invalid("own-ship start and end coincide"));
        }
        let (s, c) = self.course().sin_cos();
        Ok(self.ownship_start.position() + Point::new(c * x_corr - s * y_corr, s * x_corr + c * y_corr))
    }

    /// Centre of the corridor.
    pub fn corridor_center(&self) -> Result<Point> {
        self.corridor_point(0.5 * self.u_d_os * self.t_sim, 0.0)
    }
}

/// Uniform draw from the corridor ahead of the own ship.
pub fn sample_corridor<R: Rng + ?Sized>(spec: &EncounterSpec, rng: &mut R) -> Result<Point> {
    let x = rng.random::<f64>() * spec.u_d_os * spec.t_sim;
    let y = (rng.random::<f64>() - 0.5) * spec.d_corr;
    spec.corridor_point(x, y)
}

/// Closest point of approach under constant course and speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cpa {
    /// Target position at `t_cpa`.
    pub p_cpa: Point,
    pub t_cpa: f64,
    pub d_cpa: f64,
}

pub fn cpa(own: &VesselState, target: &VesselState) -> Cpa {
    let r = target.position() - own.position();
    let v = target.velocity() - own.velocity();
    let vv = v.dot(v);
    let t_cpa = if vv > 0.0 { (-r.dot(v) / vv).max(0.0) } else { 0.0 };
    Cpa {
        p_cpa: target.position() + target.velocity() * t_cpa,
        t_cpa,
        d_cpa: (r + v * t_cpa).norm(),
    }
}

/// Symmetric square root of a 2×2 covariance; fails unless `sigma` is
/// symmetric positive semi-definite.
pub fn covariance_sqrt(sigma: [[f64; 2]; 2]) -> Result<[[f64; 2]; 2]> {
    let [[a, b], [b2, d]] = sigma;
    if ![a, b, b2, d].iter().all(|v| v.is_finite()) {
        return Err(Error::invalid("covariance must be finite"));
    }
    let scale = a.abs().max(d.abs()).max(b.abs()).max(1.0);
    if (b - b2).abs() > 1e-12 * scale {
        return Err(Error::invalid("covariance must be symmetric"));
    }
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d).powi(2) + b * b).sqrt();
    let (l1, l2) = (mean + radius, mean - radius);
    if l2 < -1e-12 * scale {
        return Err(Error::invalid("covariance must be positive semi-definite"));
    }
    let (s1, s2) = (l1.max(0.0).sqrt(), l2.max(0.0).sqrt());
    if radius == 0.0 {
        return Ok([[s1, 0.0], [0.0, s1]]);
    }
    // Unit eigenvector for l1; the one for l2 is its perpendicular.
    let (ex, ey) = if (l1 - a).abs() + b.abs() > (l1 - d).abs() + b.abs() {
        let n = (b * b + (l1 - a).powi(2)).sqrt();
        (b / n, (l1 - a) / n)
    } else {
        let n = (b * b + (l1 - d).powi(2)).sqrt();
        ((l1 - d) / n, b / n)
    };
    let m = |u: f64, v: f64| s1 * u + s2 * v;
    Ok([
        [m(ex * ex, ey * ey), m(ex * ey, -ex * ey)],
        [m(ex * ey, -ex * ey), m(ey * ey, ex * ex)],
    ])
}

/// Gaussian draw around `p_cpa` with covariance `sigma`.
pub fn sample_cpa<R: Rng + ?Sized>(p_cpa: Point, sigma: [[f64; 2]; 2], rng: &mut R) -> Result<Point> {
    let s = covariance_sqrt(sigma)?;
    let z1: f64 = rng.sample(StandardNormal);
    let z2: f64 = rng.sample(StandardNormal);
    Ok(p_cpa + Point::new(s[0][0] * z1 + s[0][1] * z2, s[1][0] * z1 + s[1][1] * z2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Behavior {
    pub query: Point,
    pub node: NodeId,
    /// Node positions from the root to `node`.
    pub waypoints: Vec<Point>,
    /// Full node states at the waypoints.
    pub states: Vec<VesselState>,
    /// Steering command of each edge on the path; `commands[i]` leads from
    /// `states[i]` to `waypoints[i + 1]`.
    pub commands: Vec<SteerCommand>,
    pub trajectory: TrajectorySegment,
    pub length: f64,
}

/// Root path to the node nearest `query`.
pub fn extract_behavior(tree: &Tree, query: Point) -> Behavior {
    let node = tree.nearest(query);
    let trajectory = tree.trajectory_to(node);
    let path = tree.path_to(node);
    let commands = path[1..]
        .iter()
        .map(|&id| *tree.node(id).edge.command().expect("tree edges come from steering"))
        .collect();
    Behavior {
        query,
        node,
        waypoints: path.iter().map(|&id| tree.position(id)).collect(),
        states: path.iter().map(|&id| tree.node(id).state).collect(),
        commands,
        length: trajectory.length(),
        trajectory,
    }
}

/// Seconds spent building the tree and answering each query.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScenarioTiming {
    pub build: f64,
    pub queries: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BehaviorBatch {
    pub planner: PlannerKind,
    pub seed: u64,
    pub mode: AnchorMode,
    pub spawn: VesselState,
    /// Point the tree was grown towards.
    pub anchor: Point,
    pub node_count: usize,
    pub behaviors: Vec<Behavior>,
    /// Why the batch is empty when the tree could not be built.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    #[serde(skip)]
    pub timing: ScenarioTiming,
}

/// A batch together with the tree it was drawn from.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub batch: BehaviorBatch,
    pub tree: Option<Tree>,
}

/// Grows a goal-free tree from `spawn` towards the corridor centre or the CPA
/// and draws `spec.behavior_count` behaviors from it. The tree uses
/// `cfg.seed`; query positions come from `rng`.
pub fn generate_behaviors<R: Rng + ?Sized>(
    env: &Environment,
    spawn: &VesselState,
    spec: &EncounterSpec,
    planner: PlannerKind,
    cfg: &PlannerConfig,
    rng: &mut R,
) -> Result<Scenario> {
    spec.validate()?;
    let cpa_point = cpa(&spec.ownship(), spawn).p_cpa;
    let anchor = match spec.mode {
        AnchorMode::Corridor => spec.corridor_center()?,
        AnchorMode::Cpa => cpa_point,
    };
    let mut batch = BehaviorBatch {
        planner,
        seed: cfg.seed,
        mode: spec.mode,
        spawn: *spawn,
        anchor,
        node_count: 0,
        behaviors: Vec::new(),
        diagnostic: None,
        timing: ScenarioTiming::default(),
    };
    let cfg = PlannerConfig {
        goal_free: true,
        ..cfg.clone()
    };
    let clock = Instant::now();
    let run = match plan_with_tree(planner, env, spawn, &VesselState::at(anchor, 0.0, 0.0), &cfg) {
        Ok(run) => run,
        Err(e) => {
            batch.diagnostic = Some(e.to_string());
            return Ok(Scenario { batch, tree: None });
        }
    };
    batch.timing.build = clock.elapsed().as_secs_f64();
    batch.node_count = run.tree.len();
    for _ in 0..spec.behavior_count {
        let query = match spec.mode {
            AnchorMode::Corridor => sample_corridor(spec, rng)?,
            AnchorMode::Cpa => sample_cpa(cpa_point, spec.sigma, rng)?,
        };
        let t = Instant::now();
        let behavior = extract_behavior(&run.tree, query);
        batch.timing.queries.push(t.elapsed().as_secs_f64());
        batch.behaviors.push(behavior);
    }
    Ok(Scenario {
        batch,
        tree: Some(run.tree),
    })
}

/// Reruns each of a behavior's steering commands from the node state its
/// edge starts at and returns the distance between each leg endpoint and its
/// waypoint.
///
/// Legs are not chained: a rewired edge only has to end within one step of
/// travel of the node it leads to, and chaining would carry that gap into
/// the next leg.
pub fn replay_behavior(steering: &Steering, behavior: &Behavior) -> Vec<f64> {
    behavior
        .commands
        .iter()
        .zip(behavior.states.iter().zip(&behavior.waypoints[1..]))
        .map(|(c, (from, &w))| match steering.replay(from, c) {
            Ok(t) => t.last().expect("nonempty").position().distance(w),
            Err(_) => f64::INFINITY,
        })
        .collect()
}

/// Replays bare waypoints from `start` with line-of-sight tracking along each
/// leg, from the previous waypoint (initially the start position) to the next,
/// switching when within `stop_radius` or past the waypoint. Returns the
/// distance between each leg endpoint and its waypoint. Unlike
/// [`replay_behavior`] this does not reproduce the tree's edges, and sharp
/// turns can leave the ship well off a waypoint.
pub fn replay_waypoints(steering: &Steering, start: &VesselState, waypoints: &[Point], stop_radius: f64) -> Vec<f64> {
    let reach = steering.u_d.max(1e-6) * steering.t_max;
    let mut state = *start;
    let mut prev = start.position();
    let mut misses = Vec::with_capacity(waypoints.len());
    for &w in waypoints {
        if prev != w {
            let horizon = ((state.position().distance(w) / reach).ceil() + 1.0) * steering.t_max;
            match steering.follow_segment(&state, prev, w, horizon, stop_radius) {
                Ok(t) => state = *t.last().expect("nonempty"),
                Err(_) => {
                    misses.push(f64::INFINITY);
                    prev = w;
                    continue;
                }
            }
        }
        misses.push(state.position().distance(w));
        prev = w;
    }
    misses
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corridor_rotation() {
        let spec = EncounterSpec {
            ownship_start: VesselState::new(0.0, 0.0, 0.0, 5.0),
            ownship_end: Point::new(0.0, 100.0),
            ..EncounterSpec::default()
        };
        let p = spec.corridor_point(10.0, 5.0).unwrap();
        assert!((p.x + 5.0).abs() < 1e-12 && (p.y - 10.0).abs() < 1e-12);
        assert_eq!(spec.corridor_point(0.0, 0.0).unwrap(), Point::new(0.0, 0.0));
    }

    #[test]
    fn cpa_examples() {
        let own = VesselState::new(0.0, 0.0, 0.0, 1.0);
        let target = VesselState::new(10.0, -10.0, std::f64::consts::FRAC_PI_2, 1.0);
        let c = cpa(&own, &target);
        assert!((c.t_cpa - 10.0).abs() < 1e-9);
        assert!(c.d_cpa < 1e-9);
        assert!(c.p_cpa.distance(Point::new(10.0, 0.0)) < 1e-9);
        let same = cpa(&own, &VesselState::new(3.0, 4.0, 0.0, 1.0));
        assert_eq!(same.t_cpa, 0.0);
        assert!((same.d_cpa - 5.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        for sigma in [[[100.0, 0.0], [0.0, 25.0]], [[4.0, 1.5], [1.5, 2.0]], [[1.0, 1.0], [1.0, 1.0]]] {
            let s = covariance_sqrt(sigma).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let v = s[i][0] * s[0][j] + s[i][1] * s[1][j];
                    assert!((v - sigma[i][j]).abs() < 1e-9, "{sigma:?}");
                }
            }
            assert!((s[0][1] - s[1][0]).abs() < 1e-12);
        }
        assert!(covariance_sqrt([[1.0, 2.0], [2.0, 1.0]]).is_err());
        assert!(covariance_sqrt([[1.0, 0.5], [0.0, 1.0]]).is_err());
    }

    #[test]
    fn zero_covariance_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = Point::new(7.0, -2.0);
        assert_eq!(sample_cpa(p, [[0.0, 0.0], [0.0, 0.0]], &mut rng).unwrap(), p);
    }
}
