//! RRT, RRT*, Informed RRT* and PQ-RRT*.
//!
//! All four share one loop. Every `delta_goal` iterations the tree tries to
//! grow straight to the goal; otherwise a sample is drawn, the nearest node is
//! steered towards it and the resulting segment is inserted if it is
//! collision-free. The optimal variants choose the cheapest parent among the
//! neighbors of the new node and rewire the neighbors through it afterwards.
//!
//! Randomness comes from one [`ChaCha8Rng`] stream per run seeded with
//! `PlannerConfig::seed`, drawn in a fixed order, so a run is reproducible.

mod sampling;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use sampling::{adjust_sample, ellipse_point, in_informed_ellipse, informed_sample, BallShape};

use crate::env::{build_safe_sea_cdt, HazardMap, Point, SafeSeaTriangulation};
use crate::error::{Error, Result};
use crate::tree::{find_parent, pq_rewire, rewire, CostMetric, NodeId, Tree, WireContext};
use crate::vessel::{GuidanceParams, ShipParams, Steering, TrajectorySegment, VesselState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlannerKind {
    Rrt,
    RrtStar,
    IrrtStar,
    PqRrtStar,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 4] = [
        PlannerKind::PqRrtStar,
        PlannerKind::IrrtStar,
        PlannerKind::RrtStar,
        PlannerKind::Rrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::Rrt => "rrt",
            PlannerKind::RrtStar => "rrt_star",
            PlannerKind::IrrtStar => "irrt_star",
            PlannerKind::PqRrtStar => "pq_rrt_star",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PlannerKind::Rrt => "RRT",
            PlannerKind::RrtStar => "RRT*",
            PlannerKind::IrrtStar => "IRRT*",
            PlannerKind::PqRrtStar => "PQ-RRT*",
        }
    }

    pub fn is_optimal(self) -> bool {
        self != PlannerKind::Rrt
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlannerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "rrt" => Ok(PlannerKind::Rrt),
            "rrt_star" | "rrt*" => Ok(PlannerKind::RrtStar),
            "irrt_star" | "irrt*" | "informed_rrt_star" => Ok(PlannerKind::IrrtStar),
            "pq_rrt_star" | "pq_rrt*" => Ok(PlannerKind::PqRrtStar),
            _ => Err(Error::invalid(format!(
                "unknown planner '{s}' (expected rrt, rrt_star, irrt_star or pq_rrt_star)"
            ))),
        }
    }
}

/// Planner tunables. Defaults are the small-case parameters with the ship and
/// guidance settings used throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlannerConfig {
    pub n_node_max: usize,
    pub n_iter_max: usize,
    /// Iterations between direct goal growth attempts.
    pub delta_goal: usize,
    pub d_node_min: f64,
    pub gamma: f64,
    pub t_min: f64,
    pub t_max: f64,
    /// Acceptance radius around the goal.
    pub r_a: f64,
    pub delta_sim: f64,
    pub u_d: f64,
    pub d_margin: f64,
    pub n_ancestry: usize,
    pub n_sa_max: usize,
    pub lambda_sample: f64,
    /// Wall-clock budget in seconds, checked once per iteration.
    pub max_wall_time: f64,
    pub seed: u64,
    /// Maximum number of neighbors considered for wiring.
    pub n_nn_max: usize,
    /// Upper bound on the neighbor radius; the map diagonal when absent.
    pub l_max: Option<f64>,
    /// A connecting steer must end this close to its target.
    pub connect_radius: f64,
    pub cost_metric: CostMetric,
    /// Draw informed samples from `[0, 1]²` instead of the unit disk.
    pub unit_square_ball: bool,
    /// Redraws of a hazard-rejected informed sample before the iteration is
    /// given up.
    pub max_redraws: usize,
    /// Grow the tree without accepting solutions.
    pub goal_free: bool,
    pub ship: ShipParams,
    pub guidance: GuidanceParams,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig::small_case()
    }
}

impl PlannerConfig {
    /// Parameters of the smaller planning cases.
    pub fn small_case() -> Self {
        PlannerConfig {
            n_node_max: 10_000,
            n_iter_max: 25_000,
            delta_goal: 500,
            d_node_min: 5.0,
            gamma: 2000.0,
            t_min: 1.0,
            t_max: 30.0,
            r_a: 10.0,
            delta_sim: 0.5,
            u_d: 4.0,
            d_margin: 0.1,
            n_ancestry: 1,
            n_sa_max: 0,
            lambda_sample: 1.0,
            max_wall_time: 50.0,
            seed: 0,
            n_nn_max: 10,
            l_max: None,
            connect_radius: 5.0,
            cost_metric: CostMetric::Polyline,
            unit_square_ball: false,
            max_redraws: 100,
            goal_free: false,
            ship: ShipParams::default(),
            guidance: GuidanceParams::default(),
        }
    }

    /// Parameters of the larger planning case.
    pub fn large_case() -> Self {
        PlannerConfig {
            d_node_min: 15.0,
            gamma: 3500.0,
            delta_sim: 1.0,
            u_d: 5.0,
            d_margin: 0.5,
            n_sa_max: 50,
            lambda_sample: 8.0,
            max_wall_time: 300.0,
            ..PlannerConfig::small_case()
        }
    }

    pub fn steering(&self) -> Steering {
        Steering {
            ship: self.ship,
            guidance: self.guidance,
            u_d: self.u_d,
            t_min: self.t_min,
            t_max: self.t_max,
            dt: self.delta_sim,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.steering().validate()?;
        let positive = [
            ("r_a", self.r_a),
            ("delta_sim", self.delta_sim),
            ("connect_radius", self.connect_radius),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be positive")));
            }
        }
        let non_negative = [
            ("d_node_min", self.d_node_min),
            ("gamma", self.gamma),
            ("d_margin", self.d_margin),
            ("lambda_sample", self.lambda_sample),
            ("max_wall_time", self.max_wall_time),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0) || v.is_nan() {
                return Err(Error::invalid(format!("{name} must be non-negative")));
            }
        }
        if self.n_sa_max > 0 && !(self.lambda_sample > 0.0) {
            return Err(Error::invalid("lambda_sample must be positive when n_sa_max > 0"));
        }
        if self.delta_goal == 0 {
            return Err(Error::invalid("delta_goal must be at least 1"));
        }
        if self.n_node_max == 0 {
            return Err(Error::invalid("n_node_max must be at least 1"));
        }
        if let Some(l) = self.l_max {
            if !(l > 0.0) {
                return Err(Error::invalid("l_max must be positive"));
            }
        }
        Ok(())
    }
}

/// A hazard map together with its free-space triangulation.
#[derive(Debug, Clone)]
pub struct Environment {
    pub map: HazardMap,
    pub tri: SafeSeaTriangulation,
}

impl Environment {
    pub fn new(map: HazardMap) -> Result<Self> {
        let tri = build_safe_sea_cdt(&map)?;
        Ok(Environment { map, tri })
    }
}

/// Sampling and growth counters of one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Positions drawn from a sampler, including redraws.
    pub samples_drawn: usize,
    /// Informed samples rejected for lying in a hazard or outside the map.
    pub samples_rejected: usize,
    /// Iterations given up because every informed redraw was rejected.
    pub iterations_forfeited: usize,
    pub samples_drawn_after_solution: usize,
    pub samples_rejected_after_solution: usize,
    /// Steered segments that hit a hazard or left the map.
    pub collisions: usize,
    /// New nodes refused by the spacing rule or without a valid parent.
    pub no_parent: usize,
    pub goal_growth_attempts: usize,
    pub goal_growth_inserted: usize,
    pub rewires: usize,
}

/// Wall-clock timings; kept apart from the result so that result files are
/// reproducible.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    /// Seconds until the first solution was found.
    pub t_first_solution: Option<f64>,
    /// Total planning time in seconds.
    pub t_total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannerResult {
    pub planner: PlannerKind,
    pub seed: u64,
    pub success: bool,
    /// Polyline length of the solution trajectory.
    pub length: Option<f64>,
    /// Tree cost of the solution node.
    pub cost: Option<f64>,
    pub waypoints: Vec<Point>,
    pub trajectory: Option<TrajectorySegment>,
    pub iterations: usize,
    pub node_count: usize,
    pub first_solution_iteration: Option<usize>,
    /// Best solution cost after each iteration.
    pub best_cost_series: Vec<Option<f64>>,
    pub diagnostics: Diagnostics,
    #[serde(skip)]
    pub timing: Timing,
}

/// A finished run together with its tree.
#[derive(Debug, Clone)]
pub struct PlannerRun {
    pub result: PlannerResult,
    pub tree: Tree,
}

struct Run<'a> {
    kind: PlannerKind,
    cfg: &'a PlannerConfig,
    env: &'a Environment,
    goal: Point,
    start: Point,
    ctx: WireContext<'a>,
    l_max: f64,
    shape: BallShape,
    diag: Diagnostics,
}

impl Run<'_> {
    fn best(&self, tree: &Tree) -> Option<NodeId> {
        if self.cfg.goal_free {
            None
        } else {
            tree.best_goal_node(self.goal, self.cfg.r_a)
        }
    }

    /// Informed sampling bound: best cost plus the remaining distance to the
    /// goal, which never falls below the start–goal distance.
    fn c_best(&self, tree: &Tree) -> f64 {
        match self.best(tree) {
            Some(n) => {
                let c_min = self.start.distance(self.goal);
                (tree.cost(n) + tree.position(n).distance(self.goal)).max(c_min)
            }
            None => f64::INFINITY,
        }
    }

    /// Draws `z_rand`; `None` forfeits the iteration.
    fn sample(&mut self, tree: &Tree, rng: &mut ChaCha8Rng) -> Option<Point> {
        let env = self.env;
        match self.kind {
            PlannerKind::Rrt | PlannerKind::RrtStar => {
                self.diag.samples_drawn += 1;
                Some(env.tri.sample(rng))
            }
            PlannerKind::PqRrtStar => {
                self.diag.samples_drawn += 1;
                let z = env.tri.sample(rng);
                let c = self.cfg;
                Some(adjust_sample(z, self.goal, &env.map, c.n_sa_max, c.lambda_sample, c.d_margin))
            }
            PlannerKind::IrrtStar => {
                let c_best = self.c_best(tree);
                let informed = c_best.is_finite();
                for _ in 0..=self.cfg.max_redraws {
                    self.diag.samples_drawn += 1;
                    if informed {
                        self.diag.samples_drawn_after_solution += 1;
                    }
                    let p = informed_sample(self.start, self.goal, c_best, &env.tri, self.shape, rng)
                        .expect("c_best is at least c_min");
                    if env.map.is_free(p) {
                        return Some(p);
                    }
                    self.diag.samples_rejected += 1;
                    if informed {
                        self.diag.samples_rejected_after_solution += 1;
                    }
                }
                self.diag.iterations_forfeited += 1;
                None
            }
        }
    }

    fn grow_to_goal(&mut self, tree: &mut Tree) -> Option<NodeId> {
        self.diag.goal_growth_attempts += 1;
        let inserted = direct_goal_growth(tree, self.goal, &self.ctx, self.cfg);
        if inserted.is_some() {
            self.diag.goal_growth_inserted += 1;
        }
        inserted
    }

    fn extend(&mut self, tree: &mut Tree, z_rand: Point) {
        let z_nearest = tree.nearest(z_rand);
        let Ok(sigma) = self.ctx.steering.steer(&tree.node(z_nearest).state, z_rand) else {
            return;
        };
        if !self.ctx.is_valid_edge(&sigma) {
            self.diag.collisions += 1;
            return;
        }
        if self.kind == PlannerKind::Rrt {
            let state = *sigma.last().expect("nonempty");
            let _ = tree.insert(z_nearest, state, sigma);
            return;
        }
        let p_new = sigma.last().expect("nonempty").position();
        let near = tree.nearest_neighbors(p_new, self.cfg.gamma, self.l_max, self.cfg.n_nn_max);
        let candidates = if self.kind == PlannerKind::PqRrtStar {
            let mut union = near.clone();
            union.extend(tree.ancestry(&near, self.cfg.n_ancestry));
            union.sort_unstable();
            union.dedup();
            union
        } else {
            near.clone()
        };
        let Some(choice) = find_parent(tree, &candidates, z_nearest, &sigma, &self.ctx) else {
            self.diag.no_parent += 1;
            return;
        };
        let Ok(z_new) = tree.insert(choice.parent, choice.state, choice.edge) else {
            return;
        };
        self.diag.rewires += if self.kind == PlannerKind::PqRrtStar {
            pq_rewire(tree, &near, z_new, self.cfg.n_ancestry, &self.ctx)
        } else {
            rewire(tree, &near, z_new, &self.ctx)
        };
    }
}

/// Steers from the node nearest the goal straight towards it, with a horizon
/// of `ceil(dist / (U_d·T_max))` times `T_max`, and inserts the endpoint when
/// the segment is collision-free and ends within the acceptance radius. When
/// it does not, the next nearest nodes are tried, up to `n_nn_max` in all.
/// Skipped when a node already lies within the acceptance radius.
pub fn direct_goal_growth(
    tree: &mut Tree,
    goal: Point,
    ctx: &WireContext,
    cfg: &PlannerConfig,
) -> Option<NodeId> {
    for z in tree.k_nearest(goal, cfg.n_nn_max.max(1)) {
        let from = tree.node(z).state;
        let dist = from.position().distance(goal);
        if dist <= cfg.r_a {
            return None;
        }
        let k_goal = (dist / (cfg.u_d * cfg.t_max)).ceil().max(1.0);
        let Ok(traj) = ctx.steering.steer_for(&from, goal, k_goal * cfg.t_max) else {
            continue;
        };
        let Some(&state) = traj.last() else {
            continue;
        };
        if state.position().distance(goal) <= cfg.r_a && ctx.is_valid_edge(&traj) {
            return tree.insert(z, state, traj).ok();
        }
    }
    None
}

fn check_endpoint(env: &Environment, p: Point, what: &str) -> Result<()> {
    if !p.is_finite() {
        return Err(Error::invalid(format!("{what} is not finite")));
    }
    if !env.map.bounds().contains(p) {
        return Err(Error::InfeasibleInput(format!("{what} ({}, {}) is outside the map", p.x, p.y)));
    }
    if env.map.in_hazard(p) {
        return Err(Error::InfeasibleInput(format!("{what} ({}, {}) is inside a hazard", p.x, p.y)));
    }
    Ok(())
}

/// Runs one planner and returns the result together with the final tree.
pub fn plan_with_tree(
    kind: PlannerKind,
    env: &Environment,
    start: &VesselState,
    goal: &VesselState,
    cfg: &PlannerConfig,
) -> Result<PlannerRun> {
    cfg.validate()?;
    if !start.is_finite() || !goal.is_finite() {
        return Err(Error::invalid("start and goal states must be finite"));
    }
    check_endpoint(env, start.position(), "start")?;
    if !cfg.goal_free {
        check_endpoint(env, goal.position(), "goal")?;
    }
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut tree = Tree::new(*start, cfg.n_node_max, cfg.cost_metric, cfg.delta_sim);
    let goal_p = goal.position();
    let mut run = Run {
        kind,
        cfg,
        env,
        goal: goal_p,
        start: start.position(),
        ctx: WireContext {
            steering: cfg.steering(),
            map: &env.map,
            connect_radius: cfg.connect_radius,
            d_node_min: if kind.is_optimal() { cfg.d_node_min } else { 0.0 },
            goal_region: (!cfg.goal_free).then_some((goal_p, cfg.r_a)),
        },
        l_max: cfg.l_max.unwrap_or_else(|| env.map.bounds().diagonal()),
        shape: if cfg.unit_square_ball {
            BallShape::UnitSquare
        } else {
            BallShape::Disk
        },
        diag: Diagnostics::default(),
    };

    let mut series = Vec::with_capacity(cfg.n_iter_max);
    let mut first_iter = None;
    let mut t_first = None;
    let mut iterations = 0;
    for i in 1..=cfg.n_iter_max {
        if clock.elapsed().as_secs_f64() > cfg.max_wall_time || tree.is_full() {
            break;
        }
        iterations = i;
        if i % cfg.delta_goal == 0 {
            run.grow_to_goal(&mut tree);
        }
        if let Some(z_rand) = run.sample(&tree, &mut rng) {
            run.extend(&mut tree, z_rand);
        }
        let best = run.best(&tree).map(|n| tree.cost(n));
        if best.is_some() && first_iter.is_none() {
            first_iter = Some(i);
            t_first = Some(clock.elapsed().as_secs_f64());
        }
        series.push(best);
    }

    let solution = run.best(&tree).and_then(|_| tree.extract_best_solution(goal_p, cfg.r_a));
    let t_total = clock.elapsed().as_secs_f64();
    let result = PlannerResult {
        planner: kind,
        seed: cfg.seed,
        success: solution.is_some(),
        length: solution.as_ref().map(|s| s.length),
        cost: solution.as_ref().map(|s| s.cost),
        waypoints: solution.as_ref().map(|s| s.waypoints.clone()).unwrap_or_default(),
        trajectory: solution.map(|s| s.trajectory),
        iterations,
        node_count: tree.len(),
        first_solution_iteration: first_iter,
        best_cost_series: series,
        diagnostics: run.diag,
        timing: Timing {
            t_first_solution: t_first,
            t_total,
        },
    };
    Ok(PlannerRun { result, tree })
}

pub fn plan(
    kind: PlannerKind,
    env: &Environment,
    start: &VesselState,
    goal: &VesselState,
    cfg: &PlannerConfig,
) -> Result<PlannerResult> {
    plan_with_tree(kind, env, start, goal, cfg).map(|r| r.result)
}

pub fn plan_rrt(env: &Environment, start: &VesselState, goal: &VesselState, cfg: &PlannerConfig) -> Result<PlannerResult> {
    plan(PlannerKind::Rrt, env, start, goal, cfg)
}

pub fn plan_rrt_star(env: &Environment, start: &VesselState, goal: &VesselState, cfg: &PlannerConfig) -> Result<PlannerResult> {
    plan(PlannerKind::RrtStar, env, start, goal, cfg)
}

pub fn plan_informed_rrt_star(
    env: &Environment,
    start: &VesselState,
    goal: &VesselState,
    cfg: &PlannerConfig,
) -> Result<PlannerResult> {
    plan(PlannerKind::IrrtStar, env, start, goal, cfg)
}

pub fn plan_pq_rrt_star(env: &Environment, start: &VesselState, goal: &VesselState, cfg: &PlannerConfig) -> Result<PlannerResult> {
    plan(PlannerKind::PqRrtStar, env, start, goal, cfg)
}

/// Re-checks a trajectory against the map and the ship limits at every sample.
pub fn trajectory_is_feasible(traj: &TrajectorySegment, map: &HazardMap, ship: &ShipParams) -> bool {
    let pts = traj.positions();
    let dt = traj.dt();
    map.path_within_bounds(&pts)
        && map.path_is_free(&pts)
        && traj
            .states()
            .iter()
            .all(|s| s.u >= ship.u_min - 1e-12 && s.u <= ship.u_max + 1e-12)
        && traj.states().windows(2).all(|w| {
            crate::env::angle_diff(w[1].chi, w[0].chi).abs() / dt <= ship.r_max + 1e-9
                && w[0].position().distance(w[1].position()) <= ship.u_max * dt + 1e-9
        })
}
