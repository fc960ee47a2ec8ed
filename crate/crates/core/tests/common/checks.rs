//! Checks shared by the test suites and the acceptance run. Each panics on
//! failure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiprrt::env::{angle_diff, build_safe_sea_cdt, point_segment_distance, preprocess_hazards, HazardMap, Point, Polygon, Rect};
use shiprrt::planners::{in_informed_ellipse, informed_sample, trajectory_is_feasible, BallShape, Environment, PlannerConfig};
use shiprrt::stats::welch_one_sided;
use shiprrt::tree::{find_parent, pq_rewire, rewire, CostMetric, NodeId, Tree, WireContext};
use shiprrt::vessel::{TrajectorySegment, VesselState};
use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub struct WelchRow {
    pub b: (f64, f64),
    pub t_s: f64,
    pub s_i: f64,
    pub dof: u64,
    pub p: f64,
    /// Printed threshold, when it agrees with the t quantile for `dof`.
    pub threshold: Option<f64>,
}

/// Published comparisons of PQ-RRT* (first) against IRRT*, RRT* and RRT.
pub fn welch_tables() -> [((f64, f64), [WelchRow; 3]); 2] {
    let row = |b, t_s, s_i, dof, p, threshold| WelchRow { b, t_s, s_i, dof, p, threshold };
    [
        (
            (963.1, 32.0),
            [
                row((965.9, 31.0), -0.6285, 4.4553, 197, 0.7348, Some(1.6526)),
                row((968.3, 33.3), -1.1260, 4.6183, 197, 0.8692, Some(1.6526)),
                // Printed as 1.6526 too, which is the quantile for 197 degrees
                // of freedom, not 106.
                row((1472.7, 163.7), -30.5519, 16.6798, 106, 1.0, None),
            ],
        ),
        (
            (6567.3, 407.7),
            [
                row((6836.6, 476.6), -4.2938, 62.7190, 193, 0.9999, Some(1.6528)),
                row((6744.6, 487.4), -2.7902, 63.5435, 192, 0.9971, Some(1.6528)),
                row((8805.3, 620.8), -30.1331, 74.2706, 171, 1.0, Some(1.6538)),
            ],
        ),
    ]
}

pub fn check_welch_tables() {
    for (pq, rows) in welch_tables() {
        for r in rows {
            let w = welch_one_sided(pq.0, pq.1, r.b.0, r.b.1, 100, 0.05).unwrap();
            assert!(rel(w.t_s, r.t_s) < 1e-3, "t_s {} vs {}", w.t_s, r.t_s);
            assert!(rel(w.s_i, r.s_i) < 1e-3, "s_i {} vs {}", w.s_i, r.s_i);
            assert_eq!(w.dof, r.dof);
            assert!(rel(w.p_value, r.p) < 1e-3, "p {} vs {}", w.p_value, r.p);
            let oracle = StudentsT::new(0.0, 1.0, w.dof as f64).unwrap().inverse_cdf(0.95);
            assert!((w.t_threshold - oracle).abs() < 1e-6, "threshold {} vs {oracle}", w.t_threshold);
            if let Some(t) = r.threshold {
                assert!(rel(w.t_threshold, t) < 1e-3, "threshold {} vs {t}", w.t_threshold);
            }
        }
    }
}

pub const BOUNDS: Rect = Rect {
    min: Point::new(0.0, 0.0),
    max: Point::new(1000.0, 1000.0),
};

/// Random star-shaped polygon: 4–7 vertices around a centre with every
/// angular gap below π, so the ring is simple.
pub fn random_polygon(rng: &mut ChaCha8Rng) -> Polygon {
    let c = Point::new(rng.random_range(50.0..950.0), rng.random_range(50.0..950.0));
    let n = rng.random_range(4..=7);
    let sector = std::f64::consts::TAU / n as f64;
    let ring = (0..n)
        .map(|k| {
            let a = sector * (k as f64 + rng.random_range(0.0..0.5));
            let r = rng.random_range(10.0..45.0);
            c + Point::new(r * a.cos(), r * a.sin())
        })
        .collect();
    Polygon::new(ring)
}

pub fn random_map(seed: u64, n: usize) -> HazardMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys = (0..n).map(|_| random_polygon(&mut rng)).collect();
    HazardMap::new(BOUNDS, polys, 0.0)
}

/// Draws `n` triangulation samples on a buffered random map, checks each is
/// free and returns the chi-square p-value of the per-triangle counts against
/// area weights.
pub fn cdt_sample_fit(n: usize) -> f64 {
    let raw: Vec<Polygon> = {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        (0..12).map(|_| random_polygon(&mut rng)).collect()
    };
    let map = preprocess_hazards(&raw, 5.0, BOUNDS).unwrap();
    let tri = build_safe_sea_cdt(&map).unwrap();
    let free_area = BOUNDS.area() - map.hazard_area();
    assert!((tri.total_area() - free_area).abs() / free_area < 1e-6);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut counts = vec![0usize; tri.len()];
    for _ in 0..n {
        let u: f64 = rng.random();
        let (r1, r2): (f64, f64) = (rng.random(), rng.random());
        let j = tri.pick(u);
        let p = tri.triangles[j].point_at(r1, r2);
        assert!(map.is_free(p), "sample {p:?} is not free");
        counts[j] += 1;
    }
    // Pool small triangles so that every expected count is at least 5.
    let total = tri.total_area();
    let (mut chi2, mut bins, mut acc_o, mut acc_e) = (0.0, 0usize, 0.0, 0.0);
    for (j, &c) in counts.iter().enumerate() {
        acc_o += c as f64;
        acc_e += n as f64 * tri.areas[j] / total;
        if acc_e >= 5.0 {
            chi2 += (acc_o - acc_e).powi(2) / acc_e;
            bins += 1;
            acc_o = 0.0;
            acc_e = 0.0;
        }
    }
    1.0 - ChiSquared::new((bins - 1) as f64).unwrap().cdf(chi2)
}

pub fn chi_square_uniform_p(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    let e = n as f64 / counts.len() as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    1.0 - ChiSquared::new((counts.len() - 1) as f64).unwrap().cdf(stat)
}

/// Draws `n` informed samples, checks the focal-sum bound and membership,
/// and returns chi-square p-values for the normalized squared radius and the
/// polar angle, both uniform when the samples are uniform in the ellipse.
pub fn informed_sample_fit(n: usize) -> (f64, f64) {
    let env = Environment::new(HazardMap::open(Rect::new(-500.0, -500.0, 500.0, 500.0))).unwrap();
    let (s, g) = (Point::new(-120.0, 40.0), Point::new(200.0, -90.0));
    let c_min = s.distance(g);
    let c_best = 1.3 * c_min;
    let (a, b) = (c_best / 2.0, (c_best * c_best - c_min * c_min).sqrt() / 2.0);
    let theta = (g.y - s.y).atan2(g.x - s.x);
    let mid = (s + g) * 0.5;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut radial, mut angular) = (vec![0usize; 20], vec![0usize; 20]);
    for _ in 0..n {
        let p = informed_sample(s, g, c_best, &env.tri, BallShape::Disk, &mut rng).unwrap();
        assert!(p.distance(s) + p.distance(g) <= c_best * (1.0 + 1e-12));
        assert!(in_informed_ellipse(s, g, c_best, p));
        let d = p - mid;
        let (u, v) = (theta.cos() * d.x + theta.sin() * d.y, -theta.sin() * d.x + theta.cos() * d.y);
        let r2 = (u / a).powi(2) + (v / b).powi(2);
        radial[((r2 * 20.0) as usize).min(19)] += 1;
        let phi = (v / b).atan2(u / a).rem_euclid(std::f64::consts::TAU);
        angular[((phi / std::f64::consts::TAU * 20.0) as usize).min(19)] += 1;
    }
    (chi_square_uniform_p(&radial), chi_square_uniform_p(&angular))
}

/// Largest distance from the start–goal segment over `n` informed samples
/// drawn with `c_best = c_min`.
pub fn collapse_deviation(n: usize) -> f64 {
    let env = Environment::new(HazardMap::open(Rect::new(-500.0, -500.0, 500.0, 500.0))).unwrap();
    let (s, g) = (Point::new(-300.0, 120.0), Point::new(250.0, -40.0));
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    (0..n)
        .map(|_| {
            let p = informed_sample(s, g, s.distance(g), &env.tri, BallShape::Disk, &mut rng).unwrap();
            point_segment_distance(p, s, g)
        })
        .fold(0.0, f64::max)
}

/// `n` steer calls from random states to random targets under both presets.
pub fn steer_fuzz(n: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n {
        let cfg = if i % 2 == 0 { PlannerConfig::small_case() } else { PlannerConfig::large_case() };
        let ship = cfg.ship;
        let from = VesselState::new(
            rng.random_range(-500.0..500.0),
            rng.random_range(-500.0..500.0),
            rng.random_range(-3.2..3.2),
            rng.random_range(0.0..ship.u_max),
        );
        let target = Point::new(rng.random_range(-500.0..500.0), rng.random_range(-500.0..500.0));
        let traj = cfg.steering().steer(&from, target).unwrap();
        assert!(traj.duration() >= cfg.t_min - 1e-9 && traj.duration() <= cfg.t_max + 1e-9);
        for w in traj.states().windows(2) {
            assert!(w[1].u >= ship.u_min && w[1].u <= ship.u_max, "speed {}", w[1].u);
            assert!(angle_diff(w[1].chi, w[0].chi).abs() / traj.dt() <= ship.r_max + 1e-9);
        }
    }
}

/// Every edge of a planner tree re-verifies: feasible for the ship, starts at
/// its parent's state, ends near its node and is reproduced by its command.
pub fn check_tree_edges(tree: &Tree, env: &Environment, cfg: &PlannerConfig) {
    let steering = cfg.steering();
    let pos_tol = cfg.connect_radius.min(cfg.ship.u_max * cfg.delta_sim);
    for node in tree.nodes().iter().skip(1) {
        let parent = tree.node(node.parent.unwrap());
        assert!(trajectory_is_feasible(&node.edge, &env.map, &cfg.ship));
        assert!(shiprrt::env::is_collision_free(&node.edge, &env.map));
        assert_eq!(node.edge.first(), Some(&parent.state));
        let end = node.edge.last().unwrap().position();
        assert!(end.distance(node.state.position()) <= pos_tol + 1e-9);
        let again = steering.replay(&parent.state, node.edge.command().unwrap()).unwrap();
        assert_eq!(&again, &node.edge);
    }
}

fn oracle_nearest(tree: &Tree, p: Point) -> NodeId {
    (0..tree.len())
        .min_by(|&a, &b| {
            p.distance_2(tree.position(a))
                .total_cmp(&p.distance_2(tree.position(b)))
                .then(a.cmp(&b))
        })
        .unwrap()
}

fn oracle_within(tree: &Tree, p: Point, r: f64) -> Vec<NodeId> {
    let mut v: Vec<(f64, NodeId)> = (0..tree.len())
        .map(|i| (p.distance_2(tree.position(i)), i))
        .filter(|&(d2, _)| d2 <= r * r)
        .collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    v.into_iter().map(|(_, i)| i).collect()
}

pub fn check_queries(tree: &Tree, rng: &mut ChaCha8Rng, gamma: f64, l_max: f64) {
    for _ in 0..5 {
        let p = Point::new(rng.random_range(-20.0..420.0), rng.random_range(-20.0..420.0));
        assert_eq!(tree.nearest(p), oracle_nearest(tree, p));
        let r = tree.near_radius(gamma, l_max);
        let mut want = oracle_within(tree, p, r);
        want.truncate(10);
        assert_eq!(tree.nearest_neighbors(p, gamma, l_max, 10), want);
        let k = rng.random_range(1..8);
        let mut all = oracle_within(tree, p, f64::INFINITY);
        all.truncate(k);
        assert_eq!(tree.k_nearest(p, k), all);
    }
    // Exact node positions must return the node itself (or an earlier twin).
    let id = rng.random_range(0..tree.len());
    assert_eq!(tree.nearest(tree.position(id)), oracle_nearest(tree, tree.position(id)));
}

/// One episode of random insertion, rewiring and reparenting on a 400 m map
/// with one wall, checking costs, edges and queries throughout.
pub fn tree_fuzz_episode(episode: u64) {
    let map = HazardMap::new(
        Rect::new(0.0, 0.0, 400.0, 400.0),
        vec![Polygon::rect(Rect::new(180.0, 100.0, 220.0, 300.0))],
        0.0,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(episode);
    let cfg = PlannerConfig::small_case();
    let ctx = WireContext {
        steering: cfg.steering(),
        map: &map,
        connect_radius: cfg.connect_radius,
        d_node_min: cfg.d_node_min,
        goal_region: None,
    };
    let metric = if episode.is_multiple_of(2) { CostMetric::Polyline } else { CostMetric::Endpoint };
    let root = VesselState::new(50.0, 50.0, rng.random_range(-3.0..3.0), 4.0);
    let mut tree = Tree::new(root, 200, metric, cfg.delta_sim);
    let (gamma, l_max) = (cfg.gamma, 400.0 * 2f64.sqrt());
    let mut guard = 0;
    while tree.len() < 200 && guard < 5000 {
        guard += 1;
        let z = Point::new(rng.random_range(0.0..400.0), rng.random_range(0.0..400.0));
        let near_id = tree.nearest(z);
        let Ok(sigma) = ctx.steering.steer(&tree.node(near_id).state, z) else {
            continue;
        };
        if !ctx.is_valid_edge(&sigma) {
            continue;
        }
        let p_new = sigma.last().unwrap().position();
        let near = tree.nearest_neighbors(p_new, gamma, l_max, 10);
        let pq = rng.random_bool(0.5);
        let mut cand = near.clone();
        if pq {
            cand.extend(tree.ancestry(&near, 1));
            cand.sort_unstable();
            cand.dedup();
        }
        let Some(choice) = find_parent(&tree, &cand, near_id, &sigma, &ctx) else {
            continue;
        };
        // The chosen parent is no worse than the nearest node.
        let via_nearest = tree.cost(near_id) + tree.edge_cost(&sigma);
        if ctx.spacing_ok(&tree, p_new) {
            assert!(choice.cost <= via_nearest + 1e-9);
        }
        let z_new = tree.insert(choice.parent, choice.state, choice.edge).unwrap();
        if pq {
            pq_rewire(&mut tree, &near, z_new, 1, &ctx);
        } else {
            rewire(&mut tree, &near, z_new, &ctx);
        }
        tree.check_invariants(1e-9).unwrap();
        for n in tree.nodes().iter().skip(1) {
            assert!(ctx.is_valid_edge(&n.edge), "edge into node {} is not free", n.id);
        }
        if tree.len().is_multiple_of(25) {
            check_queries(&tree, &mut rng, gamma, l_max);
        }
    }
    assert!(tree.len() > 100, "episode {episode} grew only {} nodes", tree.len());

    // Random reparenting with synthetic edges exercises cost propagation.
    for _ in 0..200 {
        let q = rng.random_range(1..tree.len());
        let p = rng.random_range(0..tree.len());
        if tree.is_ancestor_or_self(q, p) {
            continue;
        }
        let edge = TrajectorySegment::new(vec![tree.node(p).state, tree.node(q).state], cfg.delta_sim);
        tree.reparent(q, p, edge);
    }
    tree.check_invariants(1e-9).unwrap();
    check_queries(&tree, &mut rng, gamma, l_max);
}
