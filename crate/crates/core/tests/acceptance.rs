//! End-to-end acceptance run: one line per criterion, nonzero exit on any
//! failure. Criteria 2 and 3 run full Monte Carlo benchmarks and take a few
//! minutes on one core.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use common::checks;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shiprrt::env::Point;
use shiprrt::planners::{plan_with_tree, PlannerConfig, PlannerKind};
use shiprrt::scenario::{generate_behaviors, replay_behavior, AnchorMode, EncounterSpec};
use shiprrt::stats::{anytime_violations, run_benchmark, welch_one_sided, Benchmark};
use shiprrt::vessel::VesselState;

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

struct Bench {
    bench: Benchmark,
    /// Straight-line start–goal distance.
    d: f64,
    secs: f64,
}

fn benchmark(map: &str, iters: usize) -> Bench {
    let t = Instant::now();
    let fx = common::load(map);
    let cfg = PlannerConfig {
        n_iter_max: iters,
        max_wall_time: f64::INFINITY,
        ..PlannerConfig::small_case()
    };
    let planners: Vec<_> = PlannerKind::ALL.iter().map(|&k| (k, cfg.clone())).collect();
    let bench = run_benchmark(&fx.env, &fx.start, &fx.goal, &planners, 20, 0, 0.05, jobs()).unwrap();
    Bench {
        bench,
        d: fx.start.position().distance(fx.goal.position()),
        secs: t.elapsed().as_secs_f64(),
    }
}

fn mean_length(b: &Benchmark, kind: PlannerKind) -> f64 {
    let s = b.report.planners.iter().find(|s| s.planner == kind).unwrap();
    s.d_sol.expect("at least one solution").mean
}

fn welch_tables() -> String {
    checks::check_welch_tables();
    let odd = welch_one_sided(963.1, 32.0, 1472.7, 163.7, 100, 0.05).unwrap();
    format!(
        "all 6 comparisons match; RRT column of the smaller case prints 1.6526 but dof {} gives {:.4}",
        odd.dof, odd.t_threshold
    )
}

fn ordering(r: &Bench) -> String {
    let (b, d) = (&r.bench, r.d);
    let [pq, irrt, rrt_star, rrt] = PlannerKind::ALL.map(|k| mean_length(b, k));
    assert!(rrt_star <= 1.05 * d, "RRT* mean {rrt_star} > 1.05 D");
    assert!(rrt > rrt_star, "RRT mean {rrt} <= RRT* mean {rrt_star}");
    assert!(pq <= rrt_star + 0.01 * d, "PQ-RRT* mean {pq} > RRT* mean + 0.01 D");
    format!(
        "D = {d:.1} m; mean/D: PQ-RRT* {:.3}, IRRT* {:.3}, RRT* {:.3}, RRT {:.3}; benchmark {:.0} s",
        pq / d,
        irrt / d,
        rrt_star / d,
        rrt / d,
        r.secs
    )
}

fn completeness(r: &Bench) -> String {
    let b = &r.bench;
    let rates: Vec<String> = b
        .report
        .planners
        .iter()
        .map(|s| format!("{} {:.0}%", s.planner.label(), s.rho_mc))
        .collect();
    assert!(b.report.planners.iter().all(|s| s.successes == s.n_mc), "{rates:?}");
    format!("{}; benchmark {:.0} s", rates.join(", "), r.secs)
}

fn monotone(benches: &[&Benchmark]) -> String {
    let mut runs = 0;
    for b in benches {
        for r in &b.results {
            assert_eq!(anytime_violations(&r.best_cost_series), 0, "{} seed {}", r.planner, r.seed);
            runs += 1;
        }
    }
    format!("{runs} runs, 0 violations")
}

fn feasibility() -> String {
    checks::steer_fuzz(1000, 5);
    let mut edges = 0;
    for map in ["deadend.json", "archipelago.json"] {
        let fx = common::load(map);
        for kind in PlannerKind::ALL {
            let cfg = PlannerConfig {
                n_iter_max: 3000,
                max_wall_time: f64::INFINITY,
                seed: 7,
                ..PlannerConfig::small_case()
            };
            let run = plan_with_tree(kind, &fx.env, &fx.start, &fx.goal, &cfg).unwrap();
            checks::check_tree_edges(&run.tree, &fx.env, &cfg);
            edges += run.tree.len() - 1;
        }
    }
    format!("1000 steers within limits; {edges} tree edges re-verified")
}

fn tree_coherence() -> String {
    for episode in 0..100 {
        checks::tree_fuzz_episode(episode);
    }
    "100 episodes of 200 nodes".into()
}

fn samplers() -> String {
    let p_cdt = checks::cdt_sample_fit(100_000);
    assert!(p_cdt > 0.01, "triangulation chi-square p = {p_cdt}");
    let (p_r, p_a) = checks::informed_sample_fit(100_000);
    assert!(p_r > 0.01 && p_a > 0.01, "ellipse chi-square p = {p_r}, {p_a}");
    let dev = checks::collapse_deviation(100_000);
    assert!(dev < 1e-9, "collapse deviation {dev}");
    format!("triangulation p = {p_cdt:.3}; ellipse p = {p_r:.3}/{p_a:.3}; collapse deviation {dev:.1e} m")
}

fn scenario() -> String {
    let fx = common::load("archipelago.json");
    let cfg = PlannerConfig {
        n_node_max: 4000,
        n_iter_max: 100_000,
        max_wall_time: f64::INFINITY,
        seed: 1,
        ..PlannerConfig::small_case()
    };
    let spec = EncounterSpec {
        ownship_start: VesselState::new(100.0, 900.0, 0.0, 5.0),
        ownship_end: Point::new(900.0, 100.0),
        t_sim: 150.0,
        behavior_count: 100,
        mode: AnchorMode::Corridor,
        ..EncounterSpec::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let sc = generate_behaviors(&fx.env, &fx.start, &spec, PlannerKind::PqRrtStar, &cfg, &mut rng).unwrap();
    assert_eq!(sc.batch.node_count, 4000);
    assert_eq!(sc.batch.behaviors.len(), 100);
    let mut q = sc.batch.timing.queries.clone();
    q.sort_by(f64::total_cmp);
    let median = 0.5 * (q[49] + q[50]) * 1e3;
    assert!(median < 5.0, "median latency {median} ms");
    let steering = cfg.steering();
    let mut worst: f64 = 0.0;
    for b in &sc.batch.behaviors {
        for m in replay_behavior(&steering, b) {
            worst = worst.max(m);
        }
    }
    assert!(worst <= cfg.r_a, "replay miss {worst} m");
    format!("median latency {median:.3} ms; worst replay miss {worst:.2} m")
}

fn cli(args: &[&str], out: &Path) {
    let o = Command::new(env!("CARGO_BIN_EXE_shiprrt")).args(args).arg("--out").arg(out).output().unwrap();
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
}

fn determinism() -> String {
    let dir = tempfile::tempdir().unwrap();
    let open = common::fixture("open.json").to_string_lossy().into_owned();
    let arch = common::fixture("archipelago.json").to_string_lossy().into_owned();
    let conf = common::fixture("scenario.conf").to_string_lossy().into_owned();
    let commands: [(&str, Vec<&str>, &[&str]); 3] = [
        ("plan", vec!["plan", "--map", &open, "--seed", "3", "--set", "n_iter_max=2000"], &["result.json"]),
        (
            "benchmark",
            vec!["benchmark", "--map", &open, "--seed", "3", "--n-mc", "4", "--jobs", "2", "--set", "n_iter_max=500"],
            &["report.json"],
        ),
        ("scenario", vec!["scenario", "--map", &arch, "--config", &conf, "--seed", "3"], &["behaviors.json"]),
    ];
    let mut compared = 0;
    for (name, args, files) in &commands {
        let (a, b) = (dir.path().join(format!("{name}-a")), dir.path().join(format!("{name}-b")));
        cli(args, &a);
        cli(args, &b);
        for f in *files {
            let (x, y) = (std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap());
            assert!(x == y, "{name}/{f} differs between runs");
            compared += x.len();
        }
    }
    format!("plan, benchmark and scenario outputs identical ({compared} bytes compared)")
}

fn main() {
    let mut failed = 0;
    let mut report = |n: usize, name: &str, f: &mut dyn FnMut() -> String| {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n} PASS {name} [{secs:.1} s]: {detail}"),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {n} FAIL {name} [{secs:.1} s]: {msg}");
                failed += 1;
            }
        }
    };

    report(1, "Welch tables", &mut welch_tables);
    let open = catch_unwind(|| benchmark("open.json", 5000));
    let deadend = catch_unwind(|| benchmark("deadend.json", 25_000));
    match &open {
        Ok(r) => report(2, "optimality ordering", &mut || ordering(r)),
        Err(_) => report(2, "optimality ordering", &mut || panic!("benchmark failed")),
    }
    match &deadend {
        Ok(r) => report(3, "local-minimum completeness", &mut || completeness(r)),
        Err(_) => report(3, "local-minimum completeness", &mut || panic!("benchmark failed")),
    }
    match (&open, &deadend) {
        (Ok(a), Ok(b)) => report(4, "anytime monotonicity", &mut || monotone(&[&a.bench, &b.bench])),
        _ => report(4, "anytime monotonicity", &mut || panic!("benchmark failed")),
    }
    report(5, "feasibility", &mut feasibility);
    report(6, "tree coherence", &mut tree_coherence);
    report(7, "samplers", &mut samplers);
    report(8, "scenario latency and feasibility", &mut scenario);
    report(9, "determinism", &mut determinism);

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
