//! Monte Carlo benchmark of all planners on the dead-end map with Welch
//! tests of PQ-RRT* against each rival, as printed by `shiprrt benchmark`.
//!
//! ```text
//! cargo run --release --example benchmark -- 20 8000
//! ```

use shiprrt::env::MapFile;
use shiprrt::planners::{Environment, PlannerConfig, PlannerKind};
use shiprrt::stats::run_benchmark;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n_mc: usize = args.first().map_or(Ok(10), |s| s.parse())?;
    let iters: usize = args.get(1).map_or(Ok(8000), |s| s.parse())?;

    let file = MapFile::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/deadend.json"))?;
    let env = Environment::new(file.build(1.0, 0.0)?)?;
    let (start, goal) = (file.start.ok_or("no start")?, file.goal.ok_or("no goal")?);
    let cfg = PlannerConfig {
        n_iter_max: iters,
        max_wall_time: f64::INFINITY,
        ..PlannerConfig::small_case()
    };
    let planners: Vec<_> = PlannerKind::ALL.iter().map(|&k| (k, cfg.clone())).collect();
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let bench = run_benchmark(&env, &start, &goal, &planners, n_mc, 0, 0.05, jobs)?;
    print!("{}", bench.text_report());
    Ok(())
}
