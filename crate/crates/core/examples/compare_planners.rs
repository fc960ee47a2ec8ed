//! Runs every planner over a range of seeds on one map and prints mean path
//! length, success rate and run time.
//!
//! ```text
//! cargo run --release --example compare_planners -- crates/core/fixtures/deadend.json 10 25000
//! ```

use std::time::Instant;

use shiprrt::env::MapFile;
use shiprrt::planners::{plan, Environment, PlannerConfig, PlannerKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let path = args.first().map(String::as_str).unwrap_or(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/open.json"));
    let seeds: u64 = args.get(1).map_or(Ok(10), |s| s.parse())?;
    let iters: usize = args.get(2).map_or(Ok(5000), |s| s.parse())?;

    let file = MapFile::load(path)?;
    let env = Environment::new(file.build(1.0, 0.0)?)?;
    let (start, goal) = (file.start.ok_or("map has no start")?, file.goal.ok_or("map has no goal")?);
    let d = start.position().distance(goal.position());
    println!("{path}: straight-line distance {d:.1} m, {seeds} seeds, {iters} iterations");

    for kind in PlannerKind::ALL {
        let clock = Instant::now();
        let mut lengths = Vec::new();
        let mut nodes = 0;
        for seed in 0..seeds {
            let cfg = PlannerConfig {
                n_iter_max: iters,
                max_wall_time: f64::INFINITY,
                seed,
                ..PlannerConfig::small_case()
            };
            let r = plan(kind, &env, &start, &goal, &cfg)?;
            nodes += r.node_count;
            lengths.extend(r.length);
        }
        let mean = lengths.iter().sum::<f64>() / lengths.len().max(1) as f64;
        println!(
            "{:>8}: mean d_sol {:7.1} m ({:5.3} D), success {:3}/{seeds}, mean nodes {:5}, {:6.2} s",
            kind.label(),
            mean,
            mean / d,
            lengths.len(),
            nodes / seeds as usize,
            clock.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
