//! Plans once with PQ-RRT* on the open-water map, prints the waypoints and
//! writes `plan_open_water.svg` with the tree and the solution.

use shiprrt::cli::Svg;
use shiprrt::env::MapFile;
use shiprrt::planners::{plan_with_tree, Environment, PlannerConfig, PlannerKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let file = MapFile::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/open.json"))?;
    let env = Environment::new(file.build(1.0, 0.0)?)?;
    let (start, goal) = (file.start.ok_or("no start")?, file.goal.ok_or("no goal")?);
    let cfg = PlannerConfig {
        n_iter_max: 3000,
        seed: 1,
        ..PlannerConfig::small_case()
    };
    let run = plan_with_tree(PlannerKind::PqRrtStar, &env, &start, &goal, &cfg)?;
    let r = &run.result;
    let Some(len) = r.length else {
        return Err("no solution".into());
    };
    println!(
        "length {len:.1} m (straight line {:.1} m), {} nodes, first solution at iteration {:?}",
        start.position().distance(goal.position()),
        r.node_count,
        r.first_solution_iteration
    );
    for p in &r.waypoints {
        println!("  {:8.2} {:8.2}", p.x, p.y);
    }

    let mut svg = Svg::new(env.map.bounds());
    svg.hazards(&env.map).tree(&run.tree);
    if let Some(t) = &r.trajectory {
        svg.polyline(&t.positions(), "#d03020", 2.0);
    }
    std::fs::write("plan_open_water.svg", svg.finish())?;
    Ok(())
}
