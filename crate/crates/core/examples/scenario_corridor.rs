//! Grows an RRT tree from a target ship's spawn point and draws behaviors
//! ending in a corridor ahead of the own ship. Writes `scenario_corridor.svg`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shiprrt::cli::Svg;
use shiprrt::env::{MapFile, Point};
use shiprrt::planners::{Environment, PlannerConfig, PlannerKind};
use shiprrt::scenario::{generate_behaviors, replay_behavior, AnchorMode, EncounterSpec};
use shiprrt::vessel::VesselState;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let file = MapFile::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/archipelago.json"))?;
    let env = Environment::new(file.build(1.0, 0.0)?)?;
    let spawn = file.start.ok_or("no start")?;
    let spec = EncounterSpec {
        ownship_start: VesselState::new(100.0, 900.0, 0.0, 5.0),
        ownship_end: Point::new(900.0, 100.0),
        t_sim: 150.0,
        behavior_count: 15,
        mode: AnchorMode::Corridor,
        ..EncounterSpec::default()
    };
    let cfg = PlannerConfig {
        n_node_max: 2000,
        n_iter_max: 20_000,
        seed: 4,
        ..PlannerConfig::small_case()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sc = generate_behaviors(&env, &spawn, &spec, PlannerKind::Rrt, &cfg, &mut rng)?;
    let batch = &sc.batch;
    if let Some(d) = &batch.diagnostic {
        return Err(d.clone().into());
    }
    println!("{} nodes, tree built in {:.2} s", batch.node_count, batch.timing.build);
    let steering = cfg.steering();
    for (b, t) in batch.behaviors.iter().zip(&batch.timing.queries) {
        let worst = replay_behavior(&steering, b).into_iter().fold(0.0, f64::max);
        println!(
            "query ({:6.1}, {:6.1}) -> node {:4}: {:2} legs, {:6.1} m, extracted in {:.3} ms, replay within {:.2} m",
            b.query.x,
            b.query.y,
            b.node,
            b.commands.len(),
            b.length,
            t * 1e3,
            worst
        );
    }

    let mut svg = Svg::new(env.map.bounds());
    svg.hazards(&env.map);
    if let Some(tree) = &sc.tree {
        svg.tree(tree);
    }
    let own = spec.ownship();
    svg.polyline(&[own.position(), spec.ownship_end], "#2050d0", 2.0);
    for b in &batch.behaviors {
        svg.polyline(&b.trajectory.positions(), "#d03020", 1.5);
    }
    std::fs::write("scenario_corridor.svg", svg.finish())?;
    Ok(())
}
