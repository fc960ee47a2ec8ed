//! Predicts the closest point of approach between the own ship and a target
//! on a crossing course, then draws PQ-RRT* behaviors that end near it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shiprrt::env::{MapFile, Point};
use shiprrt::planners::{Environment, PlannerConfig, PlannerKind};
use shiprrt::scenario::{cpa, generate_behaviors, AnchorMode, EncounterSpec};
use shiprrt::vessel::VesselState;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let file = MapFile::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/archipelago.json"))?;
    let env = Environment::new(file.build(1.0, 0.0)?)?;
    let spawn = file.start.ok_or("no start")?;
    let spec = EncounterSpec {
        ownship_start: VesselState::new(100.0, 900.0, 0.0, 5.0),
        ownship_end: Point::new(900.0, 100.0),
        sigma: [[2500.0, 900.0], [900.0, 1600.0]],
        behavior_count: 10,
        mode: AnchorMode::Cpa,
        ..EncounterSpec::default()
    };
    let c = cpa(&spec.ownship(), &spawn);
    println!(
        "CPA at ({:.1}, {:.1}) after {:.1} s, separation {:.1} m",
        c.p_cpa.x, c.p_cpa.y, c.t_cpa, c.d_cpa
    );

    let cfg = PlannerConfig {
        n_node_max: 2000,
        n_iter_max: 20_000,
        seed: 9,
        ..PlannerConfig::small_case()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let sc = generate_behaviors(&env, &spawn, &spec, PlannerKind::PqRrtStar, &cfg, &mut rng)?;
    println!("anchor ({:.1}, {:.1}), {} nodes", sc.batch.anchor.x, sc.batch.anchor.y, sc.batch.node_count);
    for b in &sc.batch.behaviors {
        let end = b.waypoints.last().expect("path includes the root");
        println!(
            "query ({:6.1}, {:6.1}) ends at ({:6.1}, {:6.1}) after {:6.1} m",
            b.query.x, b.query.y, end.x, end.y, b.length
        );
    }
    Ok(())
}
