//! Command-line driver: `plan`, `benchmark` and `scenario`.
//!
//! JSON outputs depend only on the inputs and the seed; wall-clock timings go
//! to a separate `timings.json`. Exit codes are 0 on success, 1 for invalid
//! input and 2 when the planner finds no solution.

pub mod config;
pub mod svg;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use config::RunConfig;
pub use svg::Svg;

use crate::env::MapFile;
use crate::error::{Error, Result};
use crate::planners::{plan_with_tree, Environment, PlannerKind};
use crate::scenario::generate_behaviors;
use crate::stats::run_benchmark;
use crate::vessel::VesselState;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PLANNER: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "shiprrt", version, about = "Sampling-based ship trajectory planning")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one planner and write the result, waypoints and optionally an SVG.
    Plan(RunArgs),
    /// Compare planners over seeded Monte Carlo runs.
    Benchmark(RunArgs),
    /// Generate random target-ship behaviors from one tree.
    Scenario(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Map file (JSON).
    #[arg(long)]
    pub map: PathBuf,
    /// Flat key = value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Planner name; for `benchmark` a comma-separated list.
    #[arg(long)]
    pub planner: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo runs per planner.
    #[arg(long = "n-mc")]
    pub n_mc: Option<usize>,
    /// Worker threads for `benchmark`.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long = "emit-svg")]
    pub emit_svg: bool,
    /// Extra configuration entries, applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let outcome = match &cli.command {
        Command::Plan(a) => cmd_plan(a),
        Command::Benchmark(a) => cmd_benchmark(a),
        Command::Scenario(a) => cmd_scenario(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn run_config(args: &RunArgs, list_planners: bool) -> Result<RunConfig> {
    let mut rc = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    for entry in &args.set {
        let (k, v) = entry
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("--set expects KEY=VALUE, got '{entry}'")))?;
        rc.set(k.trim(), v.trim())?;
    }
    if let Some(p) = &args.planner {
        rc.set(if list_planners { "planners" } else { "planner" }, p)?;
    }
    if let Some(seed) = args.seed {
        rc.cfg.seed = seed;
    }
    if let Some(n) = args.n_mc {
        rc.n_mc = n;
    }
    if let Some(j) = args.jobs {
        rc.jobs = j;
    }
    rc.validate()?;
    Ok(rc)
}

struct Loaded {
    file: MapFile,
    env: Environment,
}

fn load_map(path: &Path, rc: &RunConfig) -> Result<Loaded> {
    let file = MapFile::load(path)?;
    let env = Environment::new(file.build(rc.rdp_epsilon, rc.d_safe)?)?;
    Ok(Loaded { file, env })
}

fn endpoint(cfg: config::StateOverride, file: Option<VesselState>, what: &str) -> Result<VesselState> {
    cfg.resolve(file)
        .ok_or_else(|| Error::invalid(format!("no {what} state in the config or the map file")))
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json(value)?)
}

pub fn cmd_plan(args: &RunArgs) -> Result<i32> {
    let rc = run_config(args, false)?;
    let Loaded { file, env } = load_map(&args.map, &rc)?;
    let start = endpoint(rc.start, file.start, "start")?;
    let goal = endpoint(rc.goal, file.goal, "goal")?;
    let run = plan_with_tree(rc.planner, &env, &start, &goal, &rc.cfg)?;
    let r = &run.result;

    create_dir(&args.out)?;
    write_json(&args.out.join("result.json"), r)?;
    write_json(&args.out.join("timings.json"), &r.timing)?;
    let mut csv = String::from("x,y\n");
    for p in &r.waypoints {
        let _ = writeln!(csv, "{},{}", p.x, p.y);
    }
    write_text(&args.out.join("waypoints.csv"), &csv)?;
    if args.emit_svg {
        let mut svg = Svg::new(env.map.bounds());
        svg.hazards(&env.map).tree(&run.tree);
        if let Some(t) = &r.trajectory {
            svg.polyline(&t.positions(), "#d03020", 2.0);
        }
        svg.circle(start.position(), 4.0, "#2050d0").circle(goal.position(), rc.cfg.r_a, "#20a040");
        write_text(&args.out.join("plan.svg"), &svg.finish())?;
    }

    match (r.length, r.first_solution_iteration) {
        (Some(len), Some(first)) => {
            println!(
                "{}: length {len:.1} m, {} nodes, first solution at iteration {first} of {}",
                r.planner.label(),
                r.node_count,
                r.iterations
            );
            Ok(EXIT_OK)
        }
        _ => {
            eprintln!(
                "{}: no solution after {} iterations ({} nodes)",
                r.planner.label(),
                r.iterations,
                r.node_count
            );
            Ok(EXIT_PLANNER)
        }
    }
}

pub fn cmd_benchmark(args: &RunArgs) -> Result<i32> {
    let rc = run_config(args, true)?;
    let Loaded { file, env } = load_map(&args.map, &rc)?;
    let start = endpoint(rc.start, file.start, "start")?;
    let goal = endpoint(rc.goal, file.goal, "goal")?;
    let planners: Vec<(PlannerKind, _)> = rc.planners.iter().map(|&k| (k, rc.cfg.clone())).collect();
    let bench = run_benchmark(&env, &start, &goal, &planners, rc.n_mc, rc.cfg.seed, rc.alpha, rc.jobs)?;

    create_dir(&args.out)?;
    let text = bench.text_report();
    write_text(&args.out.join("report.txt"), &text)?;
    write_text(&args.out.join("report.csv"), &bench.csv_report())?;
    write_json(&args.out.join("report.json"), &bench.report)?;
    write_json(&args.out.join("timings.json"), &bench.timings)?;
    print!("{text}");
    Ok(EXIT_OK)
}

pub fn cmd_scenario(args: &RunArgs) -> Result<i32> {
    let rc = run_config(args, false)?;
    let Loaded { file, env } = load_map(&args.map, &rc)?;
    let spawn = endpoint(rc.spawn, file.start, "spawn")?;
    let mut rng = ChaCha8Rng::seed_from_u64(rc.query_seed.unwrap_or(rc.cfg.seed));
    let scenario = generate_behaviors(&env, &spawn, &rc.encounter, rc.planner, &rc.cfg, &mut rng)?;
    let batch = &scenario.batch;

    create_dir(&args.out)?;
    write_json(&args.out.join("behaviors.json"), batch)?;
    write_json(&args.out.join("timings.json"), &batch.timing)?;
    let mut svg = Svg::new(env.map.bounds());
    svg.hazards(&env.map);
    if let Some(tree) = &scenario.tree {
        svg.tree(tree);
    }
    for b in &batch.behaviors {
        svg.polyline(&b.trajectory.positions(), "#d03020", 1.5);
        svg.circle(b.query, 2.5, "#202020");
    }
    svg.circle(spawn.position(), 4.0, "#2050d0");
    write_text(&args.out.join("scenario.svg"), &svg.finish())?;

    if let Some(d) = &batch.diagnostic {
        eprintln!("tree build failed: {d}");
        return Ok(EXIT_PLANNER);
    }
    println!(
        "{}: {} behaviors from a {}-node tree",
        batch.planner.label(),
        batch.behaviors.len(),
        batch.node_count
    );
    Ok(EXIT_OK)
}
