#![allow(dead_code)]

pub mod checks;

use std::path::PathBuf;

use shiprrt::env::{HazardMap, MapFile};
use shiprrt::planners::Environment;
use shiprrt::vessel::VesselState;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub struct Fixture {
    pub env: Environment,
    pub start: VesselState,
    pub goal: VesselState,
}

pub fn load(name: &str) -> Fixture {
    let file = MapFile::load(fixture(name)).unwrap();
    let map: HazardMap = file.build(1.0, 0.0).unwrap();
    Fixture {
        env: Environment::new(map).unwrap(),
        start: file.start.unwrap(),
        goal: file.goal.unwrap(),
    }
}
