mod common;

use common::checks::tree_fuzz_episode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiprrt::tree::{CostMetric, NodeId, Tree};
use shiprrt::vessel::{TrajectorySegment, VesselState};

#[test]
fn wiring_keeps_costs_coherent() {
    for episode in 0..100 {
        tree_fuzz_episode(episode);
    }
}

#[test]
fn ancestry_matches_parent_walk() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut tree = Tree::new(VesselState::new(0.0, 0.0, 0.0, 1.0), 200, CostMetric::Polyline, 0.5);
    for i in 1..200 {
        let parent = rng.random_range(0..i);
        let s = VesselState::new(rng.random_range(0.0..100.0), rng.random_range(0.0..100.0), 0.0, 1.0);
        let edge = TrajectorySegment::new(vec![tree.node(parent).state, s], 0.5);
        tree.insert(parent, s, edge).unwrap();
    }
    assert!(tree.insert(0, VesselState::new(1.0, 1.0, 0.0, 1.0), TrajectorySegment::empty(0.5)).is_err());
    for z in 0..200 {
        let path = tree.path_to(z);
        for (phi, &a) in path.iter().rev().enumerate() {
            assert_eq!(tree.ancestor(z, phi), Some(a));
        }
        assert_eq!(tree.ancestor(z, path.len()), None);
        let mut want: Vec<NodeId> = path.iter().rev().skip(1).take(3).copied().collect();
        want.sort_unstable();
        assert_eq!(tree.ancestry(&[z], 3), want);
    }
}
