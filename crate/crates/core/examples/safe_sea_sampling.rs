//! Buffers the archipelago hazards, triangulates the free water and compares
//! sampled counts with the area share of the largest triangles. Sampling
//! picks a triangle by area, then a uniform point inside it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiprrt::env::{build_safe_sea_cdt, MapFile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let file = MapFile::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/archipelago.json"))?;
    let map = file.build(1.0, 10.0)?;
    let tri = build_safe_sea_cdt(&map)?;
    println!(
        "{} hazards after buffering by 10 m, {} triangles, free area {:.0} m² of {:.0} m²",
        map.hazards().len(),
        tri.len(),
        tri.total_area(),
        map.bounds().area()
    );

    let n = 200_000;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut counts = vec![0usize; tri.len()];
    for _ in 0..n {
        let j = tri.pick(rng.random());
        let p = tri.triangles[j].point_at(rng.random(), rng.random());
        assert!(map.is_free(p));
        counts[j] += 1;
    }
    let mut order: Vec<usize> = (0..tri.len()).collect();
    order.sort_by(|&a, &b| tri.areas[b].total_cmp(&tri.areas[a]));
    println!("triangle   area share   sample share");
    for &j in order.iter().take(8) {
        println!(
            "{j:8}   {:10.4}   {:12.4}",
            tri.areas[j] / tri.total_area(),
            counts[j] as f64 / n as f64
        );
    }
    Ok(())
}
