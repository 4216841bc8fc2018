use bratteli_core::ideal::{closure, ClosureOptions, LevelSet};
use bratteli_core::rng::SplitMix64;
use bratteli_core::testgen::{random_periodic_diagram, GenConfig};
use bratteli_core::VertexId;

fn main() {
    let cfg = GenConfig::default();
    for seed in 0..4000u64 {
        let d = random_periodic_diagram(seed, &cfg);
        let mut rng = SplitMix64::new(seed ^ 0xabcdef);
        let depth = d.stored_levels() + d.period();
        let mut vertices = Vec::new();
        for _ in 0..rng.below(4) {
            let p = rng.below(depth);
            let n = d.vertex_count(p).unwrap();
            vertices.push(VertexId::new(p, rng.below(n)));
        }
        let s1 = LevelSet::from_vertices(vertices.clone());
        match closure(&d, &s1, &ClosureOptions::default()) {
            Ok(_) => {}
            Err(e) => {
                println!("seed {seed}: {e:?}");
                println!("diagram: prefix {} period {} dims {:?}", d.prefix_len(), d.period(), d.stored_dims());
                println!("edges: {:?}", d.stored_edges());
                println!("seed vertices: {vertices:?}");
                return;
            }
        }
    }
    println!("no failure found");
}
