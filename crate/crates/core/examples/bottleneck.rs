//! Bottleneck distances: hand-made diagrams, then the stability bound for a
//! perturbed field on a fixed graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sublevel_barcodes::graph::build_graph;
use sublevel_barcodes::{
    bottleneck_distance, compute_barcode, evaluate, sample_uniform, Bar, Benchmark, GraphSpec,
    PersistenceDiagram, SampleSpec, ScalarField,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = PersistenceDiagram::from_bars(vec![Bar::infinite(0.0, 0), Bar::finite(1.0, 4.0, 1, 2)]);
    let b = PersistenceDiagram::from_bars(vec![
        Bar::infinite(0.25, 0),
        Bar::finite(1.0, 4.0, 1, 2),
        Bar::finite(2.0, 3.0, 3, 4),
    ]);
    println!("W(a, b) = {}", bottleneck_distance(&a, &b));
    println!("W(a, empty) = {}", bottleneck_distance(&a, &PersistenceDiagram::default()));

    let f = Benchmark::HolderTable;
    let cloud = sample_uniform(&SampleSpec { bbox: f.default_box(), n_points: 20_000, seed: 2 })?;
    let field = evaluate(&f, &cloud)?;
    let graph = build_graph(&cloud, &GraphSpec::for_dim(2))?;
    let base = compute_barcode(&graph, &field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for eps in [0.01, 0.1, 1.0] {
        let values: Vec<f64> = field.values().iter().map(|v| v + rng.gen_range(-eps..=eps)).collect();
        let noisy = ScalarField::new(values)?;
        let d = bottleneck_distance(&base, &compute_barcode(&graph, &noisy)?);
        println!("noise {eps}: distance {d:.4} (bound {eps})");
    }
    Ok(())
}
