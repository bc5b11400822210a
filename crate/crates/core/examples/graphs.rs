//! Radius graph versus k-NN graph on the same sample, and how the effective
//! cutoff shrinks with `N`.

use sublevel_barcodes::graph::{build_graph, effective_cutoff};
use sublevel_barcodes::{sample_uniform, BoundingBox, GraphMethod, GraphSpec, SampleSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bbox = BoundingBox::cube(0.0, 1.0, 3)?;
    for n in [1_000, 10_000, 100_000] {
        let cloud = sample_uniform(&SampleSpec { bbox: bbox.clone(), n_points: n, seed: 3 })?;
        let spec = GraphSpec::for_dim(3);
        let r = effective_cutoff(&cloud, &spec)?;
        let grid = build_graph(&cloud, &spec)?;
        let knn = build_graph(&cloud, &spec.with_method(GraphMethod::Knn))?;
        println!(
            "N={n:>6} r={r:.4} grid: {:>8} edges, {} components; knn(k={}): {:>7} edges, {} components",
            grid.n_edges(),
            grid.n_components(),
            spec.k,
            knn.n_edges(),
            knn.n_components(),
        );
    }
    Ok(())
}
