//! Cross-checks the union-find sweep against the boundary-matrix reduction
//! and the minimax path oracle on a small random cloud.

use sublevel_barcodes::barcode::local_minima;
use sublevel_barcodes::graph::build_graph;
use sublevel_barcodes::reduction::{build_filtered_complex, canonical_form, degree0_barcode, degree1_births};
use sublevel_barcodes::{
    compute_barcode, evaluate, minimax_saddle_oracle, sample_uniform, Benchmark, GraphSpec, SampleSpec,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = Benchmark::Wavy;
    let cloud = sample_uniform(&SampleSpec { bbox: f.default_box(), n_points: 2_000, seed: 5 })?;
    let field = evaluate(&f, &cloud)?;
    let graph = build_graph(&cloud, &GraphSpec::for_dim(2))?;

    let fast = compute_barcode(&graph, &field)?;
    let complex = build_filtered_complex(&graph, &field)?;
    let cf = canonical_form(&complex)?;
    let slow = degree0_barcode(&cf, &complex);
    println!("sweep: {} bars, reduction: {} bars, equal: {}", fast.len(), slow.len(), fast == slow);
    println!("{} independent cycles", degree1_births(&cf, &complex).len());

    let minima = local_minima(&graph, &field);
    let mut agree = 0;
    for bar in fast.finite_bars() {
        if minimax_saddle_oracle(&graph, &field, bar.min_vertex)? == bar.death {
            agree += 1;
        }
    }
    println!("{} local minima; minimax oracle matches {agree} of {} finite deaths", minima.len(), fast.len() - 1);
    Ok(())
}
