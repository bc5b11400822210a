//! Barcode of the six-hump camel function on 10^5 uniform samples.
//!
//! Each bar is a local minimum; the one infinite bar is the global minimum.
//! Run with `cargo run --release --example humpcamel`.

use sublevel_barcodes::barcode::minima_saddle_pairs;
use sublevel_barcodes::experiment::run_pipeline;
use sublevel_barcodes::{Benchmark, GraphSpec, SampleSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = Benchmark::HumpCamel6;
    let sample = SampleSpec { bbox: f.default_box(), n_points: 100_000, seed: 1 };
    let run = run_pipeline(&f, &sample, &GraphSpec::for_dim(2))?;

    println!("{} points, {} edges, {} bars", run.cloud.len(), run.graph.n_edges(), run.diagram.len());
    for bar in run.diagram.infinite_bars() {
        let p = run.cloud.point(bar.min_vertex);
        println!("global minimum {:.4} at ({:.3}, {:.3})", bar.birth, p[0], p[1]);
    }
    for pair in minima_saddle_pairs(&run.diagram, &run.cloud)? {
        println!(
            "minimum {:.4} at ({:.3}, {:.3}) merges at {:.4} through ({:.3}, {:.3})",
            pair.birth, pair.min_point[0], pair.min_point[1], pair.death, pair.saddle_point[0], pair.saddle_point[1],
        );
    }
    println!("timings: {:?}", run.timings);
    Ok(())
}
