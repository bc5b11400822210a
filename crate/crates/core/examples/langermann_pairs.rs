//! Minimum/saddle pairs of the Langermann function, written as CSV.
//!
//! `cargo run --release --example langermann_pairs > pairs.csv`

use sublevel_barcodes::barcode::minima_saddle_pairs;
use sublevel_barcodes::experiment::run_pipeline;
use sublevel_barcodes::{io, Benchmark, GraphSpec, SampleSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = Benchmark::from_name("langermann", None)?;
    let sample = SampleSpec { bbox: f.default_box(), n_points: 50_000, seed: 11 };
    let run = run_pipeline(&f, &sample, &GraphSpec::for_dim(2))?;

    // Deepest basins first.
    let mut pairs = minima_saddle_pairs(&run.diagram, &run.cloud)?;
    pairs.sort_by(|a, b| (b.death - b.birth).total_cmp(&(a.death - a.birth)));
    eprintln!("{} finite bars", pairs.len());
    io::write_pairs_csv(std::io::stdout().lock(), &pairs, 2, None)?;
    Ok(())
}
