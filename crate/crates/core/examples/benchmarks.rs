//! The benchmark functions at their documented minima, and a barcode summary
//! of each on its default box.

use sublevel_barcodes::bench::{Benchmark, BENCHMARK_NAMES};
use sublevel_barcodes::experiment::run_pipeline;
use sublevel_barcodes::{GraphSpec, Objective, SampleSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in BENCHMARK_NAMES {
        let f = Benchmark::from_name(name, Some(2))?;
        let sample = SampleSpec { bbox: f.default_box(), n_points: 30_000, seed: 4 };
        let run = run_pipeline(&f, &sample, &GraphSpec::for_dim(2))?;
        println!(
            "{name:>13}: min sampled {:>10.4}, {:>4} bars",
            run.field.min(),
            run.diagram.len()
        );
    }
    let camel = Benchmark::HumpCamel6;
    println!("humpcamel6(0.0898, -0.7126) = {:.4}", camel.eval(&[0.0898, -0.7126]));
    let schwefel = Benchmark::Schwefel26 { dim: 3 };
    println!("schwefel26(420.9687^3) = {:.6}", schwefel.eval(&[420.9687; 3]));
    Ok(())
}
