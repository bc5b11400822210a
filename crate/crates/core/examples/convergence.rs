//! Mean bottleneck distance between independent samples of Alpine01 as the
//! sample grows, with the fitted log-log slope.
//!
//! `cargo run --release --example convergence -- [dim] [pairs]`

use sublevel_barcodes::experiment::{log_spaced_sizes, run_converge, ConvergeSpec};
use sublevel_barcodes::{GraphMethod, GraphSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dim: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);
    let pairs: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(4);
    let spec = ConvergeSpec {
        function: "alpine01".into(),
        dim,
        sizes: log_spaced_sizes(3.0, 4.5, 0.5),
        pairs,
        base_seed: 1,
        graph: GraphSpec::for_dim(dim).with_method(GraphMethod::Knn),
        same_seed: false,
    };
    let result = run_converge(&spec)?;
    println!("{:>7} {:>10} {:>10}", "N", "mean", "stderr");
    for row in &result.rows {
        println!("{:>7} {:>10.5} {:>10.5}", row.n, row.mean, row.stderr);
    }
    println!("slope {:.3}, over the upper half {:.3}", result.slope, result.slope_upper_half);
    Ok(())
}
