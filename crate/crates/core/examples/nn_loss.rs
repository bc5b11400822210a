//! Barcodes of MLP loss surfaces. Deeper networks have their minima lower in
//! the range of sampled values.
//!
//! `cargo run --release --example nn_loss -- [N]`

use sublevel_barcodes::experiment::{run_nn, NnSpec};
use sublevel_barcodes::nnloss::{Activation, MlpArchitecture};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(20_000);
    for arch in ["2", "2x2", "3"] {
        let arch = MlpArchitecture::parse(arch, Activation::Tanh)?;
        let report = run_nn(&NnSpec::new(arch, n, 0))?.report;
        println!(
            "arch {:>4} ({:>2} weights): range [{:.3}, {:.1}], {:>4} finite bars, highest death {:.3} ({:.1}% of range)",
            report.arch,
            report.n_params,
            report.min_value,
            report.max_value,
            report.n_finite_bars,
            report.highest_finite_death.unwrap_or(f64::NAN),
            100.0 * report.death_fraction().unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
