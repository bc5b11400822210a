//! Whole-pipeline checks on the benchmark and network objectives.

use sublevel_barcodes::bench::BENCHMARK_NAMES;
use sublevel_barcodes::experiment::{run_converge, run_nn, run_pipeline, ConvergeSpec, NnSpec};
use sublevel_barcodes::nnloss::{nn_loss, Activation, LossSpec, MlpArchitecture};
use sublevel_barcodes::{evaluate, sample_uniform, Benchmark, GraphMethod, GraphSpec, SampleSpec};

#[test]
fn benchmarks_are_finite_on_their_boxes() {
    for name in BENCHMARK_NAMES {
        for dim in [2, 3, 5] {
            let Ok(f) = Benchmark::from_name(name, Some(dim)) else { continue };
            let cloud = sample_uniform(&SampleSpec { bbox: f.default_box(), n_points: 100_000, seed: 1 }).unwrap();
            assert!(evaluate(&f, &cloud).is_ok(), "{name} in dimension {dim}");
        }
    }
}

#[test]
fn humpcamel_has_six_minima() {
    let f = Benchmark::HumpCamel6;
    let run = run_pipeline(&f, &SampleSpec { bbox: f.default_box(), n_points: 100_000, seed: 1 }, &GraphSpec::for_dim(2))
        .unwrap();
    assert_eq!(run.diagram.len(), 6);
    assert_eq!(run.diagram.n_infinite(), 1);
}

#[test]
fn strong_regularization_leaves_one_basin() {
    for arch in ["2", "3"] {
        let arch = MlpArchitecture::parse(arch, Activation::Tanh).unwrap();
        let mut spec = NnSpec::new(arch, 20_000, 2);
        spec.l2_coeff = 1e3;
        let nn = run_nn(&spec).unwrap();
        let range = nn.report.max_value - nn.report.min_value;
        assert_eq!(nn.report.n_infinite_bars, 1);
        for bar in nn.run.diagram.finite_bars() {
            assert!(bar.persistence() < 0.1 * range, "{bar:?} against range {range}");
        }
    }
}

#[test]
fn loss_is_nonnegative() {
    let arch = MlpArchitecture::parse("2x2", Activation::Tanh).unwrap();
    let spec = LossSpec::new(arch.clone(), 0.01).unwrap();
    let cloud = sample_uniform(&SampleSpec { bbox: arch.weight_box(5.0).unwrap(), n_points: 2000, seed: 4 }).unwrap();
    for w in cloud.points() {
        assert!(nn_loss(&spec, w).unwrap() >= 0.0);
    }
}

/// The first `R` pairs are shared between the two runs, so the doubled run
/// adds `R` fresh pairs; its mean should sit within a few standard errors.
#[test]
fn doubling_pairs_moves_the_mean_little() {
    let spec = |pairs| ConvergeSpec {
        function: "alpine01".into(),
        dim: 3,
        sizes: vec![1000, 3162],
        pairs,
        base_seed: 17,
        graph: GraphSpec::for_dim(3).with_method(GraphMethod::Knn),
        same_seed: false,
    };
    let small = run_converge(&spec(20)).unwrap();
    let large = run_converge(&spec(40)).unwrap();
    for (a, b) in small.rows.iter().zip(&large.rows) {
        assert_eq!(&b.distances[..20], &a.distances[..]);
        assert!((a.mean - b.mean).abs() < 3.0 * a.stderr, "{a:?} {b:?}");
    }
}
