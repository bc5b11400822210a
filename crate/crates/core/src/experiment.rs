//! End-to-end runs: sample, evaluate, build the graph, compute the barcode.
//! Also the paired-sample convergence study and the network loss runs.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barcode::compute_barcode;
use crate::bench::Benchmark;
use crate::error::{Error, Result};
use crate::graph::{build_graph, GraphMethod, GraphSpec};
use crate::metrics::bottleneck_distance;
use crate::nnloss::{LossSpec, MlpArchitecture};
use crate::sampling::{evaluate, sample_uniform, Objective, SampleSpec};
use crate::types::{NeighborGraph, PersistenceDiagram, PointCloud, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Sample,
    Evaluate,
    Graph,
    Barcode,
    Reduction,
    Bottleneck,
    Io,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Sample => "sample",
            Stage::Evaluate => "evaluate",
            Stage::Graph => "graph",
            Stage::Barcode => "barcode",
            Stage::Reduction => "reduction",
            Stage::Bottleneck => "bottleneck",
            Stage::Io => "io",
        })
    }
}

/// An error tagged with the pipeline stage that raised it.
#[derive(Debug, thiserror::Error)]
#[error("{stage} stage failed: {source}")]
pub struct StageError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

impl StageError {
    pub fn exit_code(&self) -> i32 {
        self.source.exit_code()
    }
}

pub trait AtStage<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, StageError>;
}

impl<T, E: Into<Error>> AtStage<T> for std::result::Result<T, E> {
    fn at(self, stage: Stage) -> std::result::Result<T, StageError> {
        self.map_err(|e| StageError { stage, source: e.into() })
    }
}

pub type StageResult<T> = std::result::Result<T, StageError>;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Timings {
    pub sample: Duration,
    pub evaluate: Duration,
    pub graph: Duration,
    pub barcode: Duration,
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub cloud: PointCloud,
    pub field: ScalarField,
    pub graph: NeighborGraph,
    pub diagram: PersistenceDiagram,
    pub timings: Timings,
}

fn timed<T>(slot: &mut Duration, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *slot = start.elapsed();
    out
}

/// Graph and barcode for an existing cloud and field.
pub fn barcode_of(cloud: PointCloud, field: ScalarField, graph_spec: &GraphSpec) -> StageResult<PipelineRun> {
    let mut timings = Timings::default();
    let graph = if cloud.is_empty() {
        NeighborGraph::empty(0)
    } else {
        timed(&mut timings.graph, || build_graph(&cloud, graph_spec)).at(Stage::Graph)?
    };
    let diagram = timed(&mut timings.barcode, || compute_barcode(&graph, &field)).at(Stage::Barcode)?;
    Ok(PipelineRun { cloud, field, graph, diagram, timings })
}

/// Sample, evaluate, build the graph and compute the barcode.
pub fn run_pipeline<F: Objective + ?Sized>(
    objective: &F,
    sample: &SampleSpec,
    graph_spec: &GraphSpec,
) -> StageResult<PipelineRun> {
    let mut t = Timings::default();
    let cloud = timed(&mut t.sample, || sample_uniform(sample)).at(Stage::Sample)?;
    let field = timed(&mut t.evaluate, || evaluate(objective, &cloud)).at(Stage::Evaluate)?;
    let mut run = barcode_of(cloud, field, graph_spec)?;
    run.timings.sample = t.sample;
    run.timings.evaluate = t.evaluate;
    Ok(run)
}

/// Mixes `(n, r, side)` into `base` with the SplitMix64 finalizer, giving
/// each cloud of the convergence study its own stream.
pub fn derive_seed(base: u64, n: usize, r: usize, side: usize) -> u64 {
    let mut h = 0x9E37_79B9_7F4A_7C15u64;
    for x in [n as u64, r as u64, side as u64] {
        h = splitmix64(h ^ x);
    }
    base ^ h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `round(10^e)` for `e = lo, lo + step, ..., hi`.
pub fn log_spaced_sizes(lo: f64, hi: f64, step: f64) -> Vec<usize> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| 10f64.powf(lo + step * i as f64).round() as usize).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergeSpec {
    pub function: String,
    pub dim: usize,
    pub sizes: Vec<usize>,
    pub pairs: usize,
    pub base_seed: u64,
    pub graph: GraphSpec,
    /// Use the same seed for both clouds of a pair. Only useful as a check:
    /// every distance is then zero.
    #[serde(default)]
    pub same_seed: bool,
}

impl ConvergeSpec {
    fn validate(&self) -> Result<()> {
        if self.pairs == 0 {
            return Err(Error::Config("need at least one pair".into()));
        }
        if self.sizes.is_empty() || self.sizes.iter().any(|&n| n < 2) {
            return Err(Error::Config("sample sizes must all be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergeRow {
    pub n: usize,
    pub mean: f64,
    /// Standard error of the mean over the pairs.
    pub stderr: f64,
    pub distances: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergeResult {
    pub rows: Vec<ConvergeRow>,
    /// Least-squares slope of `log10(mean)` against `log10(N)` over all sizes.
    pub slope: f64,
    /// The same slope over the largest half of the sizes.
    pub slope_upper_half: f64,
}

/// Ordinary least-squares slope.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn log_log_slope(rows: &[ConvergeRow]) -> f64 {
    if rows.len() < 2 {
        return f64::NAN;
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).log10()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean.log10()).collect();
    fit_slope(&xs, &ys)
}

/// For each size `N`, the mean bottleneck distance between the diagrams of
/// `R` independent pairs of `N`-point samples.
pub fn run_converge(spec: &ConvergeSpec) -> StageResult<ConvergeResult> {
    spec.validate().at(Stage::Sample)?;
    let bench = Benchmark::from_name(&spec.function, Some(spec.dim)).at(Stage::Evaluate)?;
    let bbox = bench.default_box();
    let cells: Vec<(usize, usize)> =
        spec.sizes.iter().flat_map(|&n| (0..spec.pairs).map(move |r| (n, r))).collect();

    let distances: Vec<f64> = cells
        .par_iter()
        .map(|&(n, r)| {
            let diagram = |side: usize| -> StageResult<PersistenceDiagram> {
                let seed = derive_seed(spec.base_seed, n, r, if spec.same_seed { 0 } else { side });
                let sample = SampleSpec { bbox: bbox.clone(), n_points: n, seed };
                Ok(run_pipeline(&bench, &sample, &spec.graph)?.diagram)
            };
            let (a, b) = (diagram(0)?, diagram(1)?);
            Ok(bottleneck_distance(&a, &b))
        })
        .collect::<StageResult<_>>()?;

    let rows: Vec<ConvergeRow> = spec
        .sizes
        .iter()
        .zip(distances.chunks(spec.pairs))
        .map(|(&n, ds)| {
            let r = ds.len() as f64;
            let mean = ds.iter().sum::<f64>() / r;
            let var = if ds.len() > 1 {
                ds.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (r - 1.0)
            } else {
                0.0
            };
            ConvergeRow { n, mean, stderr: (var / r).sqrt(), distances: ds.to_vec() }
        })
        .collect();
    let half = rows.len().div_ceil(2).max(2).min(rows.len());
    let slope = log_log_slope(&rows);
    let slope_upper_half = log_log_slope(&rows[rows.len() - half..]);
    Ok(ConvergeResult { rows, slope, slope_upper_half })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NnSpec {
    pub arch: MlpArchitecture,
    pub l2_coeff: f64,
    pub weight_bound: f64,
    pub n_points: usize,
    pub seed: u64,
    pub graph: GraphSpec,
}

impl NnSpec {
    /// Defaults: `l2 = 0.01`, weights in `[-5, 5]^P`, k-NN graph with `k = 2P`.
    pub fn new(arch: MlpArchitecture, n_points: usize, seed: u64) -> Self {
        let graph = GraphSpec::for_dim(arch.n_params()).with_method(GraphMethod::Knn);
        NnSpec {
            arch,
            l2_coeff: crate::nnloss::DEFAULT_L2,
            weight_bound: crate::nnloss::DEFAULT_WEIGHT_BOUND,
            n_points,
            seed,
            graph,
        }
    }
}

/// Range statistics of a loss-surface run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NnReport {
    pub arch: String,
    pub n_params: usize,
    pub max_value: f64,
    pub min_value: f64,
    pub highest_finite_death: Option<f64>,
    pub n_finite_bars: usize,
    pub n_infinite_bars: usize,
}

impl NnReport {
    /// Highest finite death as a fraction of the sampled range, measured
    /// from the minimum.
    pub fn death_fraction(&self) -> Option<f64> {
        self.highest_finite_death
            .map(|d| (d - self.min_value) / (self.max_value - self.min_value))
    }
}

pub struct NnRun {
    pub run: PipelineRun,
    pub report: NnReport,
}

pub fn run_nn(spec: &NnSpec) -> StageResult<NnRun> {
    let loss = LossSpec::new(spec.arch.clone(), spec.l2_coeff).at(Stage::Evaluate)?;
    let bbox = spec.arch.weight_box(spec.weight_bound).at(Stage::Sample)?;
    let sample = SampleSpec { bbox, n_points: spec.n_points, seed: spec.seed };
    let run = run_pipeline(&loss.objective(), &sample, &spec.graph)?;
    let report = NnReport {
        arch: spec.arch.label(),
        n_params: spec.arch.n_params(),
        max_value: run.field.max(),
        min_value: run.field.min(),
        highest_finite_death: run.diagram.highest_finite_death(),
        n_finite_bars: run.diagram.finite_bars().count(),
        n_infinite_bars: run.diagram.n_infinite(),
    };
    Ok(NnRun { run, report })
}
