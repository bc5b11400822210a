//! Barcodes of local minima for scalar functions sampled on point clouds.
//!
//! A function is sampled on a box, the samples are joined into a neighbor
//! graph, and a sweep in increasing function value tracks how connected
//! components of the sublevel sets are born at minima and merge at saddles.
//! The resulting degree-0 barcode pairs every non-global minimum with the
//! saddle at which its basin is swallowed by a deeper one.
//!
//! Modules:
//! * [`types`]: point clouds, fields, graphs, diagrams;
//! * [`sampling`]: seeded uniform samples and function evaluation;
//! * [`graph`]: grid radius graphs and k-NN graphs;
//! * [`barcode`]: the union-find sweep and the minimax path oracle;
//! * [`reduction`]: filtered chain complex and its GF(2) canonical form;
//! * [`metrics`]: bottleneck distance;
//! * [`bench`]: benchmark objectives;
//! * [`nnloss`]: loss surfaces of small MLPs;
//! * [`experiment`]: pipelines and the convergence study;
//! * [`cli`]: the `sublevel` command line.

pub mod barcode;
pub mod bench;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod nnloss;
pub mod reduction;
pub mod sampling;
pub mod types;

pub use barcode::{compute_barcode, minima_saddle_pairs, minimax_saddle_oracle};
pub use bench::Benchmark;
pub use error::{Error, Result};
pub use graph::{GraphMethod, GraphSpec};
pub use metrics::bottleneck_distance;
pub use sampling::{evaluate, sample_uniform, Objective, SampleSpec};
pub use types::{
    canonicalize, sort_by_value, Bar, BoundingBox, NeighborGraph, PersistenceDiagram, PointCloud,
    ScalarField,
};
