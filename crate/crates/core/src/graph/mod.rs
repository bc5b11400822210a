//! Neighbor graphs over point clouds.
//!
//! Two constructions share one cutoff radius `r`:
//! * `grid`: every pair within distance `r`, found by bucketing points
//!   into a regular grid and scanning adjacent cells only;
//! * `knn`: each point's `k` nearest neighbors, orientation dropped, edges
//!   longer than `r` removed.

mod grid;
mod knn;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{NeighborGraph, PointCloud};

pub use grid::radius_graph;
pub use knn::knn_graph;

/// Cutoff scale used unless configured otherwise.
pub const DEFAULT_CUTOFF_SCALE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphMethod {
    Grid,
    Knn,
}

impl fmt::Display for GraphMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphMethod::Grid => "grid",
            GraphMethod::Knn => "knn",
        })
    }
}

impl FromStr for GraphMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(GraphMethod::Grid),
            "knn" => Ok(GraphMethod::Knn),
            other => Err(Error::Config(format!("unknown graph method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    /// Neighbor count for the `knn` method.
    pub k: usize,
    /// The scale `s` in `r = s * (Vol * ln N / N)^(1/D)`.
    pub cutoff_scale: f64,
    pub method: GraphMethod,
}

impl GraphSpec {
    /// Defaults for dimension `dim`: `k = 2 * dim`, `s = 2`, grid search.
    pub fn for_dim(dim: usize) -> Self {
        GraphSpec { k: 2 * dim, cutoff_scale: DEFAULT_CUTOFF_SCALE, method: GraphMethod::Grid }
    }

    pub fn with_method(mut self, method: GraphMethod) -> Self {
        self.method = method;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if !(self.cutoff_scale > 0.0 && self.cutoff_scale.is_finite()) {
            return Err(Error::Config(format!(
                "cutoff scale must be positive, got {}",
                self.cutoff_scale
            )));
        }
        Ok(())
    }
}

/// `r = s * (Vol(box) * ln(max(N, 3)) / N)^(1/D)`.
pub fn effective_cutoff(cloud: &PointCloud, spec: &GraphSpec) -> Result<f64> {
    spec.validate()?;
    let n = cloud.len();
    if n == 0 {
        return Err(Error::Contract("cutoff needs at least one point".into()));
    }
    let volume = cloud.bbox().volume();
    if !(volume > 0.0 && volume.is_finite()) {
        return Err(Error::Config(format!("degenerate box volume {volume}")));
    }
    let nf = n as f64;
    let dim = cloud.dim() as f64;
    Ok(spec.cutoff_scale * (volume * nf.max(3.0).ln() / nf).powf(1.0 / dim))
}

/// k-NN graph with the effective cutoff applied.
pub fn build_knn_graph(cloud: &PointCloud, spec: &GraphSpec) -> Result<NeighborGraph> {
    let r = effective_cutoff(cloud, spec)?;
    knn_graph(cloud, spec.k, r)
}

/// Exact radius graph at the effective cutoff.
pub fn build_grid_graph(cloud: &PointCloud, spec: &GraphSpec) -> Result<NeighborGraph> {
    let r = effective_cutoff(cloud, spec)?;
    Ok(radius_graph(cloud, r))
}

/// Dispatches on `spec.method`.
pub fn build_graph(cloud: &PointCloud, spec: &GraphSpec) -> Result<NeighborGraph> {
    match spec.method {
        GraphMethod::Grid => build_grid_graph(cloud, spec),
        GraphMethod::Knn => build_knn_graph(cloud, spec),
    }
}

#[inline]
pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
