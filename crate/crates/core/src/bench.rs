//! Test objectives from the global-optimization benchmark collection.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::Objective;
use crate::types::BoundingBox;

/// Constants of the Langermann function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LangermannParams {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl Default for LangermannParams {
    fn default() -> Self {
        LangermannParams {
            a: vec![3.0, 5.0, 2.0, 1.0, 7.0],
            b: vec![5.0, 2.0, 1.0, 4.0, 9.0],
            c: vec![1.0, 2.0, 5.0, 2.0, 3.0],
        }
    }
}

impl LangermannParams {
    pub fn validate(&self) -> Result<()> {
        if self.a.len() != self.b.len() || self.a.len() != self.c.len() {
            return Err(Error::Config("Langermann a, b, c must have equal length".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Benchmark {
    HumpCamel6,
    Langermann(LangermannParams),
    Wavy,
    HolderTable,
    Alpine01 { dim: usize },
    Schwefel26 { dim: usize },
    XinSheYang04 { dim: usize },
}

pub const BENCHMARK_NAMES: [&str; 7] =
    ["humpcamel6", "langermann", "wavy", "holdertable", "alpine01", "schwefel26", "xinsheyang04"];

impl Benchmark {
    /// Looks up a benchmark by its lowercase name. `dim` is required for the
    /// dimension-parametric functions and must be 2 (or absent) for the rest.
    pub fn from_name(name: &str, dim: Option<usize>) -> Result<Self> {
        let fixed = |b: Benchmark| match dim {
            None | Some(2) => Ok(b),
            Some(d) => Err(Error::Contract(format!("{name} is two-dimensional, got dimension {d}"))),
        };
        let param = |make: fn(usize) -> Benchmark| match dim {
            Some(d) if d >= 1 => Ok(make(d)),
            Some(_) => Err(Error::Config("dimension must be positive".into())),
            None => Err(Error::Config(format!("{name} needs a dimension"))),
        };
        match name.to_ascii_lowercase().as_str() {
            "humpcamel6" => fixed(Benchmark::HumpCamel6),
            "langermann" => fixed(Benchmark::Langermann(LangermannParams::default())),
            "wavy" => fixed(Benchmark::Wavy),
            "holdertable" => fixed(Benchmark::HolderTable),
            "alpine01" => param(|dim| Benchmark::Alpine01 { dim }),
            "schwefel26" => param(|dim| Benchmark::Schwefel26 { dim }),
            "xinsheyang04" => param(|dim| Benchmark::XinSheYang04 { dim }),
            _ => Err(Error::UnknownFunction(name.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Benchmark::HumpCamel6 => "humpcamel6",
            Benchmark::Langermann(_) => "langermann",
            Benchmark::Wavy => "wavy",
            Benchmark::HolderTable => "holdertable",
            Benchmark::Alpine01 { .. } => "alpine01",
            Benchmark::Schwefel26 { .. } => "schwefel26",
            Benchmark::XinSheYang04 { .. } => "xinsheyang04",
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Benchmark::Alpine01 { dim }
            | Benchmark::Schwefel26 { dim }
            | Benchmark::XinSheYang04 { dim } => dim,
            _ => 2,
        }
    }

    /// Default domain.
    pub fn default_box(&self) -> BoundingBox {
        let dim = self.dim();
        let bounds = match self {
            Benchmark::HumpCamel6 => vec![(-2.0, 2.0), (-1.5, 1.5)],
            Benchmark::Langermann(_) => vec![(0.0, 10.0); 2],
            Benchmark::Wavy => vec![(-PI, PI); 2],
            Benchmark::HolderTable => vec![(-10.0, 10.0); 2],
            Benchmark::Alpine01 { .. } | Benchmark::XinSheYang04 { .. } => vec![(-10.0, 10.0); dim],
            Benchmark::Schwefel26 { .. } => vec![(-500.0, 500.0); dim],
        };
        BoundingBox::new(bounds).expect("static boxes are valid")
    }

    /// Evaluates at `x`, checking its dimension.
    pub fn eval_checked(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::Contract(format!(
                "{} expects {} coordinates, got {}",
                self.name(),
                self.dim(),
                x.len()
            )));
        }
        Ok(self.value(x))
    }

    fn value(&self, x: &[f64]) -> f64 {
        match self {
            Benchmark::HumpCamel6 => {
                let (t1, t2) = (x[0], x[1]);
                let t1s = t1 * t1;
                let t2s = t2 * t2;
                (4.0 - 2.1 * t1s + t1s * t1s / 3.0) * t1s + t1 * t2 + (-4.0 + 4.0 * t2s) * t2s
            }
            Benchmark::Langermann(p) => {
                let mut sum = 0.0;
                for i in 0..p.a.len() {
                    let r2 = (x[0] - p.a[i]).powi(2) + (x[1] - p.b[i]).powi(2);
                    sum += p.c[i] * (PI * r2).cos() / (r2 / PI).exp();
                }
                -sum
            }
            Benchmark::Wavy => {
                let s: f64 = x.iter().map(|&t| (10.0 * t).cos() * (-t * t / 2.0).exp()).sum();
                1.0 - 0.5 * s
            }
            Benchmark::HolderTable => {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                -((1.0 - r / PI).abs().exp() * x[0].sin() * x[1].cos()).abs()
            }
            Benchmark::Alpine01 { .. } => x.iter().map(|&t| (t * t.sin() + 0.1 * t).abs()).sum(),
            Benchmark::Schwefel26 { dim } => {
                418.9829 * *dim as f64 - x.iter().map(|&t| t * t.abs().sqrt().sin()).sum::<f64>()
            }
            Benchmark::XinSheYang04 { .. } => {
                let sin2: f64 = x.iter().map(|&t| t.sin().powi(2)).sum();
                let sq: f64 = x.iter().map(|&t| t * t).sum();
                let sin2_sqrt: f64 = x.iter().map(|&t| t.abs().sqrt().sin().powi(2)).sum();
                (sin2 - (-sq).exp()) * (-sin2_sqrt).exp()
            }
        }
    }
}

impl Objective for Benchmark {
    fn eval(&self, x: &[f64]) -> f64 {
        self.value(x)
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evaluates the named benchmark at `point`; the dimension is taken from the
/// point for parametric functions.
pub fn eval_benchmark(name: &str, point: &[f64]) -> Result<f64> {
    Benchmark::from_name(name, Some(point.len()))?.eval_checked(point)
}

/// Default domain of the named benchmark in dimension `dim`.
pub fn benchmark_box(name: &str, dim: usize) -> Result<BoundingBox> {
    Ok(Benchmark::from_name(name, Some(dim))?.default_box())
}
