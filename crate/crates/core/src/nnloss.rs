//! Loss surfaces of small fully-connected regression networks, viewed as
//! scalar functions of the flattened weight vector.
//!
//! Weight layout, layer by layer from input to output: the `fan_out x fan_in`
//! weight matrix in row-major order (row = output unit), then the `fan_out`
//! biases.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::Objective;
use crate::types::BoundingBox;

pub const GRID_POINTS: usize = 101;
pub const DEFAULT_L2: f64 = 0.01;
pub const DEFAULT_WEIGHT_BOUND: f64 = 5.0;
const MAX_HIDDEN_LAYERS: usize = 3;

/// Coefficients of `g(x) = c0 sin(-x) + c1 sin(-2x) + c2 cos(x) + c3 cos(2x)`.
pub const TARGET_COEFFS: [f64; 4] = [0.31, -0.72, -0.21, 0.89];

pub fn target_g(x: f64) -> f64 {
    target_with(TARGET_COEFFS, x)
}

pub fn target_with(c: [f64; 4], x: f64) -> f64 {
    c[0] * (-x).sin() + c[1] * (-2.0 * x).sin() + c[2] * x.cos() + c[3] * (2.0 * x).cos()
}

/// The 101 inputs `-pi + 2 pi k / 100`.
pub fn input_grid() -> Vec<f64> {
    (0..GRID_POINTS).map(|k| -PI + 2.0 * PI / 100.0 * k as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Tanh,
    Relu,
    Sigmoid,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Tanh => z.tanh(),
            Activation::Relu => z.max(0.0),
            Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
        }
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tanh" => Ok(Activation::Tanh),
            "relu" => Ok(Activation::Relu),
            "sigmoid" => Ok(Activation::Sigmoid),
            other => Err(Error::Config(format!("unknown activation `{other}`"))),
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Activation::Tanh => "tanh",
            Activation::Relu => "relu",
            Activation::Sigmoid => "sigmoid",
        })
    }
}

/// Scalar-in, scalar-out MLP with 1 to 3 hidden layers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlpArchitecture {
    hidden: Vec<usize>,
    activation: Activation,
}

impl MlpArchitecture {
    pub fn new(hidden: Vec<usize>, activation: Activation) -> Result<Self> {
        if hidden.is_empty() || hidden.len() > MAX_HIDDEN_LAYERS {
            return Err(Error::Config(format!(
                "need 1 to {MAX_HIDDEN_LAYERS} hidden layers, got {}",
                hidden.len()
            )));
        }
        if hidden.contains(&0) {
            return Err(Error::Config("hidden layers must be nonempty".into()));
        }
        Ok(MlpArchitecture { hidden, activation })
    }

    /// Parses `"2"`, `"3x2"`, `"2x2x2"`.
    pub fn parse(text: &str, activation: Activation) -> Result<Self> {
        let hidden = text
            .split('x')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("bad architecture `{text}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(hidden, activation)
    }

    pub fn hidden_sizes(&self) -> &[usize] {
        &self.hidden
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    /// `(fan_in, fan_out)` of each dense layer, output layer last.
    pub fn layers(&self) -> Vec<(usize, usize)> {
        let mut sizes = vec![1];
        sizes.extend(&self.hidden);
        sizes.push(1);
        sizes.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Total parameter count `sum (fan_in + 1) * fan_out`.
    pub fn n_params(&self) -> usize {
        self.layers().iter().map(|&(i, o)| (i + 1) * o).sum()
    }

    pub fn label(&self) -> String {
        self.hidden.iter().map(ToString::to_string).collect::<Vec<_>>().join("x")
    }

    /// The weight box `[-bound, bound]^P`.
    pub fn weight_box(&self, bound: f64) -> Result<BoundingBox> {
        BoundingBox::cube(-bound, bound, self.n_params())
    }
}

/// Network output at `x`.
pub fn mlp_forward(arch: &MlpArchitecture, weights: &[f64], x: f64) -> Result<f64> {
    check_len(arch, weights)?;
    let mut buf = [Vec::new(), Vec::new()];
    Ok(forward_unchecked(arch, weights, x, &mut buf))
}

fn check_len(arch: &MlpArchitecture, weights: &[f64]) -> Result<()> {
    if weights.len() != arch.n_params() {
        return Err(Error::Contract(format!(
            "architecture {} has {} parameters, got {}",
            arch.label(),
            arch.n_params(),
            weights.len()
        )));
    }
    Ok(())
}

fn forward_unchecked(arch: &MlpArchitecture, w: &[f64], x: f64, buf: &mut [Vec<f64>; 2]) -> f64 {
    let layers = arch.layers();
    let last = layers.len() - 1;
    buf[0].clear();
    buf[0].push(x);
    let mut offset = 0;
    for (l, &(fan_in, fan_out)) in layers.iter().enumerate() {
        let (input, output) = {
            let (a, b) = buf.split_at_mut(1);
            if l % 2 == 0 {
                (&a[0], &mut b[0])
            } else {
                (&b[0], &mut a[0])
            }
        };
        output.clear();
        let matrix = &w[offset..offset + fan_in * fan_out];
        let bias = &w[offset + fan_in * fan_out..offset + (fan_in + 1) * fan_out];
        for o in 0..fan_out {
            let row = &matrix[o * fan_in..(o + 1) * fan_in];
            let z: f64 = row.iter().zip(input.iter()).map(|(a, b)| a * b).sum::<f64>() + bias[o];
            output.push(if l == last { z } else { arch.activation.apply(z) });
        }
        offset += (fan_in + 1) * fan_out;
    }
    buf[layers.len() % 2][0]
}

/// Mean squared error against `g` on the input grid plus `l2 * |w|^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossSpec {
    pub arch: MlpArchitecture,
    pub l2_coeff: f64,
}

impl LossSpec {
    pub fn new(arch: MlpArchitecture, l2_coeff: f64) -> Result<Self> {
        if !(l2_coeff >= 0.0 && l2_coeff.is_finite()) {
            return Err(Error::Config(format!("l2 coefficient must be >= 0, got {l2_coeff}")));
        }
        Ok(LossSpec { arch, l2_coeff })
    }

    /// Returns a ready-to-evaluate objective with the grid and targets cached.
    pub fn objective(&self) -> NnLoss {
        let xs = input_grid();
        let targets = xs.iter().map(|&x| target_g(x)).collect();
        NnLoss { spec: self.clone(), xs, targets }
    }
}

pub fn nn_loss(spec: &LossSpec, weights: &[f64]) -> Result<f64> {
    check_len(&spec.arch, weights)?;
    Ok(spec.objective().eval(weights))
}

/// [`LossSpec`] with the input grid and targets precomputed.
#[derive(Debug, Clone)]
pub struct NnLoss {
    spec: LossSpec,
    xs: Vec<f64>,
    targets: Vec<f64>,
}

impl NnLoss {
    pub fn spec(&self) -> &LossSpec {
        &self.spec
    }
}

impl Objective for NnLoss {
    fn eval(&self, weights: &[f64]) -> f64 {
        let mut buf = [Vec::with_capacity(4), Vec::with_capacity(4)];
        let mse = self
            .xs
            .iter()
            .zip(&self.targets)
            .map(|(&x, &t)| {
                let e = forward_unchecked(&self.spec.arch, weights, x, &mut buf) - t;
                e * e
            })
            .sum::<f64>()
            / GRID_POINTS as f64;
        let norm2: f64 = weights.iter().map(|w| w * w).sum();
        mse + self.spec.l2_coeff * norm2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arch(text: &str) -> MlpArchitecture {
        MlpArchitecture::parse(text, Activation::Tanh).unwrap()
    }

    #[test]
    fn target_values() {
        assert!((target_g(0.0) - 0.68).abs() < 1e-15);
        let bound: f64 = TARGET_COEFFS.iter().map(|c| c.abs()).sum();
        assert!((bound - 2.13).abs() < 1e-12);
        for x in input_grid() {
            assert!(target_g(x).is_finite() && target_g(x).abs() <= bound);
            assert_eq!(target_with([0.0; 4], x), 0.0);
        }
    }

    #[test]
    fn grid_endpoints() {
        let g = input_grid();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], -PI);
        assert!((g[100] - PI).abs() < 1e-12);
    }

    #[test]
    fn parameter_counts() {
        assert_eq!(arch("2").n_params(), 7);
        assert_eq!(arch("3").n_params(), 10);
        assert_eq!(arch("2x2").n_params(), 13);
        assert_eq!(arch("3x2").n_params(), 17);
        assert_eq!(arch("3x3").n_params(), 22);
        assert_eq!(arch("2x2x2").n_params(), 19);
        assert_eq!(arch("3x2x2").n_params(), 23);
        assert!(MlpArchitecture::parse("2x2x2x2", Activation::Tanh).is_err());
        assert!(MlpArchitecture::parse("2x", Activation::Tanh).is_err());
    }

    #[test]
    fn zero_weights_predict_zero() {
        for a in ["2", "3x2", "2x2x2"] {
            let a = arch(a);
            let w = vec![0.0; a.n_params()];
            for x in [-3.0, 0.0, 1.5] {
                assert_eq!(mlp_forward(&a, &w, x).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn single_unit_hand_expansion() {
        let a = arch("1");
        // [w_in, b_in, w_out, b_out]
        let w = [0.3, -0.1, 1.7, 0.25];
        for x in [-2.0, 0.0, 0.4, 3.0] {
            let expected = 1.7 * (0.3 * x - 0.1f64).tanh() + 0.25;
            assert!((mlp_forward(&a, &w, x).unwrap() - expected).abs() < 1e-15);
        }
        let relu = MlpArchitecture::parse("1", Activation::Relu).unwrap();
        assert_eq!(mlp_forward(&relu, &[1.0, -1.0, 2.0, 0.5], 0.5).unwrap(), 0.5);
    }

    #[test]
    fn wrong_length_is_contract_error() {
        assert!(matches!(mlp_forward(&arch("2"), &[0.0; 6], 0.0), Err(Error::Contract(_))));
        let spec = LossSpec::new(arch("2"), 0.0).unwrap();
        assert!(nn_loss(&spec, &[0.0; 8]).is_err());
    }

    #[test]
    fn zero_weight_loss_is_mean_square_target() {
        let spec = LossSpec::new(arch("2x2"), 0.0).unwrap();
        let loss = nn_loss(&spec, &[0.0; 13]).unwrap();
        // Mean of g(x_k)^2 over the 101-point grid.
        assert!((loss - 0.7301485148514854).abs() < 1e-12);
    }

    #[test]
    fn l2_term_is_linear() {
        let a = arch("3x2");
        let w: Vec<f64> = (0..a.n_params()).map(|i| (i as f64 * 0.37).sin()).collect();
        let norm2: f64 = w.iter().map(|x| x * x).sum();
        let base = nn_loss(&LossSpec::new(a.clone(), 0.1).unwrap(), &w).unwrap();
        let more = nn_loss(&LossSpec::new(a, 0.6).unwrap(), &w).unwrap();
        assert!((more - base - 0.5 * norm2).abs() < 1e-12);
    }

    #[test]
    fn hidden_permutation_symmetry() {
        // One hidden layer of 2: [w0, w1, b0, b1, v0, v1, c].
        let a = arch("2");
        let w = [0.4, -1.2, 0.3, 0.9, 2.0, -0.7, 0.1];
        let swapped = [-1.2, 0.4, 0.9, 0.3, -0.7, 2.0, 0.1];
        let spec = LossSpec::new(a.clone(), 0.01).unwrap();
        for x in input_grid() {
            let (p, q) = (mlp_forward(&a, &w, x).unwrap(), mlp_forward(&a, &swapped, x).unwrap());
            assert!((p - q).abs() < 1e-14);
        }
        let (l1, l2) = (nn_loss(&spec, &w).unwrap(), nn_loss(&spec, &swapped).unwrap());
        assert!((l1 - l2).abs() < 1e-13);
        assert!(l1 >= 0.0);
    }
}
