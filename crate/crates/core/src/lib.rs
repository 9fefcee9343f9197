//! Kernel regression over tensor-train parameter manifolds with Hadamard
//! overparametrization, applied to multi-way data imputation with optional
//! divergence/curl graph priors.
//!
//! Modules map onto the pipeline: [`tensor`] supplies dense multi-way arrays
//! and masks, [`tt`] the tensor-train format and its fixed-rank Riemannian
//! geometry, [`kernel`] navigator/landmark extraction and kernel matrices,
//! [`graph`] incidence matrices and the flow prior, [`model`] the bilinear
//! kernel regression model and its gradients, [`optimizer`] Riemannian
//! gradient descent with Armijo backtracking, [`datagen`]/[`metrics`]/[`grid`]
//! the synthetic benchmark harness, and [`io`] the text file formats.

pub mod linalg;
pub mod scalar;
pub mod tensor;
pub mod tt;

pub use scalar::Scalar;
pub use tensor::{DenseTensor, ObservationSet};
pub use tt::{TTTangent, TTTensor};

/// Default-precision aliases used by the CLI.
pub type DenseTensor64 = tensor::DenseTensor<f64>;
pub type DenseTensor32 = tensor::DenseTensor<f32>;
pub type TTTensor64 = tt::TTTensor<f64>;
