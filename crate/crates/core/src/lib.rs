//! Sequential Bayesian optimal experimental design for sensor placement on a
//! grid-discretized advection-diffusion inverse problem.
//!
//! The crate builds up in layers:
//!
//! - [`linalg`]: matrix-free CG, a randomized double-pass generalized
//!   eigensolver, dense symmetric eigen / truncated SVD for reduced problems.
//! - [`pde`]: the time-dependent advection-diffusion solver on a regular
//!   grid with a squared-parameter initial condition, plus its sensitivity,
//!   adjoint, and Jacobian-transpose solves.
//! - [`prior`]: a Matern-class Gaussian random-field prior via an elliptic
//!   operator with Robin boundary, covariance actions, sampling, whitening.
//! - [`bayes`]: MAP estimation by inexact Newton-CG with adjoint gradients,
//!   Gauss-Newton Hessian actions, low-rank Laplace posterior, D-optimality.
//! - [`reduction`]: active-subspace / PCA dual dimension reduction and
//!   projection of training targets.
//! - [`nn`]: a small reverse-mode tape with forward-mode tangents, enough to
//!   differentiate losses that depend on network Jacobians.
//! - [`lano`]: the derivative-informed latent attention surrogate, its
//!   training loop, and the reduced MAP / eigenvalue / reward evaluations.
//! - [`rl`]: the sensor-placement MDP and actor-critic policy training.
//! - [`pipeline`]: reproducible command-level drivers behind the `sboed` CLI.
//!
//! All numeric kernels are generic over a [`Scalar`]; the pipeline and file
//! formats are pinned to [`Real`] (`f64`).

pub mod bayes;
pub mod config;
pub mod error;
pub mod grid;
pub mod io;
pub mod lano;
pub mod linalg;
pub mod nn;
pub mod pde;
pub mod pipeline;
pub mod prior;
pub mod problem;
pub mod reduction;
pub mod rl;
pub mod rng;
pub mod scalar;

pub use error::{Result, SboedError};
pub use scalar::Scalar;

/// Concrete scalar used by the pipeline, the CLI and the on-disk formats.
pub type Real = f64;
