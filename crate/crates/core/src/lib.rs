//! Spectra, structured pseudospectra, numerical ranges and Jordan structure
//! of parameter-dependent matrix polynomials
//! `P_t(λ) = A_d(t)λ^d + … + A_0(t)` with `t ∈ ℝ^m`.

pub mod cli;
pub mod error;
pub mod grid;
pub mod jordan;
pub mod linalg;
pub mod model;
pub mod poly;
pub mod pseudo;
pub mod ranges;
pub mod regularity;
pub mod rng;
pub mod search;
pub mod spectral;
pub mod svg;

pub use error::{Error, Result};
