//! Iterated function systems with probabilities (IFSp) whose unique
//! stationary distribution is a prescribed continuous law on the real line.
//!
//! For a CDF `F` with generalized inverse `F⁻¹`, the maps
//! `f_i = F⁻¹ ∘ u_i ∘ F` with `u_i(u) = (u + i - 1) / n`, each chosen with
//! probability `1/n`, have `F` as their measure-attractor. This crate builds
//! such systems (and the closed-form examples that go with them), runs the
//! forward chain and the reversed iterates, and checks the result
//! statistically.

pub mod chain;
pub mod cli;
pub mod distributions;
mod error;
pub mod export;
pub mod ifs;
pub mod stats;

pub use distributions::{ContinuousDistribution, DistributionKind};
pub use error::{Error, Result};
pub use ifs::{Ifsp, MonotoneMap};
