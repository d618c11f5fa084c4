//! Typed coevolutionary optimization.
//!
//! The optimizer evolves one subpopulation per gene family (integer, real,
//! Boolean, categorical, complex, embedding), each under a variation
//! operator native to its geometry. Candidates are index-aligned bundles of
//! subgenomes; an explicit assembly operator turns a bundle into the
//! phenotype the objective sees, and pluggable credit assignment maps
//! phenotype fitness back to the participating subgenomes.
//!
//! The crate also ships the synthetic benchmark suite with planted optima,
//! the flattened-vector encoding shared by the comparison baselines (which
//! fails with a typed error on complex and embedding families), and the
//! nonparametric statistics used to compare algorithms.
//!
//! Entry points:
//! - [`engine::run_gsa`] with a [`engine::GsaConfig`] (or
//!   [`engine::make_variant`] for a named parameterization);
//! - [`baselines`] for the flattened comparison algorithms;
//! - [`benchmarks`] for problem constructors and [`benchmarks::flatten`];
//! - [`stats`] for Wilcoxon / Holm / A12 / median-IQR.

pub mod assembly;
pub mod baselines;
pub mod benchmarks;
pub mod engine;
mod error;
pub mod genome;
pub mod operators;
pub mod stats;

pub use error::{GsaError, Result};
