//! Experiment configuration: a TOML file with one section per matrix.
//!
//! ```toml
//! [matrix.core]
//! algorithms = ["GSA_FULL_ENSEMBLE", "FLATTENED_DE"]
//! seeds = 5
//! budget = 5000            # default budget for the matrix's cells
//!
//! [[matrix.core.cells]]
//! benchmark = "typed_additive"
//! dim = 20
//!
//! [[matrix.core.cells]]
//! benchmark = "typed_mix"
//! n_families = 5
//! dim = 24
//! budget = 5000            # optional per-cell override
//! ```
//!
//! Cell ids are derived from the benchmark parameters and budget, so a
//! cell's identity (and therefore every run seed hashed from it) does not
//! depend on its position in the file.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use gsa::benchmarks::{
    onemax, typed_additive, typed_deceptive, typed_epistatic, typed_gated, typed_mix_gradient,
    typed_noisy, AdditiveDims, DeceptiveDims, NoiseModel, Problem,
};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Deserialize)]
pub struct ExperimentConfig {
    pub matrix: BTreeMap<String, MatrixConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixConfig {
    pub algorithms: Vec<String>,
    /// Replicates per (cell, algorithm).
    pub seeds: u32,
    /// Default budget for cells that do not override it.
    pub budget: Option<u64>,
    pub cells: Vec<CellConfig>,
}

/// Raw per-cell table; which keys apply depends on `benchmark`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellConfig {
    pub benchmark: String,
    pub dim: Option<usize>,
    pub n_families: Option<usize>,
    pub rho: Option<f64>,
    /// "gaussian" or "student_t".
    pub noise: Option<String>,
    pub sigma: Option<f64>,
    pub df: Option<f64>,
    pub active_fraction: Option<f64>,
    pub include_cx: Option<bool>,
    pub n: Option<usize>,
    pub bool_dim: Option<usize>,
    pub real_dim: Option<usize>,
    pub cat_dim: Option<usize>,
    pub budget: Option<u64>,
}

/// A fully resolved benchmark constructor.
#[derive(Debug, Clone, PartialEq)]
pub enum BenchmarkSpec {
    TypedAdditive {
        dim: usize,
    },
    TypedEpistatic {
        dim: usize,
        rho: f64,
    },
    TypedNoisy {
        dim: usize,
        rho: f64,
        noise: NoiseModel,
    },
    TypedDeceptive {
        bool_dim: usize,
        real_dim: usize,
        cat_dim: usize,
    },
    TypedMix {
        n_families: usize,
        dim: usize,
    },
    TypedGated {
        dim: usize,
        active_fraction: f64,
        include_cx: bool,
    },
    OneMax {
        n: usize,
    },
}

impl BenchmarkSpec {
    pub fn name(&self) -> &'static str {
        match self {
            BenchmarkSpec::TypedAdditive { .. } => "typed_additive",
            BenchmarkSpec::TypedEpistatic { .. } => "typed_epistatic",
            BenchmarkSpec::TypedNoisy { .. } => "typed_noisy",
            BenchmarkSpec::TypedDeceptive { .. } => "typed_deceptive",
            BenchmarkSpec::TypedMix { .. } => "typed_mix",
            BenchmarkSpec::TypedGated { .. } => "typed_gated",
            BenchmarkSpec::OneMax { .. } => "onemax",
        }
    }

    fn id_fragment(&self) -> String {
        match self {
            BenchmarkSpec::TypedAdditive { dim } => format!("typed_additive_d{dim}"),
            BenchmarkSpec::TypedEpistatic { dim, rho } => {
                format!("typed_epistatic_d{dim}_rho{rho}")
            }
            BenchmarkSpec::TypedNoisy { dim, rho, noise } => {
                let tag = match noise {
                    NoiseModel::Gaussian { sigma } => format!("gauss{sigma}"),
                    NoiseModel::StudentT { df, scale } => format!("t{df}s{scale}"),
                };
                format!("typed_noisy_d{dim}_rho{rho}_{tag}")
            }
            BenchmarkSpec::TypedDeceptive {
                bool_dim,
                real_dim,
                cat_dim,
            } => {
                format!("typed_deceptive_b{bool_dim}_r{real_dim}_c{cat_dim}")
            }
            BenchmarkSpec::TypedMix { n_families, dim } => {
                format!("typed_mix_n{n_families}_d{dim}")
            }
            BenchmarkSpec::TypedGated {
                dim,
                active_fraction,
                include_cx,
            } => {
                let cx = if *include_cx { "_cx" } else { "" };
                format!("typed_gated_d{dim}_af{active_fraction}{cx}")
            }
            BenchmarkSpec::OneMax { n } => format!("onemax_n{n}"),
        }
    }

    /// Constructs the problem instance for one replicate; the seed drives
    /// target placement so paired algorithms face identical instances.
    pub fn build(&self, construction_seed: u64) -> Result<Problem> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(construction_seed);
        let problem = match self {
            BenchmarkSpec::TypedAdditive { dim } => {
                typed_additive(&AdditiveDims::from_total(*dim), &mut rng)?
            }
            BenchmarkSpec::TypedEpistatic { dim, rho } => {
                typed_epistatic(&AdditiveDims::from_total(*dim), *rho, &mut rng)?
            }
            BenchmarkSpec::TypedNoisy { dim, rho, noise } => typed_noisy(
                &AdditiveDims::from_total(*dim),
                *rho,
                noise.clone(),
                &mut rng,
            )?,
            BenchmarkSpec::TypedDeceptive {
                bool_dim,
                real_dim,
                cat_dim,
            } => typed_deceptive(
                &DeceptiveDims {
                    boolean: *bool_dim,
                    real: *real_dim,
                    categorical: *cat_dim,
                },
                &mut rng,
            )?,
            BenchmarkSpec::TypedMix { n_families, dim } => {
                typed_mix_gradient(*n_families, *dim, &mut rng)?
            }
            BenchmarkSpec::TypedGated {
                dim,
                active_fraction,
                include_cx,
            } => typed_gated(*dim, *active_fraction, *include_cx, &mut rng)?,
            BenchmarkSpec::OneMax { n } => onemax(*n)?,
        };
        Ok(problem)
    }
}

/// A resolved experiment cell: benchmark plus budget.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSpec {
    pub benchmark: BenchmarkSpec,
    pub budget: usize,
}

impl CellSpec {
    /// Stable identifier derived from the parameters, independent of the
    /// cell's position in the config.
    pub fn id(&self) -> String {
        format!("{}_b{}", self.benchmark.id_fragment(), self.budget)
    }
}

fn require<T>(value: Option<T>, cell: &CellConfig, key: &str) -> Result<T> {
    value.ok_or_else(|| {
        HarnessError::Config(format!("benchmark {:?} requires `{key}`", cell.benchmark))
    })
}

impl CellConfig {
    pub fn resolve(&self, default_budget: Option<u64>) -> Result<CellSpec> {
        let benchmark = match self.benchmark.as_str() {
            "typed_additive" => BenchmarkSpec::TypedAdditive {
                dim: require(self.dim, self, "dim")?,
            },
            "typed_epistatic" => BenchmarkSpec::TypedEpistatic {
                dim: require(self.dim, self, "dim")?,
                rho: self.rho.unwrap_or(0.5),
            },
            "typed_noisy" => {
                let noise = match self.noise.as_deref().unwrap_or("gaussian") {
                    "gaussian" => NoiseModel::Gaussian {
                        sigma: self.sigma.unwrap_or(0.1),
                    },
                    "student_t" => NoiseModel::StudentT {
                        df: self.df.unwrap_or(3.0),
                        scale: self.sigma.unwrap_or(0.1),
                    },
                    other => {
                        return Err(HarnessError::Config(format!(
                            "unknown noise model {other:?}; expected gaussian or student_t"
                        )))
                    }
                };
                BenchmarkSpec::TypedNoisy {
                    dim: require(self.dim, self, "dim")?,
                    rho: self.rho.unwrap_or(0.5),
                    noise,
                }
            }
            "typed_deceptive" => BenchmarkSpec::TypedDeceptive {
                bool_dim: self.bool_dim.unwrap_or(8),
                real_dim: self.real_dim.unwrap_or(8),
                cat_dim: self.cat_dim.unwrap_or(1),
            },
            "typed_mix" => BenchmarkSpec::TypedMix {
                n_families: require(self.n_families, self, "n_families")?,
                dim: require(self.dim, self, "dim")?,
            },
            "typed_gated" => BenchmarkSpec::TypedGated {
                dim: require(self.dim, self, "dim")?,
                active_fraction: self.active_fraction.unwrap_or(0.5),
                include_cx: self.include_cx.unwrap_or(true),
            },
            "onemax" => BenchmarkSpec::OneMax {
                n: require(self.n, self, "n")?,
            },
            other => {
                return Err(HarnessError::Config(format!(
                    "unknown benchmark {other:?}; see `list-benchmarks`"
                )))
            }
        };
        let budget = self.budget.or(default_budget).ok_or_else(|| {
            HarnessError::Config("cell has no budget and no matrix default".into())
        })?;
        if budget == 0 {
            return Err(HarnessError::Config("budget must be >= 1".into()));
        }
        Ok(CellSpec {
            benchmark,
            budget: budget as usize,
        })
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        if config.matrix.is_empty() {
            return Err(HarnessError::Config("config declares no matrices".into()));
        }
        for (id, m) in &config.matrix {
            if m.algorithms.is_empty() {
                return Err(HarnessError::Config(format!(
                    "matrix {id:?} lists no algorithms"
                )));
            }
            if m.seeds == 0 {
                return Err(HarnessError::Config(format!(
                    "matrix {id:?} needs seeds >= 1"
                )));
            }
            if m.cells.is_empty() {
                return Err(HarnessError::Config(format!(
                    "matrix {id:?} lists no cells"
                )));
            }
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Io(format!("reading {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// One-line descriptions for `list-benchmarks`.
pub const BENCHMARK_SUMMARIES: [(&str, &str); 7] = [
    ("typed_additive", "separable per-family distance penalties (R, B, Z, C); keys: dim, budget"),
    ("typed_epistatic", "additive plus cross-type interaction; keys: dim, rho, budget"),
    (
        "typed_noisy",
        "epistatic with observation noise; keys: dim, rho, noise (gaussian|student_t), sigma, df",
    ),
    (
        "typed_deceptive",
        "4-bit traps, 3 categorical sublandscapes, shifted Rastrigin; keys: bool_dim, real_dim, cat_dim",
    ),
    ("typed_mix", "first n_families of R, B, Z, C, Cx, E; keys: n_families, dim, budget"),
    (
        "typed_gated",
        "Boolean-gated real target, assembly-aware; keys: dim, active_fraction, include_cx",
    ),
    ("onemax", "Boolean-only, f = n - bit_count; keys: n, budget"),
];
