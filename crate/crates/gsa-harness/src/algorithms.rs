//! Algorithm registry: the optimizer variants plus the five flattened
//! baselines, addressable by name.

use gsa::baselines::{
    cooperative_coevolution, flattened_de, flattened_ea, mixed_variable_ga, random_flattened,
};
use gsa::benchmarks::Problem;
use gsa::engine::{make_variant, run_gsa, RunRecord, VARIANT_NAMES};

use crate::error::{HarnessError, Result};

pub const BASELINE_NAMES: [&str; 5] = [
    "RANDOM_FLATTENED",
    "FLATTENED_DE",
    "FLATTENED_EA",
    "MIXED_VARIABLE_GA",
    "COOPERATIVE_COEVOLUTION",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Algorithm {
    /// One of the named optimizer variants.
    Gsa(String),
    RandomFlattened,
    FlattenedDe,
    FlattenedEa,
    MixedVariableGa,
    CooperativeCoevolution,
}

impl Algorithm {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "RANDOM_FLATTENED" => Ok(Algorithm::RandomFlattened),
            "FLATTENED_DE" => Ok(Algorithm::FlattenedDe),
            "FLATTENED_EA" => Ok(Algorithm::FlattenedEa),
            "MIXED_VARIABLE_GA" => Ok(Algorithm::MixedVariableGa),
            "COOPERATIVE_COEVOLUTION" => Ok(Algorithm::CooperativeCoevolution),
            gsa_name if VARIANT_NAMES.contains(&gsa_name) => {
                Ok(Algorithm::Gsa(gsa_name.to_string()))
            }
            other => Err(HarnessError::Config(format!(
                "unknown algorithm {other:?}; see `list-algorithms`"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Algorithm::Gsa(v) => v,
            Algorithm::RandomFlattened => "RANDOM_FLATTENED",
            Algorithm::FlattenedDe => "FLATTENED_DE",
            Algorithm::FlattenedEa => "FLATTENED_EA",
            Algorithm::MixedVariableGa => "MIXED_VARIABLE_GA",
            Algorithm::CooperativeCoevolution => "COOPERATIVE_COEVOLUTION",
        }
    }

    /// All valid algorithm names, variants first.
    pub fn all_names() -> Vec<&'static str> {
        VARIANT_NAMES
            .iter()
            .chain(BASELINE_NAMES.iter())
            .copied()
            .collect()
    }

    /// Executes one run. Encoder failures surface as the library's typed
    /// error for the caller to record as data.
    pub fn run(&self, problem: &Problem, budget: usize, seed: u64) -> gsa::Result<RunRecord> {
        match self {
            Algorithm::Gsa(variant) => {
                let config = make_variant(variant)?.with_budget(budget);
                run_gsa(problem, &config, seed)
            }
            Algorithm::RandomFlattened => random_flattened(problem, budget, seed),
            Algorithm::FlattenedDe => flattened_de(problem, budget, seed),
            Algorithm::FlattenedEa => flattened_ea(problem, budget, seed),
            Algorithm::MixedVariableGa => mixed_variable_ga(problem, budget, seed),
            Algorithm::CooperativeCoevolution => cooperative_coevolution(problem, budget, seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_registered_name() {
        for name in Algorithm::all_names() {
            let a = Algorithm::parse(name).unwrap();
            assert_eq!(a.name(), name);
        }
        assert_eq!(Algorithm::all_names().len(), 13);
        assert!(Algorithm::parse("GSA_TYPO").is_err());
    }
}
