//! Phenotype synthesis: the assembly operator mapping a bundle to an
//! executable candidate.
//!
//! Active assembly applies Boolean gating to the real family (gate bit `i`
//! masks real coordinate `i`, wrapping modularly when dimensions differ);
//! passive assembly concatenates raw values. All families are also exposed
//! as raw real views so assembly-agnostic benchmarks can ignore the mode.

use std::collections::BTreeMap;

use crate::genome::{Bundle, GeneFamilyKind, GeneFamilySpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssemblyMode {
    Active,
    Passive,
}

/// An assembled candidate: the effective real vector plus raw per-family
/// real views, keyed by family label (with `"R_effective"` added for the
/// gated view).
#[derive(Debug, Clone, PartialEq)]
pub struct Phenotype<'a> {
    pub r_effective: Vec<f64>,
    pub features: BTreeMap<String, Vec<f64>>,
    pub source: &'a Bundle,
}

/// Assembles a bundle into a phenotype. Pure: the same bundle and mode
/// always produce the same phenotype.
///
/// Bundles without a real family get an empty `r_effective` (Boolean-only
/// problems have nothing to gate); active mode without a Boolean family
/// behaves like passive.
pub fn assemble<'a>(
    bundle: &'a Bundle,
    specs: &[GeneFamilySpec],
    mode: AssemblyMode,
) -> Phenotype<'a> {
    debug_assert_eq!(bundle.parts.len(), specs.len());
    let real_idx = specs.iter().position(|s| s.kind() == GeneFamilyKind::Real);
    let bool_idx = specs
        .iter()
        .position(|s| s.kind() == GeneFamilyKind::Boolean);

    let r_effective = match real_idx {
        None => Vec::new(),
        Some(ri) => {
            let raw = bundle.parts[ri].as_reals();
            match (mode, bool_idx) {
                (AssemblyMode::Active, Some(bi)) => {
                    let gates = match &bundle.parts[bi] {
                        crate::genome::SubGenome::Boolean(bits) => bits,
                        _ => unreachable!("spec kind checked above"),
                    };
                    raw.iter()
                        .enumerate()
                        .map(|(i, &x)| if gates[i % gates.len()] { x } else { 0.0 })
                        .collect()
                }
                _ => raw,
            }
        }
    };

    let mut features: BTreeMap<String, Vec<f64>> = specs
        .iter()
        .zip(&bundle.parts)
        .map(|(spec, part)| (spec.label().to_string(), part.as_reals()))
        .collect();
    features.insert("R_effective".to_string(), r_effective.clone());

    Phenotype {
        r_effective,
        features,
        source: bundle,
    }
}
