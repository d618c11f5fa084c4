//! Flattened real-vector encoding of a problem's search space.
//!
//! This is the representation every flattened baseline shares: one real slot
//! per scalar gene, decoded by rounding, thresholding, or bucketing. Complex
//! and embedding families have no defined flattening; constructing an
//! encoding for them fails with a typed [`GsaError::EncoderUnsupportedFamily`]
//! before any evaluation happens.

use crate::error::{GsaError, Result};
use crate::genome::{Bundle, FamilyBounds, GeneFamilySpec, SubGenome};

use super::Problem;

/// What one flattened slot decodes into.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlotKind {
    Real,
    /// Round-and-clamp to `[low, high]`.
    Integer {
        low: i64,
        high: i64,
    },
    /// Threshold at 0.5 (`>= 0.5` is true).
    Boolean,
    /// `floor(x * k)` clamped to `[0, k)`.
    Categorical {
        k: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slot {
    pub kind: SlotKind,
    pub lower: f64,
    pub upper: f64,
}

/// A flattened box with per-slot decode rules and the family layout needed
/// to rebuild bundles.
#[derive(Debug, Clone, PartialEq)]
pub struct FlattenedEncoding {
    specs: Vec<GeneFamilySpec>,
    slots: Vec<Slot>,
}

impl FlattenedEncoding {
    pub fn dim(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn lower(&self) -> Vec<f64> {
        self.slots.iter().map(|s| s.lower).collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.slots.iter().map(|s| s.upper).collect()
    }

    /// Decodes a real vector into a bundle. Out-of-box values are clamped
    /// first, so any real vector decodes to a conforming bundle.
    pub fn decode(&self, x: &[f64]) -> Bundle {
        debug_assert_eq!(x.len(), self.slots.len());
        let mut parts = Vec::with_capacity(self.specs.len());
        let mut offset = 0usize;
        for spec in &self.specs {
            let d = spec.dim();
            let chunk = &x[offset..offset + d];
            let part = match spec.bounds() {
                FamilyBounds::Real { low, high } => SubGenome::Real(
                    chunk
                        .iter()
                        .zip(low.iter().zip(high))
                        .map(|(v, (&l, &h))| v.clamp(l, h))
                        .collect(),
                ),
                FamilyBounds::Integer { low, high } => SubGenome::Integer(
                    chunk
                        .iter()
                        .zip(low.iter().zip(high))
                        .map(|(v, (&l, &h))| (v.round() as i64).clamp(l, h))
                        .collect(),
                ),
                FamilyBounds::Boolean => {
                    SubGenome::Boolean(chunk.iter().map(|&v| v >= 0.5).collect())
                }
                FamilyBounds::Categorical { cardinality } => SubGenome::Categorical(
                    chunk
                        .iter()
                        .zip(cardinality)
                        .map(|(v, &k)| {
                            let c = (v.clamp(0.0, 1.0) * k as f64).floor() as u32;
                            c.min(k - 1)
                        })
                        .collect(),
                ),
                FamilyBounds::Complex { .. } | FamilyBounds::Embedding { .. } => {
                    unreachable!("rejected at construction")
                }
            };
            parts.push(part);
            offset += d;
        }
        Bundle::new(parts)
    }

    /// Encodes a bundle into the flattened box; `decode(encode(b)) == b`.
    pub fn encode(&self, bundle: &Bundle) -> Vec<f64> {
        debug_assert!(bundle.conforms(&self.specs));
        let mut out = Vec::with_capacity(self.slots.len());
        for (part, spec) in bundle.parts.iter().zip(&self.specs) {
            match (part, spec.bounds()) {
                (SubGenome::Real(v), _) => out.extend_from_slice(v),
                (SubGenome::Integer(v), _) => out.extend(v.iter().map(|&x| x as f64)),
                (SubGenome::Boolean(v), _) => {
                    out.extend(v.iter().map(|&b| if b { 1.0 } else { 0.0 }))
                }
                (SubGenome::Categorical(v), FamilyBounds::Categorical { cardinality }) => out
                    .extend(
                        v.iter()
                            .zip(cardinality)
                            .map(|(&c, &k)| (c as f64 + 0.5) / k as f64),
                    ),
                _ => unreachable!("rejected at construction"),
            }
        }
        out
    }
}

/// Builds the flattened encoding of a problem's search space, or fails with
/// `EncoderUnsupportedFamily` naming the first complex or embedding family.
pub fn flatten(problem: &Problem) -> Result<FlattenedEncoding> {
    let mut slots = Vec::new();
    for spec in problem.specs() {
        match spec.bounds() {
            FamilyBounds::Real { low, high } => {
                slots.extend(low.iter().zip(high).map(|(&l, &h)| Slot {
                    kind: SlotKind::Real,
                    lower: l,
                    upper: h,
                }));
            }
            FamilyBounds::Integer { low, high } => {
                slots.extend(low.iter().zip(high).map(|(&l, &h)| Slot {
                    kind: SlotKind::Integer { low: l, high: h },
                    lower: l as f64,
                    upper: h as f64,
                }));
            }
            FamilyBounds::Boolean => {
                slots.extend((0..spec.dim()).map(|_| Slot {
                    kind: SlotKind::Boolean,
                    lower: 0.0,
                    upper: 1.0,
                }));
            }
            FamilyBounds::Categorical { cardinality } => {
                slots.extend(cardinality.iter().map(|&k| Slot {
                    kind: SlotKind::Categorical { k },
                    lower: 0.0,
                    upper: 1.0,
                }));
            }
            FamilyBounds::Complex { .. } | FamilyBounds::Embedding { .. } => {
                return Err(GsaError::EncoderUnsupportedFamily(spec.kind()));
            }
        }
    }
    Ok(FlattenedEncoding {
        specs: problem.specs().to_vec(),
        slots,
    })
}
