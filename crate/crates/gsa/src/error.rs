use crate::genome::GeneFamilyKind;

/// Errors surfaced by the library.
///
/// `EncoderUnsupportedFamily` is deliberately a typed, catchable variant:
/// flattened baselines fail with it on complex/embedding gene families, and
/// the harness records those failures as data rows rather than aborting.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GsaError {
    #[error("gene family kind mismatch: expected {expected:?}, got {actual:?}")]
    KindMismatch {
        expected: GeneFamilyKind,
        actual: GeneFamilyKind,
    },

    #[error("invalid gene family spec: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("flattened encoding cannot represent {0:?} gene families")]
    EncoderUnsupportedFamily(GeneFamilyKind),

    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, GsaError>;
