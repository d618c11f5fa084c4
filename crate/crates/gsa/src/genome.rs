//! Gene families, subgenome values, native distance metrics, and bundles.
//!
//! A candidate is a [`Bundle`]: one [`SubGenome`] per declared
//! [`GeneFamilySpec`], index-aligned across typed subpopulations. Each family
//! kind carries its own distance metric, normalized to `[0, 1]` so that
//! per-family penalties are directly comparable when summed by a benchmark.

use rand::Rng;

use crate::error::{GsaError, Result};

/// The six supported gene family kinds.
///
/// Permutation-valued genes are intentionally absent: no benchmark exercises
/// them and none of the operators would.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneFamilyKind {
    Integer,
    Real,
    Boolean,
    Categorical,
    Complex,
    Embedding,
}

impl GeneFamilyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GeneFamilyKind::Integer => "integer",
            GeneFamilyKind::Real => "real",
            GeneFamilyKind::Boolean => "boolean",
            GeneFamilyKind::Categorical => "categorical",
            GeneFamilyKind::Complex => "complex",
            GeneFamilyKind::Embedding => "embedding",
        }
    }
}

/// Per-kind bounds, stored per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyBounds {
    /// Inclusive `[low, high]` per coordinate.
    Integer {
        low: Vec<i64>,
        high: Vec<i64>,
    },
    /// `[low, high]` box per coordinate.
    Real {
        low: Vec<f64>,
        high: Vec<f64>,
    },
    Boolean,
    /// Cardinality per coordinate; category indices live in `[0, k)`.
    Categorical {
        cardinality: Vec<u32>,
    },
    /// Magnitude cap per coordinate; values live in the closed disk `|z| <= cap`.
    Complex {
        magnitude_cap: Vec<f64>,
    },
    /// `dim` vectors, each with `ambient_dim` coordinates in `[low, high]`.
    Embedding {
        ambient_dim: usize,
        low: f64,
        high: f64,
    },
}

/// Declares one typed gene family: kind, dimension, bounds, and a short label.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneFamilySpec {
    label: String,
    dim: usize,
    bounds: FamilyBounds,
}

impl GeneFamilySpec {
    pub fn new(label: impl Into<String>, dim: usize, bounds: FamilyBounds) -> Result<Self> {
        if dim == 0 {
            return Err(GsaError::InvalidSpec("dim must be >= 1".into()));
        }
        match &bounds {
            FamilyBounds::Integer { low, high } => {
                if low.len() != dim || high.len() != dim {
                    return Err(GsaError::InvalidSpec("integer bounds length != dim".into()));
                }
                if low.iter().zip(high).any(|(l, h)| l > h) {
                    return Err(GsaError::InvalidSpec("integer low > high".into()));
                }
            }
            FamilyBounds::Real { low, high } => {
                if low.len() != dim || high.len() != dim {
                    return Err(GsaError::InvalidSpec("real bounds length != dim".into()));
                }
                if low
                    .iter()
                    .zip(high)
                    .any(|(l, h)| l.is_nan() || h.is_nan() || l > h)
                {
                    return Err(GsaError::InvalidSpec("real low > high".into()));
                }
            }
            FamilyBounds::Boolean => {}
            FamilyBounds::Categorical { cardinality } => {
                if cardinality.len() != dim {
                    return Err(GsaError::InvalidSpec("cardinality length != dim".into()));
                }
                if cardinality.iter().any(|&k| k < 2) {
                    return Err(GsaError::InvalidSpec(
                        "categorical cardinality must be >= 2".into(),
                    ));
                }
            }
            FamilyBounds::Complex { magnitude_cap } => {
                if magnitude_cap.len() != dim {
                    return Err(GsaError::InvalidSpec("magnitude_cap length != dim".into()));
                }
                if magnitude_cap.iter().any(|&c| c.is_nan() || c < 0.0) {
                    return Err(GsaError::InvalidSpec("magnitude cap must be >= 0".into()));
                }
            }
            FamilyBounds::Embedding {
                ambient_dim,
                low,
                high,
            } => {
                if *ambient_dim == 0 {
                    return Err(GsaError::InvalidSpec(
                        "embedding ambient_dim must be >= 1".into(),
                    ));
                }
                if low.is_nan() || high.is_nan() || low > high {
                    return Err(GsaError::InvalidSpec("embedding low > high".into()));
                }
            }
        }
        Ok(Self {
            label: label.into(),
            dim,
            bounds,
        })
    }

    /// Integer family with uniform inclusive bounds.
    pub fn integer(label: impl Into<String>, dim: usize, low: i64, high: i64) -> Result<Self> {
        Self::new(
            label,
            dim,
            FamilyBounds::Integer {
                low: vec![low; dim],
                high: vec![high; dim],
            },
        )
    }

    /// Real family with a uniform box.
    pub fn real(label: impl Into<String>, dim: usize, low: f64, high: f64) -> Result<Self> {
        Self::new(
            label,
            dim,
            FamilyBounds::Real {
                low: vec![low; dim],
                high: vec![high; dim],
            },
        )
    }

    pub fn boolean(label: impl Into<String>, dim: usize) -> Result<Self> {
        Self::new(label, dim, FamilyBounds::Boolean)
    }

    /// Categorical family with uniform cardinality `k`.
    pub fn categorical(label: impl Into<String>, dim: usize, k: u32) -> Result<Self> {
        Self::new(
            label,
            dim,
            FamilyBounds::Categorical {
                cardinality: vec![k; dim],
            },
        )
    }

    /// Complex family with a uniform magnitude cap.
    pub fn complex(label: impl Into<String>, dim: usize, cap: f64) -> Result<Self> {
        Self::new(
            label,
            dim,
            FamilyBounds::Complex {
                magnitude_cap: vec![cap; dim],
            },
        )
    }

    /// Embedding family: `dim` vectors of `ambient_dim` coordinates in `[low, high]`.
    pub fn embedding(
        label: impl Into<String>,
        dim: usize,
        ambient_dim: usize,
        low: f64,
        high: f64,
    ) -> Result<Self> {
        Self::new(
            label,
            dim,
            FamilyBounds::Embedding {
                ambient_dim,
                low,
                high,
            },
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> &FamilyBounds {
        &self.bounds
    }

    pub fn kind(&self) -> GeneFamilyKind {
        match self.bounds {
            FamilyBounds::Integer { .. } => GeneFamilyKind::Integer,
            FamilyBounds::Real { .. } => GeneFamilyKind::Real,
            FamilyBounds::Boolean => GeneFamilyKind::Boolean,
            FamilyBounds::Categorical { .. } => GeneFamilyKind::Categorical,
            FamilyBounds::Complex { .. } => GeneFamilyKind::Complex,
            FamilyBounds::Embedding { .. } => GeneFamilyKind::Embedding,
        }
    }

    /// Number of scalar slots this family occupies when viewed as reals.
    pub fn scalar_len(&self) -> usize {
        match &self.bounds {
            FamilyBounds::Complex { .. } => self.dim * 2,
            FamilyBounds::Embedding { ambient_dim, .. } => self.dim * ambient_dim,
            _ => self.dim,
        }
    }
}

/// One individual's value for one gene family.
#[derive(Debug, Clone, PartialEq)]
pub enum SubGenome {
    Integer(Vec<i64>),
    Real(Vec<f64>),
    Boolean(Vec<bool>),
    Categorical(Vec<u32>),
    /// `(re, im)` pairs.
    Complex(Vec<(f64, f64)>),
    /// One raw real vector per gene; not renormalized after construction.
    Embedding(Vec<Vec<f64>>),
}

impl SubGenome {
    pub fn kind(&self) -> GeneFamilyKind {
        match self {
            SubGenome::Integer(_) => GeneFamilyKind::Integer,
            SubGenome::Real(_) => GeneFamilyKind::Real,
            SubGenome::Boolean(_) => GeneFamilyKind::Boolean,
            SubGenome::Categorical(_) => GeneFamilyKind::Categorical,
            SubGenome::Complex(_) => GeneFamilyKind::Complex,
            SubGenome::Embedding(_) => GeneFamilyKind::Embedding,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SubGenome::Integer(v) => v.len(),
            SubGenome::Real(v) => v.len(),
            SubGenome::Boolean(v) => v.len(),
            SubGenome::Categorical(v) => v.len(),
            SubGenome::Complex(v) => v.len(),
            SubGenome::Embedding(v) => v.len(),
        }
    }

    /// True when every coordinate satisfies the spec's bounds.
    pub fn conforms(&self, spec: &GeneFamilySpec) -> bool {
        if self.kind() != spec.kind() || self.dim() != spec.dim() {
            return false;
        }
        match (self, spec.bounds()) {
            (SubGenome::Integer(v), FamilyBounds::Integer { low, high }) => v
                .iter()
                .zip(low.iter().zip(high))
                .all(|(x, (l, h))| x >= l && x <= h),
            (SubGenome::Real(v), FamilyBounds::Real { low, high }) => v
                .iter()
                .zip(low.iter().zip(high))
                .all(|(x, (l, h))| x >= l && x <= h),
            (SubGenome::Boolean(_), FamilyBounds::Boolean) => true,
            (SubGenome::Categorical(v), FamilyBounds::Categorical { cardinality }) => {
                v.iter().zip(cardinality).all(|(c, k)| c < k)
            }
            (SubGenome::Complex(v), FamilyBounds::Complex { magnitude_cap }) => v
                .iter()
                .zip(magnitude_cap)
                // tiny slack for magnitudes reconstructed through polar form
                .all(|((re, im), cap)| re.hypot(*im) <= cap * (1.0 + 1e-12) + 1e-12),
            (
                SubGenome::Embedding(v),
                FamilyBounds::Embedding {
                    ambient_dim,
                    low,
                    high,
                },
            ) => v
                .iter()
                .all(|g| g.len() == *ambient_dim && g.iter().all(|x| x >= low && x <= high)),
            _ => false,
        }
    }

    /// Flattens the value into reals (bits as 0/1, categories as indices,
    /// complex as interleaved `re, im`, embeddings concatenated).
    pub fn as_reals(&self) -> Vec<f64> {
        match self {
            SubGenome::Integer(v) => v.iter().map(|&x| x as f64).collect(),
            SubGenome::Real(v) => v.clone(),
            SubGenome::Boolean(v) => v.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
            SubGenome::Categorical(v) => v.iter().map(|&c| c as f64).collect(),
            SubGenome::Complex(v) => v.iter().flat_map(|&(re, im)| [re, im]).collect(),
            SubGenome::Embedding(v) => v.iter().flatten().copied().collect(),
        }
    }
}

/// An index-aligned tuple of subgenomes, one per declared family.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub parts: Vec<SubGenome>,
}

impl Bundle {
    pub fn new(parts: Vec<SubGenome>) -> Self {
        Self { parts }
    }

    /// Checks part count, kinds, and per-coordinate bounds against the specs.
    pub fn conforms(&self, specs: &[GeneFamilySpec]) -> bool {
        self.parts.len() == specs.len() && self.parts.iter().zip(specs).all(|(p, s)| p.conforms(s))
    }
}

fn mean(sum: f64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        // similarity with the zero vector is defined as 0
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Distance between two subgenomes in their family's native metric,
/// normalized to `[0, 1]`.
///
/// Per kind: integer and real use the mean squared range-normalized
/// coordinate difference (coordinates with `low == high` contribute 0);
/// boolean uses the Hamming fraction; categorical the mismatch fraction;
/// complex the mean `|a-b|^2 / (2 cap)^2`; embedding the mean per-vector
/// `(1 - cosine) / 2`, with exact equality short-circuiting to 0.
pub fn family_distance(a: &SubGenome, b: &SubGenome, spec: &GeneFamilySpec) -> Result<f64> {
    if a.kind() != spec.kind() {
        return Err(GsaError::KindMismatch {
            expected: spec.kind(),
            actual: a.kind(),
        });
    }
    if b.kind() != spec.kind() {
        return Err(GsaError::KindMismatch {
            expected: spec.kind(),
            actual: b.kind(),
        });
    }
    if a.dim() != spec.dim() || b.dim() != spec.dim() {
        return Err(GsaError::Contract(format!(
            "distance operands must have dim {}, got {} and {}",
            spec.dim(),
            a.dim(),
            b.dim()
        )));
    }
    let d = match (a, b, spec.bounds()) {
        (SubGenome::Integer(x), SubGenome::Integer(y), FamilyBounds::Integer { low, high }) => {
            let sum: f64 = x
                .iter()
                .zip(y)
                .zip(low.iter().zip(high))
                .map(|((xi, yi), (l, h))| {
                    let range = (h - l) as f64;
                    if range == 0.0 {
                        0.0
                    } else {
                        let t = (xi - yi) as f64 / range;
                        t * t
                    }
                })
                .sum();
            mean(sum, x.len())
        }
        (SubGenome::Real(x), SubGenome::Real(y), FamilyBounds::Real { low, high }) => {
            let sum: f64 = x
                .iter()
                .zip(y)
                .zip(low.iter().zip(high))
                .map(|((xi, yi), (l, h))| {
                    let range = h - l;
                    if range == 0.0 {
                        0.0
                    } else {
                        let t = (xi - yi) / range;
                        t * t
                    }
                })
                .sum();
            mean(sum, x.len())
        }
        (SubGenome::Boolean(x), SubGenome::Boolean(y), FamilyBounds::Boolean) => {
            let mismatches = x.iter().zip(y).filter(|(a, b)| a != b).count();
            mean(mismatches as f64, x.len())
        }
        (
            SubGenome::Categorical(x),
            SubGenome::Categorical(y),
            FamilyBounds::Categorical { .. },
        ) => {
            let mismatches = x.iter().zip(y).filter(|(a, b)| a != b).count();
            mean(mismatches as f64, x.len())
        }
        (SubGenome::Complex(x), SubGenome::Complex(y), FamilyBounds::Complex { magnitude_cap }) => {
            let sum: f64 = x
                .iter()
                .zip(y)
                .zip(magnitude_cap)
                .map(|((&(xr, xi), &(yr, yi)), &cap)| {
                    if cap == 0.0 {
                        return 0.0;
                    }
                    let dr = xr - yr;
                    let di = xi - yi;
                    (dr * dr + di * di) / (4.0 * cap * cap)
                })
                .sum();
            mean(sum, x.len())
        }
        (SubGenome::Embedding(x), SubGenome::Embedding(y), FamilyBounds::Embedding { .. }) => {
            let sum: f64 = x
                .iter()
                .zip(y)
                .map(|(gx, gy)| {
                    if gx == gy {
                        0.0
                    } else {
                        (1.0 - cosine_similarity(gx, gy)) / 2.0
                    }
                })
                .sum();
            mean(sum, x.len())
        }
        _ => unreachable!("kinds checked above"),
    };
    Ok(d.clamp(0.0, 1.0))
}

/// Draws a subgenome uniformly within the spec's bounds: fair-coin bits,
/// uniform categories, complex values uniform in the magnitude disk,
/// embedding coordinates uniform in the box.
pub fn random_subgenome<R: Rng + ?Sized>(spec: &GeneFamilySpec, rng: &mut R) -> SubGenome {
    match spec.bounds() {
        FamilyBounds::Integer { low, high } => SubGenome::Integer(
            low.iter()
                .zip(high)
                .map(|(&l, &h)| rng.random_range(l..=h))
                .collect(),
        ),
        FamilyBounds::Real { low, high } => SubGenome::Real(
            low.iter()
                .zip(high)
                .map(|(&l, &h)| if h > l { rng.random_range(l..h) } else { l })
                .collect(),
        ),
        FamilyBounds::Boolean => {
            SubGenome::Boolean((0..spec.dim()).map(|_| rng.random()).collect())
        }
        FamilyBounds::Categorical { cardinality } => SubGenome::Categorical(
            cardinality
                .iter()
                .map(|&k| rng.random_range(0..k))
                .collect(),
        ),
        FamilyBounds::Complex { magnitude_cap } => SubGenome::Complex(
            magnitude_cap
                .iter()
                .map(|&cap| {
                    // uniform over the disk: radius scales with sqrt(u)
                    let r = cap * rng.random::<f64>().sqrt();
                    let theta = rng.random_range(0.0..std::f64::consts::TAU);
                    (r * theta.cos(), r * theta.sin())
                })
                .collect(),
        ),
        FamilyBounds::Embedding {
            ambient_dim,
            low,
            high,
        } => SubGenome::Embedding(
            (0..spec.dim())
                .map(|_| {
                    (0..*ambient_dim)
                        .map(|_| {
                            if high > low {
                                rng.random_range(*low..*high)
                            } else {
                                *low
                            }
                        })
                        .collect()
                })
                .collect(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_kind_specs() -> Vec<GeneFamilySpec> {
        vec![
            GeneFamilySpec::integer("Z", 4, -10, 10).unwrap(),
            GeneFamilySpec::real("R", 4, -1.0, 1.0).unwrap(),
            GeneFamilySpec::boolean("B", 4).unwrap(),
            GeneFamilySpec::categorical("C", 4, 4).unwrap(),
            GeneFamilySpec::complex("Cx", 4, 1.0).unwrap(),
            GeneFamilySpec::embedding("E", 2, 3, -1.0, 1.0).unwrap(),
        ]
    }

    #[test]
    fn spec_validation_rejects_bad_inputs() {
        assert!(GeneFamilySpec::real("r", 0, 0.0, 1.0).is_err());
        assert!(GeneFamilySpec::integer("z", 2, 5, 1).is_err());
        assert!(GeneFamilySpec::categorical("c", 2, 1).is_err());
        assert!(GeneFamilySpec::embedding("e", 1, 0, 0.0, 1.0).is_err());
    }

    #[test]
    fn boolean_distance_identity_and_maximum() {
        let spec = GeneFamilySpec::boolean("B", 4).unwrap();
        let a = SubGenome::Boolean(vec![true, true, false, false]);
        let same = a.clone();
        assert_eq!(family_distance(&a, &same, &spec).unwrap(), 0.0);

        let all_t = SubGenome::Boolean(vec![true; 4]);
        let all_f = SubGenome::Boolean(vec![false; 4]);
        assert_eq!(family_distance(&all_t, &all_f, &spec).unwrap(), 1.0);
    }

    #[test]
    fn real_distance_is_squared_range_normalized() {
        let spec = GeneFamilySpec::real("R", 1, -1.0, 1.0).unwrap();
        let a = SubGenome::Real(vec![0.5]);
        let b = SubGenome::Real(vec![0.0]);
        // (0.5 / 2)^2 = 0.0625
        assert_abs_diff_eq!(
            family_distance(&a, &b, &spec).unwrap(),
            0.0625,
            epsilon = 1e-15
        );
    }

    #[test]
    fn distance_rejects_kind_mismatch() {
        let spec = GeneFamilySpec::boolean("B", 2).unwrap();
        let a = SubGenome::Boolean(vec![true, false]);
        let b = SubGenome::Real(vec![0.0, 1.0]);
        assert!(matches!(
            family_distance(&a, &b, &spec),
            Err(GsaError::KindMismatch { .. })
        ));
    }

    #[test]
    fn degenerate_integer_bounds_force_the_value() {
        let spec = GeneFamilySpec::integer("Z", 2, 1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_subgenome(&spec, &mut rng);
        assert_eq!(g, SubGenome::Integer(vec![1, 1]));
        // and distance between identical degenerate-range values is 0, not NaN
        assert_eq!(family_distance(&g, &g, &spec).unwrap(), 0.0);
    }

    #[test]
    fn boolean_draws_are_fair() {
        let spec = GeneFamilySpec::boolean("B", 50).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 10_000;
        let mut total_bits = 0usize;
        for _ in 0..draws {
            if let SubGenome::Boolean(bits) = random_subgenome(&spec, &mut rng) {
                total_bits += bits.iter().filter(|&&b| b).count();
            }
        }
        let mean_bits = total_bits as f64 / draws as f64;
        assert!((mean_bits - 25.0).abs() < 1.0, "mean bit-sum {mean_bits}");
    }

    #[test]
    fn categorical_draws_are_uniform() {
        let spec = GeneFamilySpec::categorical("C", 1, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let draws = 10_000usize;
        let mut counts = [0usize; 3];
        for _ in 0..draws {
            if let SubGenome::Categorical(v) = random_subgenome(&spec, &mut rng) {
                counts[v[0] as usize] += 1;
            }
        }
        let expected = draws as f64 / 3.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // df = 2, p = 0.001 critical value ~ 13.8
        assert!(chi2 < 13.8, "chi-square {chi2}, counts {counts:?}");
    }

    #[test]
    fn random_subgenomes_satisfy_invariants_for_all_kinds() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for spec in all_kind_specs() {
            for _ in 0..10_000 {
                let g = random_subgenome(&spec, &mut rng);
                assert!(
                    g.conforms(&spec),
                    "out-of-bounds draw for {:?}",
                    spec.kind()
                );
            }
        }
    }

    #[test]
    fn distance_metric_properties_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for spec in all_kind_specs() {
            for _ in 0..500 {
                let a = random_subgenome(&spec, &mut rng);
                let b = random_subgenome(&spec, &mut rng);
                let dab = family_distance(&a, &b, &spec).unwrap();
                let dba = family_distance(&b, &a, &spec).unwrap();
                assert!((0.0..=1.0).contains(&dab), "{:?}: {dab}", spec.kind());
                assert_abs_diff_eq!(dab, dba, epsilon = 1e-15);
                assert_eq!(family_distance(&a, &a, &spec).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn embedding_zero_vector_has_neutral_similarity() {
        let spec = GeneFamilySpec::embedding("E", 1, 2, -1.0, 1.0).unwrap();
        let zero = SubGenome::Embedding(vec![vec![0.0, 0.0]]);
        let other = SubGenome::Embedding(vec![vec![1.0, 0.0]]);
        // cos := 0 against the zero vector, so the distance is 0.5
        assert_abs_diff_eq!(
            family_distance(&zero, &other, &spec).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_eq!(family_distance(&zero, &zero, &spec).unwrap(), 0.0);
    }

    #[test]
    fn bundle_conformance_checks_kind_alignment() {
        let specs = vec![
            GeneFamilySpec::real("R", 2, -1.0, 1.0).unwrap(),
            GeneFamilySpec::boolean("B", 2).unwrap(),
        ];
        let good = Bundle::new(vec![
            SubGenome::Real(vec![0.0, 0.5]),
            SubGenome::Boolean(vec![true, false]),
        ]);
        assert!(good.conforms(&specs));
        let swapped = Bundle::new(vec![
            SubGenome::Boolean(vec![true, false]),
            SubGenome::Real(vec![0.0, 0.5]),
        ]);
        assert!(!swapped.conforms(&specs));
    }
}
