//! Type-native variation operators, one per gene family, plus the generic
//! Gaussian-mutate-then-decode operator used by the generic-operator ablation.
//!
//! Every operator is a pure function of its inputs and the rng stream, and
//! maps in-bounds parents to in-bounds children.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::genome::{FamilyBounds, GeneFamilySpec, SubGenome};

/// Operator parameters. Rates given as `None` default to `1/dim` at
/// application time; sigmas are fractions of the relevant range or cap,
/// except `cx_phase_sigma` which is in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorParams {
    /// DE differential weight F.
    pub de_f: f64,
    /// DE crossover rate CR.
    pub de_cr: f64,
    /// Mean geometric step as a fraction of the integer range.
    pub int_step_scale: f64,
    /// Per-bit flip probability; `None` means `1/dim`.
    pub bool_flip_rate: Option<f64>,
    /// Per-coordinate replacement probability; `None` means `1/dim`.
    pub cat_replace_rate: Option<f64>,
    /// Magnitude jitter as a fraction of the cap.
    pub cx_mag_sigma: f64,
    /// Phase jitter in radians.
    pub cx_phase_sigma: f64,
    /// Embedding rotation angle / drift sigma as a fraction of the range.
    pub emb_sigma: f64,
    /// Generic-operator noise as a fraction of each decoded slot's range.
    pub generic_sigma: f64,
}

impl Default for OperatorParams {
    fn default() -> Self {
        Self {
            de_f: 0.5,
            de_cr: 0.9,
            int_step_scale: 0.1,
            bool_flip_rate: None,
            cat_replace_rate: None,
            cx_mag_sigma: 0.1,
            cx_phase_sigma: 0.2,
            emb_sigma: 0.05,
            generic_sigma: 0.1,
        }
    }
}

fn gauss<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> f64 {
    if sigma <= 0.0 {
        0.0
    } else {
        let z: f64 = rng.sample(StandardNormal);
        z * sigma
    }
}

fn expect_real<'a>(g: &'a SubGenome, who: &str) -> &'a [f64] {
    match g {
        SubGenome::Real(v) => v,
        other => panic!("{who} expects a Real subgenome, got {:?}", other.kind()),
    }
}

/// DE/best/1/bin on a real family: mutant `v = best + F (r1 - r2)`, binomial
/// crossover with the target at rate CR with one guaranteed mutant
/// coordinate, result clamped to the box.
pub fn real_de_best_1_bin<R: Rng + ?Sized>(
    target: &SubGenome,
    best: &SubGenome,
    r1: &SubGenome,
    r2: &SubGenome,
    spec: &GeneFamilySpec,
    params: &OperatorParams,
    rng: &mut R,
) -> SubGenome {
    let t = expect_real(target, "real_de_best_1_bin");
    let b = expect_real(best, "real_de_best_1_bin");
    let x1 = expect_real(r1, "real_de_best_1_bin");
    let x2 = expect_real(r2, "real_de_best_1_bin");
    let (low, high) = match spec.bounds() {
        FamilyBounds::Real { low, high } => (low, high),
        _ => panic!("real_de_best_1_bin expects a Real spec"),
    };
    let dim = t.len();
    let forced = rng.random_range(0..dim);
    let child = (0..dim)
        .map(|j| {
            let take_mutant = j == forced || rng.random::<f64>() < params.de_cr;
            let v = if take_mutant {
                b[j] + params.de_f * (x1[j] - x2[j])
            } else {
                t[j]
            };
            v.clamp(low[j], high[j])
        })
        .collect();
    SubGenome::Real(child)
}

/// Gaussian jitter of a real parent, used when the subpopulation is too
/// small to supply the distinct members DE needs.
pub fn real_gaussian_jitter<R: Rng + ?Sized>(
    parent: &SubGenome,
    spec: &GeneFamilySpec,
    rng: &mut R,
) -> SubGenome {
    let p = expect_real(parent, "real_gaussian_jitter");
    let (low, high) = match spec.bounds() {
        FamilyBounds::Real { low, high } => (low, high),
        _ => panic!("real_gaussian_jitter expects a Real spec"),
    };
    let child = p
        .iter()
        .enumerate()
        .map(|(j, &x)| (x + gauss(rng, 0.1 * (high[j] - low[j]))).clamp(low[j], high[j]))
        .collect();
    SubGenome::Real(child)
}

/// Symmetric geometric step on `{1, 2, ...}` with mean `mean_step`.
fn geometric_step<R: Rng + ?Sized>(mean_step: f64, rng: &mut R) -> i64 {
    let magnitude = if mean_step <= 1.0 {
        1
    } else {
        let p = 1.0 / mean_step;
        let u: f64 = rng.random();
        // inversion sampling of the geometric distribution
        ((1.0 - u).ln() / (1.0 - p).ln()).floor() as i64 + 1
    };
    if rng.random::<bool>() {
        magnitude
    } else {
        -magnitude
    }
}

/// Bounded integer mutation: each coordinate is independently perturbed with
/// probability `1/dim` by a symmetric geometric step of mean
/// `int_step_scale * range`, clamped to the bounds.
pub fn integer_mutate<R: Rng + ?Sized>(
    parent: &SubGenome,
    spec: &GeneFamilySpec,
    params: &OperatorParams,
    rng: &mut R,
) -> SubGenome {
    let p = match parent {
        SubGenome::Integer(v) => v,
        other => panic!(
            "integer_mutate expects an Integer subgenome, got {:?}",
            other.kind()
        ),
    };
    let (low, high) = match spec.bounds() {
        FamilyBounds::Integer { low, high } => (low, high),
        _ => panic!("integer_mutate expects an Integer spec"),
    };
    let dim = p.len();
    let rate = 1.0 / dim as f64;
    let child = p
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            if rng.random::<f64>() < rate {
                let range = (high[j] - low[j]) as f64;
                if range == 0.0 {
                    return x;
                }
                let step = geometric_step(params.int_step_scale * range, rng);
                (x + step).clamp(low[j], high[j])
            } else {
                x
            }
        })
        .collect();
    SubGenome::Integer(child)
}

/// Bit-flip mutation: each bit flips independently with `bool_flip_rate`
/// (default `1/dim`).
pub fn bool_flip<R: Rng + ?Sized>(
    parent: &SubGenome,
    params: &OperatorParams,
    rng: &mut R,
) -> SubGenome {
    let p = match parent {
        SubGenome::Boolean(v) => v,
        other => panic!(
            "bool_flip expects a Boolean subgenome, got {:?}",
            other.kind()
        ),
    };
    let rate = params.bool_flip_rate.unwrap_or(1.0 / p.len() as f64);
    SubGenome::Boolean(
        p.iter()
            .map(|&b| if rng.random::<f64>() < rate { !b } else { b })
            .collect(),
    )
}

/// Replacement mutation: each coordinate is resampled uniformly among the
/// other `k - 1` categories with `cat_replace_rate` (default `1/dim`).
pub fn cat_mutate<R: Rng + ?Sized>(
    parent: &SubGenome,
    spec: &GeneFamilySpec,
    params: &OperatorParams,
    rng: &mut R,
) -> SubGenome {
    let p = match parent {
        SubGenome::Categorical(v) => v,
        other => panic!(
            "cat_mutate expects a Categorical subgenome, got {:?}",
            other.kind()
        ),
    };
    let cardinality = match spec.bounds() {
        FamilyBounds::Categorical { cardinality } => cardinality,
        _ => panic!("cat_mutate expects a Categorical spec"),
    };
    let rate = params.cat_replace_rate.unwrap_or(1.0 / p.len() as f64);
    SubGenome::Categorical(
        p.iter()
            .zip(cardinality)
            .map(|(&c, &k)| {
                if rng.random::<f64>() < rate {
                    let drawn = rng.random_range(0..k - 1);
                    if drawn >= c {
                        drawn + 1
                    } else {
                        drawn
                    }
                } else {
                    c
                }
            })
            .collect(),
    )
}

/// Reflects a magnitude into `[0, cap]`.
fn reflect_magnitude(mut m: f64, cap: f64) -> f64 {
    if cap == 0.0 {
        return 0.0;
    }
    loop {
        if m < 0.0 {
            m = -m;
        } else if m > cap {
            m = 2.0 * cap - m;
        } else {
            return m;
        }
    }
}

/// Complex mutation in polar form: Gaussian magnitude jitter reflected into
/// `[0, cap]`, wrapped Gaussian phase jitter.
pub fn complex_mutate<R: Rng + ?Sized>(
    parent: &SubGenome,
    spec: &GeneFamilySpec,
    params: &OperatorParams,
    rng: &mut R,
) -> SubGenome {
    let p = match parent {
        SubGenome::Complex(v) => v,
        other => panic!(
            "complex_mutate expects a Complex subgenome, got {:?}",
            other.kind()
        ),
    };
    let caps = match spec.bounds() {
        FamilyBounds::Complex { magnitude_cap } => magnitude_cap,
        _ => panic!("complex_mutate expects a Complex spec"),
    };
    SubGenome::Complex(
        p.iter()
            .zip(caps)
            .map(|(&(re, im), &cap)| {
                let r = re.hypot(im);
                let theta = im.atan2(re);
                let r2 = reflect_magnitude(r + gauss(rng, params.cx_mag_sigma * cap), cap);
                let theta2 = theta + gauss(rng, params.cx_phase_sigma);
                (r2 * theta2.cos(), r2 * theta2.sin())
            })
            .collect(),
    )
}

/// Norm-preserving rotation of `v` toward a random unit direction by a
/// Gaussian angle. Returns `None` for the zero vector, a degenerate random
/// direction, or ambient dimension 1 (no orthogonal complement).
pub fn embedding_rotate<R: Rng + ?Sized>(v: &[f64], sigma: f64, rng: &mut R) -> Option<Vec<f64>> {
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || v.len() < 2 {
        return None;
    }
    let unit: Vec<f64> = v.iter().map(|x| x / norm).collect();
    let dir: Vec<f64> = (0..v.len())
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    // component of the random direction orthogonal to v
    let along: f64 = dir.iter().zip(&unit).map(|(d, u)| d * u).sum();
    let perp: Vec<f64> = dir.iter().zip(&unit).map(|(d, u)| d - along * u).collect();
    let perp_norm: f64 = perp.iter().map(|x| x * x).sum::<f64>().sqrt();
    if perp_norm < 1e-12 {
        return None;
    }
    let theta = gauss(rng, sigma);
    let (cos_t, sin_t) = (theta.cos(), theta.sin());
    Some(
        unit.iter()
            .zip(&perp)
            .map(|(u, w)| norm * (u * cos_t + (w / perp_norm) * sin_t))
            .collect(),
    )
}

/// Coordinate-wise Gaussian drift clamped to the box.
pub fn embedding_drift<R: Rng + ?Sized>(
    v: &[f64],
    low: f64,
    high: f64,
    sigma_abs: f64,
    rng: &mut R,
) -> Vec<f64> {
    v.iter()
        .map(|&x| (x + gauss(rng, sigma_abs)).clamp(low, high))
        .collect()
}

/// Embedding mutation: per vector, with probability 0.5 apply a
/// norm-preserving rotation toward a random direction (falling through to
/// drift when the vector is zero or the rotation leaves the box); otherwise
/// apply coordinate-wise Gaussian drift clamped to the box.
pub fn embedding_mutate<R: Rng + ?Sized>(
    parent: &SubGenome,
    spec: &GeneFamilySpec,
    params: &OperatorParams,
    rng: &mut R,
) -> SubGenome {
    let p = match parent {
        SubGenome::Embedding(v) => v,
        other => panic!(
            "embedding_mutate expects an Embedding subgenome, got {:?}",
            other.kind()
        ),
    };
    let (low, high) = match spec.bounds() {
        FamilyBounds::Embedding { low, high, .. } => (*low, *high),
        _ => panic!("embedding_mutate expects an Embedding spec"),
    };
    if params.emb_sigma <= 0.0 {
        return parent.clone();
    }
    let drift_sigma = params.emb_sigma * (high - low);
    SubGenome::Embedding(
        p.iter()
            .map(|v| {
                if rng.random::<bool>() {
                    if let Some(rotated) = embedding_rotate(v, params.emb_sigma, rng) {
                        if rotated.iter().all(|x| (low..=high).contains(x)) {
                            return rotated;
                        }
                    }
                }
                embedding_drift(v, low, high, drift_sigma, rng)
            })
            .collect(),
    )
}

/// Per-scalar-slot ranges used by the generic operator's noise scale.
fn generic_ranges(spec: &GeneFamilySpec) -> Vec<f64> {
    match spec.bounds() {
        FamilyBounds::Integer { low, high } => {
            low.iter().zip(high).map(|(l, h)| (h - l) as f64).collect()
        }
        FamilyBounds::Real { low, high } => low.iter().zip(high).map(|(l, h)| h - l).collect(),
        FamilyBounds::Boolean => vec![1.0; spec.dim()],
        FamilyBounds::Categorical { cardinality } => {
            cardinality.iter().map(|&k| (k - 1) as f64).collect()
        }
        FamilyBounds::Complex { magnitude_cap } => magnitude_cap
            .iter()
            .flat_map(|&cap| [2.0 * cap, 2.0 * cap])
            .collect(),
        FamilyBounds::Embedding {
            ambient_dim,
            low,
            high,
        } => {
            vec![high - low; spec.dim() * ambient_dim]
        }
    }
}

/// Decodes a real vector back into the spec's kind: threshold at 0.5 for
/// bits, round-and-clamp for integers and categories, clamp for reals and
/// embedding coordinates, projection onto the magnitude disk for complex
/// pairs.
pub fn generic_decode(x: &[f64], spec: &GeneFamilySpec) -> SubGenome {
    match spec.bounds() {
        FamilyBounds::Integer { low, high } => SubGenome::Integer(
            x.iter()
                .zip(low.iter().zip(high))
                .map(|(v, (&l, &h))| (v.round() as i64).clamp(l, h))
                .collect(),
        ),
        FamilyBounds::Real { low, high } => SubGenome::Real(
            x.iter()
                .zip(low.iter().zip(high))
                .map(|(v, (&l, &h))| v.clamp(l, h))
                .collect(),
        ),
        FamilyBounds::Boolean => SubGenome::Boolean(x.iter().map(|&v| v >= 0.5).collect()),
        FamilyBounds::Categorical { cardinality } => SubGenome::Categorical(
            x.iter()
                .zip(cardinality)
                .map(|(v, &k)| (v.round().max(0.0) as u32).min(k - 1))
                .collect(),
        ),
        FamilyBounds::Complex { magnitude_cap } => SubGenome::Complex(
            x.chunks_exact(2)
                .zip(magnitude_cap)
                .map(|(pair, &cap)| {
                    let (re, im) = (pair[0], pair[1]);
                    let m = re.hypot(im);
                    if m > cap {
                        let s = cap / m;
                        (re * s, im * s)
                    } else {
                        (re, im)
                    }
                })
                .collect(),
        ),
        FamilyBounds::Embedding {
            ambient_dim,
            low,
            high,
        } => SubGenome::Embedding(
            x.chunks_exact(*ambient_dim)
                .map(|chunk| chunk.iter().map(|v| v.clamp(*low, *high)).collect())
                .collect(),
        ),
    }
}

/// Generic Gaussian-mutate-then-decode: flatten the parent to reals, add
/// Gaussian noise of `generic_sigma * range` per slot, decode back. Supports
/// all six kinds; this is what replaces every type-native operator in the
/// generic-operator ablation.
pub fn generic_mutate_then_decode<R: Rng + ?Sized>(
    parent: &SubGenome,
    spec: &GeneFamilySpec,
    params: &OperatorParams,
    rng: &mut R,
) -> SubGenome {
    let mut encoded = parent.as_reals();
    for (v, range) in encoded.iter_mut().zip(generic_ranges(spec)) {
        *v += gauss(rng, params.generic_sigma * range);
    }
    generic_decode(&encoded, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::random_subgenome;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn real_spec(dim: usize) -> GeneFamilySpec {
        GeneFamilySpec::real("R", dim, -1.0, 1.0).unwrap()
    }

    #[test]
    fn de_fixed_point_when_all_parents_coincide() {
        let spec = real_spec(1);
        let g = SubGenome::Real(vec![0.3]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let child = real_de_best_1_bin(&g, &g, &g, &g, &spec, &OperatorParams::default(), &mut rng);
        assert_eq!(child, g);
    }

    #[test]
    fn de_mutant_arithmetic_and_clamping() {
        let spec = real_spec(1);
        let target = SubGenome::Real(vec![0.0]);
        let best = SubGenome::Real(vec![1.0]);
        let r1 = SubGenome::Real(vec![0.4]);
        let r2 = SubGenome::Real(vec![0.2]);
        let params = OperatorParams {
            de_cr: 1.0,
            ..OperatorParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        // 1.0 + 0.5 * (0.4 - 0.2) = 1.1, clamped to the upper bound 1.0
        let child = real_de_best_1_bin(&target, &best, &r1, &r2, &spec, &params, &mut rng);
        assert_eq!(child, SubGenome::Real(vec![1.0]));
    }

    #[test]
    fn de_offspring_stay_in_bounds() {
        let spec = real_spec(6);
        let params = OperatorParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let pool: Vec<SubGenome> = (0..4).map(|_| random_subgenome(&spec, &mut rng)).collect();
            let child = real_de_best_1_bin(
                &pool[0], &pool[1], &pool[2], &pool[3], &spec, &params, &mut rng,
            );
            assert!(child.conforms(&spec));
        }
    }

    #[test]
    fn integer_mutation_degenerate_range_is_identity() {
        let spec = GeneFamilySpec::integer("Z", 3, 5, 5).unwrap();
        let parent = SubGenome::Integer(vec![5, 5, 5]);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let child = integer_mutate(&parent, &spec, &OperatorParams::default(), &mut rng);
            assert_eq!(child, parent);
        }
    }

    #[test]
    fn integer_step_magnitude_matches_geometric_mean() {
        let spec = GeneFamilySpec::integer("Z", 1, 1, 100).unwrap();
        let parent = SubGenome::Integer(vec![50]);
        let params = OperatorParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut total = 0.0;
        let mut fired = 0usize;
        for _ in 0..10_000 {
            if let SubGenome::Integer(c) = integer_mutate(&parent, &spec, &params, &mut rng) {
                assert!((1..=100).contains(&c[0]));
                if c[0] != 50 {
                    total += (c[0] - 50).abs() as f64;
                    fired += 1;
                }
            }
        }
        // dim = 1, so the mutation fires every time (modulo zero-step clamps)
        let mean_step = total / fired as f64;
        assert!(
            (mean_step - 9.9).abs() < 0.5,
            "mean |step| {mean_step}, fired {fired}"
        );
    }

    #[test]
    fn integer_mutation_rate_is_one_coordinate_per_offspring() {
        let spec = GeneFamilySpec::integer("Z", 10, -1000, 1000).unwrap();
        let parent = SubGenome::Integer(vec![0; 10]);
        let params = OperatorParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut changed = 0usize;
        let trials = 10_000;
        for _ in 0..trials {
            if let SubGenome::Integer(c) = integer_mutate(&parent, &spec, &params, &mut rng) {
                changed += c
                    .iter()
                    .zip([0i64; 10].iter())
                    .filter(|(a, b)| a != b)
                    .count();
            }
        }
        let mean_changed = changed as f64 / trials as f64;
        assert!(
            (mean_changed - 1.0).abs() < 0.1,
            "mean mutated count {mean_changed}"
        );
    }

    #[test]
    fn bool_flip_rate_edges() {
        let parent = SubGenome::Boolean(vec![true, false]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let zero = OperatorParams {
            bool_flip_rate: Some(0.0),
            ..OperatorParams::default()
        };
        assert_eq!(bool_flip(&parent, &zero, &mut rng), parent);
        let one = OperatorParams {
            bool_flip_rate: Some(1.0),
            ..OperatorParams::default()
        };
        assert_eq!(
            bool_flip(&parent, &one, &mut rng),
            SubGenome::Boolean(vec![false, true])
        );
    }

    #[test]
    fn bool_flip_expected_flip_count() {
        let parent = SubGenome::Boolean(vec![false; 50]);
        let params = OperatorParams::default(); // rate 1/50
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let trials = 10_000;
        let mut flips = 0usize;
        for _ in 0..trials {
            if let SubGenome::Boolean(c) = bool_flip(&parent, &params, &mut rng) {
                flips += c.iter().filter(|&&b| b).count();
            }
        }
        let mean_flips = flips as f64 / trials as f64;
        assert!((mean_flips - 1.0).abs() < 0.1, "mean flips {mean_flips}");
    }

    #[test]
    fn cat_mutation_replaces_with_other_categories_only() {
        let spec = GeneFamilySpec::categorical("C", 1, 3).unwrap();
        let parent = SubGenome::Categorical(vec![0]);
        let params = OperatorParams {
            cat_replace_rate: Some(1.0),
            ..OperatorParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1_000 {
            if let SubGenome::Categorical(c) = cat_mutate(&parent, &spec, &params, &mut rng) {
                assert_ne!(c[0], 0);
                assert!(c[0] < 3);
            }
        }
    }

    #[test]
    fn cat_mutation_edges() {
        let spec = GeneFamilySpec::categorical("C", 2, 2).unwrap();
        let parent = SubGenome::Categorical(vec![0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let zero = OperatorParams {
            cat_replace_rate: Some(0.0),
            ..OperatorParams::default()
        };
        assert_eq!(cat_mutate(&parent, &spec, &zero, &mut rng), parent);
        let one = OperatorParams {
            cat_replace_rate: Some(1.0),
            ..OperatorParams::default()
        };
        // k = 2 with forced replacement toggles every coordinate
        assert_eq!(
            cat_mutate(&parent, &spec, &one, &mut rng),
            SubGenome::Categorical(vec![1, 0])
        );
    }

    #[test]
    fn complex_zero_sigma_is_identity_to_machine_precision() {
        let spec = GeneFamilySpec::complex("Cx", 2, 1.0).unwrap();
        let parent = SubGenome::Complex(vec![(0.3, -0.4), (0.0, 0.9)]);
        let params = OperatorParams {
            cx_mag_sigma: 0.0,
            cx_phase_sigma: 0.0,
            ..OperatorParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        if let (SubGenome::Complex(c), SubGenome::Complex(p)) =
            (complex_mutate(&parent, &spec, &params, &mut rng), &parent)
        {
            for ((cr, ci), (pr, pi)) in c.iter().zip(p) {
                assert_abs_diff_eq!(cr, pr, epsilon = 1e-12);
                assert_abs_diff_eq!(ci, pi, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn complex_magnitude_reflects_below_cap() {
        let spec = GeneFamilySpec::complex("Cx", 1, 1.0).unwrap();
        let parent = SubGenome::Complex(vec![(1.0, 0.0)]); // at the cap
        let params = OperatorParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10_000 {
            if let SubGenome::Complex(c) = complex_mutate(&parent, &spec, &params, &mut rng) {
                let m = c[0].0.hypot(c[0].1);
                assert!(m <= 1.0 + 1e-12, "magnitude {m} exceeds cap");
            }
        }
    }

    #[test]
    fn complex_phase_only_preserves_magnitude() {
        let spec = GeneFamilySpec::complex("Cx", 1, 2.0).unwrap();
        let parent = SubGenome::Complex(vec![(0.6, 0.8)]);
        let params = OperatorParams {
            cx_mag_sigma: 0.0,
            ..OperatorParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..1_000 {
            if let SubGenome::Complex(c) = complex_mutate(&parent, &spec, &params, &mut rng) {
                assert_abs_diff_eq!(c[0].0.hypot(c[0].1), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn embedding_rotation_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..10_000 {
            let v: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if let Some(r) = embedding_rotate(&v, 0.05, &mut rng) {
                let rn: f64 = r.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!(
                    (rn - norm).abs() <= 1e-10 * norm.max(1.0),
                    "norm drifted: {norm} -> {rn}"
                );
            }
        }
    }

    #[test]
    fn embedding_zero_sigma_is_identity() {
        let spec = GeneFamilySpec::embedding("E", 2, 3, -1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let parent = random_subgenome(&spec, &mut rng);
        let params = OperatorParams {
            emb_sigma: 0.0,
            ..OperatorParams::default()
        };
        assert_eq!(embedding_mutate(&parent, &spec, &params, &mut rng), parent);
    }

    #[test]
    fn embedding_children_stay_in_the_box() {
        let spec = GeneFamilySpec::embedding("E", 2, 3, -1.0, 1.0).unwrap();
        let params = OperatorParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..10_000 {
            let parent = random_subgenome(&spec, &mut rng);
            let child = embedding_mutate(&parent, &spec, &params, &mut rng);
            assert!(child.conforms(&spec));
        }
    }

    #[test]
    fn embedding_zero_vector_falls_through_to_drift() {
        let spec = GeneFamilySpec::embedding("E", 1, 3, -1.0, 1.0).unwrap();
        let parent = SubGenome::Embedding(vec![vec![0.0, 0.0, 0.0]]);
        let params = OperatorParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let child = embedding_mutate(&parent, &spec, &params, &mut rng);
            assert!(child.conforms(&spec));
        }
    }

    #[test]
    fn generic_zero_sigma_round_trips_all_kinds() {
        let specs = vec![
            GeneFamilySpec::integer("Z", 4, -10, 10).unwrap(),
            GeneFamilySpec::real("R", 4, -1.0, 1.0).unwrap(),
            GeneFamilySpec::boolean("B", 4).unwrap(),
            GeneFamilySpec::categorical("C", 4, 4).unwrap(),
            GeneFamilySpec::complex("Cx", 4, 1.0).unwrap(),
            GeneFamilySpec::embedding("E", 2, 3, -1.0, 1.0).unwrap(),
        ];
        let params = OperatorParams {
            generic_sigma: 0.0,
            ..OperatorParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for spec in &specs {
            for _ in 0..200 {
                let parent = random_subgenome(spec, &mut rng);
                let child = generic_mutate_then_decode(&parent, spec, &params, &mut rng);
                assert_eq!(child, parent, "round-trip failed for {:?}", spec.kind());
            }
        }
    }

    #[test]
    fn generic_boolean_threshold_arithmetic() {
        let spec = GeneFamilySpec::boolean("B", 1).unwrap();
        // encoded 1.0 with noise -0.6 lands at 0.4 < 0.5, decoding to false
        assert_eq!(
            generic_decode(&[0.4], &spec),
            SubGenome::Boolean(vec![false])
        );
        // the boundary itself decodes to true
        assert_eq!(
            generic_decode(&[0.5], &spec),
            SubGenome::Boolean(vec![true])
        );
    }

    #[test]
    fn generic_integer_clamps_at_bounds() {
        let spec = GeneFamilySpec::integer("Z", 1, 1, 10).unwrap();
        assert_eq!(generic_decode(&[13.0], &spec), SubGenome::Integer(vec![10]));
        assert_eq!(generic_decode(&[-2.4], &spec), SubGenome::Integer(vec![1]));
    }

    #[test]
    fn operator_closure_for_all_kinds() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let params = OperatorParams::default();
        let cases: Vec<GeneFamilySpec> = vec![
            GeneFamilySpec::integer("Z", 5, -10, 10).unwrap(),
            GeneFamilySpec::boolean("B", 5).unwrap(),
            GeneFamilySpec::categorical("C", 5, 4).unwrap(),
            GeneFamilySpec::complex("Cx", 3, 1.0).unwrap(),
        ];
        for spec in &cases {
            for _ in 0..10_000 {
                let parent = random_subgenome(spec, &mut rng);
                let child = match spec.kind() {
                    crate::genome::GeneFamilyKind::Integer => {
                        integer_mutate(&parent, spec, &params, &mut rng)
                    }
                    crate::genome::GeneFamilyKind::Boolean => bool_flip(&parent, &params, &mut rng),
                    crate::genome::GeneFamilyKind::Categorical => {
                        cat_mutate(&parent, spec, &params, &mut rng)
                    }
                    crate::genome::GeneFamilyKind::Complex => {
                        complex_mutate(&parent, spec, &params, &mut rng)
                    }
                    _ => unreachable!(),
                };
                assert!(
                    child.conforms(spec),
                    "closure violated for {:?}",
                    spec.kind()
                );
            }
        }
    }

    #[test]
    fn generic_closure_for_all_kinds() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let params = OperatorParams::default();
        let specs = vec![
            GeneFamilySpec::integer("Z", 5, -10, 10).unwrap(),
            GeneFamilySpec::real("R", 5, -1.0, 1.0).unwrap(),
            GeneFamilySpec::boolean("B", 5).unwrap(),
            GeneFamilySpec::categorical("C", 5, 4).unwrap(),
            GeneFamilySpec::complex("Cx", 3, 1.0).unwrap(),
            GeneFamilySpec::embedding("E", 2, 2, -1.0, 1.0).unwrap(),
        ];
        for spec in &specs {
            for _ in 0..10_000 {
                let parent = random_subgenome(spec, &mut rng);
                let child = generic_mutate_then_decode(&parent, spec, &params, &mut rng);
                assert!(
                    child.conforms(spec),
                    "generic closure violated for {:?}",
                    spec.kind()
                );
            }
        }
    }

    #[test]
    fn operators_replay_deterministically() {
        let spec = GeneFamilySpec::real("R", 8, -1.0, 1.0).unwrap();
        let params = OperatorParams::default();
        let mut rng_a = ChaCha8Rng::seed_from_u64(21);
        let mut rng_b = ChaCha8Rng::seed_from_u64(21);
        let parents: Vec<SubGenome> = {
            let mut seed_rng = ChaCha8Rng::seed_from_u64(22);
            (0..4)
                .map(|_| random_subgenome(&spec, &mut seed_rng))
                .collect()
        };
        for _ in 0..100 {
            let a = real_de_best_1_bin(
                &parents[0],
                &parents[1],
                &parents[2],
                &parents[3],
                &spec,
                &params,
                &mut rng_a,
            );
            let b = real_de_best_1_bin(
                &parents[0],
                &parents[1],
                &parents[2],
                &parents[3],
                &spec,
                &params,
                &mut rng_b,
            );
            assert_eq!(a, b);
        }
    }
}
