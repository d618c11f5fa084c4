//! Synthetic benchmark problems with planted optima at `f = 0`, the
//! assembly-aware evaluation path, and the flattening encoder.
//!
//! All problems minimize. Noiseless problems evaluate deterministically and
//! return exactly 0 at their stored target bundle. Observation noise, when
//! configured, is applied by the evaluation gateway, never here: `evaluate`
//! always returns the true fitness.

mod flatten;

pub use flatten::{flatten, FlattenedEncoding, Slot, SlotKind};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StudentT};

use crate::error::{GsaError, Result};
use crate::genome::{
    family_distance, random_subgenome, Bundle, FamilyBounds, GeneFamilyKind, GeneFamilySpec,
    SubGenome,
};

pub const REAL_LOW: f64 = -1.0;
pub const REAL_HIGH: f64 = 1.0;
pub const INT_LOW: i64 = -10;
pub const INT_HIGH: i64 = 10;
pub const K_CAT: u32 = 4;
pub const K_CAT_DECEPTIVE: u32 = 3;
pub const CX_CAP: f64 = 1.0;
pub const RASTRIGIN_A: f64 = 10.0;

/// Observation noise added on top of the true fitness, per evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseModel {
    Gaussian { sigma: f64 },
    StudentT { df: f64, scale: f64 },
}

impl NoiseModel {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            NoiseModel::Gaussian { sigma } => {
                if sigma <= 0.0 {
                    0.0
                } else {
                    let z: f64 = rng.sample(rand_distr::StandardNormal);
                    z * sigma
                }
            }
            NoiseModel::StudentT { df, scale } => {
                let t = StudentT::new(df).expect("df must be positive");
                t.sample(rng) * scale
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Landscape {
    /// Sum of per-family distances to the targets; fully separable.
    Additive,
    /// `(1 - rho) * additive + rho * cross-type interaction`.
    Epistatic { rho: f64 },
    /// 4-bit Boolean traps + categorical sublandscape selection + shifted
    /// Rastrigin on the real family.
    Deceptive {
        planted_cat: u32,
        /// Rastrigin shift per category; `shifts[planted_cat]` is the target.
        shifts: Vec<Vec<f64>>,
        /// Normalization constants: Rastrigin value at the farthest box corner.
        rast_norm: Vec<f64>,
        /// Constant penalty for non-planted sublandscapes.
        offset: f64,
    },
    /// Boolean-gated real benchmark; the only assembly-aware landscape.
    Gated { include_cx: bool },
    /// `n - bit_count`, kept unnormalized.
    OneMax,
}

/// A benchmark problem: family specs, planted targets, and the evaluation
/// rule. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    name: String,
    specs: Vec<GeneFamilySpec>,
    targets: Vec<SubGenome>,
    landscape: Landscape,
    noise: Option<NoiseModel>,
}

impl Problem {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn specs(&self) -> &[GeneFamilySpec] {
        &self.specs
    }

    pub fn targets(&self) -> &[SubGenome] {
        &self.targets
    }

    /// The planted optimum as a bundle; `evaluate` returns 0 on it for
    /// noiseless problems.
    pub fn target_bundle(&self) -> Bundle {
        Bundle::new(self.targets.clone())
    }

    pub fn noise(&self) -> Option<&NoiseModel> {
        self.noise.as_ref()
    }

    /// Epistatic mixing weight; 0 for landscapes without one.
    pub fn rho(&self) -> f64 {
        match self.landscape {
            Landscape::Epistatic { rho } => rho,
            _ => 0.0,
        }
    }

    /// True when fitness depends on the assembled phenotype rather than the
    /// raw bundle alone.
    pub fn is_assembly_aware(&self) -> bool {
        matches!(self.landscape, Landscape::Gated { .. })
    }

    fn family_index(&self, kind: GeneFamilyKind) -> Option<usize> {
        self.specs.iter().position(|s| s.kind() == kind)
    }

    /// True (noise-free) fitness of a bundle, assembly-agnostic: gated
    /// problems see the raw real vector here, equivalent to passive assembly.
    pub fn evaluate(&self, bundle: &Bundle) -> f64 {
        debug_assert!(
            bundle.conforms(&self.specs),
            "bundle does not conform to problem specs"
        );
        match &self.landscape {
            Landscape::Gated { .. } => {
                let ri = self
                    .family_index(GeneFamilyKind::Real)
                    .expect("gated problem has R");
                self.gated_fitness(bundle, &bundle.parts[ri].as_reals())
            }
            _ => self.agnostic_fitness(bundle),
        }
    }

    /// Assembly-aware fitness: gated problems read the phenotype's effective
    /// real vector; every other landscape ignores the phenotype.
    pub fn evaluate_pheno(&self, bundle: &Bundle, phenotype: &crate::assembly::Phenotype) -> f64 {
        match &self.landscape {
            Landscape::Gated { .. } => self.gated_fitness(bundle, &phenotype.r_effective),
            _ => self.agnostic_fitness(bundle),
        }
    }

    fn agnostic_fitness(&self, bundle: &Bundle) -> f64 {
        match &self.landscape {
            Landscape::Additive => self.additive_fitness(bundle),
            Landscape::Epistatic { rho } => {
                let add = self.additive_fitness(bundle);
                let inter = self.interaction_fitness(bundle);
                (1.0 - rho) * add + rho * inter
            }
            Landscape::Deceptive { .. } => self.deceptive_fitness(bundle),
            Landscape::OneMax => {
                let bits = match &bundle.parts[0] {
                    SubGenome::Boolean(b) => b,
                    _ => unreachable!(),
                };
                (bits.len() - bits.iter().filter(|&&b| b).count()) as f64
            }
            Landscape::Gated { .. } => unreachable!("handled by evaluate"),
        }
    }

    fn additive_fitness(&self, bundle: &Bundle) -> f64 {
        bundle
            .parts
            .iter()
            .zip(&self.targets)
            .zip(&self.specs)
            .map(|((part, target), spec)| {
                family_distance(part, target, spec).expect("conforming bundle")
            })
            .sum()
    }

    /// Cross-type interaction term: the Boolean family gates the real
    /// penalty, `Z[0]` rotates the real target, `C[0]` shifts it.
    fn interaction_fitness(&self, bundle: &Bundle) -> f64 {
        let ri = self
            .family_index(GeneFamilyKind::Real)
            .expect("epistatic problem has R");
        let bi = self
            .family_index(GeneFamilyKind::Boolean)
            .expect("epistatic problem has B");
        let zi = self
            .family_index(GeneFamilyKind::Integer)
            .expect("epistatic problem has Z");
        let ci = self
            .family_index(GeneFamilyKind::Categorical)
            .expect("epistatic problem has C");

        let reals = match &bundle.parts[ri] {
            SubGenome::Real(v) => v,
            _ => unreachable!(),
        };
        let gates = match &bundle.parts[bi] {
            SubGenome::Boolean(v) => v,
            _ => unreachable!(),
        };
        let z0 = match &bundle.parts[zi] {
            SubGenome::Integer(v) => v[0],
            _ => unreachable!(),
        };
        let c0 = match &bundle.parts[ci] {
            SubGenome::Categorical(v) => v[0],
            _ => unreachable!(),
        };
        let target_r = match &self.targets[ri] {
            SubGenome::Real(v) => v,
            _ => unreachable!(),
        };
        let (low, high) = match self.specs[ri].bounds() {
            FamilyBounds::Real { low, high } => (low, high),
            _ => unreachable!(),
        };
        let k = match self.specs[ci].bounds() {
            FamilyBounds::Categorical { cardinality } => cardinality[0],
            _ => unreachable!(),
        };

        let dim_r = reals.len();
        let rotation = z0.rem_euclid(dim_r as i64) as usize;

        let mut gated_sum = 0.0;
        let mut gated_count = 0usize;
        for i in 0..dim_r {
            if gates[i % gates.len()] {
                let range = high[i] - low[i];
                if range > 0.0 {
                    let shifted =
                        target_r[(i + rotation) % dim_r] + 0.25 * range * c0 as f64 / k as f64;
                    let t = (reals[i] - shifted) / range;
                    gated_sum += t * t;
                }
                gated_count += 1;
            }
        }
        let gated_penalty = if gated_count == 0 {
            0.0
        } else {
            gated_sum / gated_count as f64
        };
        let bool_penalty = family_distance(&bundle.parts[bi], &self.targets[bi], &self.specs[bi])
            .expect("conforming bundle");
        gated_penalty + bool_penalty
    }

    fn deceptive_fitness(&self, bundle: &Bundle) -> f64 {
        let (planted_cat, shifts, rast_norm, offset) = match &self.landscape {
            Landscape::Deceptive {
                planted_cat,
                shifts,
                rast_norm,
                offset,
            } => (*planted_cat, shifts, rast_norm, *offset),
            _ => unreachable!(),
        };
        let ri = self
            .family_index(GeneFamilyKind::Real)
            .expect("deceptive problem has R");
        let bi = self
            .family_index(GeneFamilyKind::Boolean)
            .expect("deceptive problem has B");
        let ci = self
            .family_index(GeneFamilyKind::Categorical)
            .expect("deceptive problem has C");

        let bits = match &bundle.parts[bi] {
            SubGenome::Boolean(v) => v,
            _ => unreachable!(),
        };
        let target_bits = match &self.targets[bi] {
            SubGenome::Boolean(v) => v,
            _ => unreachable!(),
        };
        let trap: f64 = {
            let blocks = bits.len() / 4;
            let sum: f64 = (0..blocks)
                .map(|b| {
                    let u = (4 * b..4 * b + 4)
                        .filter(|&i| bits[i] == target_bits[i])
                        .count();
                    trap_block_value(u)
                })
                .sum();
            sum / blocks as f64
        };

        let c0 = match &bundle.parts[ci] {
            SubGenome::Categorical(v) => v[0],
            _ => unreachable!(),
        } as usize;
        let reals = match &bundle.parts[ri] {
            SubGenome::Real(v) => v,
            _ => unreachable!(),
        };
        let rast = rastrigin(reals, &shifts[c0]) / rast_norm[c0];
        let cat_penalty = if c0 == planted_cat as usize {
            0.0
        } else {
            offset
        };

        trap + cat_penalty + rast
    }

    /// TypedGated fitness: Hamming distance of the gates to the planted mask,
    /// squared error of `r_effective` at active positions, squared magnitude
    /// of `r_effective` at inactive positions, plus the complex family's
    /// distance to its target when present.
    fn gated_fitness(&self, bundle: &Bundle, r_effective: &[f64]) -> f64 {
        let include_cx = match &self.landscape {
            Landscape::Gated { include_cx } => *include_cx,
            _ => unreachable!(),
        };
        let ri = self
            .family_index(GeneFamilyKind::Real)
            .expect("gated problem has R");
        let bi = self
            .family_index(GeneFamilyKind::Boolean)
            .expect("gated problem has B");

        let target_mask = match &self.targets[bi] {
            SubGenome::Boolean(v) => v,
            _ => unreachable!(),
        };
        let target_r = match &self.targets[ri] {
            SubGenome::Real(v) => v,
            _ => unreachable!(),
        };
        let (low, high) = match self.specs[ri].bounds() {
            FamilyBounds::Real { low, high } => (low, high),
            _ => unreachable!(),
        };

        let hamming = family_distance(&bundle.parts[bi], &self.targets[bi], &self.specs[bi])
            .expect("conforming bundle");

        let mut active_sum = 0.0;
        let mut active_n = 0usize;
        let mut inactive_sum = 0.0;
        let mut inactive_n = 0usize;
        for i in 0..target_r.len() {
            let range = high[i] - low[i];
            if range == 0.0 {
                continue;
            }
            if target_mask[i] {
                let t = (r_effective[i] - target_r[i]) / range;
                active_sum += t * t;
                active_n += 1;
            } else {
                let t = r_effective[i] / range;
                inactive_sum += t * t;
                inactive_n += 1;
            }
        }
        let active_term = if active_n == 0 {
            0.0
        } else {
            active_sum / active_n as f64
        };
        let inactive_term = if inactive_n == 0 {
            0.0
        } else {
            inactive_sum / inactive_n as f64
        };

        let cx_term = if include_cx {
            let cxi = self
                .family_index(GeneFamilyKind::Complex)
                .expect("gated problem has Cx");
            family_distance(&bundle.parts[cxi], &self.targets[cxi], &self.specs[cxi])
                .expect("conforming bundle")
        } else {
            0.0
        };

        hamming + active_term + inactive_term + cx_term
    }
}

/// Minimization trap over one 4-bit block, `u` = bits matching the planted
/// block: 0 at `u = 4`, otherwise decreasing toward the deceptive local
/// optimum at `u = 0`.
fn trap_block_value(u: usize) -> f64 {
    if u == 4 {
        0.0
    } else {
        0.2 + 0.6 * u as f64 / 3.0
    }
}

/// Shifted Rastrigin: `A d + sum((x - s)^2 - A cos(2 pi (x - s)))`, 0 at `x = s`.
fn rastrigin(x: &[f64], shift: &[f64]) -> f64 {
    RASTRIGIN_A * x.len() as f64
        + x.iter()
            .zip(shift)
            .map(|(xi, si)| {
                let d = xi - si;
                d * d - RASTRIGIN_A * (std::f64::consts::TAU * d).cos()
            })
            .sum::<f64>()
}

/// Rastrigin value at the box corner farthest from the shift, used to keep
/// the real term comparable to the other families' unit-range penalties.
fn rastrigin_corner_norm(shift: &[f64], low: f64, high: f64) -> f64 {
    let corner: Vec<f64> = shift
        .iter()
        .map(|&s| {
            if (low - s).abs() > (high - s).abs() {
                low
            } else {
                high
            }
        })
        .collect();
    rastrigin(&corner, shift)
}

/// Splits `total` into `parts` nearly-equal sizes, remainder to the earlier
/// parts.
pub fn evenly_split(total: usize, parts: usize) -> Vec<usize> {
    let base = total / parts;
    let rem = total % parts;
    (0..parts).map(|i| base + usize::from(i < rem)).collect()
}

/// Per-family dimensions for the additive-style benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdditiveDims {
    pub real: usize,
    pub boolean: usize,
    pub integer: usize,
    pub categorical: usize,
}

impl AdditiveDims {
    /// Splits a total dimension evenly over the four families (R, B, Z, C).
    pub fn from_total(total: usize) -> Self {
        let d = evenly_split(total, 4);
        Self {
            real: d[0],
            boolean: d[1],
            integer: d[2],
            categorical: d[3],
        }
    }
}

/// Builds the R, B, Z, C families with the default bounds and the planted
/// targets: real drawn uniformly, Boolean all-true, integer zero, category
/// zero.
fn additive_families<R: Rng + ?Sized>(
    dims: &AdditiveDims,
    rng: &mut R,
) -> Result<(Vec<GeneFamilySpec>, Vec<SubGenome>)> {
    let specs = vec![
        GeneFamilySpec::real("R", dims.real, REAL_LOW, REAL_HIGH)?,
        GeneFamilySpec::boolean("B", dims.boolean)?,
        GeneFamilySpec::integer("Z", dims.integer, INT_LOW, INT_HIGH)?,
        GeneFamilySpec::categorical("C", dims.categorical, K_CAT)?,
    ];
    let target_r = random_subgenome(&specs[0], rng);
    let targets = vec![
        target_r,
        SubGenome::Boolean(vec![true; dims.boolean]),
        SubGenome::Integer(vec![0i64.clamp(INT_LOW, INT_HIGH); dims.integer]),
        SubGenome::Categorical(vec![0; dims.categorical]),
    ];
    Ok((specs, targets))
}

/// Typed Additive: sum of per-family distance penalties, fully separable.
pub fn typed_additive<R: Rng + ?Sized>(dims: &AdditiveDims, rng: &mut R) -> Result<Problem> {
    let (specs, targets) = additive_families(dims, rng)?;
    Ok(Problem {
        name: "typed_additive".into(),
        specs,
        targets,
        landscape: Landscape::Additive,
        noise: None,
    })
}

/// Typed Epistatic: additive mixed with a cross-type interaction term.
/// `rho = 0` is pointwise identical to `typed_additive` under seed-matched
/// construction; the planted bundle scores 0 for every `rho`.
pub fn typed_epistatic<R: Rng + ?Sized>(
    dims: &AdditiveDims,
    rho: f64,
    rng: &mut R,
) -> Result<Problem> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(GsaError::InvalidConfig(format!(
            "rho must be in [0, 1], got {rho}"
        )));
    }
    let (specs, targets) = additive_families(dims, rng)?;
    Ok(Problem {
        name: "typed_epistatic".into(),
        specs,
        targets,
        landscape: Landscape::Epistatic { rho },
        noise: None,
    })
}

/// Typed Noisy: the epistatic landscape with additive observation noise.
/// The stored landscape stays deterministic; the gateway adds noise per
/// evaluation and reports best true fitness.
pub fn typed_noisy<R: Rng + ?Sized>(
    dims: &AdditiveDims,
    rho: f64,
    noise: NoiseModel,
    rng: &mut R,
) -> Result<Problem> {
    let mut p = typed_epistatic(dims, rho, rng)?;
    p.name = "typed_noisy".into();
    p.noise = Some(noise);
    Ok(p)
}

/// Per-family dimensions for the deceptive benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeceptiveDims {
    pub boolean: usize,
    pub real: usize,
    pub categorical: usize,
}

impl Default for DeceptiveDims {
    fn default() -> Self {
        Self {
            boolean: 8,
            real: 8,
            categorical: 1,
        }
    }
}

/// Typed Deceptive: 4-bit Boolean traps, three categorical sublandscapes of
/// which only the planted one contains the global basin, and a shifted
/// Rastrigin real term. The Boolean dimension must be divisible by 4.
pub fn typed_deceptive<R: Rng + ?Sized>(dims: &DeceptiveDims, rng: &mut R) -> Result<Problem> {
    if dims.boolean == 0 || !dims.boolean.is_multiple_of(4) {
        return Err(GsaError::InvalidConfig(format!(
            "deceptive Boolean dim must be a positive multiple of 4, got {}",
            dims.boolean
        )));
    }
    let specs = vec![
        GeneFamilySpec::real("R", dims.real, REAL_LOW, REAL_HIGH)?,
        GeneFamilySpec::boolean("B", dims.boolean)?,
        GeneFamilySpec::categorical("C", dims.categorical, K_CAT_DECEPTIVE)?,
    ];

    // shifts drawn from the middle half of the box so no basin hugs a corner
    let mid_low = REAL_LOW + 0.25 * (REAL_HIGH - REAL_LOW);
    let mid_high = REAL_HIGH - 0.25 * (REAL_HIGH - REAL_LOW);
    let draw_shift = |rng: &mut R| -> Vec<f64> {
        (0..dims.real)
            .map(|_| rng.random_range(mid_low..mid_high))
            .collect()
    };
    let shifts: Vec<Vec<f64>> = (0..K_CAT_DECEPTIVE).map(|_| draw_shift(rng)).collect();
    let rast_norm: Vec<f64> = shifts
        .iter()
        .map(|s| rastrigin_corner_norm(s, REAL_LOW, REAL_HIGH))
        .collect();
    let planted_cat = rng.random_range(0..K_CAT_DECEPTIVE);
    let target_bits: Vec<bool> = (0..dims.boolean).map(|_| rng.random()).collect();

    let targets = vec![
        SubGenome::Real(shifts[planted_cat as usize].clone()),
        SubGenome::Boolean(target_bits),
        SubGenome::Categorical(vec![planted_cat; dims.categorical]),
    ];
    Ok(Problem {
        name: "typed_deceptive".into(),
        specs,
        targets,
        landscape: Landscape::Deceptive {
            planted_cat,
            shifts,
            rast_norm,
            offset: 0.5,
        },
        noise: None,
    })
}

/// Typed-Mix Gradient: additive distance penalties over the first
/// `n_families` of the fixed order R, B, Z, C, Cx, E, with `total_dim`
/// scalar slots split as evenly as possible. The embedding family packs its
/// allocation into 2 vectors.
pub fn typed_mix_gradient<R: Rng + ?Sized>(
    n_families: usize,
    total_dim: usize,
    rng: &mut R,
) -> Result<Problem> {
    if !(1..=6).contains(&n_families) {
        return Err(GsaError::InvalidConfig(format!(
            "n_families must be in 1..=6, got {n_families}"
        )));
    }
    let split = evenly_split(total_dim, n_families);
    let mut specs = Vec::with_capacity(n_families);
    for (idx, &d) in split.iter().enumerate() {
        if d == 0 {
            return Err(GsaError::InvalidConfig(
                "total_dim too small for n_families".into(),
            ));
        }
        let spec = match idx {
            0 => GeneFamilySpec::real("R", d, REAL_LOW, REAL_HIGH)?,
            1 => GeneFamilySpec::boolean("B", d)?,
            2 => GeneFamilySpec::integer("Z", d, INT_LOW, INT_HIGH)?,
            3 => GeneFamilySpec::categorical("C", d, K_CAT)?,
            4 => GeneFamilySpec::complex("Cx", d, CX_CAP)?,
            5 => GeneFamilySpec::embedding("E", 2, (d / 2).max(1), REAL_LOW, REAL_HIGH)?,
            _ => unreachable!(),
        };
        specs.push(spec);
    }
    let mut targets: Vec<SubGenome> = Vec::with_capacity(specs.len());
    for spec in &specs {
        let t = match spec.kind() {
            GeneFamilyKind::Real | GeneFamilyKind::Complex | GeneFamilyKind::Embedding => {
                random_subgenome(spec, rng)
            }
            GeneFamilyKind::Boolean => SubGenome::Boolean(vec![true; spec.dim()]),
            GeneFamilyKind::Integer => SubGenome::Integer(vec![0; spec.dim()]),
            GeneFamilyKind::Categorical => SubGenome::Categorical(vec![0; spec.dim()]),
        };
        targets.push(t);
    }
    Ok(Problem {
        name: format!("typed_mix_n{n_families}"),
        specs,
        targets,
        landscape: Landscape::Additive,
        noise: None,
    })
}

/// TypedGated: a benchmark whose optimum requires gating. The planted
/// Boolean mask has `round(active_fraction * dim)` true bits in shuffled
/// positions; the planted real target is meaningful at active positions and
/// zero elsewhere, so the stored target bundle scores 0 on both evaluation
/// paths. A complex family with its own planted target is included by
/// default so flattened baselines fail on this problem.
pub fn typed_gated<R: Rng + ?Sized>(
    dim_r: usize,
    active_fraction: f64,
    include_cx: bool,
    rng: &mut R,
) -> Result<Problem> {
    if !(active_fraction > 0.0 && active_fraction < 1.0) {
        return Err(GsaError::InvalidConfig(format!(
            "active_fraction must be in (0, 1), got {active_fraction}"
        )));
    }
    if dim_r < 2 {
        return Err(GsaError::InvalidConfig(
            "typed_gated needs dim_r >= 2".into(),
        ));
    }
    let mut specs = vec![
        GeneFamilySpec::real("R", dim_r, REAL_LOW, REAL_HIGH)?,
        GeneFamilySpec::boolean("B", dim_r)?,
    ];
    let n_active = ((active_fraction * dim_r as f64).round() as usize).clamp(1, dim_r - 1);
    let mut mask = vec![false; dim_r];
    for m in mask.iter_mut().take(n_active) {
        *m = true;
    }
    mask.shuffle(rng);
    let target_r: Vec<f64> = mask
        .iter()
        .map(|&active| {
            if active {
                rng.random_range(REAL_LOW..REAL_HIGH)
            } else {
                0.0
            }
        })
        .collect();
    let mut targets = vec![SubGenome::Real(target_r), SubGenome::Boolean(mask)];
    if include_cx {
        let cx_spec = GeneFamilySpec::complex("Cx", 4, CX_CAP)?;
        targets.push(random_subgenome(&cx_spec, rng));
        specs.push(cx_spec);
    }
    Ok(Problem {
        name: "typed_gated".into(),
        specs,
        targets,
        landscape: Landscape::Gated { include_cx },
        noise: None,
    })
}

/// OneMax over `n` bits, minimized: `f = n - bit_count`, 0 at all-ones.
pub fn onemax(n: usize) -> Result<Problem> {
    if n == 0 {
        return Err(GsaError::InvalidConfig("onemax needs n >= 1".into()));
    }
    Ok(Problem {
        name: "onemax".into(),
        specs: vec![GeneFamilySpec::boolean("B", n)?],
        targets: vec![SubGenome::Boolean(vec![true; n])],
        landscape: Landscape::OneMax,
        noise: None,
    })
}
