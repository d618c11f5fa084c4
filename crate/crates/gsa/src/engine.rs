//! The typed coevolutionary optimizer: per-family subpopulations, bundle
//! formation, credit assignment, diversity-regularized replacement, and
//! synchronous or staggered per-family update schedules.
//!
//! All named variants are parameterizations of this one engine; see
//! [`make_variant`]. A run is strictly sequential (the evaluation order
//! feeds the rng stream and the budget counter); distinct runs are
//! independent and safe to execute in parallel.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::assembly::{assemble, AssemblyMode};
use crate::benchmarks::Problem;
use crate::error::{GsaError, Result};
use crate::genome::{
    family_distance, random_subgenome, Bundle, GeneFamilyKind, GeneFamilySpec, SubGenome,
};
use crate::operators::{
    bool_flip, cat_mutate, complex_mutate, embedding_mutate, generic_mutate_then_decode,
    integer_mutate, real_de_best_1_bin, real_gaussian_jitter, OperatorParams,
};

pub(crate) const NOISE_STREAM_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Credit assignment scheme: how an assembled phenotype's fitness reaches
/// the participating subgenomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CreditScheme {
    /// Each bundle's fitness is copied to every participating subgenome.
    Direct,
    /// Each candidate is evaluated alongside the other families' elites.
    EliteContext,
    /// Each candidate is averaged over randomly sampled contexts.
    Ensemble { contexts: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorMode {
    TypeNative,
    Generic,
}

/// Per-kind update periods. A family produces offspring only on generations
/// divisible by its period; period 1 everywhere is the synchronous schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UpdateSchedule {
    pub real: u32,
    pub integer: u32,
    pub boolean: u32,
    pub categorical: u32,
    pub complex: u32,
    pub embedding: u32,
}

impl UpdateSchedule {
    pub fn synchronous() -> Self {
        Self {
            real: 1,
            integer: 1,
            boolean: 1,
            categorical: 1,
            complex: 1,
            embedding: 1,
        }
    }

    /// The staggered schedule: coefficients every generation, integers every
    /// second, structural families every fourth.
    pub fn staggered() -> Self {
        Self {
            real: 1,
            integer: 2,
            boolean: 4,
            categorical: 4,
            complex: 4,
            embedding: 4,
        }
    }

    pub fn period_for(&self, kind: GeneFamilyKind) -> u32 {
        match kind {
            GeneFamilyKind::Real => self.real,
            GeneFamilyKind::Integer => self.integer,
            GeneFamilyKind::Boolean => self.boolean,
            GeneFamilyKind::Categorical => self.categorical,
            GeneFamilyKind::Complex => self.complex,
            GeneFamilyKind::Embedding => self.embedding,
        }
    }

    fn validate(&self) -> Result<()> {
        let all = [
            self.real,
            self.integer,
            self.boolean,
            self.categorical,
            self.complex,
            self.embedding,
        ];
        if all.contains(&0) {
            return Err(GsaError::InvalidConfig(
                "update periods must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GsaConfig {
    pub pop_size: usize,
    pub credit: CreditScheme,
    pub assembly_mode: AssemblyMode,
    /// Selection blend in `(0, 1]`; 1.0 turns diversity pressure off.
    pub diversity_alpha: f64,
    /// Fraction of each subpopulation replaced per update step (steady-state
    /// turnover), at least one member.
    pub replacement_fraction: f64,
    pub operators: OperatorMode,
    pub schedule: UpdateSchedule,
    pub budget: usize,
    pub params: OperatorParams,
}

impl Default for GsaConfig {
    fn default() -> Self {
        Self {
            pop_size: 50,
            credit: CreditScheme::Ensemble { contexts: 5 },
            assembly_mode: AssemblyMode::Active,
            diversity_alpha: 0.7,
            replacement_fraction: 0.2,
            operators: OperatorMode::TypeNative,
            schedule: UpdateSchedule::synchronous(),
            budget: 5_000,
            params: OperatorParams::default(),
        }
    }
}

impl GsaConfig {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.pop_size < 4 {
            return Err(GsaError::InvalidConfig(
                "pop_size must be >= 4 (DE needs distinct members)".into(),
            ));
        }
        if self.budget < self.pop_size {
            return Err(GsaError::InvalidConfig(format!(
                "budget {} is below pop_size {}",
                self.budget, self.pop_size
            )));
        }
        if !(self.diversity_alpha > 0.0 && self.diversity_alpha <= 1.0) {
            return Err(GsaError::InvalidConfig(
                "diversity_alpha must be in (0, 1]".into(),
            ));
        }
        if !(self.replacement_fraction > 0.0 && self.replacement_fraction <= 1.0) {
            return Err(GsaError::InvalidConfig(
                "replacement_fraction must be in (0, 1]".into(),
            ));
        }
        if let CreditScheme::Ensemble { contexts } = self.credit {
            if contexts == 0 {
                return Err(GsaError::InvalidConfig(
                    "ensemble contexts must be >= 1".into(),
                ));
            }
        }
        self.schedule.validate()
    }
}

pub const VARIANT_NAMES: [&str; 8] = [
    "GSA_FULL_ENSEMBLE",
    "GSA_DIRECT",
    "GSA_ELITE_CONTEXT",
    "GSA_NO_DIVERSITY",
    "GSA_GENERIC_OPERATORS",
    "GSA_NO_ASSEMBLY",
    "GSA_ASYNC",
    "GSA_ASYNC_DIRECT",
];

/// Returns the named variant's configuration. All variants share the
/// defaults (pop 50, type-native operators, active assembly, alpha 0.7,
/// ensemble credit with 5 contexts) and change exactly one knob each,
/// except the asynchronous pair which swaps in the staggered schedule.
pub fn make_variant(name: &str) -> Result<GsaConfig> {
    let base = GsaConfig::default();
    match name {
        "GSA_FULL_ENSEMBLE" => Ok(base),
        "GSA_DIRECT" => Ok(GsaConfig {
            credit: CreditScheme::Direct,
            ..base
        }),
        "GSA_ELITE_CONTEXT" => Ok(GsaConfig {
            credit: CreditScheme::EliteContext,
            ..base
        }),
        "GSA_NO_DIVERSITY" => Ok(GsaConfig {
            diversity_alpha: 1.0,
            ..base
        }),
        "GSA_GENERIC_OPERATORS" => Ok(GsaConfig {
            operators: OperatorMode::Generic,
            ..base
        }),
        "GSA_NO_ASSEMBLY" => Ok(GsaConfig {
            assembly_mode: AssemblyMode::Passive,
            ..base
        }),
        "GSA_ASYNC" => Ok(GsaConfig {
            schedule: UpdateSchedule::staggered(),
            ..base
        }),
        "GSA_ASYNC_DIRECT" => Ok(GsaConfig {
            schedule: UpdateSchedule::staggered(),
            credit: CreditScheme::Direct,
            ..base
        }),
        other => Err(GsaError::InvalidConfig(format!(
            "unknown variant {other:?}; valid names: {}",
            VARIANT_NAMES.join(", ")
        ))),
    }
}

/// Signals that the evaluation budget ran out; the caller stops immediately
/// and discards any partial generation state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetExhausted;

/// The single chokepoint for fitness evaluations: budget accounting, noise
/// application, best-so-far tracking, and the assembly-aware dispatch all
/// live here. Algorithms see observed fitness; the record keeps true
/// fitness.
pub struct EvalGateway<'a> {
    problem: &'a Problem,
    assembly: Option<AssemblyMode>,
    budget: usize,
    used: usize,
    noise_rng: ChaCha8Rng,
    best_true: f64,
    best_bundle: Option<Bundle>,
    trace: Vec<(usize, f64)>,
}

impl<'a> EvalGateway<'a> {
    pub fn new(
        problem: &'a Problem,
        assembly: Option<AssemblyMode>,
        budget: usize,
        noise_seed: u64,
    ) -> Self {
        Self {
            problem,
            assembly,
            budget,
            used: 0,
            noise_rng: ChaCha8Rng::seed_from_u64(noise_seed),
            best_true: f64::INFINITY,
            best_bundle: None,
            trace: Vec::new(),
        }
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn remaining(&self) -> usize {
        self.budget - self.used
    }

    /// Evaluates a bundle, charging one unit of budget. Returns the observed
    /// fitness (true fitness plus noise, when the problem is noisy).
    pub fn evaluate(&mut self, bundle: &Bundle) -> std::result::Result<f64, BudgetExhausted> {
        if self.used >= self.budget {
            return Err(BudgetExhausted);
        }
        let true_f = match self.assembly {
            Some(mode) if self.problem.is_assembly_aware() => {
                let phenotype = assemble(bundle, self.problem.specs(), mode);
                self.problem.evaluate_pheno(bundle, &phenotype)
            }
            _ => self.problem.evaluate(bundle),
        };
        self.used += 1;
        debug_assert!(self.used <= self.budget);
        if true_f < self.best_true {
            self.best_true = true_f;
            self.best_bundle = Some(bundle.clone());
        }
        self.trace.push((self.used, self.best_true));
        let observed = match self.problem.noise() {
            Some(model) => true_f + model.sample(&mut self.noise_rng),
            None => true_f,
        };
        Ok(observed)
    }

    pub(crate) fn into_record_parts(self) -> (usize, f64, Option<Bundle>, Vec<(usize, f64)>) {
        (self.used, self.best_true, self.best_bundle, self.trace)
    }
}

/// One optimization run's trace and outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    pub evaluations_used: usize,
    /// Best true fitness found (noise excluded for noisy problems).
    pub final_best_fitness: f64,
    pub final_best_bundle: Bundle,
    /// `(evaluation index, best-so-far true fitness)` per evaluation.
    pub best_fitness_trace: Vec<(usize, f64)>,
    /// Evaluations spent on the initial population sweep.
    pub bootstrap_evaluations: usize,
    /// Completed outer generations after the bootstrap.
    pub generations_completed: usize,
    /// Evaluations consumed by each completed generation.
    pub evaluations_per_generation: Vec<usize>,
    /// Offspring/replacement steps applied per family (empty for baselines).
    pub family_update_counts: Vec<usize>,
    /// Times the real-family operator fell back to Gaussian jitter because
    /// the subpopulation could not supply four distinct members.
    pub de_jitter_fallbacks: usize,
}

/// A typed subpopulation: members of one family plus their assigned credits
/// (lower is better).
#[derive(Debug, Clone, PartialEq)]
pub struct SubPopulation {
    pub members: Vec<SubGenome>,
    pub credits: Vec<f64>,
}

impl SubPopulation {
    /// Index of the best-credited member; ties break to the lowest index.
    pub fn elite_index(&self) -> usize {
        let mut best = 0;
        for i in 1..self.credits.len() {
            if self.credits[i] < self.credits[best] {
                best = i;
            }
        }
        best
    }

    pub fn elite(&self) -> &SubGenome {
        &self.members[self.elite_index()]
    }
}

/// Copies the per-bundle fitnesses into credits for one family: member `i`
/// earns bundle `i`'s fitness. Costs nothing beyond the bundle sweep itself.
pub fn credit_direct(bundle_fitnesses: &[f64]) -> Vec<f64> {
    bundle_fitnesses.to_vec()
}

/// Evaluates each candidate of family `family_index` in a bundle completed
/// by the other families' elites; one evaluation per candidate.
pub fn credit_elite(
    candidates: &[SubGenome],
    family_index: usize,
    elites: &[SubGenome],
    gateway: &mut EvalGateway,
) -> std::result::Result<Vec<f64>, BudgetExhausted> {
    let mut credits = Vec::with_capacity(candidates.len());
    for candidate in candidates {
        let parts = elites
            .iter()
            .enumerate()
            .map(|(k, elite)| {
                if k == family_index {
                    candidate.clone()
                } else {
                    elite.clone()
                }
            })
            .collect();
        credits.push(gateway.evaluate(&Bundle::new(parts))?);
    }
    Ok(credits)
}

/// Ensemble credit for family `family_index`: each candidate is first
/// evaluated in its index-aligned bundle (the direct sweep share of the
/// accounting), then against `contexts` randomly sampled contexts; its
/// credit is the mean of the context evaluations.
///
/// The same `contexts` tuples are shared by every candidate of the family
/// for this generation: with per-candidate resampling the context variance
/// swamps the candidates' own fitness differences and the credit ranking
/// degenerates toward noise at small generation counts.
pub fn credit_ensemble<R: Rng + ?Sized>(
    candidates: &[SubGenome],
    family_index: usize,
    populations: &[Vec<SubGenome>],
    contexts: usize,
    gateway: &mut EvalGateway,
    rng: &mut R,
) -> std::result::Result<Vec<f64>, BudgetExhausted> {
    // one shared context set: for each context, one uniform member index per
    // other family
    let context_picks: Vec<Vec<usize>> = (0..contexts)
        .map(|_| {
            populations
                .iter()
                .enumerate()
                .map(|(k, pop)| {
                    if k == family_index {
                        0 // unused slot
                    } else {
                        rng.random_range(0..pop.len())
                    }
                })
                .collect()
        })
        .collect();

    let mut credits = Vec::with_capacity(candidates.len());
    for (j, candidate) in candidates.iter().enumerate() {
        let aligned = Bundle::new(
            populations
                .iter()
                .enumerate()
                .map(|(k, pop)| {
                    if k == family_index {
                        candidate.clone()
                    } else {
                        pop[j].clone()
                    }
                })
                .collect(),
        );
        gateway.evaluate(&aligned)?;

        let mut acc = 0.0;
        for picks in &context_picks {
            let parts = populations
                .iter()
                .enumerate()
                .map(|(k, pop)| {
                    if k == family_index {
                        candidate.clone()
                    } else {
                        pop[picks[k]].clone()
                    }
                })
                .collect();
            acc += gateway.evaluate(&Bundle::new(parts))?;
        }
        credits.push(acc / contexts as f64);
    }
    Ok(credits)
}

/// Diversity-regularized steady-state replacement. Parents and offspring
/// are pooled and scored by `alpha * rank_by_credit + (1 - alpha) *
/// rank_by_diversity` (diversity = mean distance to the pool, more distant
/// ranking better); the `turnover` worst-scored parents are replaced by the
/// `turnover` best-scored offspring, and the best-credited individual
/// always survives. `alpha = 1` scores by credit alone (diversity off).
///
/// The turnover cap is what lets the real family converge: replacing the
/// whole population each generation contracts the subpopulation faster than
/// its center can travel, and the differential operator strands on a
/// non-optimal point with its difference vectors collapsed.
pub fn diversity_select(
    parents: &SubPopulation,
    offspring: Vec<SubGenome>,
    offspring_credits: Vec<f64>,
    alpha: f64,
    spec: &GeneFamilySpec,
    turnover: usize,
) -> SubPopulation {
    debug_assert_eq!(offspring.len(), offspring_credits.len());
    let pool_members: Vec<&SubGenome> = parents.members.iter().chain(offspring.iter()).collect();
    let pool_credits: Vec<f64> = parents
        .credits
        .iter()
        .copied()
        .chain(offspring_credits.iter().copied())
        .collect();
    let n = pool_members.len();
    let keep = parents.members.len();
    let turnover = turnover.clamp(1, keep.min(offspring.len()));

    let rank_positions = |key: &dyn Fn(usize) -> f64| -> Vec<usize> {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
        let mut ranks = vec![0usize; n];
        for (pos, &idx) in order.iter().enumerate() {
            ranks[idx] = pos;
        }
        ranks
    };

    let credit_ranks = rank_positions(&|i| pool_credits[i]);
    let scores: Vec<f64> = if alpha >= 1.0 {
        credit_ranks.iter().map(|&r| r as f64).collect()
    } else {
        let mut mean_dist = vec![0.0f64; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = family_distance(pool_members[i], pool_members[j], spec)
                    .expect("pool members share the spec");
                mean_dist[i] += d;
                mean_dist[j] += d;
            }
        }
        for m in &mut mean_dist {
            *m /= n as f64;
        }
        // more distant is better, so rank the negated mean distance
        let diversity_ranks = rank_positions(&|i| -mean_dist[i]);
        credit_ranks
            .iter()
            .zip(&diversity_ranks)
            .map(|(&rc, &rd)| alpha * rc as f64 + (1.0 - alpha) * rd as f64)
            .collect()
    };

    // pair the worst-scored parents against the best-scored offspring and
    // swap only where the child actually scores better
    let mut parent_order: Vec<usize> = (0..keep).collect();
    parent_order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    let mut child_order: Vec<usize> = (keep..n).collect();
    child_order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));

    let mut evicted: Vec<usize> = Vec::with_capacity(turnover);
    let mut inserted: Vec<usize> = Vec::with_capacity(turnover);
    for slot in 0..turnover {
        let parent = parent_order[keep - 1 - slot];
        let child = child_order[slot];
        if scores[child] < scores[parent] {
            evicted.push(parent);
            inserted.push(child);
        }
    }
    let mut survivors: Vec<usize> = (0..keep).filter(|i| !evicted.contains(i)).collect();
    survivors.extend(&inserted);

    // the elite survives regardless of its blended score
    let mut elite = 0;
    for i in 1..n {
        if pool_credits[i] < pool_credits[elite] {
            elite = i;
        }
    }
    if !survivors.contains(&elite) {
        let worst_slot = (0..keep)
            .max_by(|&a, &b| scores[survivors[a]].total_cmp(&scores[survivors[b]]))
            .expect("non-empty survivor set");
        survivors[worst_slot] = elite;
    }

    SubPopulation {
        members: survivors.iter().map(|&i| pool_members[i].clone()).collect(),
        credits: survivors.iter().map(|&i| pool_credits[i]).collect(),
    }
}

/// DE/best/1/bin offspring for one real-family member, falling back to
/// Gaussian jitter when fewer than four distinct members exist. Returns the
/// child and whether the fallback fired.
fn real_offspring<R: Rng + ?Sized>(
    pop: &SubPopulation,
    index: usize,
    spec: &GeneFamilySpec,
    params: &OperatorParams,
    rng: &mut R,
) -> (SubGenome, bool) {
    let n = pop.members.len();
    if n < 4 {
        return (real_gaussian_jitter(&pop.members[index], spec, rng), true);
    }
    let best = pop.elite_index();
    let mut r1 = rng.random_range(0..n);
    while r1 == index {
        r1 = rng.random_range(0..n);
    }
    let mut r2 = rng.random_range(0..n);
    while r2 == index || r2 == r1 {
        r2 = rng.random_range(0..n);
    }
    let child = real_de_best_1_bin(
        &pop.members[index],
        &pop.members[best],
        &pop.members[r1],
        &pop.members[r2],
        spec,
        params,
        rng,
    );
    (child, false)
}

struct GsaRun<'a> {
    config: &'a GsaConfig,
    specs: &'a [GeneFamilySpec],
    pops: Vec<SubPopulation>,
    rng: ChaCha8Rng,
    gateway: EvalGateway<'a>,
    family_update_counts: Vec<usize>,
    de_jitter_fallbacks: usize,
}

impl<'a> GsaRun<'a> {
    /// Index-aligned bundle at `index`, taking offspring for families that
    /// produced them this generation and current members elsewhere.
    fn compose_bundle(&self, index: usize, offspring: &[Option<Vec<SubGenome>>]) -> Bundle {
        Bundle::new(
            self.pops
                .iter()
                .zip(offspring)
                .map(|(pop, off)| match off {
                    Some(children) => children[index].clone(),
                    None => pop.members[index].clone(),
                })
                .collect(),
        )
    }

    fn make_offspring(&mut self, family: usize) -> Vec<SubGenome> {
        let spec = &self.specs[family];
        let params = &self.config.params;
        let n = self.pops[family].members.len();
        let mut children = Vec::with_capacity(n);
        for i in 0..n {
            let child = match self.config.operators {
                OperatorMode::Generic => generic_mutate_then_decode(
                    &self.pops[family].members[i],
                    spec,
                    params,
                    &mut self.rng,
                ),
                OperatorMode::TypeNative => match spec.kind() {
                    GeneFamilyKind::Real => {
                        let (child, fell_back) =
                            real_offspring(&self.pops[family], i, spec, params, &mut self.rng);
                        if fell_back {
                            self.de_jitter_fallbacks += 1;
                        }
                        child
                    }
                    GeneFamilyKind::Integer => {
                        integer_mutate(&self.pops[family].members[i], spec, params, &mut self.rng)
                    }
                    GeneFamilyKind::Boolean => {
                        bool_flip(&self.pops[family].members[i], params, &mut self.rng)
                    }
                    GeneFamilyKind::Categorical => {
                        cat_mutate(&self.pops[family].members[i], spec, params, &mut self.rng)
                    }
                    GeneFamilyKind::Complex => {
                        complex_mutate(&self.pops[family].members[i], spec, params, &mut self.rng)
                    }
                    GeneFamilyKind::Embedding => {
                        embedding_mutate(&self.pops[family].members[i], spec, params, &mut self.rng)
                    }
                },
            };
            children.push(child);
        }
        children
    }

    /// One outer generation: offspring for every family whose period divides
    /// the generation counter, credit assignment, then replacement. On
    /// budget exhaustion the partial generation is discarded.
    fn generation(&mut self, gen: u64) -> std::result::Result<bool, BudgetExhausted> {
        let updating: Vec<usize> = self
            .specs
            .iter()
            .enumerate()
            .filter(|(_, s)| gen.is_multiple_of(self.config.schedule.period_for(s.kind()) as u64))
            .map(|(k, _)| k)
            .collect();
        if updating.is_empty() {
            return Ok(false);
        }

        let mut offspring: Vec<Option<Vec<SubGenome>>> = vec![None; self.specs.len()];
        for &k in &updating {
            offspring[k] = Some(self.make_offspring(k));
        }

        // single-family problems collapse every scheme to direct credit:
        // there is no context to sample, and the per-generation cost reduces
        // to one sweep
        let effective_credit = if self.specs.len() == 1 {
            CreditScheme::Direct
        } else {
            self.config.credit
        };

        let pop_size = self.config.pop_size;
        let mut new_credits: Vec<Option<Vec<f64>>> = vec![None; self.specs.len()];
        match effective_credit {
            CreditScheme::Direct => {
                let mut fits = Vec::with_capacity(pop_size);
                for j in 0..pop_size {
                    let bundle = self.compose_bundle(j, &offspring);
                    fits.push(self.gateway.evaluate(&bundle)?);
                }
                for &k in &updating {
                    new_credits[k] = Some(credit_direct(&fits));
                }
            }
            CreditScheme::EliteContext => {
                let elites: Vec<SubGenome> = self.pops.iter().map(|p| p.elite().clone()).collect();
                for &k in &updating {
                    let candidates = offspring[k].as_ref().expect("offspring made above");
                    new_credits[k] = Some(credit_elite(candidates, k, &elites, &mut self.gateway)?);
                }
            }
            CreditScheme::Ensemble { contexts } => {
                let snapshot: Vec<Vec<SubGenome>> =
                    self.pops.iter().map(|p| p.members.clone()).collect();
                for &k in &updating {
                    let candidates = offspring[k].as_ref().expect("offspring made above");
                    new_credits[k] = Some(credit_ensemble(
                        candidates,
                        k,
                        &snapshot,
                        contexts,
                        &mut self.gateway,
                        &mut self.rng,
                    )?);
                }
            }
        }

        let turnover =
            ((self.config.replacement_fraction * pop_size as f64).round() as usize).max(1);
        for &k in &updating {
            let children = offspring[k].take().expect("offspring made above");
            let credits = new_credits[k].take().expect("credits assigned above");
            self.pops[k] = diversity_select(
                &self.pops[k],
                children,
                credits,
                self.config.diversity_alpha,
                &self.specs[k],
                turnover,
            );
            self.family_update_counts[k] += 1;
        }
        Ok(true)
    }
}

/// Runs the optimizer on a problem until the evaluation budget is spent.
///
/// The run is fully determined by `(problem, config, seed)`; replaying the
/// same triple reproduces the record bit for bit.
pub fn run_gsa(problem: &Problem, config: &GsaConfig, seed: u64) -> Result<RunRecord> {
    config.validate()?;
    if problem.specs().is_empty() {
        return Err(GsaError::InvalidConfig(
            "problem declares no gene families".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gateway = EvalGateway::new(
        problem,
        Some(config.assembly_mode),
        config.budget,
        seed ^ NOISE_STREAM_SALT,
    );

    let pops: Vec<SubPopulation> = problem
        .specs()
        .iter()
        .map(|spec| SubPopulation {
            members: (0..config.pop_size)
                .map(|_| random_subgenome(spec, &mut rng))
                .collect(),
            credits: vec![f64::INFINITY; config.pop_size],
        })
        .collect();

    let n_families = problem.specs().len();
    let mut run = GsaRun {
        config,
        specs: problem.specs(),
        pops,
        rng,
        gateway,
        family_update_counts: vec![0; n_families],
        de_jitter_fallbacks: 0,
    };

    // generation 0 bootstrap: one index-aligned sweep establishes credits
    // and elites for every scheme
    let no_offspring: Vec<Option<Vec<SubGenome>>> = vec![None; n_families];
    let mut bootstrap_fits = Vec::with_capacity(config.pop_size);
    for j in 0..config.pop_size {
        let bundle = run.compose_bundle(j, &no_offspring);
        let f = run
            .gateway
            .evaluate(&bundle)
            .expect("budget >= pop_size was validated");
        bootstrap_fits.push(f);
    }
    let bootstrap_evaluations = run.gateway.used();
    for pop in &mut run.pops {
        pop.credits = credit_direct(&bootstrap_fits);
    }

    let mut generations_completed = 0usize;
    let mut evaluations_per_generation = Vec::new();
    let mut gen = 0u64;
    'outer: while run.gateway.remaining() > 0 {
        gen += 1;
        let before = run.gateway.used();
        match run.generation(gen) {
            Ok(true) => {
                generations_completed += 1;
                evaluations_per_generation.push(run.gateway.used() - before);
            }
            Ok(false) => {}
            Err(BudgetExhausted) => break 'outer,
        }
    }

    let family_update_counts = run.family_update_counts.clone();
    let de_jitter_fallbacks = run.de_jitter_fallbacks;
    let (used, best_true, best_bundle, trace) = run.gateway.into_record_parts();
    Ok(RunRecord {
        seed,
        evaluations_used: used,
        final_best_fitness: best_true,
        final_best_bundle: best_bundle.expect("at least the bootstrap sweep ran"),
        best_fitness_trace: trace,
        bootstrap_evaluations,
        generations_completed,
        evaluations_per_generation,
        family_update_counts,
        de_jitter_fallbacks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{onemax, typed_additive, AdditiveDims};

    fn small_additive(seed: u64) -> Problem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        typed_additive(
            &AdditiveDims {
                real: 3,
                boolean: 3,
                integer: 3,
                categorical: 3,
            },
            &mut rng,
        )
        .unwrap()
    }

    #[test]
    fn direct_credit_copies_bundle_fitness() {
        let credits = credit_direct(&[3.0, 1.0, 2.0]);
        assert_eq!(credits, vec![3.0, 1.0, 2.0]);
        let pop = SubPopulation {
            members: vec![SubGenome::Real(vec![0.0]); 3],
            credits,
        };
        assert_eq!(pop.elite_index(), 1);
    }

    #[test]
    fn elite_index_ties_break_to_lowest_index() {
        let pop = SubPopulation {
            members: vec![SubGenome::Real(vec![0.0]); 3],
            credits: vec![5.0, 5.0, 5.0],
        };
        assert_eq!(pop.elite_index(), 0);
    }

    #[test]
    fn elite_credit_is_monotone_on_a_separable_problem() {
        let problem = small_additive(1);
        let targets = problem.targets();
        let near = targets[0].clone(); // the real target itself
        let far = SubGenome::Real(vec![-1.0, -1.0, -1.0]);
        let elites: Vec<SubGenome> = targets.to_vec();
        let mut gateway = EvalGateway::new(&problem, None, 100, 0);
        let credits = credit_elite(&[near, far], 0, &elites, &mut gateway).unwrap();
        assert!(credits[0] < credits[1], "{credits:?}");
        assert_eq!(gateway.used(), 2);
    }

    #[test]
    fn ensemble_with_identical_contexts_matches_elite_credit() {
        let problem = small_additive(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // every other family's population is a single repeated member, so
        // sampled contexts necessarily equal the elites
        let populations: Vec<Vec<SubGenome>> = problem
            .specs()
            .iter()
            .map(|spec| vec![random_subgenome(spec, &mut rng); 4])
            .collect();
        let elites: Vec<SubGenome> = populations.iter().map(|p| p[0].clone()).collect();
        let candidates: Vec<SubGenome> = (0..4)
            .map(|_| random_subgenome(&problem.specs()[0], &mut rng))
            .collect();

        let mut gw_a = EvalGateway::new(&problem, None, 1_000, 0);
        let ensemble =
            credit_ensemble(&candidates, 0, &populations, 1, &mut gw_a, &mut rng).unwrap();
        let mut gw_b = EvalGateway::new(&problem, None, 1_000, 0);
        let elite = credit_elite(&candidates, 0, &elites, &mut gw_b).unwrap();
        assert_eq!(ensemble, elite);
    }

    #[test]
    fn diversity_select_with_diversity_off_swaps_by_credit_alone() {
        let spec = GeneFamilySpec::real("R", 1, -1.0, 1.0).unwrap();
        let parents = SubPopulation {
            members: vec![SubGenome::Real(vec![0.1]), SubGenome::Real(vec![0.2])],
            credits: vec![5.0, 1.0],
        };
        let offspring = vec![SubGenome::Real(vec![0.3]), SubGenome::Real(vec![0.4])];
        // turnover 1: the worst parent (5.0) is replaced by the best child (0.5)
        let selected = diversity_select(&parents, offspring.clone(), vec![3.0, 0.5], 1.0, &spec, 1);
        assert_eq!(selected.credits, vec![1.0, 0.5]);
        assert_eq!(selected.members[1], SubGenome::Real(vec![0.4]));

        // full turnover pairs worst parents against best children, swapping
        // only where the child wins: (5.0 vs 0.5) swaps, (1.0 vs 3.0) does not
        let parents2 = SubPopulation {
            members: vec![SubGenome::Real(vec![0.1]), SubGenome::Real(vec![0.2])],
            credits: vec![5.0, 1.0],
        };
        let selected = diversity_select(&parents2, offspring, vec![3.0, 0.5], 1.0, &spec, 2);
        assert_eq!(selected.credits, vec![1.0, 0.5]);
    }

    #[test]
    fn diversity_select_identical_pool_keeps_the_value() {
        let spec = GeneFamilySpec::real("R", 1, -1.0, 1.0).unwrap();
        let member = SubGenome::Real(vec![0.0]);
        let parents = SubPopulation {
            members: vec![member.clone(), member.clone(), member.clone()],
            credits: vec![2.0, 2.0, 2.0],
        };
        let offspring = vec![member.clone(), member.clone(), member.clone()];
        let selected = diversity_select(&parents, offspring, vec![2.0, 2.0, 2.0], 0.7, &spec, 1);
        assert_eq!(
            selected.members,
            vec![member.clone(), member.clone(), member]
        );
        assert_eq!(selected.credits, vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn diversity_select_always_keeps_the_elite() {
        let spec = GeneFamilySpec::real("R", 1, -1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = 6;
            let parents = SubPopulation {
                members: (0..n).map(|_| random_subgenome(&spec, &mut rng)).collect(),
                credits: (0..n).map(|_| rng.random_range(0.0..10.0)).collect(),
            };
            let offspring: Vec<SubGenome> =
                (0..n).map(|_| random_subgenome(&spec, &mut rng)).collect();
            let off_credits: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
            let best = parents
                .credits
                .iter()
                .chain(off_credits.iter())
                .fold(f64::INFINITY, |a, &b| a.min(b));
            let alpha = rng.random_range(0.05..1.0);
            let turnover = rng.random_range(1..=n);
            let selected =
                diversity_select(&parents, offspring, off_credits, alpha, &spec, turnover);
            assert!(selected.credits.contains(&best), "elite credit {best} lost");
        }
    }

    #[test]
    fn real_offspring_falls_back_to_jitter_below_four_members() {
        let spec = GeneFamilySpec::real("R", 2, -1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pop = SubPopulation {
            members: (0..3).map(|_| random_subgenome(&spec, &mut rng)).collect(),
            credits: vec![1.0, 2.0, 3.0],
        };
        let (child, fell_back) =
            real_offspring(&pop, 0, &spec, &OperatorParams::default(), &mut rng);
        assert!(fell_back);
        assert!(child.conforms(&spec));
    }

    #[test]
    fn make_variant_covers_the_named_table() {
        for name in VARIANT_NAMES {
            let cfg = make_variant(name).unwrap();
            assert!(cfg.validate().is_ok(), "{name}");
        }
        let passive = make_variant("GSA_NO_ASSEMBLY").unwrap();
        assert_eq!(passive.assembly_mode, AssemblyMode::Passive);
        assert_eq!(passive.credit, CreditScheme::Ensemble { contexts: 5 });
        let asynced = make_variant("GSA_ASYNC").unwrap();
        assert_eq!(asynced.schedule, UpdateSchedule::staggered());
        assert!(matches!(
            make_variant("GSA_TYPO"),
            Err(GsaError::InvalidConfig(_))
        ));
    }

    #[test]
    fn budget_equal_to_pop_size_returns_best_of_initial_population() {
        let problem = small_additive(11);
        let config = GsaConfig {
            pop_size: 8,
            budget: 8,
            credit: CreditScheme::Direct,
            ..GsaConfig::default()
        };
        let record = run_gsa(&problem, &config, 42).unwrap();
        assert_eq!(record.evaluations_used, 8);
        assert_eq!(record.generations_completed, 0);
        assert_eq!(record.bootstrap_evaluations, 8);
    }

    #[test]
    fn budget_below_pop_size_is_a_configuration_error() {
        let problem = small_additive(12);
        let config = GsaConfig {
            pop_size: 8,
            budget: 7,
            ..GsaConfig::default()
        };
        assert!(matches!(
            run_gsa(&problem, &config, 1),
            Err(GsaError::InvalidConfig(_))
        ));
    }

    #[test]
    fn direct_credit_costs_one_sweep_per_generation() {
        let problem = small_additive(13);
        let config = GsaConfig {
            pop_size: 10,
            budget: 10 + 3 * 10,
            credit: CreditScheme::Direct,
            ..GsaConfig::default()
        };
        let record = run_gsa(&problem, &config, 1).unwrap();
        assert_eq!(record.bootstrap_evaluations, 10);
        assert_eq!(record.evaluations_per_generation, vec![10, 10, 10]);
    }

    #[test]
    fn elite_credit_costs_pop_times_families_per_generation() {
        let problem = small_additive(14); // 4 families
        let config = GsaConfig {
            pop_size: 10,
            budget: 10 + 2 * 4 * 10,
            credit: CreditScheme::EliteContext,
            ..GsaConfig::default()
        };
        let record = run_gsa(&problem, &config, 2).unwrap();
        assert_eq!(record.evaluations_per_generation, vec![40, 40]);
    }

    #[test]
    fn ensemble_credit_accounting_matches_the_identity() {
        // pop x families x (1 + contexts) per generation
        let problem = small_additive(15); // 4 families
        let config = GsaConfig {
            pop_size: 10,
            budget: 10 + 2 * 10 * 4 * (1 + 5),
            credit: CreditScheme::Ensemble { contexts: 5 },
            ..GsaConfig::default()
        };
        let record = run_gsa(&problem, &config, 3).unwrap();
        assert_eq!(record.evaluations_per_generation, vec![240, 240]);
    }

    #[test]
    fn single_family_ensemble_collapses_to_flat_cost() {
        let problem = onemax(20).unwrap();
        let config = GsaConfig {
            pop_size: 10,
            budget: 10 + 4 * 10,
            credit: CreditScheme::Ensemble { contexts: 5 },
            ..GsaConfig::default()
        };
        let record = run_gsa(&problem, &config, 4).unwrap();
        assert_eq!(record.evaluations_per_generation, vec![10, 10, 10, 10]);
    }

    #[test]
    fn staggered_schedule_updates_families_at_their_periods() {
        let problem = small_additive(16);
        // direct credit: one sweep per generation regardless of who updates
        let gens = 8;
        let config = GsaConfig {
            pop_size: 10,
            budget: 10 + gens * 10,
            credit: CreditScheme::Direct,
            schedule: UpdateSchedule::staggered(),
            ..GsaConfig::default()
        };
        let record = run_gsa(&problem, &config, 5).unwrap();
        // family order is R, B, Z, C with periods 1, 4, 2, 4
        assert_eq!(record.family_update_counts, vec![8, 2, 4, 2]);
        assert_eq!(record.generations_completed, 8);
    }

    #[test]
    fn budget_discipline_and_monotone_trace() {
        let problem = small_additive(17);
        for credit in [
            CreditScheme::Direct,
            CreditScheme::EliteContext,
            CreditScheme::Ensemble { contexts: 3 },
        ] {
            let config = GsaConfig {
                pop_size: 8,
                budget: 333,
                credit,
                ..GsaConfig::default()
            };
            let record = run_gsa(&problem, &config, 6).unwrap();
            assert!(record.evaluations_used <= 333);
            for w in record.best_fitness_trace.windows(2) {
                assert!(w[1].1 <= w[0].1, "trace increased: {:?}", w);
            }
        }
    }

    #[test]
    fn runs_replay_bit_for_bit() {
        let problem = small_additive(18);
        let config = GsaConfig {
            pop_size: 8,
            budget: 500,
            ..GsaConfig::default()
        };
        let a = run_gsa(&problem, &config, 99).unwrap();
        let b = run_gsa(&problem, &config, 99).unwrap();
        assert_eq!(a, b);
        let c = run_gsa(&problem, &config, 100).unwrap();
        assert_ne!(a.best_fitness_trace, c.best_fitness_trace);
    }

    #[test]
    fn mid_generation_exhaustion_stops_at_the_budget_exactly() {
        let problem = small_additive(19);
        // budget lands inside the second generation's ensemble pass
        let config = GsaConfig {
            pop_size: 10,
            budget: 10 + 240 + 100,
            credit: CreditScheme::Ensemble { contexts: 5 },
            ..GsaConfig::default()
        };
        let record = run_gsa(&problem, &config, 7).unwrap();
        assert_eq!(record.evaluations_used, 350);
        assert_eq!(record.generations_completed, 1);
        assert_eq!(record.evaluations_per_generation, vec![240]);
    }
}
