//! Comparison algorithms over the flattened encoding: random search,
//! DE/rand/1/bin, a generational EA, a slot-aware mixed-variable GA, and
//! cooperative coevolution with random index grouping.
//!
//! Every baseline flattens the problem first, so any complex or embedding
//! family fails with the typed encoder error before a single evaluation.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::benchmarks::{evenly_split, flatten, FlattenedEncoding, Problem, Slot, SlotKind};
use crate::engine::{BudgetExhausted, EvalGateway, RunRecord, NOISE_STREAM_SALT};
use crate::error::{GsaError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DeParams {
    pub pop_size: usize,
    pub differential_weight: f64,
    pub crossover_rate: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self {
            pop_size: 50,
            differential_weight: 0.5,
            crossover_rate: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EaParams {
    pub pop_size: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    /// Gaussian mutation sigma as a fraction of each slot's range.
    pub sigma_scale: f64,
    /// Per-coordinate mutation probability; `None` means `1/dim`.
    pub mutation_rate: Option<f64>,
}

impl Default for EaParams {
    fn default() -> Self {
        // sigma at 0.2 of the slot range keeps thresholded Boolean slots
        // recoverable after the population converges; at 0.1 a lost bit
        // needs a >4-sigma jump and OneMax stalls short of the optimum
        Self {
            pop_size: 50,
            tournament_size: 3,
            crossover_rate: 0.9,
            sigma_scale: 0.2,
            mutation_rate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedGaParams {
    pub pop_size: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    pub sigma_scale: f64,
}

impl Default for MixedGaParams {
    fn default() -> Self {
        Self {
            pop_size: 50,
            tournament_size: 2,
            crossover_rate: 0.9,
            sigma_scale: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoopParams {
    /// Number of random index groups; defaults to the problem's family count.
    pub groups: Option<usize>,
    pub ea: EaParams,
}

fn gauss<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> f64 {
    if sigma <= 0.0 {
        0.0
    } else {
        let z: f64 = rng.sample(StandardNormal);
        z * sigma
    }
}

fn sample_uniform<R: Rng + ?Sized>(enc: &FlattenedEncoding, rng: &mut R) -> Vec<f64> {
    enc.slots()
        .iter()
        .map(|s| {
            if s.upper > s.lower {
                rng.random_range(s.lower..s.upper)
            } else {
                s.lower
            }
        })
        .collect()
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..values.len() {
        if values[i] < values[best] {
            best = i;
        }
    }
    best
}

fn finish_record(
    gateway: EvalGateway,
    seed: u64,
    bootstrap: usize,
    generations: usize,
    evals_per_generation: Vec<usize>,
) -> RunRecord {
    let (used, best_true, best_bundle, trace) = gateway.into_record_parts();
    RunRecord {
        seed,
        evaluations_used: used,
        final_best_fitness: best_true,
        final_best_bundle: best_bundle.expect("budget >= 1 guarantees one evaluation"),
        best_fitness_trace: trace,
        bootstrap_evaluations: bootstrap,
        generations_completed: generations,
        evaluations_per_generation: evals_per_generation,
        family_update_counts: Vec::new(),
        de_jitter_fallbacks: 0,
    }
}

fn validate_budget(budget: usize) -> Result<()> {
    if budget == 0 {
        return Err(GsaError::InvalidConfig("budget must be >= 1".into()));
    }
    Ok(())
}

/// Uniform sampling of the flattened box.
pub fn random_flattened(problem: &Problem, budget: usize, seed: u64) -> Result<RunRecord> {
    validate_budget(budget)?;
    let enc = flatten(problem)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gateway = EvalGateway::new(problem, None, budget, seed ^ NOISE_STREAM_SALT);
    loop {
        let x = sample_uniform(&enc, &mut rng);
        if gateway.evaluate(&enc.decode(&x)).is_err() {
            break;
        }
    }
    Ok(finish_record(gateway, seed, 0, 0, Vec::new()))
}

/// DE/rand/1/bin trial vector: binomial crossover of the target with
/// `base + f * (d1 - d2)`, one coordinate guaranteed from the mutant.
pub fn de_trial<R: Rng + ?Sized>(
    target: &[f64],
    base: &[f64],
    d1: &[f64],
    d2: &[f64],
    f: f64,
    cr: f64,
    rng: &mut R,
) -> Vec<f64> {
    let dim = target.len();
    let forced = rng.random_range(0..dim);
    (0..dim)
        .map(|j| {
            if j == forced || rng.random::<f64>() < cr {
                base[j] + f * (d1[j] - d2[j])
            } else {
                target[j]
            }
        })
        .collect()
}

fn clamp_to_box(x: &mut [f64], slots: &[Slot]) {
    for (v, s) in x.iter_mut().zip(slots) {
        *v = v.clamp(s.lower, s.upper);
    }
}

/// Flattened DE/rand/1/bin with greedy replacement applied at generation end.
pub fn flattened_de(problem: &Problem, budget: usize, seed: u64) -> Result<RunRecord> {
    flattened_de_with(problem, budget, seed, &DeParams::default())
}

pub fn flattened_de_with(
    problem: &Problem,
    budget: usize,
    seed: u64,
    params: &DeParams,
) -> Result<RunRecord> {
    validate_budget(budget)?;
    if params.pop_size < 4 {
        return Err(GsaError::InvalidConfig("DE needs pop_size >= 4".into()));
    }
    let enc = flatten(problem)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gateway = EvalGateway::new(problem, None, budget, seed ^ NOISE_STREAM_SALT);

    let n = params.pop_size;
    let mut pop: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut fits: Vec<f64> = Vec::with_capacity(n);
    for _ in 0..n {
        let x = sample_uniform(&enc, &mut rng);
        match gateway.evaluate(&enc.decode(&x)) {
            Ok(f) => {
                pop.push(x);
                fits.push(f);
            }
            Err(BudgetExhausted) => {
                let bootstrap = gateway.used();
                return Ok(finish_record(gateway, seed, bootstrap, 0, Vec::new()));
            }
        }
    }
    let bootstrap = gateway.used();

    let mut generations = 0usize;
    let mut evals_per_generation = Vec::new();
    'outer: loop {
        let before = gateway.used();
        let mut replacements: Vec<(usize, Vec<f64>, f64)> = Vec::new();
        for i in 0..n {
            let mut r1 = rng.random_range(0..n);
            while r1 == i {
                r1 = rng.random_range(0..n);
            }
            let mut r2 = rng.random_range(0..n);
            while r2 == i || r2 == r1 {
                r2 = rng.random_range(0..n);
            }
            let mut r3 = rng.random_range(0..n);
            while r3 == i || r3 == r1 || r3 == r2 {
                r3 = rng.random_range(0..n);
            }
            let mut trial = de_trial(
                &pop[i],
                &pop[r1],
                &pop[r2],
                &pop[r3],
                params.differential_weight,
                params.crossover_rate,
                &mut rng,
            );
            clamp_to_box(&mut trial, enc.slots());
            match gateway.evaluate(&enc.decode(&trial)) {
                Ok(f) => {
                    if f <= fits[i] {
                        replacements.push((i, trial, f));
                    }
                }
                Err(BudgetExhausted) => break 'outer,
            }
        }
        for (i, x, f) in replacements {
            pop[i] = x;
            fits[i] = f;
        }
        generations += 1;
        evals_per_generation.push(gateway.used() - before);
    }
    Ok(finish_record(
        gateway,
        seed,
        bootstrap,
        generations,
        evals_per_generation,
    ))
}

fn tournament<R: Rng + ?Sized>(fits: &[f64], size: usize, rng: &mut R) -> usize {
    let mut best = rng.random_range(0..fits.len());
    for _ in 1..size {
        let c = rng.random_range(0..fits.len());
        if fits[c] < fits[best] {
            best = c;
        }
    }
    best
}

/// One generational EA step over an arbitrary box: elitism of one,
/// tournament parents, single-point crossover, per-coordinate Gaussian
/// mutation at rate `1/dim`. Used by the flattened EA directly and by
/// cooperative coevolution on each group's projected subspace, which is what
/// makes single-group cooperative coevolution coincide with the EA.
fn ea_generation<R, E>(
    pop: &mut Vec<Vec<f64>>,
    fits: &mut Vec<f64>,
    lower: &[f64],
    upper: &[f64],
    params: &EaParams,
    evaluate: &mut E,
    rng: &mut R,
) -> std::result::Result<(), BudgetExhausted>
where
    R: Rng + ?Sized,
    E: FnMut(&[f64]) -> std::result::Result<f64, BudgetExhausted>,
{
    let n = pop.len();
    let dim = lower.len();
    let elite = argmin(fits);
    let mut new_pop: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut new_fits: Vec<f64> = Vec::with_capacity(n);
    new_pop.push(pop[elite].clone());
    new_fits.push(fits[elite]);
    while new_pop.len() < n {
        let a = tournament(fits, params.tournament_size, rng);
        let b = tournament(fits, params.tournament_size, rng);
        let mut child = if dim >= 2 && rng.random::<f64>() < params.crossover_rate {
            let point = rng.random_range(1..dim);
            let mut c = pop[a][..point].to_vec();
            c.extend_from_slice(&pop[b][point..]);
            c
        } else {
            pop[a].clone()
        };
        let rate = params.mutation_rate.unwrap_or(1.0 / dim as f64);
        for j in 0..dim {
            if rng.random::<f64>() < rate {
                child[j] = (child[j] + gauss(rng, params.sigma_scale * (upper[j] - lower[j])))
                    .clamp(lower[j], upper[j]);
            }
        }
        let f = evaluate(&child)?;
        new_pop.push(child);
        new_fits.push(f);
    }
    *pop = new_pop;
    *fits = new_fits;
    Ok(())
}

/// Flattened generational EA: tournament-3, single-point crossover,
/// Gaussian mutation, elitism of one.
pub fn flattened_ea(problem: &Problem, budget: usize, seed: u64) -> Result<RunRecord> {
    flattened_ea_with(problem, budget, seed, &EaParams::default())
}

pub fn flattened_ea_with(
    problem: &Problem,
    budget: usize,
    seed: u64,
    params: &EaParams,
) -> Result<RunRecord> {
    validate_budget(budget)?;
    let enc = flatten(problem)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gateway = EvalGateway::new(problem, None, budget, seed ^ NOISE_STREAM_SALT);

    let n = params.pop_size;
    let mut pop: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut fits: Vec<f64> = Vec::with_capacity(n);
    for _ in 0..n {
        let x = sample_uniform(&enc, &mut rng);
        match gateway.evaluate(&enc.decode(&x)) {
            Ok(f) => {
                pop.push(x);
                fits.push(f);
            }
            Err(BudgetExhausted) => {
                let bootstrap = gateway.used();
                return Ok(finish_record(gateway, seed, bootstrap, 0, Vec::new()));
            }
        }
    }
    let bootstrap = gateway.used();
    let lower = enc.lower();
    let upper = enc.upper();

    let mut generations = 0usize;
    let mut evals_per_generation = Vec::new();
    loop {
        let before = gateway.used();
        let mut evaluate = |x: &[f64]| -> std::result::Result<f64, BudgetExhausted> {
            gateway.evaluate(&enc.decode(x))
        };
        if ea_generation(
            &mut pop,
            &mut fits,
            &lower,
            &upper,
            params,
            &mut evaluate,
            &mut rng,
        )
        .is_err()
        {
            break;
        }
        generations += 1;
        evals_per_generation.push(gateway.used() - before);
    }
    Ok(finish_record(
        gateway,
        seed,
        bootstrap,
        generations,
        evals_per_generation,
    ))
}

/// Slot-aware mutation for the mixed-variable GA: integers step by one,
/// bits flip to exact 0/1 encodings, categories resample, reals jitter.
fn mv_mutate_slot<R: Rng + ?Sized>(x: f64, slot: &Slot, sigma_scale: f64, rng: &mut R) -> f64 {
    match slot.kind {
        SlotKind::Real => {
            (x + gauss(rng, sigma_scale * (slot.upper - slot.lower))).clamp(slot.lower, slot.upper)
        }
        SlotKind::Integer { .. } => {
            let step = if rng.random::<bool>() { 1.0 } else { -1.0 };
            (x + step).clamp(slot.lower, slot.upper)
        }
        SlotKind::Boolean => {
            if x >= 0.5 {
                0.0
            } else {
                1.0
            }
        }
        SlotKind::Categorical { k } => {
            let c = rng.random_range(0..k);
            (c as f64 + 0.5) / k as f64
        }
    }
}

/// Mixed-variable GA on the flattened vector: tournament-2 selection,
/// uniform crossover, per-slot mutation aware of each slot's decode rule.
pub fn mixed_variable_ga(problem: &Problem, budget: usize, seed: u64) -> Result<RunRecord> {
    mixed_variable_ga_with(problem, budget, seed, &MixedGaParams::default())
}

pub fn mixed_variable_ga_with(
    problem: &Problem,
    budget: usize,
    seed: u64,
    params: &MixedGaParams,
) -> Result<RunRecord> {
    validate_budget(budget)?;
    let enc = flatten(problem)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gateway = EvalGateway::new(problem, None, budget, seed ^ NOISE_STREAM_SALT);

    let n = params.pop_size;
    let mut pop: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut fits: Vec<f64> = Vec::with_capacity(n);
    for _ in 0..n {
        let x = sample_uniform(&enc, &mut rng);
        match gateway.evaluate(&enc.decode(&x)) {
            Ok(f) => {
                pop.push(x);
                fits.push(f);
            }
            Err(BudgetExhausted) => {
                let bootstrap = gateway.used();
                return Ok(finish_record(gateway, seed, bootstrap, 0, Vec::new()));
            }
        }
    }
    let bootstrap = gateway.used();
    let dim = enc.dim();

    let mut generations = 0usize;
    let mut evals_per_generation = Vec::new();
    'outer: loop {
        let before = gateway.used();
        let elite = argmin(&fits);
        let mut new_pop = vec![pop[elite].clone()];
        let mut new_fits = vec![fits[elite]];
        while new_pop.len() < n {
            let a = tournament(&fits, params.tournament_size, &mut rng);
            let b = tournament(&fits, params.tournament_size, &mut rng);
            let mut child = if rng.random::<f64>() < params.crossover_rate {
                (0..dim)
                    .map(|j| {
                        if rng.random::<bool>() {
                            pop[a][j]
                        } else {
                            pop[b][j]
                        }
                    })
                    .collect()
            } else {
                pop[a].clone()
            };
            let rate = 1.0 / dim as f64;
            for (j, slot_value) in child.iter_mut().enumerate() {
                if rng.random::<f64>() < rate {
                    *slot_value =
                        mv_mutate_slot(*slot_value, &enc.slots()[j], params.sigma_scale, &mut rng);
                }
            }
            match gateway.evaluate(&enc.decode(&child)) {
                Ok(f) => {
                    new_pop.push(child);
                    new_fits.push(f);
                }
                Err(BudgetExhausted) => break 'outer,
            }
        }
        pop = new_pop;
        fits = new_fits;
        generations += 1;
        evals_per_generation.push(gateway.used() - before);
    }
    Ok(finish_record(
        gateway,
        seed,
        bootstrap,
        generations,
        evals_per_generation,
    ))
}

/// Cooperative coevolution: flattened indices are partitioned uniformly at
/// random into groups (default: one per gene family); each group runs the
/// EA inner loop on its projected subspace round-robin, evaluated against
/// the best-known values of the other groups. A single group degenerates to
/// the flattened EA exactly.
pub fn cooperative_coevolution(problem: &Problem, budget: usize, seed: u64) -> Result<RunRecord> {
    cooperative_coevolution_with(problem, budget, seed, &CoopParams::default())
}

pub fn cooperative_coevolution_with(
    problem: &Problem,
    budget: usize,
    seed: u64,
    params: &CoopParams,
) -> Result<RunRecord> {
    validate_budget(budget)?;
    let enc = flatten(problem)?;
    let n_groups = params.groups.unwrap_or(problem.specs().len()).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gateway = EvalGateway::new(problem, None, budget, seed ^ NOISE_STREAM_SALT);

    let n = params.ea.pop_size;
    let mut pop: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut fits: Vec<f64> = Vec::with_capacity(n);
    for _ in 0..n {
        let x = sample_uniform(&enc, &mut rng);
        match gateway.evaluate(&enc.decode(&x)) {
            Ok(f) => {
                pop.push(x);
                fits.push(f);
            }
            Err(BudgetExhausted) => {
                let bootstrap = gateway.used();
                return Ok(finish_record(gateway, seed, bootstrap, 0, Vec::new()));
            }
        }
    }
    let bootstrap = gateway.used();
    let dim = enc.dim();

    // random index grouping; a single group keeps the natural order so the
    // degenerate case matches the flattened EA's rng stream
    let groups: Vec<Vec<usize>> = if n_groups == 1 {
        vec![(0..dim).collect()]
    } else {
        let mut indices: Vec<usize> = (0..dim).collect();
        indices.shuffle(&mut rng);
        let sizes = evenly_split(dim, n_groups.min(dim));
        let mut out = Vec::with_capacity(sizes.len());
        let mut offset = 0;
        for s in sizes {
            out.push(indices[offset..offset + s].to_vec());
            offset += s;
        }
        out
    };

    let best = argmin(&fits);
    let mut context = pop[best].clone();
    let mut context_fit = fits[best];

    // persistent projected subpopulations seeded from the initial population
    let mut group_pops: Vec<Vec<Vec<f64>>> = groups
        .iter()
        .map(|idx| {
            pop.iter()
                .map(|x| idx.iter().map(|&j| x[j]).collect())
                .collect()
        })
        .collect();
    let mut group_fits: Vec<Vec<f64>> = groups.iter().map(|_| fits.clone()).collect();

    let mut generations = 0usize;
    let mut evals_per_generation = Vec::new();
    'outer: loop {
        for (gi, idx) in groups.iter().enumerate() {
            let before = gateway.used();
            let lower: Vec<f64> = idx.iter().map(|&j| enc.slots()[j].lower).collect();
            let upper: Vec<f64> = idx.iter().map(|&j| enc.slots()[j].upper).collect();
            let mut evaluate = |sub: &[f64]| -> std::result::Result<f64, BudgetExhausted> {
                let mut full = context.clone();
                for (&j, &v) in idx.iter().zip(sub) {
                    full[j] = v;
                }
                gateway.evaluate(&enc.decode(&full))
            };
            if ea_generation(
                &mut group_pops[gi],
                &mut group_fits[gi],
                &lower,
                &upper,
                &params.ea,
                &mut evaluate,
                &mut rng,
            )
            .is_err()
            {
                break 'outer;
            }
            let gb = argmin(&group_fits[gi]);
            if group_fits[gi][gb] < context_fit {
                for (&j, &v) in idx.iter().zip(&group_pops[gi][gb]) {
                    context[j] = v;
                }
                context_fit = group_fits[gi][gb];
            }
            generations += 1;
            evals_per_generation.push(gateway.used() - before);
        }
    }
    Ok(finish_record(
        gateway,
        seed,
        bootstrap,
        generations,
        evals_per_generation,
    ))
}
