//! Nonparametric analysis: paired Wilcoxon signed-rank, Holm step-down
//! correction, Vargha-Delaney A12 effect size, and median/IQR summaries.
//!
//! A12 follows the common-language orientation on raw values: it estimates
//! `P(x > y) + 0.5 P(x = y)`. Under minimization, a value below 0.5 means
//! the first sample achieves lower (better) fitness; a dominant winner on
//! the first side reads 0.000.

use crate::error::{GsaError, Result};

/// Two equal-length samples paired by position (seed within a cell).
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PairedSample {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(GsaError::Contract(format!(
                "paired sample lengths differ: {} vs {}",
                xs.len(),
                ys.len()
            )));
        }
        if xs.is_empty() {
            return Err(GsaError::Contract("paired sample must be non-empty".into()));
        }
        Ok(Self { xs, ys })
    }

    pub fn differences(&self) -> Vec<f64> {
        self.xs.iter().zip(&self.ys).map(|(x, y)| x - y).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WilcoxonResult {
    /// `min(W+, W-)`, the smaller signed-rank sum.
    pub statistic: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    /// Pairs remaining after zero differences are dropped.
    pub n_used: usize,
    pub zeros_dropped: usize,
    /// True when the exact null distribution was used (n <= 20).
    pub exact: bool,
}

/// Average ranks of `|d|` and the positive-rank sum `W+`.
fn signed_ranks(diffs: &[f64]) -> (Vec<f64>, f64) {
    let n = diffs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diffs[a].abs().total_cmp(&diffs[b].abs()));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && diffs[order[j + 1]].abs() == diffs[order[i]].abs() {
            j += 1;
        }
        // positions i..=j share the average rank
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    let w_plus = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    (ranks, w_plus)
}

/// Exact two-sided p via the null distribution of `W+`, built by dynamic
/// programming over the doubled ranks (doubling keeps tied average ranks
/// integral).
fn exact_p_two_sided(ranks: &[f64], w_plus: f64) -> f64 {
    let ranks2: Vec<usize> = ranks.iter().map(|&r| (2.0 * r).round() as usize).collect();
    let total: usize = ranks2.iter().sum();
    let mut counts = vec![0.0f64; total + 1];
    counts[0] = 1.0;
    for &r in &ranks2 {
        for w in (r..=total).rev() {
            counts[w] += counts[w - r];
        }
    }
    let all: f64 = 2f64.powi(ranks.len() as i32);
    let w2 = (2.0 * w_plus).round() as usize;
    let p_le: f64 = counts[..=w2].iter().sum::<f64>() / all;
    let p_ge: f64 = counts[w2..].iter().sum::<f64>() / all;
    (2.0 * p_le.min(p_ge)).min(1.0)
}

/// Standard normal CDF via the Zelen & Severo polynomial approximation
/// (absolute error below 1e-7).
fn normal_cdf(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - normal_cdf(-x);
    }
    let k = 1.0 / (1.0 + 0.2316419 * x);
    let poly = k
        * (0.319381530
            + k * (-0.356563782 + k * (1.781477937 + k * (-1.821255978 + k * 1.330274429))));
    let pdf = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    1.0 - pdf * poly
}

/// Normal approximation with tie correction and continuity correction.
fn approx_p_two_sided(ranks: &[f64], w_plus: f64) -> f64 {
    let n = ranks.len() as f64;
    let mu = n * (n + 1.0) / 4.0;
    // tie correction: group the ranks by value
    let mut sorted = ranks.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let diff = w_plus - mu;
    let z = (diff - 0.5 * diff.signum()) / var.sqrt();
    (2.0 * (1.0 - normal_cdf(z.abs()))).min(1.0)
}

/// Paired Wilcoxon signed-rank test, two-sided. Zero differences are
/// dropped; if every difference is zero the test is degenerate and returns
/// `p = 1`. The null distribution is exact for up to 20 non-zero pairs and
/// normal-approximated (tie- and continuity-corrected) beyond.
pub fn wilcoxon_signed_rank(sample: &PairedSample) -> Result<WilcoxonResult> {
    let diffs: Vec<f64> = sample
        .differences()
        .into_iter()
        .filter(|d| *d != 0.0)
        .collect();
    let zeros_dropped = sample.xs.len() - diffs.len();
    if diffs.is_empty() {
        return Ok(WilcoxonResult {
            statistic: 0.0,
            p_value: 1.0,
            n_used: 0,
            zeros_dropped,
            exact: true,
        });
    }
    let (ranks, w_plus) = signed_ranks(&diffs);
    let total: f64 = ranks.iter().sum();
    let w_minus = total - w_plus;
    let exact = diffs.len() <= 20;
    let p_value = if exact {
        exact_p_two_sided(&ranks, w_plus)
    } else {
        approx_p_two_sided(&ranks, w_plus)
    };
    Ok(WilcoxonResult {
        statistic: w_plus.min(w_minus),
        p_value,
        n_used: diffs.len(),
        zeros_dropped,
        exact,
    })
}

/// Holm step-down correction: the i-th smallest p is multiplied by
/// `m - i`, monotonicity is enforced, and results are capped at 1.
/// Returned in the input order; never smaller than the input.
pub fn holm_correct(pvalues: &[f64]) -> Vec<f64> {
    let m = pvalues.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pvalues[a].total_cmp(&pvalues[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 0.0f64;
    for (i, &idx) in order.iter().enumerate() {
        let scaled = (pvalues[idx] * (m - i) as f64).min(1.0);
        running = running.max(scaled);
        adjusted[idx] = running;
    }
    adjusted
}

/// Vargha-Delaney A12: `(#(x > y) + 0.5 #(x = y)) / (n m)`. Values below
/// 0.5 mean the first sample is stochastically smaller, i.e. better under
/// minimization.
pub fn vargha_delaney_a12(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.is_empty() || ys.is_empty() {
        return Err(GsaError::Contract("A12 requires non-empty samples".into()));
    }
    let mut wins = 0usize;
    let mut ties = 0usize;
    for x in xs {
        for y in ys {
            match x.partial_cmp(y) {
                Some(std::cmp::Ordering::Greater) => wins += 1,
                Some(std::cmp::Ordering::Equal) => ties += 1,
                Some(std::cmp::Ordering::Less) => {}
                None => return Err(GsaError::Contract("A12 cannot compare NaN".into())),
            }
        }
    }
    Ok((wins as f64 + 0.5 * ties as f64) / (xs.len() * ys.len()) as f64)
}

/// Linear-interpolation quantile of sorted data at `p`.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 < n {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    }
}

/// `(median, q1, q3)` with linear-interpolation quantiles.
pub fn median_iqr(values: &[f64]) -> Result<(f64, f64, f64)> {
    if values.is_empty() {
        return Err(GsaError::Contract("median of an empty sample".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    Ok((
        quantile_sorted(&sorted, 0.5),
        quantile_sorted(&sorted, 0.25),
        quantile_sorted(&sorted, 0.75),
    ))
}

/// Median alone, for callers that do not need the quartiles.
pub fn median(values: &[f64]) -> Result<f64> {
    median_iqr(values).map(|(m, _, _)| m)
}
