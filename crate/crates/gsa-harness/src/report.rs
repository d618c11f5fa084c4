//! Markdown report generation: per-cell median/IQR tables, paired Wilcoxon +
//! Holm + A12 comparisons against a reference algorithm, and mean-rank
//! tables across cells.

use std::collections::BTreeMap;

use gsa::stats::{
    holm_correct, median_iqr, vargha_delaney_a12, wilcoxon_signed_rank, PairedSample,
};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::runner::{ResultRow, RunStatus};

/// Compact numeric formatting for fitness medians: plain decimals in a
/// readable range, scientific outside it.
fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.abs() >= 1e-3 && x.abs() < 1e4 {
        format!("{x:.3}")
    } else {
        format!("{x:.2e}")
    }
}

fn fmt_p(p: f64) -> String {
    if p >= 0.001 {
        format!("{p:.3}")
    } else {
        format!("{p:.1e}")
    }
}

/// Values per (cell, algorithm): ok fitnesses keyed by seed, plus whether
/// any run hit the encoder error.
#[derive(Default, Clone)]
struct CellAlgo {
    by_seed: BTreeMap<u32, f64>,
    crashed: bool,
}

type MatrixData = BTreeMap<String, BTreeMap<String, CellAlgo>>; // cell -> algorithm -> data

fn collect(rows: &[ResultRow]) -> BTreeMap<String, MatrixData> {
    let mut out: BTreeMap<String, MatrixData> = BTreeMap::new();
    for row in rows {
        let entry = out
            .entry(row.matrix_id.clone())
            .or_default()
            .entry(row.cell_id.clone())
            .or_default()
            .entry(row.algorithm.clone())
            .or_default();
        match row.status {
            RunStatus::Ok => {
                if let Some(f) = row.final_fitness {
                    entry.by_seed.insert(row.seed, f);
                }
            }
            RunStatus::EncoderError => entry.crashed = true,
        }
    }
    out
}

struct Comparison {
    algorithm: String,
    n_pairs: usize,
    p_raw: f64,
    a12: f64,
}

fn interpretation(algorithm: &str, reference: &str, p_holm: f64, a12: f64) -> String {
    let (winner, loser) = if a12 < 0.5 {
        (algorithm, reference)
    } else {
        (reference, algorithm)
    };
    if (a12 - 0.5).abs() < 1e-9 || p_holm >= 0.999 {
        "indistinguishable".to_string()
    } else if p_holm < 0.05 {
        format!("{winner} reliably beats {loser}")
    } else {
        format!("{winner} beats {loser} (n.s.)")
    }
}

/// Renders the report for every matrix present in both the config and the
/// results (optionally restricted to one matrix id). Fails when the
/// reference algorithm contributed no successful runs.
pub fn generate_report(
    rows: &[ResultRow],
    config: &ExperimentConfig,
    matrix_filter: Option<&str>,
    reference: &str,
) -> Result<String> {
    let data = collect(rows);
    let mut out = String::new();
    out.push_str("# Experiment report\n\n");
    out.push_str("Notes:\n");
    out.push_str("- Medians and IQRs are computed across seeds within each cell; `crash` marks deterministic encoder errors.\n");
    out.push_str(&format!(
        "- Pairwise tests against `{reference}` pair runs by (cell, seed) and pool pairs across cells; Holm correction spans the comparison family.\n"
    ));
    out.push_str("- A12 < 0.5 means the row algorithm achieves lower (better) final fitness than the reference; a dominant winner reads 0.000.\n");
    out.push_str(
        "- In mean-rank tables, crashed algorithms receive the worst rank in that cell.\n\n",
    );

    let mut reference_seen = false;
    for (matrix_id, matrix_cfg) in &config.matrix {
        if matrix_filter.is_some_and(|f| f != matrix_id) {
            continue;
        }
        let Some(matrix_data) = data.get(matrix_id) else {
            continue;
        };
        let algorithms = &matrix_cfg.algorithms;
        // cells in config order
        let cell_ids: Vec<String> = matrix_cfg
            .cells
            .iter()
            .map(|c| c.resolve(matrix_cfg.budget).map(|s| s.id()))
            .collect::<Result<_>>()?;

        out.push_str(&format!("## Matrix `{matrix_id}`\n\n"));

        // ---- median / IQR table ----
        out.push_str("### Median final fitness (IQR) per cell\n\n");
        out.push_str(&format!("| cell | {} |\n", algorithms.join(" | ")));
        out.push_str(&format!("|---|{}\n", "---|".repeat(algorithms.len())));
        for cell_id in &cell_ids {
            let Some(cell_data) = matrix_data.get(cell_id) else {
                continue;
            };
            let medians: Vec<Option<f64>> = algorithms
                .iter()
                .map(|a| {
                    cell_data.get(a).and_then(|d| {
                        let vals: Vec<f64> = d.by_seed.values().copied().collect();
                        if d.crashed || vals.is_empty() {
                            None
                        } else {
                            median_iqr(&vals).ok().map(|(m, _, _)| m)
                        }
                    })
                })
                .collect();
            let best = medians
                .iter()
                .flatten()
                .copied()
                .fold(f64::INFINITY, f64::min);
            let cells: Vec<String> = algorithms
                .iter()
                .zip(&medians)
                .map(|(a, m)| match m {
                    None => "crash".to_string(),
                    Some(med) => {
                        let vals: Vec<f64> = cell_data[a].by_seed.values().copied().collect();
                        let (_, q1, q3) = median_iqr(&vals).expect("non-empty");
                        let body = format!("{} [{}, {}]", fmt_num(*med), fmt_num(q1), fmt_num(q3));
                        if *med == best {
                            format!("**{body}**")
                        } else {
                            body
                        }
                    }
                })
                .collect();
            out.push_str(&format!("| {} | {} |\n", cell_id, cells.join(" | ")));
        }
        out.push('\n');

        // ---- pairwise comparisons ----
        if algorithms.len() < 2 {
            out.push_str("Comparison tables omitted: the matrix contains a single algorithm.\n\n");
            if algorithms.iter().any(|a| a == reference) {
                reference_seen = true;
            }
            continue;
        }
        if !algorithms.iter().any(|a| a == reference) {
            out.push_str(&format!(
                "Pairwise table omitted: reference `{reference}` is not part of this matrix.\n\n",
            ));
        } else {
            reference_seen = true;
            let mut comparisons: Vec<Comparison> = Vec::new();
            for algorithm in algorithms.iter().filter(|a| *a != reference) {
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for cell_id in &cell_ids {
                    let Some(cell_data) = matrix_data.get(cell_id) else {
                        continue;
                    };
                    let (Some(a), Some(r)) = (cell_data.get(algorithm), cell_data.get(reference))
                    else {
                        continue;
                    };
                    for (seed, &av) in &a.by_seed {
                        if let Some(&rv) = r.by_seed.get(seed) {
                            xs.push(av);
                            ys.push(rv);
                        }
                    }
                }
                if xs.is_empty() {
                    comparisons.push(Comparison {
                        algorithm: algorithm.clone(),
                        n_pairs: 0,
                        p_raw: f64::NAN,
                        a12: f64::NAN,
                    });
                    continue;
                }
                let sample = PairedSample::new(xs.clone(), ys.clone())
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
                let w = wilcoxon_signed_rank(&sample)
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
                let a12 = vargha_delaney_a12(&xs, &ys)
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
                comparisons.push(Comparison {
                    algorithm: algorithm.clone(),
                    n_pairs: xs.len(),
                    p_raw: w.p_value,
                    a12,
                });
            }
            let with_pairs: Vec<usize> = comparisons
                .iter()
                .enumerate()
                .filter(|(_, c)| c.n_pairs > 0)
                .map(|(i, _)| i)
                .collect();
            let holm = holm_correct(
                &with_pairs
                    .iter()
                    .map(|&i| comparisons[i].p_raw)
                    .collect::<Vec<_>>(),
            );
            let mut p_holm = vec![f64::NAN; comparisons.len()];
            for (slot, &i) in with_pairs.iter().enumerate() {
                p_holm[i] = holm[slot];
            }

            out.push_str(&format!("### Paired comparisons vs `{reference}`\n\n"));
            out.push_str("| algorithm | pairs | p | p (Holm) | A12 | interpretation |\n");
            out.push_str("|---|---|---|---|---|---|\n");
            for (c, ph) in comparisons.iter().zip(&p_holm) {
                if c.n_pairs == 0 {
                    out.push_str(&format!(
                        "| {} | 0 | n/a | n/a | n/a | no paired runs |\n",
                        c.algorithm
                    ));
                } else {
                    out.push_str(&format!(
                        "| {} | {} | {} | {} | {:.3} | {} |\n",
                        c.algorithm,
                        c.n_pairs,
                        fmt_p(c.p_raw),
                        fmt_p(*ph),
                        c.a12,
                        interpretation(&c.algorithm, reference, *ph, c.a12)
                    ));
                }
            }
            out.push('\n');
        }

        // ---- mean ranks ----
        let mut rank_sums: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
        for cell_id in &cell_ids {
            let Some(cell_data) = matrix_data.get(cell_id) else {
                continue;
            };
            let mut ranked: Vec<(&str, f64)> = Vec::new();
            let mut crashed: Vec<&str> = Vec::new();
            for a in algorithms {
                match cell_data.get(a) {
                    Some(d) if !d.crashed && !d.by_seed.is_empty() => {
                        let vals: Vec<f64> = d.by_seed.values().copied().collect();
                        let (m, _, _) = median_iqr(&vals).expect("non-empty");
                        ranked.push((a.as_str(), m));
                    }
                    Some(d) if d.crashed => crashed.push(a.as_str()),
                    _ => {}
                }
            }
            ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
            let total = ranked.len() + crashed.len();
            let mut i = 0;
            while i < ranked.len() {
                let mut j = i;
                while j + 1 < ranked.len() && ranked[j + 1].1 == ranked[i].1 {
                    j += 1;
                }
                let avg_rank = (i + j) as f64 / 2.0 + 1.0;
                for &(name, _) in &ranked[i..=j] {
                    let e = rank_sums.entry(name).or_insert((0.0, 0));
                    e.0 += avg_rank;
                    e.1 += 1;
                }
                i = j + 1;
            }
            for name in crashed {
                let e = rank_sums.entry(name).or_insert((0.0, 0));
                e.0 += total as f64;
                e.1 += 1;
            }
        }
        if !rank_sums.is_empty() {
            let mut means: Vec<(&str, f64)> = rank_sums
                .iter()
                .map(|(name, (sum, n))| (*name, sum / *n as f64))
                .collect();
            means.sort_by(|a, b| a.1.total_cmp(&b.1));
            out.push_str("### Mean rank across cells\n\n");
            out.push_str("| algorithm | mean rank |\n|---|---|\n");
            for (name, rank) in means {
                out.push_str(&format!("| {name} | {rank:.2} |\n"));
            }
            out.push('\n');
        }
    }

    if !reference_seen {
        return Err(HarnessError::Config(format!(
            "reference algorithm {reference:?} has no runs in the selected results"
        )));
    }
    Ok(out)
}
