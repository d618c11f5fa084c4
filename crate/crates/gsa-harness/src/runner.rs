//! Matrix execution: task planning, position-independent seeding, a bounded
//! worker pool, and atomic CSV persistence.
//!
//! Run seeds are FNV-1a hashes of `(matrix id, cell id, algorithm,
//! replicate)`, so editing one cell out of a config never changes any other
//! run's seed. Problem construction seeds omit the algorithm, so paired
//! algorithms face identical problem instances per replicate.

use std::fs::File;
use std::path::Path;
use std::sync::Mutex;
use std::time::Instant;

use gsa::GsaError;

use crate::algorithms::Algorithm;
use crate::config::{CellSpec, ExperimentConfig};
use crate::error::{HarnessError, Result};

/// FNV-1a over the parts joined with a separator byte; stable across
/// platforms and releases, unlike the std hasher. Also the cheap way to
/// derive a run seed that cannot collide with a problem-construction seed:
/// two rng streams started from the same value replay each other's draws,
/// and a run whose first sampled candidate reproduces the construction's
/// target draw would start on the planted optimum.
pub fn stable_seed(parts: &[&str]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    for part in parts {
        for byte in part.as_bytes() {
            hash ^= u64::from(*byte);
            hash = hash.wrapping_mul(PRIME);
        }
        hash ^= 0x1f;
        hash = hash.wrapping_mul(PRIME);
    }
    hash
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTask {
    pub matrix_id: String,
    pub cell: CellSpec,
    pub algorithm: Algorithm,
    pub replicate: u32,
}

impl RunTask {
    pub fn run_seed(&self) -> u64 {
        stable_seed(&[
            &self.matrix_id,
            &self.cell.id(),
            self.algorithm.name(),
            &self.replicate.to_string(),
        ])
    }

    pub fn problem_seed(&self) -> u64 {
        stable_seed(&[
            &self.matrix_id,
            &self.cell.id(),
            "problem",
            &self.replicate.to_string(),
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    EncoderError,
}

impl RunStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunStatus::Ok => "ok",
            RunStatus::EncoderError => "encoder_error",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(RunStatus::Ok),
            "encoder_error" => Ok(RunStatus::EncoderError),
            other => Err(HarnessError::Config(format!(
                "unknown status {other:?} in results"
            ))),
        }
    }
}

/// One persisted run outcome. `final_fitness` is the best true fitness and
/// is absent exactly when the run failed in the encoder.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub matrix_id: String,
    pub cell_id: String,
    pub benchmark: String,
    pub dims: String,
    pub budget: usize,
    pub algorithm: String,
    pub seed: u32,
    pub status: RunStatus,
    pub final_fitness: Option<f64>,
    pub evaluations_used: usize,
    pub wall_ms: u64,
}

pub const CSV_HEADER: [&str; 11] = [
    "matrix_id",
    "cell_id",
    "benchmark",
    "dims",
    "budget",
    "algorithm",
    "seed",
    "status",
    "final_fitness",
    "evaluations_used",
    "wall_ms",
];

fn dims_label(problem: &gsa::benchmarks::Problem) -> String {
    problem
        .specs()
        .iter()
        .map(|s| format!("{}{}", s.label(), s.scalar_len()))
        .collect::<Vec<_>>()
        .join("+")
}

/// Expands a config into the full (cell x algorithm x replicate) task list.
pub fn plan(config: &ExperimentConfig, matrix_filter: Option<&str>) -> Result<Vec<RunTask>> {
    if let Some(wanted) = matrix_filter {
        if !config.matrix.contains_key(wanted) {
            return Err(HarnessError::Config(format!(
                "matrix {wanted:?} not in config"
            )));
        }
    }
    let mut tasks = Vec::new();
    for (matrix_id, matrix) in &config.matrix {
        if matrix_filter.is_some_and(|f| f != matrix_id) {
            continue;
        }
        let algorithms: Vec<Algorithm> = matrix
            .algorithms
            .iter()
            .map(|name| Algorithm::parse(name))
            .collect::<Result<_>>()?;
        for cell_cfg in &matrix.cells {
            let cell = cell_cfg.resolve(matrix.budget)?;
            for algorithm in &algorithms {
                for replicate in 0..matrix.seeds {
                    tasks.push(RunTask {
                        matrix_id: matrix_id.clone(),
                        cell: cell.clone(),
                        algorithm: algorithm.clone(),
                        replicate,
                    });
                }
            }
        }
    }
    Ok(tasks)
}

/// Executes one task. Encoder errors become `encoder_error` rows (they are
/// results, not failures); anything else is a hard error.
pub fn execute_task(task: &RunTask) -> Result<ResultRow> {
    let problem = task.cell.benchmark.build(task.problem_seed())?;
    let started = Instant::now();
    let outcome = task
        .algorithm
        .run(&problem, task.cell.budget, task.run_seed());
    let wall_ms = started.elapsed().as_millis() as u64;
    let (status, final_fitness, evaluations_used) = match outcome {
        Ok(record) => (
            RunStatus::Ok,
            Some(record.final_best_fitness),
            record.evaluations_used,
        ),
        Err(GsaError::EncoderUnsupportedFamily(_)) => (RunStatus::EncoderError, None, 0),
        Err(e) => return Err(e.into()),
    };
    Ok(ResultRow {
        matrix_id: task.matrix_id.clone(),
        cell_id: task.cell.id(),
        benchmark: task.cell.benchmark.name().to_string(),
        dims: dims_label(&problem),
        budget: task.cell.budget,
        algorithm: task.algorithm.name().to_string(),
        seed: task.replicate,
        status,
        final_fitness,
        evaluations_used,
        wall_ms,
    })
}

fn run_tasks<F>(tasks: &[RunTask], workers: usize, sink: F) -> Result<()>
where
    F: Fn(ResultRow) -> Result<()> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        if workers != 1 {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| HarnessError::Config(e.to_string()))?;
            return pool.install(|| {
                tasks
                    .par_iter()
                    .try_for_each(|task| execute_task(task).and_then(&sink))
            });
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = workers;
    tasks
        .iter()
        .try_for_each(|task| execute_task(task).and_then(&sink))
}

/// Executes tasks and returns the rows in task order (in memory, no disk).
pub fn execute_collect(tasks: &[RunTask], workers: usize) -> Result<Vec<ResultRow>> {
    let rows: Mutex<Vec<(usize, ResultRow)>> = Mutex::new(Vec::with_capacity(tasks.len()));
    let indexed: Vec<(usize, &RunTask)> = tasks.iter().enumerate().collect();
    #[cfg(feature = "parallel")]
    {
        if workers != 1 {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| HarnessError::Config(e.to_string()))?;
            pool.install(|| {
                indexed.par_iter().try_for_each(|(i, task)| -> Result<()> {
                    let row = execute_task(task)?;
                    rows.lock().expect("row sink").push((*i, row));
                    Ok(())
                })
            })?;
            let mut out = rows.into_inner().expect("row sink");
            out.sort_by_key(|(i, _)| *i);
            return Ok(out.into_iter().map(|(_, r)| r).collect());
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = workers;
    indexed.iter().map(|(_, task)| execute_task(task)).collect()
}

fn write_row(writer: &mut csv::Writer<File>, row: &ResultRow) -> std::io::Result<()> {
    writer
        .write_record([
            row.matrix_id.as_str(),
            row.cell_id.as_str(),
            row.benchmark.as_str(),
            row.dims.as_str(),
            &row.budget.to_string(),
            row.algorithm.as_str(),
            &row.seed.to_string(),
            row.status.as_str(),
            &row.final_fitness
                .map(|f| format!("{f:e}"))
                .unwrap_or_default(),
            &row.evaluations_used.to_string(),
            &row.wall_ms.to_string(),
        ])
        .map_err(std::io::Error::other)?;
    // flush per row so an interrupted matrix leaves only complete lines
    writer.flush()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSummary {
    pub total: usize,
    pub ok: usize,
    pub encoder_errors: usize,
}

/// Runs every planned task and streams rows to `csv_path` through a single
/// serialized writer. On a write failure a `<csv_path>.partial` marker is
/// left next to the output.
pub fn run_matrix_to_csv(
    config: &ExperimentConfig,
    matrix_filter: Option<&str>,
    csv_path: &Path,
    workers: usize,
) -> Result<RunSummary> {
    let tasks = plan(config, matrix_filter)?;
    let file = File::create(csv_path)
        .map_err(|e| HarnessError::Io(format!("creating {}: {e}", csv_path.display())))?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record(CSV_HEADER)
        .and_then(|()| writer.flush().map_err(csv::Error::from))
        .map_err(|e| HarnessError::Io(e.to_string()))?;

    let writer = Mutex::new(writer);
    let counts = Mutex::new((0usize, 0usize));
    let result = run_tasks(&tasks, workers, |row| {
        let mut guard = writer.lock().expect("csv writer");
        write_row(&mut guard, &row).map_err(|e| HarnessError::Io(e.to_string()))?;
        let mut c = counts.lock().expect("counters");
        match row.status {
            RunStatus::Ok => c.0 += 1,
            RunStatus::EncoderError => c.1 += 1,
        }
        Ok(())
    });
    if let Err(e) = result {
        if matches!(e, HarnessError::Io(_)) {
            let marker = csv_path.with_extension("csv.partial");
            let _ = std::fs::write(&marker, b"matrix run aborted before completion\n");
        }
        return Err(e);
    }
    let (ok, encoder_errors) = counts.into_inner().expect("counters");
    Ok(RunSummary {
        total: tasks.len(),
        ok,
        encoder_errors,
    })
}

/// Reads a results CSV produced by [`run_matrix_to_csv`].
pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| HarnessError::Io(format!("reading {}: {e}", path.display())))?;
    {
        let headers = reader
            .headers()
            .map_err(|e| HarnessError::Io(e.to_string()))?;
        let expected: Vec<&str> = CSV_HEADER.to_vec();
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(HarnessError::Config(format!(
                "unexpected results schema: {:?}",
                headers
            )));
        }
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| HarnessError::Io(e.to_string()))?;
        let field = |i: usize| -> &str { record.get(i).unwrap_or("") };
        let status = RunStatus::parse(field(7))?;
        let final_fitness = match field(8) {
            "" => None,
            s => Some(
                s.parse::<f64>()
                    .map_err(|e| HarnessError::Config(format!("bad final_fitness {s:?}: {e}")))?,
            ),
        };
        if status == RunStatus::EncoderError && final_fitness.is_some() {
            return Err(HarnessError::Config(
                "encoder_error row carries a fitness value".into(),
            ));
        }
        rows.push(ResultRow {
            matrix_id: field(0).to_string(),
            cell_id: field(1).to_string(),
            benchmark: field(2).to_string(),
            dims: field(3).to_string(),
            budget: field(4)
                .parse()
                .map_err(|e| HarnessError::Config(format!("{e}")))?,
            algorithm: field(5).to_string(),
            seed: field(6)
                .parse()
                .map_err(|e| HarnessError::Config(format!("{e}")))?,
            status,
            final_fitness,
            evaluations_used: field(9)
                .parse()
                .map_err(|e| HarnessError::Config(format!("{e}")))?,
            wall_ms: field(10)
                .parse()
                .map_err(|e| HarnessError::Config(format!("{e}")))?,
        });
    }
    Ok(rows)
}

/// Writes rows to an open file handle; used by tests that synthesize rows.
pub fn write_results(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let file = File::create(path).map_err(|e| HarnessError::Io(e.to_string()))?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record(CSV_HEADER)
        .map_err(|e| HarnessError::Io(e.to_string()))?;
    for row in rows {
        write_row(&mut writer, row).map_err(|e| HarnessError::Io(e.to_string()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BenchmarkSpec;

    fn mini_config(cells: &str) -> ExperimentConfig {
        let text = format!(
            r#"
            [matrix.demo]
            algorithms = ["GSA_DIRECT", "RANDOM_FLATTENED"]
            seeds = 2
            budget = 120
            {cells}
            "#
        );
        ExperimentConfig::parse(&text).unwrap()
    }

    const TWO_CELLS: &str = r#"
        [[matrix.demo.cells]]
        benchmark = "typed_additive"
        dim = 8

        [[matrix.demo.cells]]
        benchmark = "onemax"
        n = 16
    "#;

    #[test]
    fn plan_expands_the_cross_product() {
        let cfg = mini_config(TWO_CELLS);
        let tasks = plan(&cfg, None).unwrap();
        assert_eq!(tasks.len(), 2 * 2 * 2);
    }

    #[test]
    fn seeding_is_position_independent() {
        let full = mini_config(TWO_CELLS);
        let reduced = mini_config(
            r#"
            [[matrix.demo.cells]]
            benchmark = "onemax"
            n = 16
            "#,
        );
        let full_tasks = plan(&full, None).unwrap();
        let reduced_tasks = plan(&reduced, None).unwrap();
        for rt in &reduced_tasks {
            let ft = full_tasks
                .iter()
                .find(|t| {
                    t.cell.id() == rt.cell.id()
                        && t.algorithm == rt.algorithm
                        && t.replicate == rt.replicate
                })
                .expect("shared task present in the full plan");
            assert_eq!(ft.run_seed(), rt.run_seed());
            assert_eq!(ft.problem_seed(), rt.problem_seed());
        }
    }

    #[test]
    fn single_task_yields_a_single_row() {
        let cfg = ExperimentConfig::parse(
            r#"
            [matrix.one]
            algorithms = ["GSA_DIRECT"]
            seeds = 1
            budget = 60

            [[matrix.one.cells]]
            benchmark = "typed_additive"
            dim = 8
            "#,
        )
        .unwrap();
        let tasks = plan(&cfg, None).unwrap();
        assert_eq!(tasks.len(), 1);
        let rows = execute_collect(&tasks, 1).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].status, RunStatus::Ok);
        assert_eq!(rows[0].dims, "R2+B2+Z2+C2");
    }

    #[test]
    fn encoder_failures_become_data_rows() {
        let task = RunTask {
            matrix_id: "m".into(),
            cell: CellSpec {
                benchmark: BenchmarkSpec::TypedMix {
                    n_families: 5,
                    dim: 24,
                },
                budget: 100,
            },
            algorithm: Algorithm::FlattenedDe,
            replicate: 0,
        };
        let row = execute_task(&task).unwrap();
        assert_eq!(row.status, RunStatus::EncoderError);
        assert_eq!(row.final_fitness, None);
    }

    #[test]
    fn csv_round_trips_and_keeps_the_schema() {
        let cfg = mini_config(TWO_CELLS);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        let summary = run_matrix_to_csv(&cfg, None, &path, 1).unwrap();
        assert_eq!(summary.total, 8);
        assert_eq!(summary.ok, 8);

        let text = std::fs::read_to_string(&path).unwrap();
        let first_line = text.lines().next().unwrap();
        assert_eq!(first_line, CSV_HEADER.join(","));

        let rows = read_results(&path).unwrap();
        assert_eq!(rows.len(), 8);
    }

    #[test]
    fn reruns_reproduce_fitness_values() {
        let cfg = mini_config(TWO_CELLS);
        let tasks = plan(&cfg, None).unwrap();
        let a = execute_collect(&tasks, 1).unwrap();
        let b = execute_collect(&tasks, 2).unwrap();
        let key = |r: &ResultRow| (r.cell_id.clone(), r.algorithm.clone(), r.seed);
        let mut am: Vec<_> = a.iter().map(|r| (key(r), r.final_fitness)).collect();
        let mut bm: Vec<_> = b.iter().map(|r| (key(r), r.final_fitness)).collect();
        am.sort_by(|x, y| x.0.cmp(&y.0));
        bm.sort_by(|x, y| x.0.cmp(&y.0));
        assert_eq!(am, bm);
    }

    #[test]
    fn matrix_filter_rejects_unknown_ids() {
        let cfg = mini_config(TWO_CELLS);
        assert!(plan(&cfg, Some("demo")).is_ok());
        assert!(plan(&cfg, Some("nope")).is_err());
    }
}
