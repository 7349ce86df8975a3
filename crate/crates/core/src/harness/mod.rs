//! Experiment runner: seeded runs over a grid of rotation angles,
//! per-run JSON records, summaries and layer-count series.
//!
//! An experiment directory holds one `*.json` record per (angle, run),
//! `index.json` with timing information, and `reference_set.txt` when the
//! IGD reference set was built from the merged results.

pub mod config;
pub mod summary;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use parking_lot::Mutex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cone_order::ConeOrder;
use crate::evolution::{AlgorithmConfig, Engine, EvolutionError, GenerationLog};
use crate::metrics::{self, MetricsError, NormalizationSpec};
use crate::problems::{data, ProblemError, ProblemId};
use crate::ranking::{nondominated_sort, OrderSelector};

pub use config::{angle_label, BudgetMode, ExperimentConfig, DEFAULT_ANGLES};
pub use summary::{load_records, summarize, Summary, SummaryRow};

/// Upper bound on the size of sampled analytic IGD reference sets.
pub const IGD_REFERENCE_POINTS: usize = 5000;
pub const INDEX_FILE: &str = "index.json";
pub const MERGED_REFERENCE_FILE: &str = "reference_set.txt";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontMember {
    pub f: Vec<f64>,
    pub x: Vec<f64>,
}

/// Where the IGD reference set came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum IgdReference {
    Analytic { points: usize },
    File { path: PathBuf, points: usize },
    /// Nondominated union of all final fronts of the experiment, stored
    /// next to the records.
    Merged { file: String, points: usize },
}

/// Everything persisted about one run. Timing lives in the index so that
/// records of identical runs are byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: ProblemId,
    pub objectives: usize,
    pub angle_degrees: f64,
    pub run: usize,
    pub config: AlgorithmConfig,
    pub evaluations: usize,
    pub generations: usize,
    pub hv_reference: Vec<f64>,
    pub hv: f64,
    /// `None` when the front is empty.
    pub igd: Option<f64>,
    pub igd_reference: IgdReference,
    /// Pareto-nondominated members of the final population.
    pub front: Vec<FrontMember>,
    pub layers: Vec<GenerationLog>,
}

impl RunRecord {
    pub fn file_name(&self) -> String {
        record_file_name(self.config.algorithm.as_str(), self.problem, self.objectives, self.angle_degrees, self.run)
    }

    pub fn front_objectives(&self) -> Vec<&[f64]> {
        self.front.iter().map(|m| m.f.as_slice()).collect()
    }

    /// Hypervolume recomputed from the stored front.
    pub fn recompute_hv(&self) -> Result<f64, MetricsError> {
        let spec = NormalizationSpec::from_reference(self.hv_reference.clone())?;
        metrics::hypervolume(&self.front_objectives(), &spec)
    }

    pub fn read(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text).map_err(|source| HarnessError::Json { path: path.into(), source })
    }

    pub fn write(&self, path: &Path) -> Result<(), HarnessError> {
        let mut text = serde_json::to_string_pretty(self).map_err(|source| HarnessError::Json { path: path.into(), source })?;
        text.push('\n');
        std::fs::write(path, text).map_err(io_err(path))
    }
}

fn record_file_name(algorithm: &str, problem: ProblemId, m: usize, angle: f64, run: usize) -> String {
    format!("{algorithm}_{problem}_m{m}_a{}_r{run:02}.json", angle_label(angle))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub file: String,
    pub angle_degrees: f64,
    pub run: usize,
    pub seed: u64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentIndex {
    pub config: ExperimentConfig,
    pub budget: usize,
    /// Angles dropped because their cone matrix is singular.
    pub skipped_angles: Vec<f64>,
    pub records: Vec<IndexEntry>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub dir: PathBuf,
    pub records: Vec<RunRecord>,
    pub skipped_angles: Vec<f64>,
}

/// Runs every (angle, run) cell of `config` in parallel and persists the
/// records under `config.out`.
///
/// Angles whose cone cannot be built for this objective count (a singular
/// generator) are skipped with a warning and listed in the index.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    config.validate()?;
    let problem = config.build_problem()?;
    let budget = config.evaluation_budget(&problem);

    let mut angles = Vec::new();
    let mut skipped_angles = Vec::new();
    for &a in &config.angles {
        match OrderSelector::new(problem.m, a.to_radians()) {
            Ok(_) => angles.push(a),
            Err(e) => {
                warn!("skipping angle {a} for {}: {e}", problem.name());
                skipped_angles.push(a);
            }
        }
    }
    if angles.is_empty() {
        return Err(HarnessError::Config(format!("no usable angle for {}", problem.name())));
    }
    let dir = config.out.clone();
    std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;

    let cells: Vec<(f64, usize)> = angles.iter().flat_map(|&a| (0..config.runs).map(move |r| (a, r))).collect();
    info!("{}: {} runs of {} with {budget} evaluations", problem.name(), cells.len(), config.algorithm);
    let outcomes = cells
        .par_iter()
        .map(|&(angle, run)| {
            let started = Instant::now();
            let cfg = config.algorithm_config(&problem, angle, run);
            let mut engine = Engine::new(problem.clone(), cfg)?;
            engine.run()?;
            let wall = started.elapsed().as_secs_f64();
            info!("{} angle {angle} run {run} finished in {wall:.1}s", problem.name());
            Ok((angle, run, engine, wall))
        })
        .collect::<Result<Vec<_>, EvolutionError>>()?;

    let fronts: Vec<Vec<FrontMember>> = outcomes
        .iter()
        .map(|(_, _, engine, _)| {
            engine.state().pareto_front().into_iter().map(|i| FrontMember { f: i.f.clone(), x: i.x.clone() }).collect()
        })
        .collect();

    let (reference, igd_reference) = match problem.reference_set(IGD_REFERENCE_POINTS)? {
        Some(points) => {
            let source = match &problem.reference_set_path {
                Some(path) => IgdReference::File { path: path.clone(), points: points.len() },
                None => IgdReference::Analytic { points: points.len() },
            };
            (points, source)
        }
        None => {
            let merged = merged_front(&fronts, problem.m);
            let path = dir.join(MERGED_REFERENCE_FILE);
            data::write_rows(&path, &merged).map_err(io_err(&path))?;
            let source = IgdReference::Merged { file: MERGED_REFERENCE_FILE.into(), points: merged.len() };
            (merged, source)
        }
    };
    let spec = NormalizationSpec::from_reference(problem.hv_reference.clone())?;

    let index = Mutex::new(Vec::with_capacity(outcomes.len()));
    let records = outcomes
        .into_par_iter()
        .zip(fronts)
        .map(|((angle, run, engine, wall), front)| {
            let state = engine.state();
            let objectives: Vec<&[f64]> = front.iter().map(|m| m.f.as_slice()).collect();
            let record = RunRecord {
                problem: problem.id,
                objectives: problem.m,
                angle_degrees: angle,
                run,
                config: engine.config().clone(),
                evaluations: state.evaluations,
                generations: state.generation,
                hv_reference: problem.hv_reference.clone(),
                hv: metrics::hypervolume(&objectives, &spec)?,
                igd: metrics::igd(&objectives, &reference)?.finite(),
                igd_reference: igd_reference.clone(),
                front,
                layers: state.history.clone(),
            };
            let file = record.file_name();
            record.write(&dir.join(&file))?;
            index.lock().push(IndexEntry { file, angle_degrees: angle, run, seed: record.config.seed, wall_seconds: wall });
            Ok(record)
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let mut entries = index.into_inner();
    entries.sort_by(|a, b| a.file.cmp(&b.file));
    let index = ExperimentIndex { config: config.clone(), budget, skipped_angles: skipped_angles.clone(), records: entries };
    let path = dir.join(INDEX_FILE);
    let text = serde_json::to_string_pretty(&index).map_err(|source| HarnessError::Json { path: path.clone(), source })?;
    std::fs::write(&path, text + "\n").map_err(io_err(&path))?;

    Ok(ExperimentOutput { dir, records, skipped_angles })
}

/// Pareto-nondominated union of several fronts.
pub fn merged_front(fronts: &[Vec<FrontMember>], m: usize) -> Vec<Vec<f64>> {
    let mut all: Vec<&[f64]> = fronts.iter().flatten().map(|p| p.f.as_slice()).collect();
    all.sort_by(|a, b| a.iter().zip(b.iter()).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    all.dedup();
    if all.is_empty() {
        return Vec::new();
    }
    let order = ConeOrder::pareto(m).expect("at least two objectives");
    let partition = nondominated_sort(&all, &order).expect("finite objectives");
    partition.fronts[0].iter().map(|&i| all[i].to_vec()).collect()
}

/// Writes the per-generation layer counts of `record` as CSV.
pub fn emit_layer_series<W: Write>(record: &RunRecord, mut out: W) -> Result<(), HarnessError> {
    let to_io = |e: std::io::Error| HarnessError::Csv(e.into());
    writeln!(
        out,
        "# x-axis: generation index; generation g ranks the parents after {} + g*{} evaluations",
        record.config.population_size, record.config.population_size
    )
    .map_err(to_io)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["generation", "front_count", "rotated"])?;
    for log in &record.layers {
        w.write_record([log.generation.to_string(), log.front_count.to_string(), log.rotated.to_string()])?;
    }
    w.flush().map_err(to_io)?;
    Ok(())
}

pub fn write_layer_series(record: &RunRecord, path: &Path) -> Result<(), HarnessError> {
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    emit_layer_series(record, std::io::BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::Algorithm;

    fn tiny(dir: &Path, problem: ProblemId, m: usize) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(problem, m, Algorithm::Nsga2);
        cfg.angles = vec![0.0, 15.0];
        cfg.runs = 2;
        cfg.population_size = 12;
        cfg.evaluations = Some(12 * 6);
        cfg.out = dir.to_path_buf();
        cfg
    }

    #[test]
    fn writes_one_record_per_cell_and_an_index() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_experiment(&tiny(dir.path(), ProblemId::Dtlz2, 4)).unwrap();
        assert_eq!(out.records.len(), 4);
        for r in &out.records {
            assert_eq!(r.evaluations, 72);
            assert_eq!(r.recompute_hv().unwrap(), r.hv);
            assert_eq!(&RunRecord::read(&dir.path().join(r.file_name())).unwrap(), r);
            assert!(matches!(r.igd_reference, IgdReference::Analytic { .. }));
        }
        let index: ExperimentIndex =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join(INDEX_FILE)).unwrap()).unwrap();
        assert_eq!(index.records.len(), 4);
    }

    #[test]
    fn singular_angle_is_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny(dir.path(), ProblemId::Dtlz2, 4);
        cfg.angles = vec![0.0, 30.0];
        cfg.runs = 1;
        let out = run_experiment(&cfg).unwrap();
        assert_eq!(out.skipped_angles, vec![30.0]);
        assert_eq!(out.records.len(), 1);
    }

    #[test]
    fn problems_without_analytic_front_use_merged_reference() {
        for (problem, m) in [(ProblemId::Dtlz2Convex, 3), (ProblemId::Uf11, 5), (ProblemId::Uf13, 5)] {
            let dir = tempfile::tempdir().unwrap();
            let out = run_experiment(&tiny(dir.path(), problem, m)).unwrap();
            let IgdReference::Merged { file, points } = &out.records[0].igd_reference else { panic!("{problem}") };
            let merged = data::read_reference_set(&dir.path().join(file), m).unwrap();
            assert_eq!(merged.len(), *points);
            assert!(out.records.iter().all(|r| r.igd.is_some()));
        }
    }

    #[test]
    fn layer_series_has_a_header_comment() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_experiment(&tiny(dir.path(), ProblemId::Dtlz1, 3)).unwrap();
        let mut buf = Vec::new();
        emit_layer_series(&out.records[0], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# x-axis: generation"));
        assert_eq!(lines[1], "generation,front_count,rotated");
        assert_eq!(lines.len(), 2 + out.records[0].layers.len());
    }
}
