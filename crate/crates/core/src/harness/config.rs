use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::evolution::{Algorithm, AlgorithmConfig};
use crate::problems::{ProblemDefinition, ProblemId};

/// Default angle columns, in degrees.
pub const DEFAULT_ANGLES: [f64; 7] = [0.0, 30.0, 20.0, 15.0, 10.0, 6.0, 3.0];
pub const DEFAULT_RUNS: usize = 15;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetMode {
    #[default]
    Full,
    Half,
}

/// One experiment: a problem, an algorithm, and every (angle, run) cell.
///
/// Loadable from TOML with the same field names, e.g.
///
/// ```toml
/// problem = "dtlz2"
/// objectives = 6
/// algorithm = "nsga2"
/// angles = [0.0, 15.0]
/// runs = 15
/// budget = "half"
/// out = "results/dtlz2_m6"
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemId,
    pub objectives: usize,
    pub algorithm: Algorithm,
    /// Rotation angles in degrees.
    #[serde(default = "default_angles")]
    pub angles: Vec<f64>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub budget: BudgetMode,
    /// Exact evaluation budget; overrides `budget`.
    #[serde(default)]
    pub evaluations: Option<usize>,
    #[serde(default = "default_population")]
    pub population_size: usize,
    #[serde(default)]
    pub seed_base: u64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// IGD reference set file (one point per line).
    #[serde(default)]
    pub reference_set: Option<PathBuf>,
}

fn default_angles() -> Vec<f64> {
    DEFAULT_ANGLES.to_vec()
}

fn default_runs() -> usize {
    DEFAULT_RUNS
}

fn default_population() -> usize {
    AlgorithmConfig::DEFAULT_POPULATION
}

fn default_out() -> PathBuf {
    PathBuf::from("results")
}

impl ExperimentConfig {
    pub fn new(problem: ProblemId, objectives: usize, algorithm: Algorithm) -> Self {
        Self {
            problem,
            objectives,
            algorithm,
            angles: default_angles(),
            runs: DEFAULT_RUNS,
            budget: BudgetMode::Full,
            evaluations: None,
            population_size: default_population(),
            seed_base: 0,
            out: default_out(),
            reference_set: None,
        }
    }

    pub fn from_toml_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.into(), source })?;
        toml::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.runs == 0 {
            return Err(HarnessError::Config("runs must be at least 1".into()));
        }
        if self.angles.is_empty() {
            return Err(HarnessError::Config("at least one angle is required".into()));
        }
        if let Some(a) = self.angles.iter().find(|a| !(0.0..45.0).contains(*a)) {
            return Err(HarnessError::Config(format!("angle {a} is outside [0, 45) degrees")));
        }
        let mut seen = self.angles.clone();
        seen.sort_by(f64::total_cmp);
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(HarnessError::Config("angles must be distinct".into()));
        }
        Ok(())
    }

    pub fn build_problem(&self) -> Result<ProblemDefinition, HarnessError> {
        let problem = self.problem.build(self.objectives)?;
        Ok(match &self.reference_set {
            Some(path) => problem.with_reference_set(path),
            None => problem,
        })
    }

    pub fn evaluation_budget(&self, problem: &ProblemDefinition) -> usize {
        match (self.evaluations, self.budget) {
            (Some(n), _) => n,
            (None, BudgetMode::Full) => problem.budget(),
            (None, BudgetMode::Half) => problem.half_budget(),
        }
    }

    /// Seed of run `run`; independent of angle and algorithm.
    pub fn seed(&self, run: usize) -> u64 {
        self.seed_base + run as u64
    }

    pub fn algorithm_config(&self, problem: &ProblemDefinition, angle_degrees: f64, run: usize) -> AlgorithmConfig {
        let mut c = AlgorithmConfig::new(self.algorithm, problem, angle_degrees.to_radians(), self.seed(run));
        c.population_size = self.population_size;
        c.budget = self.evaluation_budget(problem);
        c
    }
}

/// Label used in file names and tables: `15`, `2.5`.
pub fn angle_label(angle_degrees: f64) -> String {
    format!("{angle_degrees}")
}
