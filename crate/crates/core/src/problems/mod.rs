//! Benchmark problems: evaluators, bounds, budgets, hypervolume reference
//! points and Pareto-front reference sets.

pub mod data;
pub mod dtlz;
pub mod uf;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::simplex;
pub use uf::Uf11Data;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}: bad number {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{}: {message}", path.display())]
    Shape { path: PathBuf, message: String },
    #[error("unknown problem {0:?}")]
    Unknown(String),
    #[error("{problem} does not support {m} objectives")]
    Objectives { problem: ProblemId, m: usize },
}

/// Shift applied to DTLZ2 to obtain the convex variant.
pub const CONVEX_SHIFT: f64 = 3.5;

/// Environment variable overriding the directory holding the UF11 data files.
pub const DATA_DIR_ENV: &str = "CONE_MOEA_DATA_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemId {
    Dtlz1,
    Dtlz2,
    Dtlz2Convex,
    Uf11,
    Uf13,
}

impl ProblemId {
    pub const ALL: [ProblemId; 5] = [Self::Dtlz1, Self::Dtlz2, Self::Dtlz2Convex, Self::Uf11, Self::Uf13];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Dtlz1 => "dtlz1",
            Self::Dtlz2 => "dtlz2",
            Self::Dtlz2Convex => "dtlz2_convex",
            Self::Uf11 => "uf11",
            Self::Uf13 => "uf13",
        }
    }

    /// Builds the problem with `m` objectives (UF problems only accept 5).
    pub fn build(self, m: usize) -> Result<ProblemDefinition, ProblemError> {
        let fixed = |p: ProblemDefinition| {
            if m == p.m {
                Ok(p)
            } else {
                Err(ProblemError::Objectives { problem: self, m })
            }
        };
        if m < 2 {
            return Err(ProblemError::Objectives { problem: self, m });
        }
        match self {
            Self::Dtlz1 => Ok(ProblemDefinition::dtlz1(m)),
            Self::Dtlz2 => Ok(ProblemDefinition::dtlz2(m)),
            Self::Dtlz2Convex => Ok(ProblemDefinition::dtlz2_convex(m)),
            Self::Uf11 => fixed(ProblemDefinition::uf11()?),
            Self::Uf13 => fixed(ProblemDefinition::uf13()),
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemId {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|p| p.as_str() == norm)
            .ok_or_else(|| ProblemError::Unknown(s.to_string()))
    }
}

#[derive(Debug, Clone)]
enum Evaluator {
    Dtlz1,
    Dtlz2,
    Dtlz2Convex,
    Uf11(Arc<Uf11Data>),
    Uf13,
}

/// A benchmark instance. Immutable and cheap to clone.
#[derive(Debug, Clone)]
pub struct ProblemDefinition {
    pub id: ProblemId,
    pub m: usize,
    pub d: usize,
    pub bounds: Vec<(f64, f64)>,
    pub hv_reference: Vec<f64>,
    pub reference_set_path: Option<PathBuf>,
    evaluator: Evaluator,
}

impl ProblemDefinition {
    pub fn dtlz1(m: usize) -> Self {
        let d = m + dtlz::DTLZ1_K - 1;
        Self::unit_box(ProblemId::Dtlz1, m, d, 0.6, Evaluator::Dtlz1)
    }

    pub fn dtlz2(m: usize) -> Self {
        let d = m + dtlz::DTLZ2_K - 1;
        Self::unit_box(ProblemId::Dtlz2, m, d, 1.1, Evaluator::Dtlz2)
    }

    pub fn dtlz2_convex(m: usize) -> Self {
        let d = m + dtlz::DTLZ2_K - 1;
        Self::unit_box(ProblemId::Dtlz2Convex, m, d, 5.0, Evaluator::Dtlz2Convex)
    }

    /// UF11 using the data files from [`default_data_dir`].
    pub fn uf11() -> Result<Self, ProblemError> {
        Self::uf11_from_dir(&default_data_dir())
    }

    pub fn uf11_from_dir(dir: &Path) -> Result<Self, ProblemError> {
        Ok(Self::uf11_with_data(Uf11Data::load(dir)?))
    }

    pub fn uf11_with_data(data: Uf11Data) -> Self {
        let bounds = data.lower.iter().copied().zip(data.upper.iter().copied()).collect();
        Self {
            id: ProblemId::Uf11,
            m: uf::UF_OBJECTIVES,
            d: uf::UF_VARIABLES,
            bounds,
            hv_reference: vec![2.2; uf::UF_OBJECTIVES],
            reference_set_path: None,
            evaluator: Evaluator::Uf11(Arc::new(data)),
        }
    }

    pub fn uf13() -> Self {
        Self {
            id: ProblemId::Uf13,
            m: uf::UF_OBJECTIVES,
            d: uf::UF_VARIABLES,
            bounds: (0..uf::UF_VARIABLES).map(|i| (0.0, 2.0 * (i + 1) as f64)).collect(),
            hv_reference: vec![11.0; uf::UF_OBJECTIVES],
            reference_set_path: None,
            evaluator: Evaluator::Uf13,
        }
    }

    fn unit_box(id: ProblemId, m: usize, d: usize, reference: f64, evaluator: Evaluator) -> Self {
        assert!(m >= 2, "DTLZ problems need at least two objectives");
        Self {
            id,
            m,
            d,
            bounds: vec![(0.0, 1.0); d],
            hv_reference: vec![reference; m],
            reference_set_path: None,
            evaluator,
        }
    }

    pub fn with_reference_set(mut self, path: impl Into<PathBuf>) -> Self {
        self.reference_set_path = Some(path.into());
        self
    }

    pub fn name(&self) -> String {
        format!("{}_m{}", self.id, self.m)
    }

    /// Objective vector of `x`. `x` must already lie within the bounds.
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.d);
        match &self.evaluator {
            Evaluator::Dtlz1 => dtlz::dtlz1(x, self.m),
            Evaluator::Dtlz2 => dtlz::dtlz2(x, self.m),
            Evaluator::Dtlz2Convex => dtlz::dtlz2(x, self.m).into_iter().map(|f| f - CONVEX_SHIFT).collect(),
            Evaluator::Uf11(data) => uf::uf11(x, data),
            Evaluator::Uf13 => uf::uf13(x),
        }
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (v, &(lo, hi)) in x.iter_mut().zip(&self.bounds) {
            *v = v.clamp(lo, hi);
        }
    }

    /// Evaluation budget `max(100000, 10000 d)`.
    pub fn budget(&self) -> usize {
        (10_000 * self.d).max(100_000)
    }

    pub fn half_budget(&self) -> usize {
        self.budget() / 2
    }

    /// Points of the true Pareto front on a Das–Dennis lattice of at most
    /// `target` points, for problems with an analytic front.
    pub fn sample_front(&self, target: usize) -> Option<Vec<Vec<f64>>> {
        let p = simplex::divisions_for(self.m, target.max(self.m));
        let lattice = simplex::das_dennis(self.m, p);
        let sphere = |shift: f64| {
            lattice
                .iter()
                .map(|w| {
                    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                    w.iter().map(|v| v / norm - shift).collect()
                })
                .collect()
        };
        match self.evaluator {
            Evaluator::Dtlz1 => Some(lattice.iter().map(|w| w.iter().map(|v| 0.5 * v).collect()).collect()),
            Evaluator::Dtlz2 => Some(sphere(0.0)),
            Evaluator::Dtlz2Convex => Some(sphere(CONVEX_SHIFT)),
            Evaluator::Uf11(_) | Evaluator::Uf13 => None,
        }
    }

    /// Reference set for IGD: the configured file if any, else the analytic
    /// front sample. `None` means the caller must build one (e.g. from the
    /// merged nondominated union of several runs).
    pub fn reference_set(&self, target: usize) -> Result<Option<Vec<Vec<f64>>>, ProblemError> {
        if let Some(path) = &self.reference_set_path {
            return data::read_reference_set(path, self.m).map(Some);
        }
        Ok(match self.id {
            // the convex variant is scored against merged run results
            ProblemId::Dtlz2Convex => None,
            _ => self.sample_front(target),
        })
    }
}

/// Directory with the UF11 data files: `$CONE_MOEA_DATA_DIR` if set, else
/// the `data/` directory shipped with this crate.
pub fn default_data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"))
}
