//! Edge-rotated cone dominance orders.
//!
//! The Pareto cone of an `m`-objective minimization problem is the
//! nonnegative orthant, generated by the unit vectors `e_1, ..., e_m`. An
//! edge-rotated cone rotates every edge by the same angle `alpha` away from
//! the identity line `(1, ..., 1)`, inside the plane spanned by the edge and
//! that line. Column `i` of the generator matrix holds the image of `e_i`:
//!
//! ```text
//! A[i][i] = cos(-alpha)
//! A[i][j] = sin(-alpha) / sqrt(m - 1)     (i != j)
//! ```
//!
//! A point `y` dominates `y'` when `y' - y` lies in the cone, i.e. when every
//! component of `A^-1 (y' - y)` is nonnegative and at least one is positive.
//! With `alpha = 0` the matrix is the identity and the relation is exactly
//! Pareto dominance. For `alpha > 0` the cone is obtuse and strictly contains
//! the Pareto cone, so pairs that are Pareto-incomparable may become ordered.
//!
//! For `m > 2` the rotated cone stops containing the identity direction once
//! `cos(alpha) - sqrt(m - 1) * sin(alpha) <= 0` (that quantity is the
//! eigenvalue of `A` on the all-ones vector). Such cones are still built, but
//! are flagged as degenerate.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Threshold on the pointedness margin below which a cone is degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Determinant magnitude below which the generator matrix is rejected.
pub const SINGULARITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConeError {
    #[error("a cone order needs at least 2 objectives, got {0}")]
    TooFewObjectives(usize),
    #[error("rotation angle {0} rad is outside [0, pi/4)")]
    AngleOutOfRange(f64),
    #[error("generator matrix is numerically singular (|det| = {det:e}) for m = {m}, alpha = {alpha} rad")]
    Singular { m: usize, alpha: f64, det: f64 },
    #[error("dimension mismatch: expected {expected} objectives, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("objective vector has a non-finite component at index {0}")]
    NonFinite(usize),
}

/// A finite objective vector with at least two components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ObjectiveVector(Vec<f64>);

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Result<Self, ConeError> {
        if values.len() < 2 {
            return Err(ConeError::TooFewObjectives(values.len()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(ConeError::NonFinite(i));
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for ObjectiveVector {
    type Error = ConeError;

    fn try_from(values: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(values)
    }
}

impl From<ObjectiveVector> for Vec<f64> {
    fn from(v: ObjectiveVector) -> Self {
        v.0
    }
}

impl AsRef<[f64]> for ObjectiveVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Deref for ObjectiveVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Outcome of comparing `y` against `y'` under some order.
///
/// `Dominates` means the first argument dominates the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DominanceRelation {
    Dominates,
    DominatedBy,
    Incomparable,
    Equal,
}

impl DominanceRelation {
    /// The relation seen from the other argument.
    pub fn flip(self) -> Self {
        match self {
            Self::Dominates => Self::DominatedBy,
            Self::DominatedBy => Self::Dominates,
            other => other,
        }
    }
}

/// Eigenvalue of the generator matrix on the all-ones direction.
pub fn pointedness_margin(m: usize, alpha: f64) -> f64 {
    alpha.cos() - ((m as f64) - 1.0).sqrt() * alpha.sin()
}

/// A dominance order induced by an edge-rotated cone. Immutable once built.
#[derive(Clone, PartialEq)]
pub struct ConeOrder {
    m: usize,
    alpha: f64,
    generator: Vec<f64>,
    inverse: Vec<f64>,
    margin: f64,
}

impl fmt::Debug for ConeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConeOrder")
            .field("m", &self.m)
            .field("alpha", &self.alpha)
            .field("margin", &self.margin)
            .finish()
    }
}

impl ConeOrder {
    /// Builds the edge-rotated cone for `m` objectives and rotation `alpha`
    /// (radians, `0 <= alpha < pi/4`).
    ///
    /// The generator is `A = (a - b) I + b J` with `a = cos(-alpha)` and
    /// `b = sin(-alpha) / sqrt(m - 1)`, so the inverse has the closed form
    /// `(I - b / (a - b + m b) J) / (a - b)`. At `alpha = 0` this yields the
    /// identity exactly.
    pub fn new(m: usize, alpha: f64) -> Result<Self, ConeError> {
        if m < 2 {
            return Err(ConeError::TooFewObjectives(m));
        }
        if !(0.0..std::f64::consts::FRAC_PI_4).contains(&alpha) {
            return Err(ConeError::AngleOutOfRange(alpha));
        }
        let mf = m as f64;
        let diag = (-alpha).cos();
        let off = (-alpha).sin() / (mf - 1.0).sqrt();
        let shift = diag - off;
        let ones_eigen = shift + mf * off;
        let det = shift.powi(m as i32 - 1) * ones_eigen;
        if det.abs() < SINGULARITY_TOLERANCE {
            return Err(ConeError::Singular { m, alpha, det });
        }

        let mut generator = vec![off; m * m];
        let coef = off / ones_eigen;
        let mut inverse = vec![-coef / shift; m * m];
        for i in 0..m {
            generator[i * m + i] = diag;
            inverse[i * m + i] = (1.0 - coef) / shift;
        }

        let margin = pointedness_margin(m, alpha);
        if margin <= DEGENERACY_TOLERANCE {
            log::warn!(
                "rotated cone with m = {m}, alpha = {:.2} deg is degenerate \
                 (pointedness margin {margin:.4}); it no longer orders the identity direction",
                alpha.to_degrees()
            );
        }
        Ok(Self { m, alpha, generator, inverse, margin })
    }

    /// The standard Pareto order.
    pub fn pareto(m: usize) -> Result<Self, ConeError> {
        Self::new(m, 0.0)
    }

    pub fn from_degrees(m: usize, degrees: f64) -> Result<Self, ConeError> {
        Self::new(m, degrees.to_radians())
    }

    pub fn objectives(&self) -> usize {
        self.m
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_pareto(&self) -> bool {
        self.alpha == 0.0
    }

    pub fn pointedness_margin(&self) -> f64 {
        self.margin
    }

    pub fn is_degenerate(&self) -> bool {
        self.margin <= DEGENERACY_TOLERANCE
    }

    /// Row-major generator matrix; column `j` is the rotated `e_j`.
    pub fn generator_matrix(&self) -> &[f64] {
        &self.generator
    }

    /// Row-major inverse of the generator matrix.
    pub fn inverse_matrix(&self) -> &[f64] {
        &self.inverse
    }

    /// Cone coordinates `A^-1 (y' - y)`.
    pub fn cone_coordinates(&self, y: &[f64], y_prime: &[f64]) -> Result<Vec<f64>, ConeError> {
        self.check(y)?;
        self.check(y_prime)?;
        let m = self.m;
        Ok((0..m)
            .map(|i| {
                let row = &self.inverse[i * m..(i + 1) * m];
                row.iter()
                    .zip(y.iter().zip(y_prime))
                    .map(|(a, (u, v))| a * (v - u))
                    .sum()
            })
            .collect())
    }

    /// Classifies `y` against `y_prime`.
    pub fn classify(&self, y: &[f64], y_prime: &[f64]) -> Result<DominanceRelation, ConeError> {
        self.check(y)?;
        self.check(y_prime)?;
        Ok(self.classify_unchecked(y, y_prime))
    }

    /// Same as [`classify`](Self::classify) without validating the inputs.
    /// Callers must guarantee length `m` and finite components.
    pub(crate) fn classify_unchecked(&self, y: &[f64], y_prime: &[f64]) -> DominanceRelation {
        let m = self.m;
        let mut any_pos = false;
        let mut any_neg = false;
        for i in 0..m {
            let row = &self.inverse[i * m..(i + 1) * m];
            let mut lambda = 0.0;
            for j in 0..m {
                lambda += row[j] * (y_prime[j] - y[j]);
            }
            if lambda > 0.0 {
                any_pos = true;
            } else if lambda < 0.0 {
                any_neg = true;
            }
            if any_pos && any_neg {
                return DominanceRelation::Incomparable;
            }
        }
        match (any_pos, any_neg) {
            (true, false) => DominanceRelation::Dominates,
            (false, true) => DominanceRelation::DominatedBy,
            (false, false) => DominanceRelation::Equal,
            (true, true) => DominanceRelation::Incomparable,
        }
    }

    fn check(&self, y: &[f64]) -> Result<(), ConeError> {
        if y.len() != self.m {
            return Err(ConeError::DimensionMismatch { expected: self.m, found: y.len() });
        }
        check_finite(y)
    }
}

fn check_finite(y: &[f64]) -> Result<(), ConeError> {
    match y.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(ConeError::NonFinite(i)),
        None => Ok(()),
    }
}

/// Plain componentwise Pareto comparison of `y` against `y_prime`.
pub fn pareto_classify(y: &[f64], y_prime: &[f64]) -> Result<DominanceRelation, ConeError> {
    if y.len() != y_prime.len() {
        return Err(ConeError::DimensionMismatch { expected: y.len(), found: y_prime.len() });
    }
    check_finite(y)?;
    check_finite(y_prime)?;
    Ok(pareto_classify_unchecked(y, y_prime))
}

pub(crate) fn pareto_classify_unchecked(y: &[f64], y_prime: &[f64]) -> DominanceRelation {
    let mut better = false;
    let mut worse = false;
    for (a, b) in y.iter().zip(y_prime) {
        if a < b {
            better = true;
        } else if a > b {
            worse = true;
        }
        if better && worse {
            return DominanceRelation::Incomparable;
        }
    }
    match (better, worse) {
        (true, false) => DominanceRelation::Dominates,
        (false, true) => DominanceRelation::DominatedBy,
        (false, false) => DominanceRelation::Equal,
        (true, true) => DominanceRelation::Incomparable,
    }
}
