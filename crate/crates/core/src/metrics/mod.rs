//! Quality indicators: normalized hypervolume and IGD.

pub mod hypervolume;

use thiserror::Error;

pub use hypervolume::McEstimate;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("reference point must exceed the ideal point in every objective")]
    InvalidNormalization,
    #[error("dimension mismatch: expected {expected} objectives, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("IGD needs a nonempty reference set")]
    EmptyReferenceSet,
}

/// Ideal and reference points spanning the hypervolume box.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationSpec {
    ideal: Vec<f64>,
    reference: Vec<f64>,
}

impl NormalizationSpec {
    pub fn new(ideal: Vec<f64>, reference: Vec<f64>) -> Result<Self, MetricsError> {
        if ideal.len() != reference.len() {
            return Err(MetricsError::DimensionMismatch { expected: ideal.len(), found: reference.len() });
        }
        if ideal.len() < 2 || ideal.iter().zip(&reference).any(|(i, r)| !r.is_finite() || !i.is_finite() || r <= i) {
            return Err(MetricsError::InvalidNormalization);
        }
        Ok(Self { ideal, reference })
    }

    /// Ideal point at the origin.
    pub fn from_reference(reference: Vec<f64>) -> Result<Self, MetricsError> {
        Self::new(vec![0.0; reference.len()], reference)
    }

    pub fn objectives(&self) -> usize {
        self.ideal.len()
    }

    pub fn ideal(&self) -> &[f64] {
        &self.ideal
    }

    pub fn reference(&self) -> &[f64] {
        &self.reference
    }

    /// Maps `f` into the unit box. Returns `None` when some coordinate
    /// reaches the reference point; coordinates better than the ideal point
    /// are clamped to 0.
    pub fn normalize(&self, f: &[f64]) -> Option<Vec<f64>> {
        let mut out = Vec::with_capacity(f.len());
        for ((v, lo), hi) in f.iter().zip(&self.ideal).zip(&self.reference) {
            let t = (v - lo) / (hi - lo);
            if t >= 1.0 || t.is_nan() {
                return None;
            }
            out.push(t.max(0.0));
        }
        Some(out)
    }

    fn normalize_front<P: AsRef<[f64]>>(&self, front: &[P]) -> Result<Vec<Vec<f64>>, MetricsError> {
        let m = self.objectives();
        let mut out = Vec::with_capacity(front.len());
        for p in front {
            let p = p.as_ref();
            if p.len() != m {
                return Err(MetricsError::DimensionMismatch { expected: m, found: p.len() });
            }
            out.extend(self.normalize(p));
        }
        Ok(out)
    }
}

/// Exact hypervolume of `front` in the normalized box, in `[0, 1]`.
///
/// Points with any normalized coordinate `>= 1` are discarded. An empty
/// front scores 0.
pub fn hypervolume<P: AsRef<[f64]>>(front: &[P], spec: &NormalizationSpec) -> Result<f64, MetricsError> {
    let pts = spec.normalize_front(front)?;
    Ok(hypervolume::wfg(&pts))
}

/// Monte-Carlo counterpart of [`hypervolume`].
pub fn hypervolume_monte_carlo<P: AsRef<[f64]>>(
    front: &[P],
    spec: &NormalizationSpec,
    samples: usize,
    seed: u64,
) -> Result<McEstimate, MetricsError> {
    let pts = spec.normalize_front(front)?;
    Ok(hypervolume::monte_carlo(&pts, spec.objectives(), samples, seed))
}

/// Default sample count for [`hypervolume_monte_carlo`].
pub const MONTE_CARLO_SAMPLES: usize = 1_000_000;

/// Inverted generational distance result. An empty front has no finite
/// IGD; it is reported as `+inf` with `empty_front` set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Igd {
    pub value: f64,
    pub empty_front: bool,
}

impl Igd {
    pub fn finite(&self) -> Option<f64> {
        (!self.empty_front).then_some(self.value)
    }
}

/// Mean over `reference` of the Euclidean distance to the closest point of
/// `front`, in raw objective space.
pub fn igd<P: AsRef<[f64]>, Q: AsRef<[f64]>>(front: &[P], reference: &[Q]) -> Result<Igd, MetricsError> {
    if reference.is_empty() {
        return Err(MetricsError::EmptyReferenceSet);
    }
    if front.is_empty() {
        return Ok(Igd { value: f64::INFINITY, empty_front: true });
    }
    let m = reference[0].as_ref().len();
    for p in front.iter().map(AsRef::as_ref).chain(reference.iter().map(AsRef::as_ref)) {
        if p.len() != m {
            return Err(MetricsError::DimensionMismatch { expected: m, found: p.len() });
        }
    }
    let total: f64 = reference
        .iter()
        .map(|r| {
            front
                .iter()
                .map(|f| squared_distance(r.as_ref(), f.as_ref()))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    Ok(Igd { value: total / reference.len() as f64, empty_front: false })
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
