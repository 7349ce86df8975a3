//! Reference-direction survival for NSGA-III.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{split_fronts, Survival};
use crate::ranking::FrontPartition;
use crate::simplex::{das_dennis, lattice_size};

/// Das–Dennis divisions; the two-layer form adds an inner lattice shrunk
/// halfway towards the centroid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Divisions {
    Single(usize),
    TwoLayer { outer: usize, inner: usize },
}

impl Divisions {
    /// Lattice sizes close to a population of 100:
    ///
    /// | m | divisions | directions |
    /// |---|-----------|------------|
    /// | 2 | 99        | 100        |
    /// | 3 | 12        | 91         |
    /// | 4 | 7         | 120        |
    /// | 5 | 5         | 126        |
    /// | 6 | (3, 2)    | 77         |
    /// | 7 | (3, 2)    | 112        |
    /// | 8 | (3, 2)    | 156        |
    ///
    /// Beyond 8 objectives, (2, 1).
    pub fn default_for(m: usize) -> Self {
        match m {
            2 => Self::Single(99),
            3 => Self::Single(12),
            4 => Self::Single(7),
            5 => Self::Single(5),
            6..=8 => Self::TwoLayer { outer: 3, inner: 2 },
            _ => Self::TwoLayer { outer: 2, inner: 1 },
        }
    }

    pub fn count(self, m: usize) -> usize {
        match self {
            Self::Single(p) => lattice_size(m, p),
            Self::TwoLayer { outer, inner } => lattice_size(m, outer) + lattice_size(m, inner),
        }
    }
}

pub fn reference_directions(m: usize, divisions: Divisions) -> Vec<Vec<f64>> {
    match divisions {
        Divisions::Single(p) => das_dennis(m, p),
        Divisions::TwoLayer { outer, inner } => {
            let mut dirs = das_dennis(m, outer);
            let centre = 0.5 / m as f64;
            dirs.extend(das_dennis(m, inner).into_iter().map(|w| w.into_iter().map(|v| 0.5 * v + centre).collect()));
            dirs
        }
    }
}

pub struct ReferencePointSurvival {
    /// Unit-length directions.
    units: Vec<Vec<f64>>,
}

impl ReferencePointSurvival {
    pub fn new(m: usize) -> Self {
        Self::with_directions(reference_directions(m, Divisions::default_for(m)))
    }

    pub fn with_directions(directions: Vec<Vec<f64>>) -> Self {
        let units = directions
            .into_iter()
            .map(|w| {
                let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                w.into_iter().map(|v| v / norm).collect()
            })
            .collect();
        Self { units }
    }

    pub fn directions(&self) -> usize {
        self.units.len()
    }

    /// Nearest direction (by perpendicular distance) for each point.
    pub fn associate(&self, normalized: &[Vec<f64>]) -> Vec<(usize, f64)> {
        normalized
            .iter()
            .map(|p| {
                let norm2: f64 = p.iter().map(|v| v * v).sum();
                let mut best = (0, f64::INFINITY);
                for (j, u) in self.units.iter().enumerate() {
                    let proj: f64 = u.iter().zip(p).map(|(a, b)| a * b).sum();
                    let d = (norm2 - proj * proj).max(0.0).sqrt();
                    if d < best.1 {
                        best = (j, d);
                    }
                }
                best
            })
            .collect()
    }
}

/// Translates by the ideal point and divides by the hyperplane intercepts
/// through the extreme points; falls back to per-objective maxima when the
/// hyperplane is degenerate.
pub fn normalize(points: &[&[f64]]) -> Vec<Vec<f64>> {
    let m = points[0].len();
    let ideal: Vec<f64> = (0..m).map(|k| points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min)).collect();
    let translated: Vec<Vec<f64>> = points.iter().map(|p| p.iter().zip(&ideal).map(|(v, z)| v - z).collect()).collect();

    let extremes: Vec<Vec<f64>> = (0..m)
        .map(|axis| {
            let asf = |p: &Vec<f64>| {
                p.iter()
                    .enumerate()
                    .map(|(k, v)| v / if k == axis { 1.0 } else { 1e-6 })
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            translated.iter().min_by(|a, b| asf(a).total_cmp(&asf(b))).unwrap().clone()
        })
        .collect();

    let intercepts = match solve(extremes, vec![1.0; m]) {
        Some(b) if b.iter().all(|&v| v.is_finite() && v > 0.0 && 1.0 / v > 1e-10) => b.iter().map(|v| 1.0 / v).collect(),
        _ => (0..m)
            .map(|k| {
                let hi = translated.iter().map(|p| p[k]).fold(0.0, f64::max);
                if hi > 1e-10 {
                    hi
                } else {
                    1.0
                }
            })
            .collect::<Vec<f64>>(),
    };
    translated.into_iter().map(|p| p.iter().zip(&intercepts).map(|(v, a)| v / a).collect()).collect()
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            let pivot_row = a[col].clone();
            for (v, p) in a[row].iter_mut().zip(&pivot_row).skip(col) {
                *v -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

impl Survival for ReferencePointSurvival {
    /// Tournaments are decided by rank alone.
    fn parent_scores(&self, objectives: &[&[f64]], _partition: &FrontPartition) -> Vec<f64> {
        vec![0.0; objectives.len()]
    }

    fn truncate(&self, pool: &[&[f64]], partition: &FrontPartition, n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let (mut chosen, critical) = split_fronts(partition, n);
        let Some(last) = critical else { return chosen };
        let considered: Vec<usize> = chosen.iter().chain(last).copied().collect();
        let pts: Vec<&[f64]> = considered.iter().map(|&i| pool[i]).collect();
        let assoc = self.associate(&normalize(&pts));

        let dirs = self.units.len();
        let mut niche = vec![0usize; dirs];
        for &(j, _) in &assoc[..chosen.len()] {
            niche[j] += 1;
        }
        let mut members: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dirs];
        for (k, &(j, d)) in assoc.iter().enumerate().skip(chosen.len()) {
            members[j].push((considered[k], d));
        }

        let mut active = vec![true; dirs];
        let mut need = n - chosen.len();
        let mut ties = Vec::with_capacity(dirs);
        while need > 0 {
            let min = (0..dirs).filter(|&j| active[j]).map(|j| niche[j]).min().expect("enough candidates remain");
            ties.clear();
            ties.extend((0..dirs).filter(|&j| active[j] && niche[j] == min));
            let j = ties[rng.gen_range(0..ties.len())];
            if members[j].is_empty() {
                active[j] = false;
                continue;
            }
            let pick = if niche[j] == 0 {
                (0..members[j].len())
                    .min_by(|&a, &b| members[j][a].1.total_cmp(&members[j][b].1).then(members[j][a].0.cmp(&members[j][b].0)))
                    .unwrap()
            } else {
                rng.gen_range(0..members[j].len())
            };
            chosen.push(members[j].swap_remove(pick).0);
            niche[j] += 1;
            need -= 1;
        }
        chosen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn default_direction_counts() {
        let expected = [(2, 100), (3, 91), (4, 120), (5, 126), (6, 77), (7, 112), (8, 156)];
        for (m, count) in expected {
            let div = Divisions::default_for(m);
            assert_eq!(div.count(m), count, "m={m}");
            let dirs = reference_directions(m, div);
            assert_eq!(dirs.len(), count);
            for w in &dirs {
                assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn survivors_spread_over_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let survival = ReferencePointSurvival::with_directions(das_dennis(2, 98));
        assert_eq!(survival.directions(), 99);
        let pool: Vec<Vec<f64>> = (0..200)
            .map(|_| {
                let t: f64 = rng.gen::<f64>() * std::f64::consts::FRAC_PI_2;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let refs: Vec<&[f64]> = pool.iter().map(|p| p.as_slice()).collect();
        let part = FrontPartition { fronts: vec![(0..200).collect()], rank_of: vec![0; 200] };
        let kept = survival.truncate(&refs, &part, 100, &mut rng);
        assert_eq!(kept.len(), 100);
        let mut sorted = kept.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 100);

        let kept_pts: Vec<&[f64]> = kept.iter().map(|&i| refs[i]).collect();
        let mut niche = vec![0usize; 99];
        for (j, _) in survival.associate(&normalize(&kept_pts)) {
            niche[j] += 1;
        }
        let cap = 100usize.div_ceil(99) + 1;
        assert!(niche.iter().all(|&c| c <= cap), "{niche:?}");
    }

    #[test]
    fn normalization_maps_simplex_to_unit_intercepts() {
        let pts = [vec![2.0, 1.0, 1.0], vec![1.0, 3.0, 1.0], vec![1.0, 1.0, 5.0], vec![1.5, 2.0, 2.0]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let out = normalize(&refs);
        assert_eq!(out[0], vec![1.0, 0.0, 0.0]);
        assert_eq!(out[1], vec![0.0, 1.0, 0.0]);
        assert_eq!(out[2], vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn degenerate_extremes_fall_back_to_maxima() {
        let pts = [vec![1.0, 1.0], vec![1.0, 1.0], vec![3.0, 2.0]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let out = normalize(&refs);
        assert_eq!(out[2], vec![1.0, 1.0]);
    }
}
