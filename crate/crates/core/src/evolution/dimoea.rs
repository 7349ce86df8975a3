//! Gap-indicator survival for DI-MOEA.
//!
//! The indicator of a set is the geometric mean of each member's Euclidean
//! distance to its nearest neighbour in objective space. The critical front
//! is truncated one member at a time, always removing the member whose
//! removal leaves the largest indicator. Per-objective minimizers are
//! protected while any unprotected member remains.
//!
//! Candidates are compared by (number of zero gaps left, sum of log gaps),
//! which orders sets with duplicates sensibly where the plain geometric
//! mean would be 0 for all of them. Ties remove the highest index.

use rand_chacha::ChaCha8Rng;

use super::{split_fronts, Survival};
use crate::ranking::FrontPartition;

pub struct GapSurvival;

impl Survival for GapSurvival {
    /// Distance to the nearest neighbour within the same front.
    fn parent_scores(&self, objectives: &[&[f64]], partition: &FrontPartition) -> Vec<f64> {
        let mut scores = vec![0.0; objectives.len()];
        for front in &partition.fronts {
            for &i in front {
                scores[i] = front
                    .iter()
                    .filter(|&&j| j != i)
                    .map(|&j| distance(objectives[i], objectives[j]))
                    .fold(f64::INFINITY, f64::min);
            }
        }
        scores
    }

    fn truncate(&self, pool: &[&[f64]], partition: &FrontPartition, n: usize, _rng: &mut ChaCha8Rng) -> Vec<usize> {
        let (mut chosen, critical) = split_fronts(partition, n);
        if let Some(front) = critical {
            let pts: Vec<&[f64]> = front.iter().map(|&i| pool[i]).collect();
            let keep = gap_truncate(&pts, n - chosen.len());
            chosen.extend(keep.into_iter().map(|k| front[k]));
        }
        chosen
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Geometric mean of nearest-neighbour distances; 0 with a duplicate.
/// Sets with fewer than two members score 0.
pub fn geometric_mean_gap<P: AsRef<[f64]>>(points: &[P]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    let log_sum: f64 = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| distance(points[i].as_ref(), points[j].as_ref()))
                .fold(f64::INFINITY, f64::min)
                .ln()
        })
        .sum();
    (log_sum / n as f64).exp()
}

/// Log-gap term: (zero count, log of a positive gap).
fn term(d: f64) -> (i64, f64) {
    if d > 0.0 {
        (0, d.ln())
    } else {
        (1, 0.0)
    }
}

/// Indices (ascending) of the `keep` members retained by greedy gap truncation.
pub fn gap_truncate<P: AsRef<[f64]>>(points: &[P], keep: usize) -> Vec<usize> {
    let n = points.len();
    if keep >= n {
        return (0..n).collect();
    }
    if keep == 0 {
        return Vec::new();
    }
    let m = points[0].as_ref().len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = distance(points[i].as_ref(), points[j].as_ref());
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    let d = |i: usize, j: usize| dist[i * n + j];

    let mut protected = vec![false; n];
    for k in 0..m {
        let best = (0..n)
            .min_by(|&a, &b| points[a].as_ref()[k].total_cmp(&points[b].as_ref()[k]).then(a.cmp(&b)))
            .unwrap();
        protected[best] = true;
    }

    let mut alive = vec![true; n];
    let neighbours = |i: usize, alive: &[bool]| -> (Option<usize>, Option<usize>) {
        let (mut first, mut second): (Option<usize>, Option<usize>) = (None, None);
        for j in (0..n).filter(|&j| j != i && alive[j]) {
            match first {
                Some(f) if d(i, j) >= d(i, f) => {
                    if second.is_none_or(|s| d(i, j) < d(i, s)) {
                        second = Some(j);
                    }
                }
                _ => {
                    second = first;
                    first = Some(j);
                }
            }
        }
        (first, second)
    };
    let mut nn: Vec<(Option<usize>, Option<usize>)> = (0..n).map(|i| neighbours(i, &alive)).collect();

    let mut remaining = n;
    let mut delta_zero = vec![0i64; n];
    let mut delta_log = vec![0.0f64; n];
    while remaining > keep {
        delta_zero.iter_mut().for_each(|v| *v = 0);
        delta_log.iter_mut().for_each(|v| *v = 0.0);
        for i in (0..n).filter(|&i| alive[i]) {
            let Some(first) = nn[i].0 else { continue };
            let (z1, l1) = term(d(i, first));
            delta_zero[i] -= z1;
            delta_log[i] -= l1;
            let (z2, l2) = nn[i].1.map_or((0, 0.0), |s| term(d(i, s)));
            delta_zero[first] += z2 - z1;
            delta_log[first] += l2 - l1;
        }
        let any_free = (0..n).any(|i| alive[i] && !protected[i]);
        let victim = (0..n)
            .filter(|&i| alive[i] && (!any_free || !protected[i]))
            .min_by(|&a, &b| {
                delta_zero[a]
                    .cmp(&delta_zero[b])
                    .then(delta_log[b].total_cmp(&delta_log[a]))
                    .then(b.cmp(&a))
            })
            .unwrap();
        alive[victim] = false;
        remaining -= 1;
        for i in 0..n {
            if alive[i] && (nn[i].0 == Some(victim) || nn[i].1 == Some(victim)) {
                nn[i] = neighbours(i, &alive);
            }
        }
    }
    (0..n).filter(|&i| alive[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Exhaustive search over every subset of size `n - 1`.
    fn best_single_removal(points: &[Vec<f64>]) -> Vec<f64> {
        (0..points.len())
            .map(|r| {
                let rest: Vec<&Vec<f64>> = points.iter().enumerate().filter(|&(i, _)| i != r).map(|(_, p)| p).collect();
                geometric_mean_gap(&rest)
            })
            .collect()
    }

    #[test]
    fn collinear_front_loses_an_interior_point() {
        let pts = vec![vec![0.0, 3.0], vec![1.0, 2.0], vec![2.0, 1.0], vec![3.0, 0.0]];
        let kept = gap_truncate(&pts, 3);
        assert!(kept.contains(&0) && kept.contains(&3), "{kept:?}");
        let scores = best_single_removal(&pts);
        let removed = (0..4).find(|i| !kept.contains(i)).unwrap();
        let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!((scores[removed] - best).abs() < 1e-12, "{scores:?}");
        // the exhaustive optimum is interior too
        assert!(scores[1] > scores[0] && scores[2] > scores[3]);
    }

    #[test]
    fn greedy_step_matches_exhaustive_choice() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let n = rng.gen_range(4..12);
            // points on an anti-diagonal band, so extremes are distinct
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    let t: f64 = rng.gen();
                    vec![t, 1.0 - t + 0.05 * rng.gen::<f64>(), rng.gen()]
                })
                .collect();
            let kept = gap_truncate(&pts, n - 1);
            let removed = (0..n).find(|i| !kept.contains(i)).unwrap();
            let mut protected = vec![false; n];
            (0..3).for_each(|k| {
                let arg = (0..n).min_by(|&a, &b| pts[a][k].total_cmp(&pts[b][k])).unwrap();
                protected[arg] = true;
            });
            let scores = best_single_removal(&pts);
            let best = (0..n).filter(|&i| !protected[i]).map(|i| scores[i]).fold(f64::NEG_INFINITY, f64::max);
            assert!(!protected[removed]);
            assert!((scores[removed] - best).abs() <= 1e-9 * best, "{removed} {scores:?}");
        }
    }

    #[test]
    fn two_point_front_agrees_with_crowding() {
        let pts = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(gap_truncate(&pts, 1), vec![0]);
        assert_eq!(gap_truncate(&pts, 2), vec![0, 1]);
    }

    #[test]
    fn duplicates_are_removed_first() {
        let pts = vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![0.5, 0.5], vec![0.7, 0.3], vec![1.0, 0.0]];
        let kept = gap_truncate(&pts, 4);
        assert!(!(kept.contains(&1) && kept.contains(&2)), "{kept:?}");
    }

    #[test]
    fn geometric_mean_of_even_spacing() {
        let pts = vec![vec![0.0, 2.0], vec![1.0, 1.0], vec![2.0, 0.0]];
        assert!((geometric_mean_gap(&pts) - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(geometric_mean_gap(&[vec![0.0, 0.0]]), 0.0);
    }

    #[test]
    fn parent_scores_reward_isolation() {
        let pts = [vec![0.0, 1.0], vec![0.1, 0.9], vec![1.0, 0.0]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let part = FrontPartition { fronts: vec![vec![0, 1, 2]], rank_of: vec![0; 3] };
        let s = GapSurvival.parent_scores(&refs, &part);
        assert!(s[2] > s[0] && (s[0] - s[1]).abs() < 1e-15);
    }
}
