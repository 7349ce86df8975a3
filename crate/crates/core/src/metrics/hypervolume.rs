//! Exact hypervolume by the WFG algorithm (exclusive-volume recursion with
//! dimension slicing), plus a Monte-Carlo estimator for cross-checking.
//!
//! All routines here work in normalized space: minimization, reference
//! point `(1, ..., 1)`, and every point strictly inside the unit box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Volume of the union of boxes `[p, 1]` over `points`.
pub fn wfg(points: &[Vec<f64>]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let m = points[0].len();
    let mut pts = nondominated(points.to_vec());
    sort_by_last_desc(&mut pts, m);
    hv_sorted(&pts, m)
}

fn box_volume(p: &[f64], m: usize) -> f64 {
    p[..m].iter().map(|v| 1.0 - v).product()
}

/// Points sorted by objective `m - 1`, worst first.
fn hv_sorted(pts: &[Vec<f64>], m: usize) -> f64 {
    match pts.len() {
        0 => return 0.0,
        1 => return box_volume(&pts[0], m),
        _ => {}
    }
    if m == 1 {
        return pts.iter().map(|p| 1.0 - p[0]).fold(0.0, f64::max);
    }
    if m == 2 {
        return hv2(pts);
    }
    let mut total = 0.0;
    for k in 0..pts.len() {
        let depth = 1.0 - pts[k][m - 1];
        if depth <= 0.0 {
            continue;
        }
        total += depth * exclusive(pts, k, m - 1);
    }
    total
}

/// Exclusive contribution of `pts[k]` in the first `m` objectives relative
/// to the points after it.
fn exclusive(pts: &[Vec<f64>], k: usize, m: usize) -> f64 {
    let p = &pts[k];
    let own = box_volume(p, m);
    if k + 1 == pts.len() {
        return own;
    }
    let limited: Vec<Vec<f64>> = pts[k + 1..]
        .iter()
        .map(|q| (0..m).map(|i| p[i].max(q[i])).collect())
        .collect();
    let mut limited = nondominated(limited);
    sort_by_last_desc(&mut limited, m);
    own - hv_sorted(&limited, m)
}

fn hv2(pts: &[Vec<f64>]) -> f64 {
    let mut sorted: Vec<(f64, f64)> = pts.iter().map(|p| (p[0], p[1])).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut volume = 0.0;
    let mut best_y = 1.0;
    for (x, y) in sorted {
        if y < best_y {
            volume += (1.0 - x) * (best_y - y);
            best_y = y;
        }
    }
    volume
}

fn sort_by_last_desc(pts: &mut [Vec<f64>], m: usize) {
    pts.sort_by(|a, b| b[m - 1].total_cmp(&a[m - 1]));
}

/// Drops points weakly dominated by another point (keeps one copy of
/// duplicates), comparing the first `len` coordinates.
fn nondominated(mut pts: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    if pts.len() < 2 {
        return pts;
    }
    let m = pts[0].len();
    // sorting by coordinate sum means a dominator always precedes its victims
    pts.sort_by(|a, b| a.iter().sum::<f64>().total_cmp(&b.iter().sum::<f64>()));
    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(pts.len());
    'outer: for p in pts {
        for q in &kept {
            if (0..m).all(|i| q[i] <= p[i]) {
                continue 'outer;
            }
        }
        kept.push(p);
    }
    kept
}

/// Monte-Carlo hypervolume estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Uniform sampling of the unit box; the fraction of samples dominated by
/// some point estimates the hypervolume.
pub fn monte_carlo(points: &[Vec<f64>], m: usize, samples: usize, seed: u64) -> McEstimate {
    const CHUNK: usize = 1 << 14;
    let chunks = samples.div_ceil(CHUNK);
    let hits: usize = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let n = CHUNK.min(samples - c * CHUNK);
            let mut sample = vec![0.0; m];
            let mut hits = 0;
            for _ in 0..n {
                for v in sample.iter_mut() {
                    *v = rng.gen::<f64>();
                }
                if points.iter().any(|p| p.iter().zip(&sample).all(|(a, s)| a <= s)) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let p = hits as f64 / samples as f64;
    McEstimate { value: p, std_error: (p * (1.0 - p) / samples as f64).sqrt(), samples }
}
