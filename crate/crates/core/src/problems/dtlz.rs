use std::f64::consts::FRAC_PI_2;

/// Distance variables for DTLZ1 (`d = m + 4`).
pub const DTLZ1_K: usize = 5;
/// Distance variables for DTLZ2 (`d = m + 9`).
pub const DTLZ2_K: usize = 10;

pub fn dtlz1(x: &[f64], m: usize) -> Vec<f64> {
    let k = x.len() - m + 1;
    let g = 100.0
        * (k as f64
            + x[m - 1..]
                .iter()
                .map(|&xi| (xi - 0.5).powi(2) - (20.0 * std::f64::consts::PI * (xi - 0.5)).cos())
                .sum::<f64>());
    let mut f = vec![0.5 * (1.0 + g); m];
    for (i, fi) in f.iter_mut().enumerate() {
        for &xj in &x[..m - 1 - i] {
            *fi *= xj;
        }
        if i > 0 {
            *fi *= 1.0 - x[m - 1 - i];
        }
    }
    f
}

pub fn dtlz2(x: &[f64], m: usize) -> Vec<f64> {
    let g: f64 = x[m - 1..].iter().map(|&xi| (xi - 0.5).powi(2)).sum();
    let mut f = vec![1.0 + g; m];
    for (i, fi) in f.iter_mut().enumerate() {
        for &xj in &x[..m - 1 - i] {
            *fi *= (FRAC_PI_2 * xj).cos();
        }
        if i > 0 {
            *fi *= (FRAC_PI_2 * x[m - 1 - i]).sin();
        }
    }
    f
}
