//! UF11 (rotated five-objective DTLZ2) and UF13 (five-objective WFG1) from
//! the CEC-2009 competition suite.

use std::path::Path;

use super::{data, dtlz, ProblemError};

pub const UF_OBJECTIVES: usize = 5;
pub const UF_VARIABLES: usize = 30;

/// Rotation, scaling and bounds of UF11, loaded from data files.
#[derive(Debug, Clone, PartialEq)]
pub struct Uf11Data {
    pub rotation: Vec<Vec<f64>>,
    pub lambda: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Uf11Data {
    pub const ROTATION_FILE: &'static str = "uf11_rotation.txt";
    pub const LAMBDA_FILE: &'static str = "uf11_lambda.txt";
    pub const BOUNDS_FILE: &'static str = "uf11_bounds.txt";

    pub fn load(dir: &Path) -> Result<Self, ProblemError> {
        let n = UF_VARIABLES;
        let rotation = data::read_matrix(&dir.join(Self::ROTATION_FILE), n, n)?;
        let lambda = data::read_matrix(&dir.join(Self::LAMBDA_FILE), 1, n)?.remove(0);
        let mut bounds = data::read_matrix(&dir.join(Self::BOUNDS_FILE), 2, n)?;
        let upper = bounds.pop().unwrap();
        let lower = bounds.pop().unwrap();
        if lower.iter().zip(&upper).any(|(lo, hi)| lo >= hi) {
            return Err(ProblemError::Shape {
                path: dir.join(Self::BOUNDS_FILE),
                message: "every lower bound must be below its upper bound".into(),
            });
        }
        Ok(Self { rotation, lambda, lower, upper })
    }

    /// Identity rotation with the given bounds; useful for checking the
    /// reduction to DTLZ2.
    pub fn identity() -> Self {
        let n = UF_VARIABLES;
        let rotation = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        Self { rotation, lambda: vec![1.0; n], lower: vec![0.0; n], upper: vec![1.0; n] }
    }
}

pub fn uf11(x: &[f64], data: &Uf11Data) -> Vec<f64> {
    let n = x.len();
    let m = UF_OBJECTIVES;
    let k = n - m + 1;
    let mut zz = vec![0.0; n];
    let mut p = vec![0.0; n];
    for i in 0..n {
        let z: f64 = data.rotation[i].iter().zip(x).map(|(a, b)| a * b).sum();
        if (0.0..=1.0).contains(&z) {
            zz[i] = z;
        } else if z < 0.0 {
            zz[i] = -data.lambda[i] * z;
            p[i] = -z;
        } else {
            zz[i] = 1.0 - data.lambda[i] * (z - 1.0);
            p[i] = z - 1.0;
        }
    }

    let grow = |acc: f64, v: f64| (acc * acc + v * v).sqrt();
    let mut psum = vec![0.0; m];
    for &pi in &p[n - k..] {
        for s in psum.iter_mut() {
            *s = grow(*s, pi);
        }
    }
    for i in 1..=m {
        for j in (1..=m - i).rev() {
            psum[i - 1] = grow(psum[i - 1], p[j - 1]);
        }
        if i > 1 {
            psum[i - 1] = grow(psum[i - 1], p[m - i]);
        }
    }

    dtlz::dtlz2(&zz, m)
        .into_iter()
        .zip(psum)
        .map(|(f, s)| 2.0 / (1.0 + (-s).exp()) * (f + 1.0))
        .collect()
}

/// Position-related parameters of UF13 (WFG1 with `k = 8`, `l = 22`).
pub const UF13_K: usize = 8;

const WFG_EPSILON: f64 = 1e-10;

fn correct_to_01(a: f64) -> f64 {
    if (-WFG_EPSILON..=0.0).contains(&a) {
        0.0
    } else if (1.0..=1.0 + WFG_EPSILON).contains(&a) {
        1.0
    } else {
        a
    }
}

fn s_linear(y: f64, a: f64) -> f64 {
    correct_to_01((y - a).abs() / ((a - y).floor() + a).abs())
}

fn b_flat(y: f64, a: f64, b: f64, c: f64) -> f64 {
    correct_to_01(
        a + (y - b).floor().min(0.0) * a * (b - y) / b - (c - y).floor().min(0.0) * (1.0 - a) * (y - c),
    )
}

fn b_poly(y: f64, alpha: f64) -> f64 {
    correct_to_01(y.powf(alpha))
}

fn r_sum(y: &[f64], w: &[f64]) -> f64 {
    let num: f64 = y.iter().zip(w).map(|(a, b)| a * b).sum();
    let den: f64 = w.iter().sum();
    correct_to_01(num / den)
}

fn convex(x: &[f64], m: usize) -> f64 {
    let big_m = x.len();
    let mut r: f64 = x[..big_m - m].iter().map(|&v| 1.0 - (v * std::f64::consts::FRAC_PI_2).cos()).product();
    if m != 1 {
        r *= 1.0 - (x[big_m - m] * std::f64::consts::FRAC_PI_2).sin();
    }
    correct_to_01(r)
}

fn mixed(x: &[f64], a: f64, alpha: f64) -> f64 {
    let tmp = 2.0 * a * std::f64::consts::PI;
    correct_to_01((1.0 - x[0] - (tmp * x[0] + std::f64::consts::FRAC_PI_2).cos() / tmp).powf(alpha))
}

/// WFG1 with `m` objectives and `k` position parameters; `z_i in [0, 2i]`.
pub fn wfg1(z: &[f64], k: usize, m: usize) -> Vec<f64> {
    let n = z.len();
    let mut y: Vec<f64> = z.iter().enumerate().map(|(i, v)| v / (2.0 * (i + 1) as f64)).collect();
    for v in &mut y[k..] {
        *v = s_linear(*v, 0.35);
    }
    for v in &mut y[k..] {
        *v = b_flat(*v, 0.8, 0.75, 0.85);
    }
    for v in &mut y {
        *v = b_poly(*v, 0.02);
    }
    let w: Vec<f64> = (0..n).map(|i| 2.0 * (i + 1) as f64).collect();
    let mut t = Vec::with_capacity(m);
    for i in 0..m - 1 {
        let head = i * k / (m - 1);
        let tail = (i + 1) * k / (m - 1);
        t.push(r_sum(&y[head..tail], &w[head..tail]));
    }
    t.push(r_sum(&y[k..], &w[k..]));

    // degenerate-free shape: A_i = 1, so x_i = t_i
    let x = t;
    let mut h: Vec<f64> = (1..m).map(|j| convex(&x, j)).collect();
    h.push(mixed(&x, 5.0, 1.0));
    h.iter().enumerate().map(|(i, hi)| x[m - 1] + 2.0 * (i + 1) as f64 * hi).collect()
}

pub fn uf13(z: &[f64]) -> Vec<f64> {
    wfg1(z, UF13_K, UF_OBJECTIVES)
}
