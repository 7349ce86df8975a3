//! Das–Dennis lattice points on the unit simplex.

/// All points `w` with `w_i = k_i / divisions`, `k_i >= 0`, `sum k_i = divisions`,
/// in lexicographic order of `k`.
pub fn das_dennis(m: usize, divisions: usize) -> Vec<Vec<f64>> {
    assert!(m >= 1, "simplex dimension must be positive");
    let mut out = Vec::with_capacity(lattice_size(m, divisions));
    if divisions == 0 {
        out.push(vec![1.0 / m as f64; m]);
        return out;
    }
    let mut current = vec![0usize; m];
    fill(0, divisions, &mut current, &mut out, divisions);
    out
}

fn fill(pos: usize, left: usize, current: &mut [usize], out: &mut Vec<Vec<f64>>, divisions: usize) {
    let m = current.len();
    if pos == m - 1 {
        current[pos] = left;
        out.push(current.iter().map(|&k| k as f64 / divisions as f64).collect());
        return;
    }
    for k in (0..=left).rev() {
        current[pos] = k;
        fill(pos + 1, left - k, current, out, divisions);
    }
}

/// `C(m - 1 + divisions, m - 1)`, the number of lattice points.
pub fn lattice_size(m: usize, divisions: usize) -> usize {
    binomial(m - 1 + divisions, m - 1)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Largest lattice with at most `target` points (at least one division).
pub fn divisions_for(m: usize, target: usize) -> usize {
    let mut p = 1;
    while lattice_size(m, p + 1) <= target {
        p += 1;
    }
    p
}
