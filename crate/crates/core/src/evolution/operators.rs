//! Real-coded variation: simulated binary crossover and polynomial mutation,
//! both in the bounded form used by NSGA-II reference implementations.

use rand::Rng;

const SBX_EPS: f64 = 1e-14;

/// Simulated binary crossover of two parents.
///
/// With probability `1 - rate` the children are copies of the parents.
/// Otherwise each variable is recombined with probability 0.5 and the pair
/// of child values is swapped with probability 0.5. Children are clamped to
/// `bounds`.
pub fn sbx_crossover<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    bounds: &[(f64, f64)],
    eta: f64,
    rate: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(p1.len(), p2.len(), "parents must have equal length");
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rate <= 0.0 || rng.gen::<f64>() >= rate {
        return (c1, c2);
    }
    for i in 0..p1.len() {
        if rng.gen::<f64>() > 0.5 || (p1[i] - p2[i]).abs() <= SBX_EPS {
            continue;
        }
        let (lo, hi) = bounds[i];
        let (y1, y2) = if p1[i] < p2[i] { (p1[i], p2[i]) } else { (p2[i], p1[i]) };
        let u: f64 = rng.gen();
        let spread = y2 - y1;

        let beta = 1.0 + 2.0 * (y1 - lo) / spread;
        let betaq = spread_factor(u, beta, eta);
        let a = (0.5 * ((y1 + y2) - betaq * spread)).clamp(lo, hi);

        let beta = 1.0 + 2.0 * (hi - y2) / spread;
        let betaq = spread_factor(u, beta, eta);
        let b = (0.5 * ((y1 + y2) + betaq * spread)).clamp(lo, hi);

        if rng.gen::<bool>() {
            c1[i] = b;
            c2[i] = a;
        } else {
            c1[i] = a;
            c2[i] = b;
        }
    }
    (c1, c2)
}

fn spread_factor(u: f64, beta: f64, eta: f64) -> f64 {
    let alpha = 2.0 - beta.powf(-(eta + 1.0));
    if u <= 1.0 / alpha {
        (u * alpha).powf(1.0 / (eta + 1.0))
    } else {
        (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
    }
}

/// Bounded polynomial mutation; each variable mutates with probability `rate`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &[f64],
    bounds: &[(f64, f64)],
    eta: f64,
    rate: f64,
    rng: &mut R,
) -> Vec<f64> {
    let mut y = x.to_vec();
    if rate <= 0.0 {
        return y;
    }
    let power = 1.0 / (eta + 1.0);
    for (v, &(lo, hi)) in y.iter_mut().zip(bounds) {
        if rng.gen::<f64>() >= rate {
            continue;
        }
        let width = hi - lo;
        if width <= 0.0 {
            continue;
        }
        let d1 = (*v - lo) / width;
        let d2 = (hi - *v) / width;
        let u: f64 = rng.gen();
        let dq = if u < 0.5 {
            let val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0);
            val.powf(power) - 1.0
        } else {
            let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - val.powf(power)
        };
        *v = (*v + dq * width).clamp(lo, hi);
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const UNIT: [(f64, f64); 3] = [(0.0, 1.0); 3];

    #[test]
    fn identical_parents_are_reproduced() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = [0.2, 0.5, 0.9];
        for _ in 0..100 {
            let (a, b) = sbx_crossover(&p, &p, &UNIT, 15.0, 1.0, &mut rng);
            assert_eq!(a, p);
            assert_eq!(b, p);
        }
    }

    #[test]
    fn zero_rate_copies() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (p1, p2) = ([0.1, 0.2, 0.3], [0.9, 0.8, 0.7]);
        let (a, b) = sbx_crossover(&p1, &p2, &UNIT, 15.0, 0.0, &mut rng);
        assert_eq!((a.as_slice(), b.as_slice()), (&p1[..], &p2[..]));
        assert_eq!(polynomial_mutation(&p1, &UNIT, 20.0, 0.0, &mut rng), p1);
    }

    #[test]
    fn children_within_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let bounds = [(-1.0, 2.0), (0.0, 1.0), (5.0, 6.0)];
        for _ in 0..2000 {
            let p1 = [-1.0, 0.0, 6.0];
            let p2 = [2.0, 0.999, 5.0];
            let (a, b) = sbx_crossover(&p1, &p2, &bounds, 2.0, 1.0, &mut rng);
            for (v, (lo, hi)) in a.iter().chain(&b).zip(bounds.iter().chain(&bounds)) {
                assert!(v >= lo && v <= hi);
            }
            let m = polynomial_mutation(&p1, &bounds, 5.0, 1.0, &mut rng);
            assert!(m[0] >= -1.0 && m[2] <= 6.0);
        }
    }

    #[test]
    fn mutation_at_lower_bound_stays_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let y = polynomial_mutation(&[0.0], &[(0.0, 1.0)], 20.0, 1.0, &mut rng);
            assert!(y[0] >= 0.0 && y[0] <= 1.0);
        }
    }

    #[test]
    fn sbx_mean_is_parent_midpoint() {
        // Interior parents keep the bounded spread factors close to the
        // unbounded ones, whose children average exactly to the midpoint.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let bounds = [(0.0, 1.0)];
        let n = 10_000;
        let mids: Vec<f64> = (0..n)
            .map(|_| {
                let (a, b) = sbx_crossover(&[0.4], &[0.6], &bounds, 15.0, 1.0, &mut rng);
                0.5 * (a[0] + b[0])
            })
            .collect();
        let mean = mids.iter().sum::<f64>() / n as f64;
        let var = mids.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt().max(1e-12);
        assert!((mean - 0.5).abs() <= 3.0 * se, "mean {mean}, se {se}");

        // Second moment of a child around the midpoint. A variable is
        // recombined with probability 1/2; then the child sits at
        // mid +- beta * 0.1 with E[beta^2] = (eta+1)/2 * (1/(eta+3) + 1/(eta-1))
        // (bounds are far enough away to be negligible). Otherwise it is a
        // parent copy at distance 0.1.
        let eta = 15.0;
        let e_beta2 = (eta + 1.0) / 2.0 * (1.0 / (eta + 3.0) + 1.0 / (eta - 1.0));
        let expected = 0.01 * (0.5 + 0.5 * e_beta2);
        let sq: Vec<f64> = (0..n)
            .map(|_| {
                let (a, _) = sbx_crossover(&[0.4], &[0.6], &bounds, eta, 1.0, &mut rng);
                (a[0] - 0.5).powi(2)
            })
            .collect();
        let m = sq.iter().sum::<f64>() / n as f64;
        let sd = (sq.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        assert!((m - expected).abs() <= 3.0 * sd / (n as f64).sqrt(), "{m} vs {expected}");
    }

    #[test]
    fn mutation_is_symmetric_at_the_centre() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 20_000;
        let deltas: Vec<f64> = (0..n)
            .map(|_| polynomial_mutation(&[0.5], &[(0.0, 1.0)], 20.0, 1.0, &mut rng)[0] - 0.5)
            .collect();
        let mean = deltas.iter().sum::<f64>() / n as f64;
        let sd = (deltas.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        assert!(mean.abs() <= 3.0 * sd / (n as f64).sqrt(), "mean {mean} sd {sd}");
        let up = deltas.iter().filter(|&&d| d > 0.0).count() as f64;
        let down = deltas.iter().filter(|&&d| d < 0.0).count() as f64;
        // binomial(n, 1/2): 3 sigma = 3 * sqrt(n) / 2
        assert!((up - down).abs() / 2.0 <= 3.0 * (n as f64).sqrt() / 2.0, "{up} vs {down}");
    }
}
