//! Property tests against independent oracles.

use cone_moea::cone_order::{pareto_classify, ConeOrder, DominanceRelation};
use cone_moea::metrics::{hypervolume, igd, NormalizationSpec};
use cone_moea::ranking::{crowding_distance, nondominated_sort};
use proptest::prelude::*;

fn points(m: usize, max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0f64..1.0, m), 1..=max_n)
}

fn sized_points(max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..=6).prop_flat_map(move |m| points(m, max_n))
}

fn angle() -> impl Strategy<Value = f64> {
    prop_oneof![Just(3.0), Just(6.0), Just(10.0), Just(15.0)]
}

proptest! {
    #[test]
    fn zero_angle_is_pareto(pair in (2usize..=8).prop_flat_map(|m| (prop::collection::vec(-2.0f64..2.0, m), prop::collection::vec(-2.0f64..2.0, m)))) {
        let (a, b) = pair;
        let c = ConeOrder::new(a.len(), 0.0).unwrap();
        prop_assert_eq!(c.classify(&a, &b).unwrap(), pareto_classify(&a, &b).unwrap());
    }

    #[test]
    fn rotated_cone_extends_pareto(pair in (2usize..=8).prop_flat_map(|m| (prop::collection::vec(0.0f64..1.0, m), prop::collection::vec(0.0f64..1.0, m))), deg in angle()) {
        let (a, b) = pair;
        let c = ConeOrder::from_degrees(a.len(), deg).unwrap();
        if pareto_classify(&a, &b).unwrap() == DominanceRelation::Dominates {
            prop_assert_eq!(c.classify(&a, &b).unwrap(), DominanceRelation::Dominates);
        }
    }

    #[test]
    fn classification_is_antisymmetric_and_translation_invariant(
        pair in (2usize..=6).prop_flat_map(|m| (prop::collection::vec(0.0f64..1.0, m), prop::collection::vec(0.0f64..1.0, m))),
        shift in -4.0f64..4.0,
        deg in angle(),
    ) {
        let (a, b) = pair;
        let c = ConeOrder::from_degrees(a.len(), deg).unwrap();
        let r = c.classify(&a, &b).unwrap();
        prop_assert_eq!(c.classify(&b, &a).unwrap(), r.flip());
        // dyadic shifts keep the differences exact
        let s = (shift * 8.0).round() / 8.0;
        let (sa, sb): (Vec<f64>, Vec<f64>) = (a.iter().map(|v| v + s).collect(), b.iter().map(|v| v + s).collect());
        let la = c.cone_coordinates(&a, &b).unwrap();
        let lb = c.cone_coordinates(&sa, &sb).unwrap();
        for (x, y) in la.iter().zip(&lb) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn cone_dominance_is_transitive(
        triple in (2usize..=6).prop_flat_map(|m| (
            prop::collection::vec(0.0f64..1.0, m),
            prop::collection::vec(0.0f64..1.0, m),
            prop::collection::vec(0.0f64..1.0, m),
        )),
        deg in angle(),
    ) {
        let (a, b, x) = triple;
        let c = ConeOrder::from_degrees(a.len(), deg).unwrap();
        if c.classify(&a, &b).unwrap() == DominanceRelation::Dominates
            && c.classify(&b, &x).unwrap() == DominanceRelation::Dominates
        {
            // lambda is linear, so a strictly positive sum stays nonnegative
            let l: Vec<f64> = c.cone_coordinates(&a, &x).unwrap();
            prop_assert!(l.iter().all(|&v| v >= -1e-12));
        }
    }

    #[test]
    fn cone_minimal_points_are_pareto_minimal(pts in sized_points(40), deg in angle()) {
        let m = pts[0].len();
        let pareto = nondominated_sort(&pts, &ConeOrder::pareto(m).unwrap()).unwrap();
        let cone = nondominated_sort(&pts, &ConeOrder::from_degrees(m, deg).unwrap()).unwrap();
        for i in &cone.fronts[0] {
            prop_assert!(pareto.fronts[0].contains(i));
        }
    }

    #[test]
    fn fronts_partition_the_population(pts in sized_points(60), deg in prop_oneof![Just(0.0), angle()]) {
        let m = pts[0].len();
        let order = ConeOrder::from_degrees(m, deg).unwrap();
        let part = nondominated_sort(&pts, &order).unwrap();
        let mut all: Vec<usize> = part.fronts.iter().flatten().copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..pts.len()).collect::<Vec<_>>());
        // every member of front k > 0 is dominated by some member of front k - 1
        for k in 1..part.fronts.len() {
            for &i in &part.fronts[k] {
                let covered = part.fronts[k - 1]
                    .iter()
                    .any(|&j| order.classify(&pts[j], &pts[i]).unwrap() == DominanceRelation::Dominates);
                prop_assert!(covered);
            }
        }
    }

    #[test]
    fn crowding_boundaries_are_infinite(pts in sized_points(30)) {
        let d = crowding_distance(&pts);
        prop_assert_eq!(d.len(), pts.len());
        prop_assert!(d.iter().all(|v| *v >= 0.0));
        if pts.len() > 2 {
            let arg = (0..pts.len()).min_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0])).unwrap();
            let min = pts[arg][0];
            let lowest_tie = (0..pts.len()).filter(|&i| pts[i][0] == min).any(|i| d[i].is_infinite());
            prop_assert!(lowest_tie);
        }
    }

    #[test]
    fn hypervolume_is_monotone(pts in sized_points(12), extra in prop::collection::vec(0.0f64..1.0, 6)) {
        let m = pts[0].len();
        let spec = NormalizationSpec::from_reference(vec![1.0; m]).unwrap();
        let base = hypervolume(&pts, &spec).unwrap();
        let mut more = pts.clone();
        more.push(extra[..m].to_vec());
        prop_assert!(hypervolume(&more, &spec).unwrap() >= base - 1e-12);

        let dominated: Vec<f64> = pts[0].iter().map(|v| (v + 1.0) / 2.0).collect();
        let mut with_dominated = pts.clone();
        with_dominated.push(dominated);
        prop_assert!((hypervolume(&with_dominated, &spec).unwrap() - base).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&base));
    }

    #[test]
    fn igd_is_permutation_invariant_and_scales(front in points(3, 20), reference in points(3, 20), scale in 0.5f64..4.0) {
        let base = igd(&front, &reference).unwrap().value;
        let (mut f2, mut r2) = (front.clone(), reference.clone());
        f2.reverse();
        r2.rotate_left(reference.len() / 2);
        let permuted = igd(&f2, &r2).unwrap().value;
        prop_assert!((base - permuted).abs() <= 1e-12 * base.max(1.0));
        let sf: Vec<Vec<f64>> = front.iter().map(|p| p.iter().map(|v| v * scale).collect()).collect();
        let sr: Vec<Vec<f64>> = reference.iter().map(|p| p.iter().map(|v| v * scale).collect()).collect();
        let scaled = igd(&sf, &sr).unwrap().value;
        prop_assert!((scaled - scale * base).abs() <= 1e-9 * scaled.max(1.0));
    }
}

/// Brute-force IGD double loop.
#[test]
fn igd_matches_double_loop() {
    let front = vec![vec![0.1, 0.9], vec![0.5, 0.5], vec![0.9, 0.2]];
    let reference = vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0], vec![0.3, 0.7]];
    let mut total = 0.0;
    for r in &reference {
        let mut best = f64::INFINITY;
        for f in &front {
            let d: f64 = r.iter().zip(f).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            best = best.min(d);
        }
        total += best;
    }
    assert!((igd(&front, &reference).unwrap().value - total / 4.0).abs() < 1e-15);
}
