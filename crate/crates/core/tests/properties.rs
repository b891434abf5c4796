use std::f64::consts::PI;

use proptest::prelude::*;
use quadcurv_core::conditions::{
    check_all_labelings, one_plus_three_residual, star_minus_residual, star_plus_residual, star_residual, Tolerance,
};
use quadcurv_core::metric::{FiniteMetricSpace, LabeledQuadruple};
use quadcurv_core::model::{
    comparison_angle, distance, midpoint, sample, Kappa, ModelPoint, ModelSpace, SampleOptions,
};

fn permuted(q: &LabeledQuadruple, perm: [usize; 3]) -> LabeledQuadruple {
    // base[k] joins base point k and k+1 (mod 3).
    let pair = |i: usize, j: usize| {
        let (a, b) = (perm[i], perm[j]);
        match (a.min(b), a.max(b)) {
            (0, 1) => q.base[0],
            (1, 2) => q.base[1],
            _ => q.base[2],
        }
    };
    LabeledQuadruple::new(perm.map(|i| q.apex_to[i]), [pair(0, 1), pair(1, 2), pair(2, 0)])
}

fn euclidean_quadruple() -> impl Strategy<Value = [[f64; 3]; 4]> {
    prop::array::uniform4(prop::array::uniform3(-10.0..10.0f64))
}

fn dist3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn quad(p: &[[f64; 3]; 4]) -> LabeledQuadruple {
    LabeledQuadruple::new(
        [dist3(&p[0], &p[1]), dist3(&p[0], &p[2]), dist3(&p[0], &p[3])],
        [dist3(&p[1], &p[2]), dist3(&p[2], &p[3]), dist3(&p[3], &p[1])],
    )
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

proptest! {
    #[test]
    fn residuals_ignore_base_order(pts in euclidean_quadruple(), k in 0usize..6) {
        let q = quad(&pts).scaled(0.1);
        let r = permuted(&q, PERMS[k]);
        prop_assert!((star_residual(&q).value() - star_residual(&r).value()).abs() < 1e-12);
        prop_assert!((star_minus_residual(&q).value() - star_minus_residual(&r).value()).abs() < 1e-9);
        if let (Ok(a), Ok(b)) = (star_plus_residual(&q), star_plus_residual(&r)) {
            prop_assert!((a.value() - b.value()).abs() < 1e-12);
        }
        if let (Ok(a), Ok(b)) = (one_plus_three_residual(&q, Kappa::ZERO), one_plus_three_residual(&r, Kappa::ZERO)) {
            prop_assert!((a.value() - b.value()).abs() < 1e-9);
        }
    }

    #[test]
    fn star_scales_quadratically(pts in euclidean_quadruple(), t in 0.01..100.0f64) {
        let q = quad(&pts);
        let a = star_residual(&q.scaled(t)).value();
        let b = t * t * star_residual(&q).value();
        prop_assert!((a - b).abs() <= 1e-10 * t * t * q.max_distance().powi(2).max(1.0));
        if let (Ok(x), Ok(y)) = (
            one_plus_three_residual(&q.scaled(t), Kappa::ZERO),
            one_plus_three_residual(&q, Kappa::ZERO),
        ) {
            prop_assert!((x.value() - y.value()).abs() < 1e-9);
        }
    }

    #[test]
    fn star_is_three_times_centroid_distance(pts in euclidean_quadruple()) {
        let c: [f64; 3] = std::array::from_fn(|k| (pts[1][k] + pts[2][k] + pts[3][k]) / 3.0);
        let expected = 3.0 * dist3(&pts[0], &c).powi(2);
        let q = quad(&pts);
        prop_assert!((star_residual(&q).value() - expected).abs() <= 1e-10 * q.max_distance().powi(2).max(1.0));
    }

    #[test]
    fn comparison_angle_grows_with_opposite_side(a in 0.1..1.0f64, b in 0.1..1.0f64, u in 0.05..0.95f64, v in 0.05..0.95f64, k in -2.0..2.0f64) {
        let kappa = Kappa::new(k).unwrap();
        let lo = (a - b).abs();
        let hi = a + b;
        let (c1, c2) = (lo + u.min(v) * (hi - lo), lo + u.max(v) * (hi - lo));
        if let (Ok(x), Ok(y)) = (comparison_angle(a, b, c1, kappa), comparison_angle(a, b, c2, kappa)) {
            prop_assert!(x <= y + 1e-12);
        }
    }

    #[test]
    fn comparison_angle_flat_limit(a in 0.1..2.0f64, b in 0.1..2.0f64, u in 0.05..0.95f64) {
        let c = (a - b).abs() + u * (2.0 * a.min(b));
        let flat = comparison_angle(a, b, c, Kappa::ZERO).unwrap();
        for k in [1e-6, -1e-6] {
            let curved = comparison_angle(a, b, c, Kappa::new(k).unwrap()).unwrap();
            prop_assert!((curved - flat).abs() < 1e-5);
        }
    }

    #[test]
    fn distances_are_metric(seed in any::<u64>(), which in 0usize..4) {
        let (space, opts) = match which {
            0 => (ModelSpace::sphere(1.5).unwrap(), SampleOptions::default()),
            1 => (ModelSpace::hyperbolic(-0.5).unwrap(), SampleOptions::with_bound(3.0)),
            2 => (ModelSpace::cone(1.2 * PI).unwrap(), SampleOptions::with_bound(2.0)),
            _ => (
                ModelSpace::product(ModelSpace::sphere(1.0).unwrap(), ModelSpace::euclidean(1).unwrap()).unwrap(),
                SampleOptions::with_bound(1.0),
            ),
        };
        let pts = sample(&space, &opts, seed, 3).unwrap();
        let d = |i: usize, j: usize| distance(&space, &pts[i], &pts[j]).unwrap();
        prop_assert!((d(0, 1) - d(1, 0)).abs() < 1e-12);
        prop_assert!(d(0, 0).abs() < 1e-7);
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9);
    }

    #[test]
    fn midpoint_halves_distance(seed in any::<u64>(), which in 0usize..3) {
        let (space, opts) = match which {
            0 => (ModelSpace::sphere(1.0).unwrap(), SampleOptions::default()),
            1 => (ModelSpace::hyperbolic(-1.0).unwrap(), SampleOptions::with_bound(4.0)),
            _ => (ModelSpace::euclidean(3).unwrap(), SampleOptions::with_bound(4.0)),
        };
        let pts = sample(&space, &opts, seed, 2).unwrap();
        let m = midpoint(&space, &pts[0], &pts[1]).unwrap();
        let d = distance(&space, &pts[0], &pts[1]).unwrap();
        prop_assert!((distance(&space, &pts[0], &m).unwrap() - 0.5 * d).abs() < 1e-9);
        prop_assert!((distance(&space, &pts[1], &m).unwrap() - 0.5 * d).abs() < 1e-9);
    }

    #[test]
    fn full_cone_is_the_plane(s1 in 0.0..5.0f64, s2 in 0.0..5.0f64, a1 in 0.0..2.0 * PI, a2 in 0.0..2.0 * PI) {
        let cone = ModelSpace::cone(2.0 * PI).unwrap();
        let d = distance(&cone, &ModelPoint::Cone { radial: s1, angle: a1 }, &ModelPoint::Cone { radial: s2, angle: a2 }).unwrap();
        let plane = ((s1 * a1.cos() - s2 * a2.cos()).powi(2) + (s1 * a1.sin() - s2 * a2.sin()).powi(2)).sqrt();
        prop_assert!((d - plane).abs() < 1e-12);
    }

    #[test]
    fn model_samples_are_metric_spaces(seed in any::<u64>()) {
        let space = ModelSpace::sphere(1.0).unwrap();
        let pts = sample(&space, &SampleOptions::default(), seed, 5).unwrap();
        let d: Vec<Vec<f64>> = pts
            .iter()
            .map(|a| pts.iter().map(|b| distance(&space, a, b).unwrap()).collect())
            .collect();
        let m = FiniteMetricSpace::unlabeled(d);
        prop_assert!(m.is_ok(), "{:?}", m.err());
    }

    #[test]
    fn apex_labelings_cover_all_orderings(pts in euclidean_quadruple()) {
        // The residuals only depend on which point is the apex.
        let q = quad(&pts);
        let Ok(space) = q.to_space() else { return Ok(()) };
        let four: Vec<f64> = space.quadruples().unwrap().map(|(_, q)| star_residual(&q).value()).collect();
        let all: Vec<([usize; 4], f64)> =
            space.all_orderings().unwrap().into_iter().map(|(i, q)| (i, star_residual(&q).value())).collect();
        for (idx, v) in all {
            prop_assert!((four[idx[0]] - v).abs() < 1e-9);
        }
        let report = check_all_labelings(&space, Kappa::ZERO, Tolerance::DEFAULT).unwrap();
        prop_assert_eq!(report.labelings.len(), 4);
    }
}
