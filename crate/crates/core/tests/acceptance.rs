//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use quadcurv_core::conditions::{
    one_plus_three_residual, star_minus_residual, star_plus_residual, star_residual, Condition, Tolerance,
};
use quadcurv_core::embedding::{embed_any, Certificate};
use quadcurv_core::experiments::{
    run_implication_test, run_positivity, run_violation_search, sample_quadruple,
};
use quadcurv_core::iteration::{run_iteration, verify_recursion, DEFAULT_N_MAX};
use quadcurv_core::metric::{counterexample_f, LabeledQuadruple};
use quadcurv_core::model::{distance, midpoint, quadruple_from_points, Kappa, ModelPoint, ModelSpace, SampleOptions};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn apex_labelings(d: &[[f64; 4]; 4]) -> [LabeledQuadruple; 4] {
    [[0, 1, 2, 3], [1, 0, 2, 3], [2, 0, 1, 3], [3, 0, 1, 2]].map(|[p, x, y, z]| {
        LabeledQuadruple::new([d[p][x], d[p][y], d[p][z]], [d[x][y], d[y][z], d[z][x]])
    })
}

fn pairwise(space: &ModelSpace, pts: &[ModelPoint]) -> [[f64; 4]; 4] {
    let mut d = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            d[i][j] = distance(space, &pts[i], &pts[j]).unwrap();
        }
    }
    d
}

fn counterexample() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for eps in [0.01, 0.1] {
        let f = counterexample_f(eps).map_err(|e| e.to_string())?;
        let star_min = f
            .quadruples()
            .map_err(|e| e.to_string())?
            .map(|(_, q)| star_residual(&q).value())
            .fold(f64::INFINITY, f64::min);
        // Apex p sees x, y, z with |px| = |py| = |pz| = 1 and |xy| = |xz| = 2:
        // two straight angles plus the apex angle of an isosceles triangle.
        let excess_floor = 2.0 * (eps / 2.0f64).asin() - 1e-9;
        let at_p = one_plus_three_residual(&f.quadruple([0, 1, 2, 3]), Kappa::ZERO)
            .map_err(|e| e.to_string())?
            .value();
        let embedded = embed_any(&f).map_err(|e| e.to_string())?.is_embedded();
        ok &= star_min > 0.0 && -at_p >= excess_floor && !embedded;
        notes.push(format!("eps={eps}: star_min={star_min:.6} excess={:.9} embedded={embedded}", -at_p));
    }
    let elapsed = start.elapsed().as_secs_f64();
    ok &= elapsed < 1.0;
    check(ok, format!("{}; {elapsed:.3}s", notes.join("; ")))
}

fn euclidean_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for dim in [2, 3] {
        let space = ModelSpace::euclidean(dim).unwrap();
        for i in 0..10_000 {
            let pts = sample_quadruple(&space, &SampleOptions::with_bound(5.0), 2, i).unwrap();
            let coords: Vec<Vec<f64>> = pts
                .iter()
                .map(|p| match p {
                    ModelPoint::Euclidean(v) => v.clone(),
                    _ => unreachable!(),
                })
                .collect();
            let centroid: Vec<f64> = (0..dim).map(|k| (coords[1][k] + coords[2][k] + coords[3][k]) / 3.0).collect();
            let expected = 3.0 * (0..dim).map(|k| (coords[0][k] - centroid[k]).powi(2)).sum::<f64>();
            let q = quadruple_from_points(&space, &pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
            let scale = q.max_distance().max(f64::MIN_POSITIVE);
            worst = worst.max((star_residual(&q).value() - expected).abs() / (scale * scale));
        }
    }
    check(worst <= 1e-9, format!("max |star - 3|p-c|^2| / scale^2 = {worst:.3e} over 2x10^4 quadruples"))
}

fn only_if() -> Outcome {
    let tol = Tolerance::new(1e-9).unwrap();
    let sphere = run_positivity(&ModelSpace::sphere(1.0).unwrap(), SampleOptions::default(), 100_000, 7, tol)
        .map_err(|e| e.to_string())?;
    let cone = run_positivity(&ModelSpace::cone(1.5 * PI).unwrap(), SampleOptions::with_bound(1.0), 100_000, 8, tol)
        .map_err(|e| e.to_string())?;
    let v = |c: &quadcurv_core::experiments::Campaign, k| c.stats(k).unwrap().violations;
    let (s_star, s_13, s_plus) = (v(&sphere, Condition::Star), v(&sphere, Condition::OnePlusThree), v(&sphere, Condition::StarPlus));
    let c_star = v(&cone, Condition::Star);
    let evaluated = sphere.stats(Condition::StarPlus).unwrap().evaluated;
    check(
        s_star == 0 && s_13 == 0 && s_plus == 0 && c_star == 0 && evaluated == 400_000,
        format!("sphere star/1+3/star+ violations {s_star}/{s_13}/{s_plus}, cone star violations {c_star}"),
    )
}

fn hyperbolic_falsification() -> Outcome {
    let space = ModelSpace::hyperbolic(-1.0).unwrap();
    let side: f64 = 10.0;
    // cosh s = 1 + (3/2) sinh² r for the circumradius r.
    let r = ((side.cosh() - 1.0) / 1.5).sqrt().asinh();
    let vertex = |k: f64| {
        let t = 2.0 * PI * k / 3.0;
        ModelPoint::Hyperbolic([r.cosh(), r.sinh() * t.cos(), r.sinh() * t.sin()])
    };
    let pts = [ModelPoint::Hyperbolic([1.0, 0.0, 0.0]), vertex(0.0), vertex(1.0), vertex(2.0)];
    let d = pairwise(&space, &pts);
    let side_error = (d[1][2] - side).abs().max((d[2][3] - side).abs()).max((d[3][1] - side).abs());
    let constructed = star_residual(&apex_labelings(&d)[0]).value();

    let search = run_violation_search(&space, SampleOptions::with_bound(10.0), 10_000, 4, Tolerance::DEFAULT)
        .map_err(|e| e.to_string())?;
    let found = search.stats(Condition::Star).unwrap().violations;
    check(
        side_error < 1e-9 && constructed < -1.0 && found >= 1,
        format!("constructed star={constructed:.4} (r={r:.4}), random violations {found}/40000 labelings"),
    )
}

fn equality_cases() -> Outcome {
    let s3 = 1.0 / 3f64.sqrt();
    let octant = LabeledQuadruple::new([s3.acos(); 3], [PI / 2.0; 3]);
    let plus = star_plus_residual(&octant).map_err(|e| e.to_string())?.value();

    // Medians of a κ = -1 triangle: the plane through the origin containing
    // a vertex and the opposite midpoint; two of them meet along a line.
    let space = ModelSpace::hyperbolic(-1.0).unwrap();
    let lift = |a: f64, b: f64| [(1.0 + a * a + b * b).sqrt(), a, b];
    let tri = [lift(0.3, -1.2), lift(2.0, 0.5), lift(-0.8, 1.7)];
    let mid = |i: usize, j: usize| match midpoint(&space, &ModelPoint::Hyperbolic(tri[i]), &ModelPoint::Hyperbolic(tri[j])) {
        Ok(ModelPoint::Hyperbolic(m)) => m,
        _ => unreachable!(),
    };
    let cross = |u: [f64; 3], v: [f64; 3]| [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    let n1 = cross(tri[0], mid(1, 2));
    let n2 = cross(tri[1], mid(2, 0));
    let mut c = cross(n1, n2);
    if c[0] < 0.0 {
        c = c.map(|v| -v);
    }
    let norm = (c[0] * c[0] - c[1] * c[1] - c[2] * c[2]).sqrt();
    let center = ModelPoint::Hyperbolic(c.map(|v| v / norm));
    let pts = [center, ModelPoint::Hyperbolic(tri[0]), ModelPoint::Hyperbolic(tri[1]), ModelPoint::Hyperbolic(tri[2])];
    let minus = star_minus_residual(&apex_labelings(&pairwise(&space, &pts))[0]).value();
    check(
        plus.abs() <= 1e-12 && minus.abs() <= 1e-9,
        format!("octant star+ = {plus:.2e}, hyperbolic median star- = {minus:.2e}"),
    )
}

fn proof_machinery() -> Outcome {
    let mut flat_worst: f64 = 0.0;
    for dim in [2, 3] {
        let space = ModelSpace::euclidean(dim).unwrap();
        for i in 0..200 {
            let pts = sample_quadruple(&space, &SampleOptions::with_bound(2.0), 5, i).unwrap();
            let t = run_iteration(&space, &pts[0], &pts[1], &pts[2], DEFAULT_N_MAX).map_err(|e| e.to_string())?;
            for s in &t.steps {
                flat_worst = flat_worst.max((s.alpha - 2.0).abs());
            }
        }
    }
    let sphere = ModelSpace::sphere(1.0).unwrap();
    let (mut min_slack, mut max_alpha, mut min_mid) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY);
    let mut failed_links = 0;
    for i in 0..1000 {
        let pts = sample_quadruple(&sphere, &SampleOptions::default(), 6, i).unwrap();
        let t = run_iteration(&sphere, &pts[0], &pts[1], &pts[2], DEFAULT_N_MAX).map_err(|e| e.to_string())?;
        failed_links += verify_recursion(&t, 1e-6).iter().filter(|c| !c.holds).count();
        min_slack = min_slack.min(t.min_slack());
        max_alpha = max_alpha.max(t.max_alpha());
        min_mid = min_mid.min(t.midpoint_residual.value());
    }
    check(
        flat_worst <= 1e-9 && min_slack >= -1e-6 && failed_links == 0 && max_alpha <= 3.0 + 1e-6 && min_mid >= -1e-6,
        format!(
            "flat |alpha-2| <= {flat_worst:.2e}; sphere min slack {min_slack:.3e}, max alpha {max_alpha:.6}, min (**) residual {min_mid:.3e}"
        ),
    )
}

fn embedding_round_trip() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let cases = [
        (ModelSpace::euclidean(2).unwrap(), SampleOptions::with_bound(1.0)),
        (ModelSpace::sphere(2.0).unwrap(), SampleOptions::default()),
    ];
    for (space, opts) in &cases {
        for i in 0..1000 {
            let pts = sample_quadruple(space, opts, 9, i).unwrap();
            let d = pairwise(space, &pts);
            let f = quadcurv_core::metric::FiniteMetricSpace::unlabeled(d.iter().map(|r| r.to_vec()).collect())
                .map_err(|e| e.to_string())?;
            let e = embed_any(&f).map_err(|e| e.to_string())?;
            let Some(target) = e.target else {
                failures += 1;
                continue;
            };
            let realized = match target {
                quadcurv_core::embedding::Target::Plane => ModelSpace::euclidean(2).unwrap(),
                quadcurv_core::embedding::Target::Sphere { radius } => ModelSpace::sphere(radius).unwrap(),
            };
            let back = pairwise(&realized, &e.coordinates);
            for a in 0..4 {
                for b in 0..4 {
                    worst = worst.max((back[a][b] - d[a][b]).abs());
                }
            }
        }
    }
    let f = embed_any(&counterexample_f(0.1).unwrap()).map_err(|e| e.to_string())?;
    let rejected = matches!(f.certificate, Some(Certificate::NoEmbeddingFound { .. }));
    check(
        failures == 0 && worst <= 1e-8 && rejected,
        format!("{failures} failures, max realized error {worst:.2e}; counterexample rejected: {rejected}"),
    )
}

fn implication() -> Outcome {
    let c = run_implication_test(10_000, 1, Tolerance::DEFAULT, false);
    let extra = c.implication.as_ref().unwrap();
    let star = c.stats(Condition::Star).unwrap();
    check(
        star.violations == 0 && !c.falsifying && extra.premise_passed > 0,
        format!(
            "{} of 10000 metrics pass the angle premise ({} draws); star violations {}",
            extra.premise_passed, extra.draws, star.violations
        ),
    )
}

fn small_scale() -> Outcome {
    let sphere = ModelSpace::sphere(1.0).unwrap();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..1000 {
        let pts = sample_quadruple(&sphere, &SampleOptions::default(), 10, i).unwrap();
        for q in apex_labelings(&pairwise(&sphere, &pts)) {
            let gap = |t: f64| {
                let s = q.scaled(t);
                (star_plus_residual(&s).unwrap().value() - star_residual(&s).value()).abs()
            };
            let (g1, g2, g3) = (gap(0.2), gap(0.1), gap(0.05));
            for r in [g1 / g2, g2 / g3] {
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
    }
    check(12.0 <= lo && hi <= 20.0, format!("gap ratio per halving in [{lo:.3}, {hi:.3}] over 4000 labelings"))
}

fn determinism() -> Outcome {
    let tol = Tolerance::DEFAULT;
    let runs = || {
        let sphere = run_positivity(&ModelSpace::sphere(1.0).unwrap(), SampleOptions::default(), 2000, 7, tol).unwrap();
        let cone = run_positivity(&ModelSpace::cone(1.5 * PI).unwrap(), SampleOptions::with_bound(1.0), 2000, 8, tol).unwrap();
        let hyp = run_violation_search(&ModelSpace::hyperbolic(-1.0).unwrap(), SampleOptions::with_bound(10.0), 2000, 4, tol).unwrap();
        let imp = run_implication_test(2000, 1, tol, false);
        format!("{sphere:?}{cone:?}{hyp:?}{imp:?}")
    };
    let (a, b) = (runs(), runs());
    check(a == b, format!("{} bytes of campaign output compared", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 counterexample", counterexample),
        ("2 euclidean identity", euclidean_identity),
        ("3 only-if sampling", only_if),
        ("4 hyperbolic falsification", hyperbolic_falsification),
        ("5 equality cases", equality_cases),
        ("6 proof machinery", proof_machinery),
        ("7 embedding round trip", embedding_round_trip),
        ("8 implication", implication),
        ("9 small-scale consistency", small_scale),
        ("10 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
