//! Four-point curvature conditions as residuals.
//!
//! Every condition is normalized so that it holds iff its residual is
//! nonnegative.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use libm::{sin, sinh};

use crate::metric::{FiniteMetricSpace, LabeledQuadruple, MetricError};
use crate::model::{comparison_angle, GeometryError, Kappa, DOMAIN_TOL};

/// Signed slack of an inequality; the inequality holds iff the value is ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Residual(pub f64);

impl Residual {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn holds(self, tol: Tolerance) -> bool {
        self.0 >= -tol.eps_pass
    }
}

/// Absolute slack granted to residuals before a condition is declared failed.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Tolerance {
    pub eps_pass: f64,
}

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance { eps_pass: 1e-9 };

    pub fn new(eps_pass: f64) -> Result<Self, GeometryError> {
        if eps_pass.is_finite() && eps_pass >= 0.0 {
            Ok(Tolerance { eps_pass })
        } else {
            Err(GeometryError::InvalidParameter("tolerance must be finite and nonnegative"))
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Condition {
    Star,
    OnePlusThree,
    StarPlus,
    StarMinus,
}

impl Condition {
    pub const ALL: [Condition; 4] =
        [Condition::Star, Condition::OnePlusThree, Condition::StarPlus, Condition::StarMinus];

    pub fn name(self) -> &'static str {
        match self {
            Condition::Star => "star",
            Condition::OnePlusThree => "one_plus_three",
            Condition::StarPlus => "star_plus",
            Condition::StarMinus => "star_minus",
        }
    }

    /// Whether every quadruple of an Alexandrov space with curvature ≥ `k`
    /// satisfies the condition. The model-angle sum is taken at κ = 0.
    pub fn holds_for_curvature(self, k: f64) -> bool {
        match self {
            Condition::Star | Condition::OnePlusThree => k >= 0.0,
            Condition::StarPlus => k >= 1.0,
            Condition::StarMinus => k >= -1.0,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `|px|² + |py|² + |pz|² - (|xy|² + |yz|² + |zx|²)/3`.
pub fn star_residual(q: &LabeledQuadruple) -> Residual {
    let apex: f64 = q.apex_to.iter().map(|d| d * d).sum();
    let base: f64 = q.base.iter().map(|d| d * d).sum();
    Residual(apex - base / 3.0)
}

/// Which base pair a model angle is taken between.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum BasePair {
    XY,
    YZ,
    ZX,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AngleDomainError {
    pub pair: BasePair,
    pub cause: GeometryError,
}

impl fmt::Display for AngleDomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "model angle at apex for pair {:?}: {}", self.pair, self.cause)
    }
}

impl core::error::Error for AngleDomainError {}

/// The three model angles at the apex, for the pairs `xy`, `yz`, `zx`.
pub fn apex_angles(q: &LabeledQuadruple, kappa: Kappa) -> Result<[f64; 3], AngleDomainError> {
    let [px, py, pz] = q.apex_to;
    let [xy, yz, zx] = q.base;
    let angle = |a, b, c, pair| {
        comparison_angle(a, b, c, kappa).map_err(|cause| AngleDomainError { pair, cause })
    };
    Ok([
        angle(px, py, xy, BasePair::XY)?,
        angle(py, pz, yz, BasePair::YZ)?,
        angle(pz, px, zx, BasePair::ZX)?,
    ])
}

/// `2π` minus the sum of the three model angles at the apex.
pub fn one_plus_three_residual(q: &LabeledQuadruple, kappa: Kappa) -> Result<Residual, AngleDomainError> {
    let [a, b, c] = apex_angles(q, kappa)?;
    Ok(Residual(2.0 * PI - (a + b + c)))
}

/// `2 sin²(d/2) = 1 - cos d`, without cancellation for small `d`.
#[inline]
fn versine(d: f64) -> f64 {
    let h = sin(0.5 * d);
    2.0 * h * h
}

/// `2 sinh²(d/2) = cosh d - 1`.
#[inline]
fn coversine_h(d: f64) -> f64 {
    let h = sinh(0.5 * d);
    2.0 * h * h
}

/// One third of `Σᵢⱼ cos|xⁱxʲ| - (Σᵢ cos|pxⁱ|)²`, with the double sum over all
/// nine ordered pairs (diagonal terms equal 1).
///
/// The factor 1/3 makes the small-distance limit agree with
/// [`star_residual`] up to fourth-order terms; it does not affect the sign.
/// Requires all six distances to be at most π.
pub fn star_plus_residual(q: &LabeledQuadruple) -> Result<Residual, GeometryError> {
    if q.max_distance() > PI + DOMAIN_TOL {
        return Err(GeometryError::DomainError);
    }
    // cos d = 1 - v(d); expanding both sides around 9 leaves
    // 6U - U² - 2W with U = Σ v(|pxⁱ|) and W = Σ_{i<j} v(|xⁱxʲ|).
    let u: f64 = q.apex_to.iter().map(|&d| versine(d)).sum();
    let w: f64 = q.base.iter().map(|&d| versine(d)).sum();
    Ok(Residual((6.0 * u - u * u - 2.0 * w) / 3.0))
}

/// One third of `(Σᵢ cosh|pxⁱ|)² - Σᵢⱼ cosh|xⁱxʲ|` (nine-term double sum).
pub fn star_minus_residual(q: &LabeledQuadruple) -> Residual {
    let u: f64 = q.apex_to.iter().map(|&d| coversine_h(d)).sum();
    let w: f64 = q.base.iter().map(|&d| coversine_h(d)).sum();
    Residual((6.0 * u + u * u - 2.0 * w) / 3.0)
}

/// Residuals of the midpoint inequality and of its weak form for a point
/// `x` and a midpoint `z` of `[pq]`:
/// `(2|xz|² - m, 3|xz|² - m)` where `m = |xp|² + |xq|² - |pq|²/2`.
pub fn midpoint_residual(xp: f64, xq: f64, pq: f64, xz: f64) -> (Residual, Residual) {
    let m = xp * xp + xq * xq - 0.5 * pq * pq;
    let z2 = xz * xz;
    (Residual(2.0 * z2 - m), Residual(3.0 * z2 - m))
}

/// Residuals of one apex labeling.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LabelingResiduals {
    /// `[p, x, y, z]` as indices into the space.
    pub indices: [usize; 4],
    pub star: f64,
    pub one_plus_three: Result<f64, AngleDomainError>,
    /// `None` when the space has a distance larger than π.
    pub star_plus: Option<f64>,
    pub star_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConditionSummary {
    pub condition: Condition,
    pub worst: Option<f64>,
    pub worst_labeling: Option<[usize; 4]>,
    pub evaluated: usize,
    /// Labelings whose model angles could not be formed.
    pub domain_failures: usize,
    pub verdict: Verdict,
}

impl ConditionSummary {
    fn collect(condition: Condition, tol: Tolerance, values: impl Iterator<Item = ([usize; 4], Option<f64>)>) -> Self {
        let mut s = ConditionSummary {
            condition,
            worst: None,
            worst_labeling: None,
            evaluated: 0,
            domain_failures: 0,
            verdict: Verdict::NotApplicable,
        };
        for (idx, v) in values {
            match v {
                Some(v) => {
                    s.evaluated += 1;
                    if s.worst.is_none_or(|w| v < w) {
                        s.worst = Some(v);
                        s.worst_labeling = Some(idx);
                    }
                }
                None => s.domain_failures += 1,
            }
        }
        if let Some(w) = s.worst {
            s.verdict = if Residual(w).holds(tol) { Verdict::Pass } else { Verdict::Fail };
        }
        s
    }
}

/// Per-labeling residuals and per-condition verdicts for a finite space.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConditionReport {
    pub kappa: Kappa,
    pub tolerance: Tolerance,
    pub labelings: Vec<LabelingResiduals>,
    pub star: ConditionSummary,
    pub one_plus_three: ConditionSummary,
    pub star_plus: ConditionSummary,
    pub star_minus: ConditionSummary,
}

impl ConditionReport {
    pub fn summaries(&self) -> [&ConditionSummary; 4] {
        [&self.star, &self.one_plus_three, &self.star_plus, &self.star_minus]
    }

    pub fn summary(&self, c: Condition) -> &ConditionSummary {
        match c {
            Condition::Star => &self.star,
            Condition::OnePlusThree => &self.one_plus_three,
            Condition::StarPlus => &self.star_plus,
            Condition::StarMinus => &self.star_minus,
        }
    }

    /// No applicable condition failed.
    pub fn all_pass(&self) -> bool {
        self.summaries().iter().all(|s| s.verdict != Verdict::Fail)
    }
}

/// Evaluates every condition on every apex labeling of every 4-subset.
///
/// The model-angle sum uses comparison angles at curvature `kappa`;
/// labelings where those angles do not exist are counted as domain failures
/// and excluded from the verdict. `star_plus` is not applicable when the
/// space has a distance larger than π.
pub fn check_all_labelings(
    space: &FiniteMetricSpace,
    kappa: Kappa,
    tol: Tolerance,
) -> Result<ConditionReport, MetricError> {
    let star_plus_applicable = space.diameter() <= PI + DOMAIN_TOL;
    let labelings: Vec<LabelingResiduals> = space
        .quadruples()?
        .map(|(indices, q)| LabelingResiduals {
            indices,
            star: star_residual(&q).value(),
            one_plus_three: one_plus_three_residual(&q, kappa).map(Residual::value),
            star_plus: if star_plus_applicable {
                star_plus_residual(&q).ok().map(Residual::value)
            } else {
                None
            },
            star_minus: star_minus_residual(&q).value(),
        })
        .collect();

    let summary = |c: Condition, f: &dyn Fn(&LabelingResiduals) -> Option<f64>| {
        ConditionSummary::collect(c, tol, labelings.iter().map(|l| (l.indices, f(l))))
    };
    let star = summary(Condition::Star, &|l| Some(l.star));
    let one_plus_three = summary(Condition::OnePlusThree, &|l| l.one_plus_three.ok());
    let star_plus = if star_plus_applicable {
        summary(Condition::StarPlus, &|l| l.star_plus)
    } else {
        ConditionSummary::collect(Condition::StarPlus, tol, core::iter::empty())
    };
    let star_minus = summary(Condition::StarMinus, &|l| Some(l.star_minus));

    Ok(ConditionReport { kappa, tolerance: tol, labelings, star, one_plus_three, star_plus, star_minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::counterexample_f;
    use alloc::vec;
    use libm::{asin, cos, cosh, sqrt};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn star_examples() {
        let f = counterexample_f(0.1).unwrap();
        let q = f.quadruple([0, 1, 2, 3]);
        assert!(close(star_residual(&q).value(), 0.33, 1e-15));

        let r = 1.0 / sqrt(3.0);
        let centroid = LabeledQuadruple::new([r, r, r], [1.0, 1.0, 1.0]);
        assert!(close(star_residual(&centroid).value(), 0.0, 1e-15));

        let d = 1.7;
        let tetra = LabeledQuadruple::new([d; 3], [d; 3]);
        assert!(close(star_residual(&tetra).value(), 2.0 * d * d, 1e-14));
    }

    #[test]
    fn one_plus_three_examples() {
        let f = counterexample_f(0.1).unwrap();
        let q = f.quadruple([0, 1, 2, 3]);
        let expected = -2.0 * asin(0.05);
        let got = one_plus_three_residual(&q, Kappa::ZERO).unwrap().value();
        assert!(close(got, expected, 1e-12), "{got}");
        assert!(close(got, -0.100_041_713_6, 1e-9));

        // Unit square, apex at a corner: angles π/4, π/4 and π/2.
        let s2 = sqrt(2.0);
        let sq = LabeledQuadruple::new([1.0, s2, 1.0], [1.0, 1.0, s2]);
        let got = one_plus_three_residual(&sq, Kappa::ZERO).unwrap().value();
        assert!(close(got, 2.0 * PI - PI, 1e-14));

        // x = y = z: all angles vanish.
        let collapsed = LabeledQuadruple::new([1.0; 3], [0.0; 3]);
        assert!(close(one_plus_three_residual(&collapsed, Kappa::ZERO).unwrap().value(), 2.0 * PI, 1e-15));

        let bad = LabeledQuadruple::new([0.0, 1.0, 1.0], [1.0, 1.0, 1.0]);
        assert_eq!(
            one_plus_three_residual(&bad, Kappa::ZERO),
            Err(AngleDomainError { pair: BasePair::XY, cause: GeometryError::DegenerateSide })
        );
    }

    fn raw_star_plus(q: &LabeledQuadruple) -> f64 {
        let lhs: f64 = q.apex_to.iter().map(|&d| cos(d)).sum();
        let rhs = 3.0 + 2.0 * q.base.iter().map(|&d| cos(d)).sum::<f64>();
        rhs - lhs * lhs
    }

    fn raw_star_minus(q: &LabeledQuadruple) -> f64 {
        let lhs: f64 = q.apex_to.iter().map(|&d| cosh(d)).sum();
        let rhs = 3.0 + 2.0 * q.base.iter().map(|&d| cosh(d)).sum::<f64>();
        lhs * lhs - rhs
    }

    #[test]
    fn star_plus_matches_literal_double_sum() {
        let qs = [
            LabeledQuadruple::new([0.3, 1.1, 0.8], [1.0, 0.9, 0.7]),
            LabeledQuadruple::new([2.0, 2.5, 3.0], [1.0, 2.9, 2.2]),
        ];
        for q in qs {
            assert!(close(3.0 * star_plus_residual(&q).unwrap().value(), raw_star_plus(&q), 1e-13));
            assert!(close(3.0 * star_minus_residual(&q).value(), raw_star_minus(&q), 1e-11));
        }
    }

    #[test]
    fn star_plus_minus_special_cases() {
        let coincident = LabeledQuadruple::new([0.0; 3], [0.0; 3]);
        assert_eq!(star_plus_residual(&coincident).unwrap().value(), 0.0);
        assert_eq!(star_minus_residual(&coincident).value(), 0.0);
        let far = LabeledQuadruple::new([3.5, 1.0, 1.0], [1.0, 1.0, 1.0]);
        assert_eq!(star_plus_residual(&far), Err(GeometryError::DomainError));
    }

    #[test]
    fn midpoint_examples() {
        // p = 0, q = 2, z = 1 on a line.
        let (strong, weak) = midpoint_residual(3.0, 1.0, 2.0, 2.0);
        assert_eq!(strong.value(), 0.0);
        assert_eq!(weak.value(), 4.0);
        let (strong, _) = midpoint_residual(1.0, 1.0, 2.0, 0.0);
        assert_eq!(strong.value(), 0.0);
    }

    #[test]
    fn counterexample_report() {
        let f = counterexample_f(0.1).unwrap();
        let report = check_all_labelings(&f, Kappa::ZERO, Tolerance::DEFAULT).unwrap();
        assert_eq!(report.labelings.len(), 4);
        assert_eq!(report.star.verdict, Verdict::Pass);
        assert!(report.star.worst.unwrap() > 0.0);
        assert_eq!(report.one_plus_three.verdict, Verdict::Fail);
        assert_eq!(report.one_plus_three.worst_labeling, Some([0, 1, 2, 3]));
        assert!(!report.all_pass());
    }

    #[test]
    fn regular_tetrahedron_passes_everything() {
        let m = vec![
            vec![0.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 0.0],
        ];
        let space = FiniteMetricSpace::unlabeled(m).unwrap();
        let report = check_all_labelings(&space, Kappa::ZERO, Tolerance::DEFAULT).unwrap();
        for s in report.summaries() {
            assert_eq!(s.verdict, Verdict::Pass, "{:?}", s.condition);
            assert_eq!(s.evaluated, 4);
        }
    }

    #[test]
    fn star_plus_not_applicable_beyond_pi() {
        let m = vec![
            vec![0.0, 4.0, 4.0, 4.0],
            vec![4.0, 0.0, 4.0, 4.0],
            vec![4.0, 4.0, 0.0, 4.0],
            vec![4.0, 4.0, 4.0, 0.0],
        ];
        let space = FiniteMetricSpace::unlabeled(m).unwrap();
        let report = check_all_labelings(&space, Kappa::ZERO, Tolerance::DEFAULT).unwrap();
        assert_eq!(report.star_plus.verdict, Verdict::NotApplicable);
        assert!(report.labelings.iter().all(|l| l.star_plus.is_none()));
        // κ = 1 angles do not exist for sides of length 4.
        let report = check_all_labelings(&space, Kappa::ONE, Tolerance::DEFAULT).unwrap();
        assert_eq!(report.one_plus_three.verdict, Verdict::NotApplicable);
        assert_eq!(report.one_plus_three.domain_failures, 4);
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(-1.0).is_err());
        assert!(Tolerance::new(0.0).is_ok());
        assert!(Residual(-1e-10).holds(Tolerance::DEFAULT));
        assert!(!Residual(-1e-8).holds(Tolerance::DEFAULT));
    }
}
