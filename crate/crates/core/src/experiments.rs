//! Seeded Monte Carlo campaigns.
//!
//! Sample `i` of a campaign seeded with `s` draws from
//! [`stream_rng`]`(s, i)`, so results do not depend on evaluation order and
//! two runs with the same inputs give bit-identical statistics.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::asin;
use rand::Rng;

use crate::conditions::{
    one_plus_three_residual, star_minus_residual, star_plus_residual, star_residual, Condition, Tolerance,
};
use crate::embedding::{embed_any, Certificate, EmbeddingResult};
use crate::metric::{
    counterexample_f, FiniteMetricSpace, LabeledQuadruple, MetricError, COUNTEREXAMPLE_STAR_EPS_MAX,
};
use crate::model::{distance, sample_point, stream_rng, GeometryError, Kappa, ModelPoint, ModelSpace, SampleOptions, DOMAIN_TOL};

/// Bin edges of residual histograms; values below the first edge and at or
/// above the last one land in the outer bins.
pub const HISTOGRAM_EDGES: [f64; 11] = [-1e3, -1.0, -1e-3, -1e-6, -1e-9, 0.0, 1e-9, 1e-6, 1e-3, 1.0, 1e3];

/// Premise-passing metrics whose failed embedding is kept verbatim.
pub const MAX_STORED_EMBEDDING_FAILURES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Histogram {
    pub edges: Vec<f64>,
    /// `edges.len() + 1` counts.
    pub counts: Vec<u64>,
}

impl Default for Histogram {
    fn default() -> Self {
        Histogram { edges: HISTOGRAM_EDGES.to_vec(), counts: alloc::vec![0; HISTOGRAM_EDGES.len() + 1] }
    }
}

impl Histogram {
    pub fn add(&mut self, v: f64) {
        let bin = self.edges.partition_point(|&e| e <= v);
        self.counts[bin] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Smallest residual seen, with enough data to replay it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WorstCase {
    pub sample: u64,
    /// `[p, x, y, z]` as indices into `distances`.
    pub labeling: [usize; 4],
    pub residual: f64,
    pub distances: [[f64; 4]; 4],
}

impl WorstCase {
    pub fn to_space(&self) -> Result<FiniteMetricSpace, MetricError> {
        FiniteMetricSpace::unlabeled(self.distances.iter().map(|r| r.to_vec()).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConditionStats {
    pub condition: Condition,
    /// Whether the space's curvature bound guarantees the condition.
    pub expected: bool,
    /// Labelings evaluated.
    pub evaluated: u64,
    /// Labelings where the residual is undefined.
    pub skipped: u64,
    pub min_residual: Option<f64>,
    pub violations: u64,
    pub worst: Option<WorstCase>,
    pub histogram: Histogram,
}

impl ConditionStats {
    fn new(condition: Condition, expected: bool) -> Self {
        ConditionStats {
            condition,
            expected,
            evaluated: 0,
            skipped: 0,
            min_residual: None,
            violations: 0,
            worst: None,
            histogram: Histogram::default(),
        }
    }

    fn record(&mut self, residual: Option<f64>, tol: Tolerance, sample: u64, labeling: [usize; 4], d: &[[f64; 4]; 4]) {
        let Some(v) = residual else {
            self.skipped += 1;
            return;
        };
        self.evaluated += 1;
        self.histogram.add(v);
        if v < -tol.eps_pass {
            self.violations += 1;
        }
        if self.min_residual.is_none_or(|m| v < m) {
            self.min_residual = Some(v);
            self.worst = Some(WorstCase { sample, labeling, residual: v, distances: *d });
        }
    }

    /// An expected condition was violated.
    pub fn falsifies(&self) -> bool {
        self.expected && self.violations > 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CampaignKind {
    Positivity,
    ViolationSearch,
    Implication,
    Survey,
}

/// Extra bookkeeping of [`run_implication_test`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ImplicationStats {
    /// Random matrices drawn, including rejected ones.
    pub draws: u64,
    pub rejected: u64,
    /// Metrics passing the angle condition at all four apexes.
    pub premise_passed: u64,
    /// Premise-passing metrics given to [`embed_any`]; zero unless requested.
    pub embedding_checked: u64,
    pub embedding_failures: u64,
    pub embedding_failure_examples: Vec<[[f64; 4]; 4]>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Campaign {
    pub kind: CampaignKind,
    /// `None` for random finite metrics.
    pub space: Option<ModelSpace>,
    pub options: SampleOptions,
    pub seed: u64,
    pub count: u64,
    pub tolerance: Tolerance,
    pub curvature_bound: Option<f64>,
    pub stats: Vec<ConditionStats>,
    pub implication: Option<ImplicationStats>,
    pub falsifying: bool,
}

impl Campaign {
    pub fn stats(&self, c: Condition) -> Option<&ConditionStats> {
        self.stats.iter().find(|s| s.condition == c)
    }

    fn finish(mut self) -> Self {
        self.falsifying = self.stats.iter().any(ConditionStats::falsifies);
        self
    }
}

const APEX_LABELINGS: [[usize; 4]; 4] = [[0, 1, 2, 3], [1, 0, 2, 3], [2, 0, 1, 3], [3, 0, 1, 2]];

fn labeled(d: &[[f64; 4]; 4], [p, x, y, z]: [usize; 4]) -> LabeledQuadruple {
    LabeledQuadruple::new([d[p][x], d[p][y], d[p][z]], [d[x][y], d[y][z], d[z][x]])
}

fn residual(c: Condition, q: &LabeledQuadruple) -> Option<f64> {
    match c {
        Condition::Star => Some(star_residual(q).value()),
        Condition::OnePlusThree => one_plus_three_residual(q, Kappa::ZERO).ok().map(|r| r.value()),
        Condition::StarPlus => star_plus_residual(q).ok().map(|r| r.value()),
        Condition::StarMinus => Some(star_minus_residual(q).value()),
    }
}

fn evaluate(stats: &mut [ConditionStats], d: &[[f64; 4]; 4], sample: u64, tol: Tolerance) {
    let star_plus_applicable = d.iter().flatten().all(|&v| v <= PI + DOMAIN_TOL);
    for labeling in APEX_LABELINGS {
        let q = labeled(d, labeling);
        for s in stats.iter_mut() {
            let r = if s.condition == Condition::StarPlus && !star_plus_applicable {
                None
            } else {
                residual(s.condition, &q)
            };
            s.record(r, tol, sample, labeling, d);
        }
    }
}

fn point_distances(space: &ModelSpace, pts: &[ModelPoint; 4]) -> Result<[[f64; 4]; 4], GeometryError> {
    let mut d = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i + 1..4 {
            d[i][j] = distance(space, &pts[i], &pts[j])?;
            d[j][i] = d[i][j];
        }
    }
    Ok(d)
}

/// The four points of sample `index`.
pub fn sample_quadruple(
    space: &ModelSpace,
    opts: &SampleOptions,
    seed: u64,
    index: u64,
) -> Result<[ModelPoint; 4], GeometryError> {
    let mut rng = stream_rng(seed, index);
    Ok([
        sample_point(space, opts, &mut rng)?,
        sample_point(space, opts, &mut rng)?,
        sample_point(space, opts, &mut rng)?,
        sample_point(space, opts, &mut rng)?,
    ])
}

/// Samples `count` quadruples of `space` and evaluates `conditions` on all
/// four apex labelings of each. The angle-sum condition uses κ = 0.
pub fn run_campaign(
    kind: CampaignKind,
    space: &ModelSpace,
    opts: SampleOptions,
    count: u64,
    seed: u64,
    conditions: &[Condition],
    tol: Tolerance,
) -> Result<Campaign, GeometryError> {
    space.validate()?;
    let k = space.curvature_lower_bound();
    let mut stats: Vec<ConditionStats> = conditions
        .iter()
        .map(|&c| ConditionStats::new(c, k.is_some_and(|k| c.holds_for_curvature(k))))
        .collect();
    for i in 0..count {
        let pts = sample_quadruple(space, &opts, seed, i)?;
        let d = point_distances(space, &pts)?;
        evaluate(&mut stats, &d, i, tol);
    }
    Ok(Campaign {
        kind,
        space: Some(space.clone()),
        options: opts,
        seed,
        count,
        tolerance: tol,
        curvature_bound: k,
        stats,
        implication: None,
        falsifying: false,
    }
    .finish())
}

/// Sweeps a nonnegatively curved space with every condition.
pub fn run_positivity(
    space: &ModelSpace,
    opts: SampleOptions,
    count: u64,
    seed: u64,
    tol: Tolerance,
) -> Result<Campaign, GeometryError> {
    if !space.is_nonnegatively_curved() {
        return Err(GeometryError::InvalidParameter("positivity campaigns need curvature ≥ 0"));
    }
    run_campaign(CampaignKind::Positivity, space, opts, count, seed, &Condition::ALL, tol)
}

/// Looks for quadruples of a hyperbolic plane that break the conditions.
pub fn run_violation_search(
    space: &ModelSpace,
    opts: SampleOptions,
    count: u64,
    seed: u64,
    tol: Tolerance,
) -> Result<Campaign, GeometryError> {
    if !matches!(space, ModelSpace::Hyperbolic { .. }) {
        return Err(GeometryError::InvalidParameter("violation search needs a hyperbolic plane"));
    }
    run_campaign(CampaignKind::ViolationSearch, space, opts, count, seed, &Condition::ALL, tol)
}

fn random_metric<R: Rng>(rng: &mut R, draws: &mut u64, rejected: &mut u64) -> [[f64; 4]; 4] {
    loop {
        *draws += 1;
        let mut d = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in i + 1..4 {
                // Uniform on (0, 1].
                d[i][j] = 1.0 - rng.random::<f64>();
                d[j][i] = d[i][j];
            }
        }
        if FiniteMetricSpace::unlabeled(d.iter().map(|r| r.to_vec()).collect()).is_ok() {
            return d;
        }
        *rejected += 1;
    }
}

/// Draws `count` random 4-point metrics (six distances i.i.d. uniform on
/// `(0, 1]`, non-metrics rejected). Every metric whose angle sums at all four
/// apexes are at most 2π must satisfy the star inequality at every apex.
///
/// With `check_embedding`, premise-passing metrics are also handed to
/// [`embed_any`]; failures there are recorded but do not make the campaign
/// falsifying.
pub fn run_implication_test(count: u64, seed: u64, tol: Tolerance, check_embedding: bool) -> Campaign {
    let mut star = ConditionStats::new(Condition::Star, true);
    let mut premise = ConditionStats::new(Condition::OnePlusThree, false);
    let mut extra = ImplicationStats {
        draws: 0,
        rejected: 0,
        premise_passed: 0,
        embedding_checked: 0,
        embedding_failures: 0,
        embedding_failure_examples: Vec::new(),
    };
    for i in 0..count {
        let mut rng = stream_rng(seed, i);
        let d = random_metric(&mut rng, &mut extra.draws, &mut extra.rejected);
        let mut holds = true;
        for labeling in APEX_LABELINGS {
            let r = residual(Condition::OnePlusThree, &labeled(&d, labeling));
            premise.record(r, tol, i, labeling, &d);
            holds &= r.is_some_and(|v| v >= -tol.eps_pass);
        }
        if !holds {
            continue;
        }
        extra.premise_passed += 1;
        for labeling in APEX_LABELINGS {
            star.record(residual(Condition::Star, &labeled(&d, labeling)), tol, i, labeling, &d);
        }
        if check_embedding {
            extra.embedding_checked += 1;
            let space = FiniteMetricSpace::unlabeled(d.iter().map(|r| r.to_vec()).collect())
                .expect("metric validated when drawn");
            if !embed_any(&space).is_ok_and(|e| e.is_embedded()) {
                extra.embedding_failures += 1;
                if extra.embedding_failure_examples.len() < MAX_STORED_EMBEDDING_FAILURES {
                    extra.embedding_failure_examples.push(d);
                }
            }
        }
    }
    Campaign {
        kind: CampaignKind::Implication,
        space: None,
        options: SampleOptions::default(),
        seed,
        count,
        tolerance: tol,
        curvature_bound: None,
        stats: alloc::vec![star, premise],
        implication: Some(extra),
        falsifying: false,
    }
    .finish()
}

/// Outcome for one value of `ε`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CounterexampleRow {
    pub eps: f64,
    /// `ε` lies in the range where the star inequality holds at every apex.
    pub in_contract: bool,
    pub star_min: f64,
    pub star_pass: bool,
    /// Angle-sum residual with apex `p`.
    pub one_plus_three_at_p: f64,
    /// `-one_plus_three_at_p`, the excess of the angle sum over 2π.
    pub angle_excess: f64,
    /// `2 arcsin(ε/2)`.
    pub predicted_excess: f64,
    pub one_plus_three_fails: bool,
    pub embedding: EmbeddingResult,
    /// Star holds everywhere, the angle sum fails at `p`, and no plane or
    /// sphere embedding exists.
    pub reproduced: bool,
}

/// Checks the four-point counterexample for each `ε` in `eps_list`.
pub fn reproduce_counterexample(eps_list: &[f64], tol: Tolerance) -> Result<Vec<CounterexampleRow>, MetricError> {
    eps_list
        .iter()
        .map(|&eps| {
            let f = counterexample_f(eps)?;
            let star_min = f
                .quadruples()?
                .map(|(_, q)| star_residual(&q).value())
                .fold(f64::INFINITY, f64::min);
            let at_p = one_plus_three_residual(&f.quadruple([0, 1, 2, 3]), Kappa::ZERO)
                .map(|r| r.value())
                .unwrap_or(f64::NAN);
            let embedding = embed_any(&f).expect("four points");
            let star_pass = star_min > 0.0;
            let one_plus_three_fails = at_p < -tol.eps_pass;
            let reproduced = star_pass && one_plus_three_fails && !embedding.is_embedded();
            Ok(CounterexampleRow {
                eps,
                in_contract: eps <= COUNTEREXAMPLE_STAR_EPS_MAX,
                star_min,
                star_pass,
                one_plus_three_at_p: at_p,
                angle_excess: -at_p,
                predicted_excess: 2.0 * asin(0.5 * eps),
                one_plus_three_fails,
                embedding,
                reproduced,
            })
        })
        .collect()
}

/// Whether an embedding result is the certified "nothing found" outcome.
pub fn no_embedding_found(e: &EmbeddingResult) -> bool {
    matches!(e.certificate, Some(Certificate::NoEmbeddingFound { .. }))
}
