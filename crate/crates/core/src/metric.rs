//! Finite metric spaces and labeled quadruples.
//!
//! A [`FiniteMetricSpace`] is a validated square distance matrix with point
//! labels. The metric axioms are checked exactly on the stored values: no
//! tolerance is applied to user-provided distances.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Violation of a metric axiom, or a request the space cannot serve.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum MetricError {
    /// The matrix has no rows.
    Empty,
    /// Row `row` has `len` entries instead of `expected`.
    NotSquare { row: usize, len: usize, expected: usize },
    /// Number of labels does not match the matrix size.
    LabelCount { labels: usize, points: usize },
    /// An entry is NaN or infinite.
    NonFinite(usize, usize),
    NonzeroDiagonal(usize),
    NegativeDistance(usize, usize),
    Asymmetric(usize, usize),
    /// Distinct points at distance zero.
    ZeroOffDiagonal(usize, usize),
    /// `dist[i][k] > dist[i][j] + dist[j][k]`, reported as `(i, k, j)`.
    TriangleViolation(usize, usize, usize),
    TooFewPoints { needed: usize, got: usize },
    InvalidEps(f64),
}

impl fmt::Display for MetricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricError::Empty => write!(f, "distance matrix is empty"),
            MetricError::NotSquare { row, len, expected } => {
                write!(f, "row {row} has {len} entries, expected {expected}")
            }
            MetricError::LabelCount { labels, points } => {
                write!(f, "{labels} labels given for {points} points")
            }
            MetricError::NonFinite(i, j) => write!(f, "dist[{i}][{j}] is not finite"),
            MetricError::NonzeroDiagonal(i) => write!(f, "dist[{i}][{i}] is not zero"),
            MetricError::NegativeDistance(i, j) => write!(f, "dist[{i}][{j}] is negative"),
            MetricError::Asymmetric(i, j) => write!(f, "dist[{i}][{j}] != dist[{j}][{i}]"),
            MetricError::ZeroOffDiagonal(i, j) => {
                write!(f, "distinct points {i} and {j} are at distance zero")
            }
            MetricError::TriangleViolation(i, k, j) => write!(
                f,
                "triangle inequality fails: dist[{i}][{k}] > dist[{i}][{j}] + dist[{j}][{k}]"
            ),
            MetricError::TooFewPoints { needed, got } => {
                write!(f, "need at least {needed} points, got {got}")
            }
            MetricError::InvalidEps(eps) => write!(f, "eps = {eps} is outside (0, 2]"),
        }
    }
}

impl core::error::Error for MetricError {}

/// A finite metric space: labels plus a validated distance matrix.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    /// Validates `dist` against the metric axioms.
    ///
    /// Checks run in a fixed order (shape, finiteness, diagonal, sign,
    /// symmetry, distinctness, triangle inequality) and the first violation
    /// found is returned.
    pub fn new(dist: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self, MetricError> {
        let n = dist.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        for (row, r) in dist.iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::NotSquare { row, len: r.len(), expected: n });
            }
        }
        if labels.len() != n {
            return Err(MetricError::LabelCount { labels: labels.len(), points: n });
        }
        for i in 0..n {
            for j in 0..n {
                if !dist[i][j].is_finite() {
                    return Err(MetricError::NonFinite(i, j));
                }
            }
        }
        for i in 0..n {
            if dist[i][i] != 0.0 {
                return Err(MetricError::NonzeroDiagonal(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if dist[i][j] < 0.0 {
                    return Err(MetricError::NegativeDistance(i, j));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if dist[i][j] != dist[j][i] {
                    return Err(MetricError::Asymmetric(i, j));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if dist[i][j] == 0.0 {
                    return Err(MetricError::ZeroOffDiagonal(i, j));
                }
            }
        }
        for i in 0..n {
            for k in i + 1..n {
                for j in 0..n {
                    if j != i && j != k && dist[i][k] > dist[i][j] + dist[j][k] {
                        return Err(MetricError::TriangleViolation(i, k, j));
                    }
                }
            }
        }
        Ok(Self { labels, dist })
    }

    /// Like [`new`](Self::new) with labels `0, 1, 2, ...`.
    pub fn unlabeled(dist: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let labels = (0..dist.len()).map(|i| i.to_string()).collect();
        Self::new(dist, labels)
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn distances(&self) -> &[Vec<f64>] {
        &self.dist
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        self.dist
            .iter()
            .flat_map(|r| r.iter().copied())
            .fold(0.0, f64::max)
    }

    /// The quadruple with apex `idx[0]` and base points `idx[1..4]`.
    pub fn quadruple(&self, idx: [usize; 4]) -> LabeledQuadruple {
        let [p, x, y, z] = idx;
        LabeledQuadruple {
            apex_to: [self.dist(p, x), self.dist(p, y), self.dist(p, z)],
            base: [self.dist(x, y), self.dist(y, z), self.dist(z, x)],
        }
    }

    /// Every apex choice within every 4-subset, in lexicographic subset order.
    ///
    /// Each 4-subset contributes exactly four labelings. Permuting the three
    /// base points does not change any of the residuals in
    /// [`conditions`](crate::conditions), so the other 20 orderings are
    /// redundant; [`all_orderings`](Self::all_orderings) enumerates them.
    pub fn quadruples(&self) -> Result<Quadruples<'_>, MetricError> {
        self.require_four()?;
        Ok(Quadruples { space: self, subset: Some([0, 1, 2, 3]), apex: 0 })
    }

    /// All 24 orderings of every 4-subset.
    pub fn all_orderings(&self) -> Result<Vec<([usize; 4], LabeledQuadruple)>, MetricError> {
        self.require_four()?;
        let mut out = Vec::new();
        let mut subset = Some([0, 1, 2, 3]);
        while let Some(s) = subset {
            for perm in PERMUTATIONS_4 {
                let idx = [s[perm[0]], s[perm[1]], s[perm[2]], s[perm[3]]];
                out.push((idx, self.quadruple(idx)));
            }
            subset = next_subset(s, self.len());
        }
        Ok(out)
    }

    fn require_four(&self) -> Result<(), MetricError> {
        if self.len() < 4 {
            Err(MetricError::TooFewPoints { needed: 4, got: self.len() })
        } else {
            Ok(())
        }
    }
}

const PERMUTATIONS_4: [[usize; 4]; 24] = [
    [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
    [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
    [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
    [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
];

fn next_subset(mut s: [usize; 4], n: usize) -> Option<[usize; 4]> {
    let mut i = 4;
    while i > 0 {
        i -= 1;
        if s[i] < n - 4 + i {
            s[i] += 1;
            for j in i + 1..4 {
                s[j] = s[j - 1] + 1;
            }
            return Some(s);
        }
    }
    None
}

/// Iterator returned by [`FiniteMetricSpace::quadruples`].
pub struct Quadruples<'a> {
    space: &'a FiniteMetricSpace,
    subset: Option<[usize; 4]>,
    apex: usize,
}

impl Iterator for Quadruples<'_> {
    type Item = ([usize; 4], LabeledQuadruple);

    fn next(&mut self) -> Option<Self::Item> {
        let s = self.subset?;
        let a = self.apex;
        let rest: Vec<usize> = (0..4).filter(|&k| k != a).map(|k| s[k]).collect();
        let idx = [s[a], rest[0], rest[1], rest[2]];
        self.apex += 1;
        if self.apex == 4 {
            self.apex = 0;
            self.subset = next_subset(s, self.space.len());
        }
        Some((idx, self.space.quadruple(idx)))
    }
}

/// Six distances among `p, x, y, z` with `p` distinguished as the apex.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LabeledQuadruple {
    /// `[|px|, |py|, |pz|]`
    pub apex_to: [f64; 3],
    /// `[|xy|, |yz|, |zx|]`
    pub base: [f64; 3],
}

impl LabeledQuadruple {
    pub fn new(apex_to: [f64; 3], base: [f64; 3]) -> Self {
        Self { apex_to, base }
    }

    /// 4×4 distance matrix in the order `p, x, y, z`.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let [px, py, pz] = self.apex_to;
        let [xy, yz, zx] = self.base;
        alloc::vec![
            alloc::vec![0.0, px, py, pz],
            alloc::vec![px, 0.0, xy, zx],
            alloc::vec![py, xy, 0.0, yz],
            alloc::vec![pz, zx, yz, 0.0],
        ]
    }

    /// The induced 4-point space with labels `p, x, y, z`.
    pub fn to_space(&self) -> Result<FiniteMetricSpace, MetricError> {
        let labels = ["p", "x", "y", "z"].iter().map(|s| s.to_string()).collect();
        FiniteMetricSpace::new(self.matrix(), labels)
    }

    /// Multiplies all six distances by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        Self {
            apex_to: self.apex_to.map(|d| d * t),
            base: self.base.map(|d| d * t),
        }
    }

    pub fn max_distance(&self) -> f64 {
        self.apex_to.iter().chain(self.base.iter()).copied().fold(0.0, f64::max)
    }
}

/// Largest `eps` for which [`counterexample_f`] satisfies the star condition
/// under every relabeling.
///
/// The four apex labelings have star residuals `(1 - eps²)/3` (apex `p`),
/// `9 - (2 + eps²)/3` (apex `x`) and `3 + eps²` (apex `y` or `z`); only the
/// first can be negative, and it is nonnegative exactly for `eps <= 1`.
pub const COUNTEREXAMPLE_STAR_EPS_MAX: f64 = 1.0;

/// The four-point space `{p, x, y, z}` with `|px| = |py| = |pz| = 1`,
/// `|xy| = |xz| = 2` and `|yz| = eps`.
///
/// It satisfies the star condition for every labeling when
/// `eps <= COUNTEREXAMPLE_STAR_EPS_MAX`, but fails the model-angle sum at
/// apex `p` for every `eps > 0`.
pub fn counterexample_f(eps: f64) -> Result<FiniteMetricSpace, MetricError> {
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(MetricError::InvalidEps(eps));
    }
    let q = LabeledQuadruple::new([1.0, 1.0, 1.0], [2.0, eps, 2.0]);
    q.to_space()
}
