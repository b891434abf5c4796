//! Isometric embedding of 4-point metrics into the Euclidean plane or a
//! round sphere.
//!
//! Plane: classical multidimensional scaling on the doubly centered matrix
//! of squared distances. Sphere of radius `R`: the matrix `cos(dᵢⱼ/R)` must
//! be positive semidefinite of rank at most 3. Every accepted embedding is
//! also checked by recomputing its distances.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use libm::{cos, exp, log, sqrt};
use nalgebra::{Matrix4, SymmetricEigen};

use crate::metric::FiniteMetricSpace;
use crate::model::{norm3, scale3, vector_angle, ModelPoint};

/// Eigenvalues above `-PSD_REL_TOL · ‖M‖_max` count as nonnegative.
pub const PSD_REL_TOL: f64 = 1e-10;
/// Eigenvalues above `RANK_REL_TOL · ‖M‖_max` count toward the rank.
pub const RANK_REL_TOL: f64 = 1e-8;
/// Largest accepted deviation between realized and requested distances.
pub const DISTANCE_TOL: f64 = 1e-8;
/// Number of log-spaced radius probes in [`embed_any`].
pub const RADIUS_PROBES: usize = 64;
/// Upper end of the radius bracket, as a multiple of the largest distance.
pub const RADIUS_BRACKET_FACTOR: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum EmbeddingError {
    /// Only 4-point spaces are handled.
    WrongSize(usize),
    InvalidRadius(f64),
}

impl fmt::Display for EmbeddingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbeddingError::WrongSize(n) => write!(f, "embedding needs exactly 4 points, got {n}"),
            EmbeddingError::InvalidRadius(r) => write!(f, "sphere radius {r} must be positive"),
        }
    }
}

impl core::error::Error for EmbeddingError {}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Target {
    Plane,
    Sphere { radius: f64 },
}

/// Why an embedding was refused.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Certificate {
    /// The Gram (or cosine) matrix has an eigenvalue below the PSD threshold.
    NegativeEigenvalue { eigenvalue: f64, threshold: f64 },
    /// More nonzero eigenvalues than the target dimension allows; carries the
    /// first eigenvalue past the allowed rank.
    RankExcess { eigenvalue: f64, threshold: f64 },
    /// The spectral tests passed but the recovered coordinates miss the
    /// input distances.
    DistanceMismatch { error: f64 },
    DistanceExceedsDiameter { distance: f64, diameter: f64 },
    NoEmbeddingFound { bracket: (f64, f64), samples: usize },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EmbeddingResult {
    pub target: Option<Target>,
    /// Empty unless an embedding was found.
    pub coordinates: Vec<ModelPoint>,
    /// Largest realized-distance error of the last coordinates computed.
    pub max_distance_error: Option<f64>,
    pub certificate: Option<Certificate>,
    /// `(R, smallest eigenvalue of cos(d/R))` for every radius probed.
    pub eigenvalue_profile: Vec<(f64, f64)>,
}

impl EmbeddingResult {
    pub fn is_embedded(&self) -> bool {
        self.target.is_some()
    }

    fn failure(certificate: Certificate, max_distance_error: Option<f64>) -> Self {
        EmbeddingResult {
            target: None,
            coordinates: Vec::new(),
            max_distance_error,
            certificate: Some(certificate),
            eigenvalue_profile: Vec::new(),
        }
    }
}

fn distance_matrix(space: &FiniteMetricSpace) -> Result<Matrix4<f64>, EmbeddingError> {
    if space.len() != 4 {
        return Err(EmbeddingError::WrongSize(space.len()));
    }
    Ok(Matrix4::from_fn(|i, j| space.dist(i, j)))
}

/// Eigenpairs sorted by decreasing eigenvalue.
fn sorted_eigen(m: Matrix4<f64>) -> ([f64; 4], [[f64; 4]; 4]) {
    let eig = SymmetricEigen::new(m);
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.map(|k| eig.eigenvalues[k]);
    let vectors = order.map(|k| {
        let c = eig.eigenvectors.column(k);
        [c[0], c[1], c[2], c[3]]
    });
    (values, vectors)
}

fn max_norm(m: &Matrix4<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Spectral test shared by plane and sphere: PSD, then rank ≤ `rank`.
fn spectral_check(values: &[f64; 4], scale: f64, rank: usize) -> Option<Certificate> {
    let psd = PSD_REL_TOL * scale;
    if values[3] < -psd {
        return Some(Certificate::NegativeEigenvalue { eigenvalue: values[3], threshold: -psd });
    }
    let rk = RANK_REL_TOL * scale;
    if values[rank] > rk {
        return Some(Certificate::RankExcess { eigenvalue: values[rank], threshold: rk });
    }
    None
}

/// Embeds into the Euclidean plane, or certifies why that is impossible.
pub fn embed_plane(space: &FiniteMetricSpace) -> Result<EmbeddingResult, EmbeddingError> {
    let d = distance_matrix(space)?;
    let d2 = d.component_mul(&d);
    let row_mean: [f64; 4] = core::array::from_fn(|i| d2.row(i).sum() / 4.0);
    let total = row_mean.iter().sum::<f64>() / 4.0;
    let gram = Matrix4::from_fn(|i, j| -0.5 * (d2[(i, j)] - row_mean[i] - row_mean[j] + total));

    let (values, vectors) = sorted_eigen(gram);
    if let Some(cert) = spectral_check(&values, max_norm(&gram), 2) {
        return Ok(EmbeddingResult::failure(cert, None));
    }
    let coords: Vec<[f64; 2]> = (0..4)
        .map(|i| {
            [
                vectors[0][i] * sqrt(values[0].max(0.0)),
                vectors[1][i] * sqrt(values[1].max(0.0)),
            ]
        })
        .collect();
    let mut err: f64 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            let (dx, dy) = (coords[i][0] - coords[j][0], coords[i][1] - coords[j][1]);
            err = err.max((sqrt(dx * dx + dy * dy) - d[(i, j)]).abs());
        }
    }
    if err > DISTANCE_TOL {
        return Ok(EmbeddingResult::failure(Certificate::DistanceMismatch { error: err }, Some(err)));
    }
    Ok(EmbeddingResult {
        target: Some(Target::Plane),
        coordinates: coords.into_iter().map(|c| ModelPoint::Euclidean(vec![c[0], c[1]])).collect(),
        max_distance_error: Some(err),
        certificate: None,
        eigenvalue_profile: Vec::new(),
    })
}

fn cosine_matrix(d: &Matrix4<f64>, radius: f64) -> Matrix4<f64> {
    d.map(|v| cos(v / radius))
}

fn smallest_cosine_eigenvalue(d: &Matrix4<f64>, radius: f64) -> f64 {
    sorted_eigen(cosine_matrix(d, radius)).0[3]
}

/// Embeds into the sphere of the given radius.
pub fn embed_sphere(space: &FiniteMetricSpace, radius: f64) -> Result<EmbeddingResult, EmbeddingError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(EmbeddingError::InvalidRadius(radius));
    }
    let d = distance_matrix(space)?;
    let diameter = PI * radius;
    let longest = d.max();
    if longest > diameter * (1.0 + 1e-12) {
        return Ok(EmbeddingResult::failure(
            Certificate::DistanceExceedsDiameter { distance: longest, diameter },
            None,
        ));
    }
    let c = cosine_matrix(&d, radius);
    let (values, vectors) = sorted_eigen(c);
    if let Some(cert) = spectral_check(&values, max_norm(&c), 3) {
        return Ok(EmbeddingResult::failure(cert, None));
    }
    let coords: Vec<[f64; 3]> = (0..4)
        .map(|i| {
            let v: [f64; 3] = core::array::from_fn(|k| vectors[k][i] * sqrt(values[k].max(0.0)));
            let n = norm3(&v);
            if n > 0.0 {
                scale3(&v, radius / n)
            } else {
                [0.0, 0.0, radius]
            }
        })
        .collect();
    let mut err: f64 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            let realized = radius * vector_angle(&coords[i], &coords[j]);
            err = err.max((realized - d[(i, j)]).abs());
        }
    }
    if err > DISTANCE_TOL {
        return Ok(EmbeddingResult::failure(Certificate::DistanceMismatch { error: err }, Some(err)));
    }
    Ok(EmbeddingResult {
        target: Some(Target::Sphere { radius }),
        coordinates: coords.into_iter().map(ModelPoint::Sphere).collect(),
        max_distance_error: Some(err),
        certificate: None,
        eigenvalue_profile: Vec::new(),
    })
}

/// Plane first, then a radius search.
///
/// The smallest eigenvalue of `cos(d/R)` is probed at [`RADIUS_PROBES`]
/// log-spaced radii in `[max_d/π, RADIUS_BRACKET_FACTOR · max_d]`. Each sign
/// change is refined by bisection, and each negative local maximum by a
/// golden-section search for a nearby sign change; at a root the matrix is
/// positive semidefinite of rank ≤ 3. Roots are tried in increasing order of `R` and
/// the first one that reproduces the distances is returned.
pub fn embed_any(space: &FiniteMetricSpace) -> Result<EmbeddingResult, EmbeddingError> {
    let plane = embed_plane(space)?;
    if plane.is_embedded() {
        return Ok(plane);
    }
    let d = distance_matrix(space)?;
    let longest = d.max();
    let lo = longest / PI;
    let hi = RADIUS_BRACKET_FACTOR * longest;
    let step = (log(hi) - log(lo)) / (RADIUS_PROBES - 1) as f64;
    let profile: Vec<(f64, f64)> = (0..RADIUS_PROBES)
        .map(|k| {
            let r = if k == 0 { lo } else { exp(log(lo) + step * k as f64) };
            (r, smallest_cosine_eigenvalue(&d, r))
        })
        .collect();

    let mut candidates = Vec::new();
    for (k, &(r, v)) in profile.iter().enumerate() {
        if v.abs() <= RANK_REL_TOL {
            candidates.push(r);
        }
        if let Some(&(r1, v1)) = profile.get(k + 1) {
            if (v < 0.0) != (v1 < 0.0) {
                candidates.push(bisect_root(&d, (r, v), r1));
            }
        }
        // The eigenvalue usually turns positive only on a short window past
        // the true radius, which the probes can step over. Look for it
        // around every negative local maximum.
        let left = profile[k.saturating_sub(1)];
        let right = profile[(k + 1).min(profile.len() - 1)];
        if v < 0.0 && v >= left.1 && v >= right.1 {
            let (m, vm) = golden_max(&d, left.0, right.0);
            if vm >= 0.0 {
                candidates.push(bisect_root(&d, left, m));
                candidates.push(bisect_root(&d, (m, vm), right.0));
            } else if vm.abs() <= RANK_REL_TOL {
                candidates.push(m);
            }
        }
    }
    candidates.sort_by(f64::total_cmp);

    let mut last_error = None;
    for r in candidates {
        let attempt = embed_sphere(space, r)?;
        if attempt.is_embedded() {
            return Ok(EmbeddingResult { eigenvalue_profile: profile, ..attempt });
        }
        last_error = attempt.max_distance_error.or(last_error);
    }
    Ok(EmbeddingResult {
        eigenvalue_profile: profile,
        ..EmbeddingResult::failure(
            Certificate::NoEmbeddingFound { bracket: (lo, hi), samples: RADIUS_PROBES },
            last_error,
        )
    })
}

/// Maximizes the smallest eigenvalue over `[a, b]`, stopping early once it
/// is nonnegative.
fn golden_max(d: &Matrix4<f64>, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_895;
    let f = |r: f64| smallest_cosine_eigenvalue(d, r);
    let mut c = b - INV_PHI * (b - a);
    let mut e = a + INV_PHI * (b - a);
    let (mut fc, mut fe) = (f(c), f(e));
    for _ in 0..120 {
        if fc >= 0.0 {
            return (c, fc);
        }
        if fe >= 0.0 {
            return (e, fe);
        }
        if fc > fe {
            b = e;
            e = c;
            fe = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + INV_PHI * (b - a);
            fe = f(e);
        }
        if b - a <= f64::EPSILON * b {
            break;
        }
    }
    if fc > fe {
        (c, fc)
    } else {
        (e, fe)
    }
}

fn bisect_root(d: &Matrix4<f64>, (mut a, va): (f64, f64), mut b: f64) -> f64 {
    let neg_a = va < 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (smallest_cosine_eigenvalue(d, m) < 0.0) == neg_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
