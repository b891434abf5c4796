//! Analytic model geometries.
//!
//! Comparison angles in the model plane of curvature κ, plus exact
//! distances, geodesics, midpoints and seeded sampling in Euclidean space,
//! round spheres, the hyperbolic plane (hyperboloid model), flat cones and
//! products of these.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use libm::{asinh, atan2, cos, cosh, fmod, sin, sinh, sqrt};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::metric::LabeledQuadruple;

/// Slack allowed on triangle and model-plane bounds before an input is
/// rejected instead of clamped.
pub const DOMAIN_TOL: f64 = 1e-9;

/// Relative tolerance used by [`ModelSpace::contains`].
pub const SURFACE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum GeometryError {
    /// A side adjacent to the requested angle has zero length.
    DegenerateSide,
    /// Side lengths exceed the model plane bounds for κ > 0, or are not finite.
    DomainError,
    NotATriangle,
    /// The point does not belong to the space.
    MismatchedSpace,
    AntipodalPoints,
    NoUniqueMidpoint,
    InvalidParameter(&'static str),
    /// Euclidean, hyperbolic and cone sampling need a radius bound.
    MissingRadiusBound,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::DegenerateSide => write!(f, "side adjacent to the angle has zero length"),
            GeometryError::DomainError => write!(f, "side lengths outside the model plane domain"),
            GeometryError::NotATriangle => write!(f, "side lengths violate the triangle inequality"),
            GeometryError::MismatchedSpace => write!(f, "point does not belong to the space"),
            GeometryError::AntipodalPoints => write!(f, "antipodal points have no unique geodesic"),
            GeometryError::NoUniqueMidpoint => write!(f, "points have two distinct midpoints"),
            GeometryError::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            GeometryError::MissingRadiusBound => write!(f, "sampling this space needs a radius bound"),
        }
    }
}

impl core::error::Error for GeometryError {}

/// Curvature of a model plane.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Kappa(f64);

impl Kappa {
    pub const ZERO: Kappa = Kappa(0.0);
    pub const ONE: Kappa = Kappa(1.0);
    pub const MINUS_ONE: Kappa = Kappa(-1.0);

    pub fn new(value: f64) -> Result<Self, GeometryError> {
        if value.is_finite() {
            Ok(Kappa(value))
        } else {
            Err(GeometryError::InvalidParameter("kappa must be finite"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Kappa {
    fn default() -> Self {
        Kappa::ZERO
    }
}

/// Angle at the vertex between sides `a` and `b` of the triangle in the
/// model plane of curvature `kappa` whose third side is `c`.
///
/// Evaluated with the half-angle tangent form of the law of cosines, which
/// stays accurate for needle-like and nearly flat triangles where `arccos`
/// loses half of the digits.
pub fn comparison_angle(a: f64, b: f64, c: f64, kappa: Kappa) -> Result<f64, GeometryError> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(GeometryError::DomainError);
    }
    if a <= 0.0 || b <= 0.0 {
        return Err(GeometryError::DegenerateSide);
    }
    if c < 0.0 {
        return Err(GeometryError::NotATriangle);
    }
    let k = kappa.value();
    let scale = if k == 0.0 { 1.0 } else { sqrt(k.abs()) };
    let (a, b, c) = (a * scale, b * scale, c * scale);
    if k > 0.0 && (a > PI + DOMAIN_TOL || b > PI + DOMAIN_TOL || c > PI + DOMAIN_TOL || a + b + c > 2.0 * PI + DOMAIN_TOL)
    {
        return Err(GeometryError::DomainError);
    }

    let tol = DOMAIN_TOL * (a + b + c).max(1.0);
    let sa = 0.5 * (b + c - a);
    let sb = 0.5 * (a + c - b);
    let sc = 0.5 * (a + b - c);
    if sa < -tol || sb < -tol || sc < -tol {
        return Err(GeometryError::NotATriangle);
    }
    let (sa, sb, sc) = (sa.max(0.0), sb.max(0.0), sc.max(0.0));
    let s = 0.5 * (a + b + c);

    let f: fn(f64) -> f64 = if k > 0.0 {
        sin
    } else if k < 0.0 {
        sinh
    } else {
        |x| x
    };
    let num = (f(sa) * f(sb)).max(0.0);
    let den = (f(s) * f(sc)).max(0.0);
    Ok(2.0 * atan2(sqrt(num), sqrt(den)))
}

/// An analytic geometry.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum ModelSpace {
    Euclidean { dim: usize },
    /// Round 2-sphere of the given radius, embedded in ℝ³.
    Sphere { radius: f64 },
    /// Hyperbolic plane of constant curvature `kappa < 0`.
    Hyperbolic { kappa: f64 },
    /// Flat cone of total angle `angle` around its apex.
    Cone { angle: f64 },
    /// Product with the ℓ²-combined metric.
    Product(Box<ModelSpace>, Box<ModelSpace>),
}

impl ModelSpace {
    pub fn euclidean(dim: usize) -> Result<Self, GeometryError> {
        let s = ModelSpace::Euclidean { dim };
        s.validate().map(|_| s)
    }

    pub fn sphere(radius: f64) -> Result<Self, GeometryError> {
        let s = ModelSpace::Sphere { radius };
        s.validate().map(|_| s)
    }

    pub fn hyperbolic(kappa: f64) -> Result<Self, GeometryError> {
        let s = ModelSpace::Hyperbolic { kappa };
        s.validate().map(|_| s)
    }

    pub fn cone(angle: f64) -> Result<Self, GeometryError> {
        let s = ModelSpace::Cone { angle };
        s.validate().map(|_| s)
    }

    pub fn product(left: ModelSpace, right: ModelSpace) -> Result<Self, GeometryError> {
        let s = ModelSpace::Product(Box::new(left), Box::new(right));
        s.validate().map(|_| s)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        match self {
            ModelSpace::Euclidean { dim } if *dim == 0 => {
                Err(GeometryError::InvalidParameter("euclidean dimension must be at least 1"))
            }
            ModelSpace::Euclidean { .. } => Ok(()),
            ModelSpace::Sphere { radius } if !(radius.is_finite() && *radius > 0.0) => {
                Err(GeometryError::InvalidParameter("sphere radius must be positive"))
            }
            ModelSpace::Sphere { .. } => Ok(()),
            ModelSpace::Hyperbolic { kappa } if !(kappa.is_finite() && *kappa < 0.0) => {
                Err(GeometryError::InvalidParameter("hyperbolic curvature must be negative"))
            }
            ModelSpace::Hyperbolic { .. } => Ok(()),
            ModelSpace::Cone { angle } if !(angle.is_finite() && *angle > 0.0) => {
                Err(GeometryError::InvalidParameter("cone angle must be positive"))
            }
            ModelSpace::Cone { .. } => Ok(()),
            ModelSpace::Product(l, r) => {
                l.validate()?;
                r.validate()
            }
        }
    }

    /// Largest κ such that the space is an Alexandrov space of curvature ≥ κ,
    /// or `None` when curvature is not bounded below (cones wider than 2π).
    pub fn curvature_lower_bound(&self) -> Option<f64> {
        match self {
            ModelSpace::Euclidean { .. } => Some(0.0),
            ModelSpace::Sphere { radius } => Some(1.0 / (radius * radius)),
            ModelSpace::Hyperbolic { kappa } => Some(*kappa),
            ModelSpace::Cone { angle } => (*angle <= 2.0 * PI).then_some(0.0),
            ModelSpace::Product(l, r) => {
                let (a, b) = (l.curvature_lower_bound()?, r.curvature_lower_bound()?);
                Some(a.min(b).min(0.0))
            }
        }
    }

    pub fn is_nonnegatively_curved(&self) -> bool {
        self.curvature_lower_bound().is_some_and(|k| k >= 0.0)
    }

    /// Whether `p` is a point of this space, surface constraints checked to
    /// [`SURFACE_TOL`] (relative).
    pub fn contains(&self, p: &ModelPoint) -> bool {
        match (self, p) {
            (ModelSpace::Euclidean { dim }, ModelPoint::Euclidean(v)) => {
                v.len() == *dim && v.iter().all(|c| c.is_finite())
            }
            (ModelSpace::Sphere { radius }, ModelPoint::Sphere(v)) => {
                (norm3(v) - radius).abs() <= SURFACE_TOL * radius
            }
            (ModelSpace::Hyperbolic { kappa }, ModelPoint::Hyperbolic(v)) => {
                let target = -1.0 / kappa.abs();
                v[0] > 0.0 && (minkowski(v, v) - target).abs() <= SURFACE_TOL * v[0] * v[0]
            }
            (ModelSpace::Cone { angle }, ModelPoint::Cone { radial, angle: phi }) => {
                radial.is_finite() && *radial >= 0.0 && *phi >= 0.0 && *phi < *angle
            }
            (ModelSpace::Product(l, r), ModelPoint::Product(pl, pr)) => {
                l.contains(pl) && r.contains(pr)
            }
            _ => false,
        }
    }
}

impl fmt::Display for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpace::Euclidean { dim } => write!(f, "euclidean(dim={dim})"),
            ModelSpace::Sphere { radius } => write!(f, "sphere(R={radius})"),
            ModelSpace::Hyperbolic { kappa } => write!(f, "hyperbolic(kappa={kappa})"),
            ModelSpace::Cone { angle } => write!(f, "cone(angle={angle})"),
            ModelSpace::Product(l, r) => write!(f, "{l} x {r}"),
        }
    }
}

/// A point of a [`ModelSpace`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum ModelPoint {
    Euclidean(Vec<f64>),
    /// Vector of norm `R` in ℝ³.
    Sphere([f64; 3]),
    /// Upper sheet of `-x0² + x1² + x2² = -1/|κ|`.
    Hyperbolic([f64; 3]),
    /// Polar coordinates: distance from the apex and angle in `[0, angle)`.
    Cone { radial: f64, angle: f64 },
    Product(Box<ModelPoint>, Box<ModelPoint>),
}

impl ModelPoint {
    pub fn product(left: ModelPoint, right: ModelPoint) -> Self {
        ModelPoint::Product(Box::new(left), Box::new(right))
    }
}

// --- small vector helpers -------------------------------------------------

#[inline]
pub(crate) fn dot3(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

#[inline]
pub(crate) fn cross3(u: &[f64; 3], v: &[f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

#[inline]
pub(crate) fn norm3(u: &[f64; 3]) -> f64 {
    sqrt(dot3(u, u))
}

#[inline]
pub(crate) fn scale3(u: &[f64; 3], t: f64) -> [f64; 3] {
    [u[0] * t, u[1] * t, u[2] * t]
}

#[inline]
pub(crate) fn add3(u: &[f64; 3], v: &[f64; 3]) -> [f64; 3] {
    [u[0] + v[0], u[1] + v[1], u[2] + v[2]]
}

#[inline]
pub(crate) fn sub3(u: &[f64; 3], v: &[f64; 3]) -> [f64; 3] {
    [u[0] - v[0], u[1] - v[1], u[2] - v[2]]
}

/// Minkowski form `-u0 v0 + u1 v1 + u2 v2`.
#[inline]
pub(crate) fn minkowski(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// Angle between two nonzero vectors of ℝ³.
#[inline]
pub(crate) fn vector_angle(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    atan2(norm3(&cross3(u, v)), dot3(u, v))
}

/// Unit-curvature hyperbolic distance between points on `⟨x, x⟩ = -1`.
#[inline]
pub(crate) fn hyperbolic_unit_distance(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    let w = sub3(u, v);
    let chord = sqrt(minkowski(&w, &w).max(0.0));
    2.0 * asinh(0.5 * chord)
}

/// Projects onto the unit hyperboloid `⟨x, x⟩ = -1`, `x0 > 0`.
#[inline]
pub(crate) fn hyperboloid_normalize(w: &[f64; 3]) -> [f64; 3] {
    let n = sqrt((-minkowski(w, w)).max(f64::MIN_POSITIVE));
    scale3(w, 1.0 / n)
}

fn wrap_angle(phi: f64, period: f64) -> f64 {
    let r = fmod(phi, period);
    let r = if r < 0.0 { r + period } else { r };
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Geodesic distance between two points of `space`.
pub fn distance(space: &ModelSpace, u: &ModelPoint, v: &ModelPoint) -> Result<f64, GeometryError> {
    match (space, u, v) {
        (ModelSpace::Euclidean { dim }, ModelPoint::Euclidean(a), ModelPoint::Euclidean(b)) => {
            if a.len() != *dim || b.len() != *dim {
                return Err(GeometryError::MismatchedSpace);
            }
            let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            Ok(sqrt(sq))
        }
        (ModelSpace::Sphere { radius }, ModelPoint::Sphere(a), ModelPoint::Sphere(b)) => {
            Ok(radius * vector_angle(a, b))
        }
        (ModelSpace::Hyperbolic { kappa }, ModelPoint::Hyperbolic(a), ModelPoint::Hyperbolic(b)) => {
            let k = sqrt(kappa.abs());
            Ok(hyperbolic_unit_distance(&scale3(a, k), &scale3(b, k)) / k)
        }
        (
            ModelSpace::Cone { angle },
            ModelPoint::Cone { radial: s1, angle: p1 },
            ModelPoint::Cone { radial: s2, angle: p2 },
        ) => {
            let delta = wrap_angle(p2 - p1, *angle);
            let gap = delta.min(angle - delta);
            if gap >= PI {
                Ok(s1 + s2)
            } else {
                let h = sin(0.5 * gap);
                Ok(sqrt((s1 - s2) * (s1 - s2) + 4.0 * s1 * s2 * h * h))
            }
        }
        (ModelSpace::Product(l, r), ModelPoint::Product(ul, ur), ModelPoint::Product(vl, vr)) => {
            let dl = distance(l, ul, vl)?;
            let dr = distance(r, ur, vr)?;
            Ok(sqrt(dl * dl + dr * dr))
        }
        _ => Err(GeometryError::MismatchedSpace),
    }
}

/// Point at fraction `t ∈ [0, 1]` of the way from `u` to `v` along the
/// (unique) shortest geodesic.
pub fn interpolate(
    space: &ModelSpace,
    u: &ModelPoint,
    v: &ModelPoint,
    t: f64,
) -> Result<ModelPoint, GeometryError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(GeometryError::InvalidParameter("interpolation parameter must lie in [0, 1]"));
    }
    match (space, u, v) {
        (ModelSpace::Euclidean { dim }, ModelPoint::Euclidean(a), ModelPoint::Euclidean(b)) => {
            if a.len() != *dim || b.len() != *dim {
                return Err(GeometryError::MismatchedSpace);
            }
            Ok(ModelPoint::Euclidean(a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()))
        }
        (ModelSpace::Sphere { radius }, ModelPoint::Sphere(a), ModelPoint::Sphere(b)) => {
            let ua = scale3(a, 1.0 / norm3(a));
            let ub = scale3(b, 1.0 / norm3(b));
            let omega = vector_angle(&ua, &ub);
            if omega == 0.0 {
                return Ok(ModelPoint::Sphere(scale3(&ua, *radius)));
            }
            if PI - omega < 1e-12 {
                return Err(GeometryError::AntipodalPoints);
            }
            let w = add3(
                &scale3(&ua, sin((1.0 - t) * omega)),
                &scale3(&ub, sin(t * omega)),
            );
            Ok(ModelPoint::Sphere(scale3(&w, radius / norm3(&w))))
        }
        (ModelSpace::Hyperbolic { kappa }, ModelPoint::Hyperbolic(a), ModelPoint::Hyperbolic(b)) => {
            let k = sqrt(kappa.abs());
            let ua = hyperboloid_normalize(&scale3(a, k));
            let ub = hyperboloid_normalize(&scale3(b, k));
            let sigma = hyperbolic_unit_distance(&ua, &ub);
            if sigma == 0.0 {
                return Ok(ModelPoint::Hyperbolic(scale3(&ua, 1.0 / k)));
            }
            let w = add3(
                &scale3(&ua, sinh((1.0 - t) * sigma)),
                &scale3(&ub, sinh(t * sigma)),
            );
            Ok(ModelPoint::Hyperbolic(scale3(&hyperboloid_normalize(&w), 1.0 / k)))
        }
        (
            ModelSpace::Cone { angle },
            ModelPoint::Cone { radial: s1, angle: p1 },
            ModelPoint::Cone { radial: s2, angle: p2 },
        ) => cone_interpolate(*angle, (*s1, *p1), (*s2, *p2), t),
        (ModelSpace::Product(l, r), ModelPoint::Product(ul, ur), ModelPoint::Product(vl, vr)) => {
            Ok(ModelPoint::product(interpolate(l, ul, vl, t)?, interpolate(r, ur, vr, t)?))
        }
        _ => Err(GeometryError::MismatchedSpace),
    }
}

fn cone_interpolate(
    theta: f64,
    (s1, p1): (f64, f64),
    (s2, p2): (f64, f64),
    t: f64,
) -> Result<ModelPoint, GeometryError> {
    let forward = wrap_angle(p2 - p1, theta);
    let backward = theta - forward;
    let (gap, sign) = if forward <= backward { (forward, 1.0) } else { (backward, -1.0) };
    if gap >= PI {
        // Shortest path runs through the apex.
        let d = t * (s1 + s2);
        let point = if d <= s1 {
            ModelPoint::Cone { radial: s1 - d, angle: p1 }
        } else {
            ModelPoint::Cone { radial: d - s1, angle: p2 }
        };
        return Ok(point);
    }
    if forward == backward && s1 > 0.0 && s2 > 0.0 && t > 0.0 && t < 1.0 {
        return Err(GeometryError::NoUniqueMidpoint);
    }
    // Unroll: u on the positive x-axis, v at polar angle `gap`.
    let x = (1.0 - t) * s1 + t * s2 * cos(gap);
    let y = t * s2 * sin(gap);
    let radial = sqrt(x * x + y * y);
    if radial == 0.0 {
        return Ok(ModelPoint::Cone { radial: 0.0, angle: 0.0 });
    }
    let offset = atan2(y, x);
    Ok(ModelPoint::Cone { radial, angle: wrap_angle(p1 + sign * offset, theta) })
}

/// Midpoint of the unique shortest geodesic from `u` to `v`.
pub fn midpoint(space: &ModelSpace, u: &ModelPoint, v: &ModelPoint) -> Result<ModelPoint, GeometryError> {
    interpolate(space, u, v, 0.5)
}

/// Sampling parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SampleOptions {
    /// Maximum distance from the base point. Required for Euclidean,
    /// hyperbolic and cone spaces; on a sphere it restricts sampling to a cap
    /// around the north pole, otherwise sphere sampling is uniform.
    pub radius_bound: Option<f64>,
}

impl SampleOptions {
    pub fn with_bound(bound: f64) -> Self {
        Self { radius_bound: Some(bound) }
    }
}

/// Deterministic generator for sample `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian_direction<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = sqrt(v.iter().map(|x| x * x).sum());
        if n > 1e-300 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn bound(opts: &SampleOptions) -> Result<f64, GeometryError> {
    match opts.radius_bound {
        Some(b) if b.is_finite() && b >= 0.0 => Ok(b),
        Some(_) => Err(GeometryError::InvalidParameter("radius bound must be finite and nonnegative")),
        None => Err(GeometryError::MissingRadiusBound),
    }
}

/// Draws one point of `space`.
///
/// Sphere points without a bound are normalized Gaussian vectors (uniform on
/// the sphere). Everything else picks a uniform direction at the base point
/// and a distance drawn uniformly from `[0, radius_bound]`.
pub fn sample_point<R: Rng + ?Sized>(
    space: &ModelSpace,
    opts: &SampleOptions,
    rng: &mut R,
) -> Result<ModelPoint, GeometryError> {
    match space {
        ModelSpace::Euclidean { dim } => {
            let b = bound(opts)?;
            let r = b * rng.random::<f64>();
            Ok(ModelPoint::Euclidean(gaussian_direction(*dim, rng).into_iter().map(|c| r * c).collect()))
        }
        ModelSpace::Sphere { radius } => match opts.radius_bound {
            None => {
                let d = gaussian_direction(3, rng);
                Ok(ModelPoint::Sphere([radius * d[0], radius * d[1], radius * d[2]]))
            }
            Some(_) => {
                let b = bound(opts)?;
                let sigma = (b / radius * rng.random::<f64>()).min(PI);
                let psi = 2.0 * PI * rng.random::<f64>();
                Ok(ModelPoint::Sphere([
                    radius * sin(sigma) * cos(psi),
                    radius * sin(sigma) * sin(psi),
                    radius * cos(sigma),
                ]))
            }
        },
        ModelSpace::Hyperbolic { kappa } => {
            let b = bound(opts)?;
            let k = sqrt(kappa.abs());
            let sigma = k * b * rng.random::<f64>();
            let psi = 2.0 * PI * rng.random::<f64>();
            Ok(ModelPoint::Hyperbolic([
                cosh(sigma) / k,
                sinh(sigma) * cos(psi) / k,
                sinh(sigma) * sin(psi) / k,
            ]))
        }
        ModelSpace::Cone { angle } => {
            let b = bound(opts)?;
            let radial = b * rng.random::<f64>();
            let phi = wrap_angle(angle * rng.random::<f64>(), *angle);
            Ok(ModelPoint::Cone { radial, angle: phi })
        }
        ModelSpace::Product(l, r) => {
            let pl = sample_point(l, opts, rng)?;
            let pr = sample_point(r, opts, rng)?;
            Ok(ModelPoint::product(pl, pr))
        }
    }
}

/// `count` points drawn from a generator seeded with `seed`.
pub fn sample(
    space: &ModelSpace,
    opts: &SampleOptions,
    seed: u64,
    count: usize,
) -> Result<Vec<ModelPoint>, GeometryError> {
    space.validate()?;
    if count == 0 {
        return Err(GeometryError::InvalidParameter("sample count must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_point(space, opts, &mut rng)).collect()
}

/// The six pairwise distances of `p, x, y, z` with `p` as apex.
///
/// No metric validation happens here; coincident points give zero distances
/// that [`LabeledQuadruple::to_space`] rejects.
pub fn quadruple_from_points(
    space: &ModelSpace,
    p: &ModelPoint,
    x: &ModelPoint,
    y: &ModelPoint,
    z: &ModelPoint,
) -> Result<LabeledQuadruple, GeometryError> {
    let d = |a, b| distance(space, a, b);
    Ok(LabeledQuadruple::new(
        [d(p, x)?, d(p, y)?, d(p, z)?],
        [d(x, y)?, d(y, z)?, d(z, x)?],
    ))
}
