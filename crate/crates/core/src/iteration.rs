//! Numerical replay of the midpoint-sequence argument.
//!
//! Given `p, q, x` in a model space, let `z` be the midpoint of `[pq]` and
//! place `x_n` on `[xz]` with `|x_n z| = 3⁻ⁿ |xz|`. With
//!
//! ```text
//! α_n · |x_n z|² = |x_n p|² + |x_n q|² − ½ |pq|²
//! ```
//!
//! the four-point inequality applied to `(x_{n+1}; p, q, x_n)` reads
//! `α_{n+1} ≥ 3 α_n − 4`, while the weak midpoint estimate caps `α_n ≤ 3`.
//!
//! `α_n` is a ratio of two quantities that both vanish like `|x_n z|²`, so
//! it is not computed from raw distances. Instead the law of cosines in the
//! totally geodesic plane through `p, q, x` gives `|x_n p|² − r²` (with
//! `r = |pq|/2`) in a form free of cancellation; the angle at `z` is shared
//! between the `p` and `q` terms so its rounding cancels in the sum.

use alloc::vec::Vec;
use core::fmt;

use libm::{asin, asinh, cos, cosh, sin, sinh, sqrt};

use crate::conditions::{midpoint_residual, star_residual, Residual};
use crate::metric::LabeledQuadruple;
use crate::model::{
    add3, distance, dot3, hyperboloid_normalize, midpoint, minkowski, norm3, scale3, sub3,
    vector_angle, GeometryError, ModelPoint, ModelSpace,
};

pub const DEFAULT_N_MAX: usize = 12;
/// Runs with `|xz|` below this are rejected.
pub const X_EQUALS_Z_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum IterationError {
    Geometry(GeometryError),
    XEqualsZ { distance: f64 },
    /// Only Euclidean spaces, spheres and hyperbolic planes are handled.
    UnsupportedSpace,
}

impl From<GeometryError> for IterationError {
    fn from(e: GeometryError) -> Self {
        IterationError::Geometry(e)
    }
}

impl fmt::Display for IterationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IterationError::Geometry(e) => e.fmt(f),
            IterationError::XEqualsZ { distance } => {
                write!(f, "x coincides with the midpoint z (|xz| = {distance:e})")
            }
            IterationError::UnsupportedSpace => {
                f.write_str("iteration needs a Euclidean space, a sphere or a hyperbolic plane")
            }
        }
    }
}

impl core::error::Error for IterationError {}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IterationStep {
    pub n: usize,
    pub point: ModelPoint,
    /// Measured `|x_n z|`.
    pub dist_to_z: f64,
    /// Target `3⁻ⁿ |xz|`.
    pub scheduled: f64,
    pub dist_to_p: f64,
    pub dist_to_q: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IterationTrace {
    pub space: ModelSpace,
    pub p: ModelPoint,
    pub q: ModelPoint,
    pub x: ModelPoint,
    pub z: ModelPoint,
    pub pq: f64,
    pub steps: Vec<IterationStep>,
    /// `α_{n+1} − (3 α_n − 4)` for consecutive steps.
    pub recursion_slack: Vec<f64>,
    /// `2|xz|² − (|xp|² + |xq|² − ½|pq|²)` at `n = 0`.
    pub midpoint_residual: Residual,
    /// Same with the factor 3.
    pub weak_midpoint_residual: Residual,
}

impl IterationTrace {
    pub fn max_alpha(&self) -> f64 {
        self.steps.iter().map(|s| s.alpha).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_slack(&self) -> f64 {
        self.recursion_slack.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest relative deviation of `|x_n z|` from its schedule.
    pub fn schedule_error(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| ((s.dist_to_z - s.scheduled) / s.scheduled).abs())
            .fold(0.0, f64::max)
    }
}

/// Geometry of the plane through `z` spanned by the directions to `p` and
/// `x`, in units where the curvature is `0` or `±1`.
struct Frame {
    curvature: i8,
    /// Length unit: distances are multiplied by `scale` before use.
    scale: f64,
    /// Half of `|pq|`, scaled.
    r: f64,
    /// Cosine of the angle at `z` between the directions to `p` and `x`.
    cos_phi: f64,
    /// Scaled `|xz|`.
    d0: f64,
    place: Placement,
}

enum Placement {
    Euclidean { z: Vec<f64>, dir: Vec<f64> },
    Sphere { radius: f64, z: [f64; 3], dir: [f64; 3] },
    Hyperbolic { k: f64, z: [f64; 3], dir: [f64; 3] },
}

impl Frame {
    fn point(&self, sigma: f64) -> ModelPoint {
        match &self.place {
            Placement::Euclidean { z, dir } => {
                ModelPoint::Euclidean(z.iter().zip(dir).map(|(a, b)| a + sigma * b).collect())
            }
            Placement::Sphere { radius, z, dir } => {
                let w = add3(&scale3(z, cos(sigma)), &scale3(dir, sin(sigma)));
                ModelPoint::Sphere(scale3(&w, *radius))
            }
            Placement::Hyperbolic { k, z, dir } => {
                let w = add3(&scale3(z, cosh(sigma)), &scale3(dir, sinh(sigma)));
                ModelPoint::Hyperbolic(scale3(&w, 1.0 / k))
            }
        }
    }

    /// Distance `a` from the point at distance `s` along the ray to a point
    /// at distance `r` from `z` whose direction makes cosine `c` with the
    /// ray, together with `a² − r²`. Scaled units.
    fn offset(&self, s: f64, c: f64) -> (f64, f64) {
        let r = self.r;
        match self.curvature {
            0 => {
                let term = s * (s - 2.0 * r * c);
                (sqrt((r * r + term).max(0.0)), term)
            }
            1 => {
                let h = sin(0.5 * s);
                let delta = -2.0 * h * h * cos(r) + sin(s) * sin(r) * c;
                let hr = sin(0.5 * r);
                let a = 2.0 * asin(sqrt((hr * hr - 0.5 * delta).clamp(0.0, 1.0)));
                let m = sin(0.5 * (a + r));
                let diff = if m > 0.0 { 2.0 * asin((-0.5 * delta / m).clamp(-1.0, 1.0)) } else { a - r };
                (a, diff * (a + r))
            }
            _ => {
                let h = sinh(0.5 * s);
                let delta = 2.0 * h * h * cosh(r) - sinh(s) * sinh(r) * c;
                let hr = sinh(0.5 * r);
                let a = 2.0 * asinh(sqrt((hr * hr + 0.5 * delta).max(0.0)));
                let m = sinh(0.5 * (a + r));
                let diff = if m > 0.0 { 2.0 * asinh(0.5 * delta / m) } else { a - r };
                (a, diff * (a + r))
            }
        }
    }

    /// `(|x p|, |x q|, α)` for the point at scaled distance `s` from `z`.
    fn alpha(&self, s: f64) -> (f64, f64, f64) {
        let (ap, tp) = self.offset(s, self.cos_phi);
        let (aq, tq) = self.offset(s, -self.cos_phi);
        let n = if self.curvature == 0 {
            // Compensated: the odd parts ±2rcs cancel exactly.
            let t = 2.0 * self.r * self.cos_phi;
            let (h1, l1) = two_sum(s, -t);
            let (h2, l2) = two_sum(s, t);
            s * ((h1 + h2) + (l1 + l2))
        } else {
            let (h, l) = two_sum(tp, tq);
            h + l
        };
        (ap / self.scale, aq / self.scale, n / (s * s))
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn unit_or_zero(v: &[f64; 3], norm: f64) -> [f64; 3] {
    if norm > 0.0 {
        scale3(v, 1.0 / norm)
    } else {
        [0.0; 3]
    }
}

fn frame(space: &ModelSpace, p: &ModelPoint, q: &ModelPoint, x: &ModelPoint, z: &ModelPoint) -> Result<Frame, IterationError> {
    let pq = distance(space, p, q)?;
    match (space, p, x, z) {
        (ModelSpace::Euclidean { .. }, ModelPoint::Euclidean(pv), ModelPoint::Euclidean(xv), ModelPoint::Euclidean(zv)) => {
            let tp: Vec<f64> = pv.iter().zip(zv).map(|(a, b)| a - b).collect();
            let tx: Vec<f64> = xv.iter().zip(zv).map(|(a, b)| a - b).collect();
            let np = sqrt(tp.iter().map(|v| v * v).sum());
            let nx = sqrt(tx.iter().map(|v| v * v).sum());
            let cos_phi = if np > 0.0 {
                (tp.iter().zip(&tx).map(|(a, b)| a * b).sum::<f64>() / (np * nx)).clamp(-1.0, 1.0)
            } else {
                0.0
            };
            Ok(Frame {
                curvature: 0,
                scale: 1.0,
                r: 0.5 * pq,
                cos_phi,
                d0: nx,
                place: Placement::Euclidean { z: zv.clone(), dir: tx.iter().map(|v| v / nx).collect() },
            })
        }
        (ModelSpace::Sphere { radius }, ModelPoint::Sphere(pv), ModelPoint::Sphere(xv), ModelPoint::Sphere(zv)) => {
            let zh = scale3(zv, 1.0 / norm3(zv));
            let ph = scale3(pv, 1.0 / norm3(pv));
            let xh = scale3(xv, 1.0 / norm3(xv));
            let d0 = vector_angle(&xh, &zh);
            if core::f64::consts::PI - d0 < 1e-12 {
                return Err(GeometryError::AntipodalPoints.into());
            }
            let tp = sub3(&ph, &scale3(&zh, dot3(&ph, &zh)));
            let tx = sub3(&xh, &scale3(&zh, dot3(&xh, &zh)));
            let (np, nx) = (norm3(&tp), norm3(&tx));
            let (up, ux) = (unit_or_zero(&tp, np), unit_or_zero(&tx, nx));
            Ok(Frame {
                curvature: 1,
                scale: 1.0 / radius,
                r: 0.5 * pq / radius,
                cos_phi: dot3(&up, &ux).clamp(-1.0, 1.0),
                d0,
                place: Placement::Sphere { radius: *radius, z: zh, dir: ux },
            })
        }
        (ModelSpace::Hyperbolic { kappa }, ModelPoint::Hyperbolic(pv), ModelPoint::Hyperbolic(xv), ModelPoint::Hyperbolic(zv)) => {
            let k = sqrt(kappa.abs());
            let zh = hyperboloid_normalize(&scale3(zv, k));
            let ph = hyperboloid_normalize(&scale3(pv, k));
            let xh = hyperboloid_normalize(&scale3(xv, k));
            let tp = add3(&ph, &scale3(&zh, minkowski(&ph, &zh)));
            let tx = add3(&xh, &scale3(&zh, minkowski(&xh, &zh)));
            let np = sqrt(minkowski(&tp, &tp).max(0.0));
            let nx = sqrt(minkowski(&tx, &tx).max(0.0));
            let (up, ux) = (unit_or_zero(&tp, np), unit_or_zero(&tx, nx));
            Ok(Frame {
                curvature: -1,
                scale: k,
                r: 0.5 * pq * k,
                cos_phi: minkowski(&up, &ux).clamp(-1.0, 1.0),
                d0: distance(space, x, z)? * k,
                place: Placement::Hyperbolic { k, z: zh, dir: ux },
            })
        }
        _ => Err(GeometryError::MismatchedSpace.into()),
    }
}

/// Builds `x_0 = x, x_1, …, x_{n_max}` and their `α_n`.
pub fn run_iteration(
    space: &ModelSpace,
    p: &ModelPoint,
    q: &ModelPoint,
    x: &ModelPoint,
    n_max: usize,
) -> Result<IterationTrace, IterationError> {
    match space {
        ModelSpace::Euclidean { .. } | ModelSpace::Sphere { .. } | ModelSpace::Hyperbolic { .. } => {}
        _ => return Err(IterationError::UnsupportedSpace),
    }
    space.validate()?;
    let z = midpoint(space, p, q)?;
    let xz = distance(space, x, &z)?;
    if xz < X_EQUALS_Z_TOL {
        return Err(IterationError::XEqualsZ { distance: xz });
    }
    let f = frame(space, p, q, x, &z)?;
    let pq = distance(space, p, q)?;

    let mut steps = Vec::with_capacity(n_max + 1);
    let mut s = f.d0;
    for n in 0..=n_max {
        let point = if n == 0 { x.clone() } else { f.point(s) };
        let (dist_to_p, dist_to_q, alpha) = f.alpha(s);
        steps.push(IterationStep {
            n,
            dist_to_z: distance(space, &point, &z)?,
            scheduled: s / f.scale,
            point,
            dist_to_p,
            dist_to_q,
            alpha,
        });
        s /= 3.0;
    }
    let recursion_slack = steps.windows(2).map(|w| w[1].alpha - (3.0 * w[0].alpha - 4.0)).collect();
    let (mid, weak) = midpoint_residual(distance(space, x, p)?, distance(space, x, q)?, pq, xz);
    Ok(IterationTrace {
        space: space.clone(),
        p: p.clone(),
        q: q.clone(),
        x: x.clone(),
        z,
        pq,
        steps,
        recursion_slack,
        midpoint_residual: mid,
        weak_midpoint_residual: weak,
    })
}

/// One link `n → n+1` of the recursion, with the four-point instance behind
/// it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RecursionCheck {
    pub n: usize,
    /// `α_{n+1} − (3 α_n − 4)`, from the trace's `α` values.
    pub slack: f64,
    pub holds: bool,
    /// The quadruple `(x_{n+1}; p, q, x_n)` rebuilt from the trace's distances.
    pub quadruple: LabeledQuadruple,
    /// Its star residual evaluated directly.
    pub star_instance: f64,
    /// `slack · |x_{n+1} z|²`, which the star residual must equal.
    pub predicted_star: f64,
}

/// Checks `α_{n+1} ≥ 3 α_n − 4 − tol` at every link of `trace`.
pub fn verify_recursion(trace: &IterationTrace, tol: f64) -> Vec<RecursionCheck> {
    trace
        .steps
        .windows(2)
        .map(|w| {
            let (a, b) = (&w[0], &w[1]);
            let slack = b.alpha - (3.0 * a.alpha - 4.0);
            let quadruple = LabeledQuadruple::new(
                [b.dist_to_p, b.dist_to_q, a.dist_to_z - b.dist_to_z],
                [trace.pq, a.dist_to_q, a.dist_to_p],
            );
            RecursionCheck {
                n: a.n,
                slack,
                holds: slack >= -tol,
                quadruple,
                star_instance: star_residual(&quadruple).value(),
                predicted_star: slack * b.dist_to_z * b.dist_to_z,
            }
        })
        .collect()
}
