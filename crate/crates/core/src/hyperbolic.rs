//! Upper half-plane model: points, PSL(2,R) matrices acting by Möbius maps,
//! classification, rotations, distances, ray angles and triangles.
//!
//! Angles are measured counterclockwise in the chart. The rotation angle of an
//! elliptic element is the argument of its derivative at the fixed point, so
//! `rotation_about(p, θ)` turns tangent vectors at `p` by `+θ`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const EPS_DET: f64 = 1e-12;
pub const EPS_CLASS: f64 = 1e-9;
pub const EPS_ANGLE: f64 = 1e-9;
pub const EPS_GEOM: f64 = 1e-9;

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed difference `a − b` reduced to `(−π, π]`.
pub fn circular_diff(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub const I: HPoint = HPoint { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && y > 0.0 {
            Ok(HPoint { x, y })
        } else {
            Err(Error::InvalidPoint { x, y })
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        HPoint::new(z.re, z.im)
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An element of PSL(2,R), stored as a determinant-one matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Builds the element from arbitrary entries, dividing by `√det`.
    pub fn from_entries(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        if !det.is_finite() || det <= EPS_DET * scale * scale {
            return Err(Error::BadDeterminant(det));
        }
        let s = det.sqrt();
        Ok(Isometry {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    fn renormalized(a: f64, b: f64, c: f64, d: f64) -> Self {
        let s = (a * d - b * c).sqrt();
        Isometry {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        }
    }

    /// Row-major entries `[a, b, c, d]`.
    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// `z ↦ scale·z + shift`.
    pub fn affine(scale: f64, shift: f64) -> Result<Self> {
        Isometry::from_entries(scale, shift, 0.0, 1.0)
    }

    /// The map `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry::renormalized(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &Isometry) -> Isometry {
        g.compose(self).compose(&g.inverse())
    }

    pub fn apply(&self, p: HPoint) -> Result<HPoint> {
        let z = p.to_complex();
        let den = z * self.c + self.d;
        if den.norm_sqr() < 1e-300 {
            return Err(Error::BoundaryEscape);
        }
        let w = (z * self.a + self.b) / den;
        // The imaginary part is y/|cz+d|², which keeps the sign exact.
        let y = p.y / den.norm_sqr();
        HPoint::new(w.re, y).map_err(|_| Error::BoundaryEscape)
    }

    /// Complex derivative `1/(cz+d)²` of the Möbius map at `p`.
    pub fn derivative_at(&self, p: HPoint) -> Complex64 {
        let den = p.to_complex() * self.c + self.d;
        (den * den).inv()
    }

    /// Largest entry difference to `other`, minimized over the sign ambiguity.
    pub fn distance(&self, other: &Isometry) -> f64 {
        let plus = (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
            .max((self.d - other.d).abs());
        let minus = (self.a + other.a)
            .abs()
            .max((self.b + other.b).abs())
            .max((self.c + other.c).abs())
            .max((self.d + other.d).abs());
        plus.min(minus)
    }

    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    pub fn classify(&self) -> IsometryClass {
        let t = self.trace().abs();
        if (t - 2.0).abs() <= EPS_CLASS {
            if self.distance(&Isometry::IDENTITY) <= EPS_CLASS {
                IsometryClass::Identity
            } else {
                IsometryClass::Parabolic {
                    near_boundary: t != 2.0,
                }
            }
        } else if t > 2.0 {
            IsometryClass::Hyperbolic
        } else {
            // cz² + (d−a)z − b = 0 with discriminant t² − 4 < 0; c ≠ 0 here.
            let tr = self.trace();
            let y = (4.0 - tr * tr).sqrt() / (2.0 * self.c.abs());
            let x = (self.a - self.d) / (2.0 * self.c);
            let fixed_point = HPoint { x, y };
            let den = Complex64::new(self.c * x + self.d, self.c * y);
            let mut angle = wrap_angle(-2.0 * den.arg());
            if angle == 0.0 {
                angle = TAU;
            }
            IsometryClass::Elliptic { angle, fixed_point }
        }
    }

    /// Rotation angle and fixed point, if elliptic.
    pub fn elliptic(&self) -> Option<(f64, HPoint)> {
        match self.classify() {
            IsometryClass::Elliptic { angle, fixed_point } => Some((angle, fixed_point)),
            _ => None,
        }
    }
}

impl Mul for Isometry {
    type Output = Isometry;
    fn mul(self, rhs: Isometry) -> Isometry {
        self.compose(&rhs)
    }
}

impl<'a> Mul<&'a Isometry> for &'a Isometry {
    type Output = Isometry;
    fn mul(self, rhs: &'a Isometry) -> Isometry {
        self.compose(rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IsometryClass {
    Identity,
    Elliptic { angle: f64, fixed_point: HPoint },
    /// `near_boundary` is set when the trace is only within tolerance of ±2.
    Parabolic { near_boundary: bool },
    Hyperbolic,
}

/// Counterclockwise rotation by `theta` about `p`.
pub fn rotation_about(p: HPoint, theta: f64) -> Isometry {
    let (s, c) = (theta / 2.0).sin_cos();
    let (x, y) = (p.x, p.y);
    // h·R_θ·h⁻¹ with h = [[√y, x/√y], [0, 1/√y]] sending i to p; det is exactly c² + s².
    Isometry {
        a: c - x * s / y,
        b: s * (y + x * x / y),
        c: -s / y,
        d: c + x * s / y,
    }
}

pub fn dist(p: HPoint, q: HPoint) -> f64 {
    let chord = ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt();
    2.0 * (chord / (2.0 * (p.y * q.y).sqrt())).asinh()
}

/// Chart direction in `[0, 2π)` of the geodesic ray from `p` toward `q`.
pub fn direction(p: HPoint, q: HPoint) -> Result<f64> {
    if dist(p, q) < EPS_GEOM {
        return Err(Error::DegenerateAngle);
    }
    let z = Complex64::new((q.x - p.x) / p.y, q.y / p.y);
    let i = Complex64::i();
    let w = (z - i) / (z + i);
    Ok(wrap_angle(w.arg() + FRAC_PI_2))
}

/// Counterclockwise angle in `[0, 2π)` from ray `[v, p)` to ray `[v, q)`.
pub fn oriented_angle(v: HPoint, p: HPoint, q: HPoint) -> Result<f64> {
    Ok(wrap_angle(direction(v, q)? - direction(v, p)?))
}

/// Unsigned angle in `[0, π]` between rays `[v, p)` and `[v, q)`.
pub fn interior_angle(v: HPoint, p: HPoint, q: HPoint) -> Result<f64> {
    let t = oriented_angle(v, p, q)?;
    Ok(t.min(TAU - t))
}

/// The point at distance `d` from `p` along chart direction `phi`.
pub fn point_at(p: HPoint, phi: f64, d: f64) -> HPoint {
    let w = Complex64::from_polar((d / 2.0).tanh(), phi - FRAC_PI_2);
    let one = Complex64::new(1.0, 0.0);
    let z = Complex64::i() * (one + w) / (one - w);
    HPoint {
        x: p.x + p.y * z.re,
        y: p.y * z.im,
    }
}

/// Length of the side opposite `opposite` in the triangle with angles
/// `(opposite, adj1, adj2)`, via a cancellation-free form of the dual law of cosines.
pub fn side_from_angles(opposite: f64, adj1: f64, adj2: f64) -> f64 {
    let s = adj1 + adj2;
    let num = ((s + opposite) / 2.0).cos() * ((s - opposite) / 2.0).cos();
    let den = adj1.sin() * adj2.sin();
    2.0 * (num / den).max(0.0).sqrt().asinh()
}

/// Clockwise triangle with interior angles `t1, t2, t3`: first vertex at `i`,
/// second vertex straight above it.
pub fn triangle_from_angles(t1: f64, t2: f64, t3: f64) -> Result<(HPoint, HPoint, HPoint)> {
    let ok = |t: f64| t > 0.0 && t < PI;
    if !(ok(t1) && ok(t2) && ok(t3)) || t1 + t2 + t3 >= PI {
        return Err(Error::NotHyperbolic(t1, t2, t3));
    }
    let v1 = HPoint::I;
    let v2 = point_at(v1, FRAC_PI_2, side_from_angles(t3, t1, t2));
    let v3 = point_at(v1, FRAC_PI_2 - t1, side_from_angles(t2, t1, t3));
    Ok((v1, v2, v3))
}

/// Area of a geodesic triangle from its side lengths (L'Huilier form), which
/// stays accurate for thin and degenerate triangles.
pub fn triangle_area(p1: HPoint, p2: HPoint, p3: HPoint) -> f64 {
    let a = dist(p2, p3);
    let b = dist(p1, p3);
    let c = dist(p1, p2);
    let s = (a + b + c) / 2.0;
    let th = |x: f64| (x.max(0.0) / 2.0).tanh();
    let prod = th(s) * th(s - a) * th(s - b) * th(s - c);
    4.0 * prod.max(0.0).sqrt().atan()
}
