//! Points, tangent vectors and small 2×2 linear algebra on the unit disc.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{GeometryError, Result};

/// Row-major 2×2 matrix. Index as `m[row][col]`.
pub type Mat2 = [[f64; 2]; 2];

pub const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

pub fn det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn trace(m: &Mat2) -> f64 {
    m[0][0] + m[1][1]
}

/// Inverse of a 2×2 matrix; `None` when singular.
pub fn inverse(m: &Mat2) -> Option<Mat2> {
    let d = det(m);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    Some([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]])
}

pub fn mat_vec(m: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut out: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            out = out.max((a[i][j] - b[i][j]).abs());
        }
    }
    out
}

/// A point strictly inside the open unit disc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscPoint {
    x1: f64,
    x2: f64,
}

impl DiscPoint {
    pub const ORIGIN: DiscPoint = DiscPoint { x1: 0.0, x2: 0.0 };

    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        if !x1.is_finite() || !x2.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if x1 * x1 + x2 * x2 >= 1.0 {
            return Err(GeometryError::OutsideDisc { x1, x2 });
        }
        Ok(Self { x1, x2 })
    }

    pub fn from_polar(radius: f64, angle: f64) -> Result<Self> {
        Self::new(radius * angle.cos(), radius * angle.sin())
    }

    #[inline]
    pub fn x1(&self) -> f64 {
        self.x1
    }

    #[inline]
    pub fn x2(&self) -> f64 {
        self.x2
    }

    #[inline]
    pub fn coords(&self) -> [f64; 2] {
        [self.x1, self.x2]
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.x1.hypot(self.x2)
    }

    /// `1 - |x|²`, the conformal denominator that appears everywhere.
    #[inline]
    pub fn gap(&self) -> f64 {
        1.0 - self.norm_sq()
    }

    /// Euclidean pairing ⟨x, ξ⟩.
    #[inline]
    pub fn pair(&self, v: TangentVector) -> f64 {
        self.x1 * v.xi1 + self.x2 * v.xi2
    }

    /// Position vector as a tangent vector (used for x + tξ style offsets).
    #[inline]
    pub fn to_vector(&self) -> TangentVector {
        TangentVector::new(self.x1, self.x2)
    }

    /// `x + t·ξ`, rejected if it leaves the disc.
    pub fn offset(&self, v: TangentVector, t: f64) -> Result<DiscPoint> {
        DiscPoint::new(self.x1 + t * v.xi1, self.x2 + t * v.xi2)
    }

    /// Rejects points farther than `limit` from the origin.
    pub fn require_radius(&self, limit: f64) -> Result<()> {
        let radius = self.norm();
        if radius > limit {
            return Err(GeometryError::NearBoundary { radius, limit });
        }
        Ok(())
    }

    pub fn distance_to(&self, other: &DiscPoint) -> f64 {
        (self.x1 - other.x1).hypot(self.x2 - other.x2)
    }
}

impl fmt::Display for DiscPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

/// A vector in the tangent plane at some disc point. The zero vector is
/// representable; routines that need `ξ ≠ 0` reject it themselves.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct TangentVector {
    pub xi1: f64,
    pub xi2: f64,
}

impl TangentVector {
    pub const ZERO: TangentVector = TangentVector { xi1: 0.0, xi2: 0.0 };

    #[inline]
    pub const fn new(xi1: f64, xi2: f64) -> Self {
        Self { xi1, xi2 }
    }

    pub fn from_angle(angle: f64) -> Self {
        Self::new(angle.cos(), angle.sin())
    }

    #[inline]
    pub fn components(&self) -> [f64; 2] {
        [self.xi1, self.xi2]
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.xi1 * self.xi1 + self.xi2 * self.xi2
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.xi1.hypot(self.xi2)
    }

    #[inline]
    pub fn dot(&self, other: TangentVector) -> f64 {
        self.xi1 * other.xi1 + self.xi2 * other.xi2
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.xi1 == 0.0 && self.xi2 == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.xi1.is_finite() && self.xi2.is_finite()
    }

    /// Errors on the zero vector or non-finite components.
    pub fn require_nonzero(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if self.is_zero() {
            return Err(GeometryError::ZeroVector);
        }
        Ok(())
    }

    /// Counter-clockwise quarter turn.
    #[inline]
    pub fn perp(&self) -> TangentVector {
        TangentVector::new(-self.xi2, self.xi1)
    }
}

impl From<[f64; 2]> for TangentVector {
    fn from(v: [f64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

impl Add for TangentVector {
    type Output = TangentVector;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.xi1 + rhs.xi1, self.xi2 + rhs.xi2)
    }
}

impl Sub for TangentVector {
    type Output = TangentVector;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.xi1 - rhs.xi1, self.xi2 - rhs.xi2)
    }
}

impl Neg for TangentVector {
    type Output = TangentVector;
    fn neg(self) -> Self {
        Self::new(-self.xi1, -self.xi2)
    }
}

impl Mul<TangentVector> for f64 {
    type Output = TangentVector;
    fn mul(self, rhs: TangentVector) -> TangentVector {
        TangentVector::new(self * rhs.xi1, self * rhs.xi2)
    }
}

impl fmt::Display for TangentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.xi1, self.xi2)
    }
}

/// A point on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPoint {
    a1: f64,
    a2: f64,
}

impl BoundaryPoint {
    /// Tolerance on `|a|² = 1` accepted by [`BoundaryPoint::new`].
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        if !a1.is_finite() || !a2.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if (a1 * a1 + a2 * a2 - 1.0).abs() > Self::TOLERANCE {
            return Err(GeometryError::InvalidArgument(format!(
                "({a1}, {a2}) is not on the unit circle"
            )));
        }
        Ok(Self { a1, a2 })
    }

    pub fn from_angle(t: f64) -> Self {
        Self {
            a1: t.cos(),
            a2: t.sin(),
        }
    }

    /// Projects a nonzero planar vector radially onto the circle.
    pub(crate) fn normalized(a1: f64, a2: f64) -> Self {
        let r = a1.hypot(a2);
        Self {
            a1: a1 / r,
            a2: a2 / r,
        }
    }

    #[inline]
    pub fn a1(&self) -> f64 {
        self.a1
    }

    #[inline]
    pub fn a2(&self) -> f64 {
        self.a2
    }

    #[inline]
    pub fn coords(&self) -> [f64; 2] {
        [self.a1, self.a2]
    }

    /// Polar angle in `[0, 2π)`.
    pub fn angle(&self) -> f64 {
        self.a2.atan2(self.a1).rem_euclid(TAU)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a1, self.a2)
    }
}

/// Smallest signed difference between two angles, in `(-π, π]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_point_rejects_boundary_and_exterior() {
        assert!(DiscPoint::new(0.5, 0.5).is_ok());
        assert!(matches!(
            DiscPoint::new(1.0, 0.0),
            Err(GeometryError::OutsideDisc { .. })
        ));
        assert!(DiscPoint::new(0.8, 0.7).is_err());
        assert_eq!(DiscPoint::new(f64::NAN, 0.0), Err(GeometryError::NonFinite));
    }

    #[test]
    fn boundary_point_tolerance() {
        assert!(BoundaryPoint::new(1.0, 0.0).is_ok());
        assert!(BoundaryPoint::new(0.6, 0.8).is_ok());
        assert!(BoundaryPoint::new(0.6, 0.7).is_err());
        let p = BoundaryPoint::from_angle(3.0);
        assert!((p.angle() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn small_matrix_helpers() {
        let m = [[2.0, 1.0], [1.0, 3.0]];
        let inv = inverse(&m).unwrap();
        let prod = [
            [
                m[0][0] * inv[0][0] + m[0][1] * inv[1][0],
                m[0][0] * inv[0][1] + m[0][1] * inv[1][1],
            ],
            [
                m[1][0] * inv[0][0] + m[1][1] * inv[1][0],
                m[1][0] * inv[0][1] + m[1][1] * inv[1][1],
            ],
        ];
        assert!(max_abs_diff(&prod, &IDENTITY) < 1e-15);
        assert!(inverse(&[[1.0, 2.0], [2.0, 4.0]]).is_none());
    }

    #[test]
    fn angle_difference_wraps() {
        assert!((angle_difference(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
        assert!((angle_difference(TAU - 0.1, 0.1) + 0.2).abs() < 1e-15);
    }
}
