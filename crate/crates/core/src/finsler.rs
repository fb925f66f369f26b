//! The Finsler norm induced by the Apollonian weak metric.
//!
//! `F(x, ξ) = (|ξ| + ⟨x, ξ⟩) / (1 − |x|²)` is a Randers norm `α + β` where `α`
//! is the conformal metric `|ξ| / (1 − |x|²)` and `β = df` with
//! `f = −½ log(1 − |x|²)`.

use std::f64::consts::TAU;

use crate::error::{GeometryError, Result};
use crate::numdiff;
use crate::point::{DiscPoint, Mat2, TangentVector};
use crate::weakmetric::apollonian_distance;

/// Radius cap for first-derivative finite-difference checks.
pub const FIRST_DERIVATIVE_RADIUS: f64 = 0.95;

/// Relative step for the five-point ξ-Hessian of `F²/2`, scaled by `|ξ|`.
pub const HESSIAN_STEP: f64 = 3e-3;

/// `F(x, ξ)`.
pub fn finsler_norm(x: &DiscPoint, xi: TangentVector) -> f64 {
    (xi.norm() + x.pair(xi)) / x.gap()
}

/// `F(x, ξ)` for a raw coordinate pair; callers guarantee `|x| < 1`.
#[inline]
pub(crate) fn norm_raw(x: [f64; 2], xi: [f64; 2]) -> f64 {
    let gap = 1.0 - x[0] * x[0] - x[1] * x[1];
    (xi[0].hypot(xi[1]) + x[0] * xi[0] + x[1] * xi[1]) / gap
}

/// The two Randers pieces of `F` evaluated on one vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandersSplit {
    pub alpha: f64,
    pub beta: f64,
    pub f_value: f64,
}

pub fn randers_split(x: &DiscPoint, xi: TangentVector) -> RandersSplit {
    let gap = x.gap();
    let alpha = xi.norm() / gap;
    let beta = x.pair(xi) / gap;
    RandersSplit {
        alpha,
        beta,
        f_value: alpha + beta,
    }
}

/// `a_ij = δ_ij / (1 − |x|²)²`.
pub fn riemannian_metric(x: &DiscPoint) -> Mat2 {
    let s = 1.0 / (x.gap() * x.gap());
    [[s, 0.0], [0.0, s]]
}

/// `b_i = x^i / (1 − |x|²)`.
pub fn one_form(x: &DiscPoint) -> [f64; 2] {
    let gap = x.gap();
    [x.x1() / gap, x.x2() / gap]
}

/// `‖β‖²_α = a^{ij} b_i b_j`, which equals `|x|²`.
pub fn beta_norm_sq(x: &DiscPoint) -> f64 {
    let b = one_form(x);
    let inv = x.gap() * x.gap();
    inv * (b[0] * b[0] + b[1] * b[1])
}

/// The potential `f = −½ log(1 − |x|²)` with `β = df`.
pub fn potential(x: [f64; 2]) -> f64 {
    -0.5 * (1.0 - x[0] * x[0] - x[1] * x[1]).ln()
}

/// Largest componentwise gap between `b_i` and a central difference of the
/// potential. Second order in `step`.
pub fn potential_check(x: &DiscPoint, step: f64) -> Result<f64> {
    x.require_radius(FIRST_DERIVATIVE_RADIUS)?;
    if !(step > 0.0) {
        return Err(GeometryError::InvalidArgument(format!(
            "step must be positive, got {step}"
        )));
    }
    let b = one_form(x);
    let p = x.coords();
    let residual = (0..2)
        .map(|i| (b[i] - numdiff::partial(&potential, p, i, step)).abs())
        .fold(0.0, f64::max);
    Ok(residual)
}

/// Components of the fundamental tensor `g_ij = ½ ∂²F²/∂ξ^i∂ξ^j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FundamentalTensor {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl FundamentalTensor {
    pub fn as_matrix(&self) -> Mat2 {
        [[self.g11, self.g12], [self.g12, self.g22]]
    }

    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    pub fn is_positive_definite(&self) -> bool {
        self.g11 > 0.0 && self.det() > 0.0
    }

    /// `g_ij u^i v^j`.
    pub fn inner(&self, u: TangentVector, v: TangentVector) -> f64 {
        self.g11 * u.xi1 * v.xi1
            + self.g12 * (u.xi1 * v.xi2 + u.xi2 * v.xi1)
            + self.g22 * u.xi2 * v.xi2
    }

    /// Largest entrywise difference relative to the largest entry of `self`.
    pub fn relative_difference(&self, other: &FundamentalTensor) -> f64 {
        let scale = self.g11.abs().max(self.g12.abs()).max(self.g22.abs());
        let diff = (self.g11 - other.g11)
            .abs()
            .max((self.g12 - other.g12).abs())
            .max((self.g22 - other.g22).abs());
        diff / scale
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorMode {
    /// Randers expansion `(F/α)(a − ℓℓ) + (ℓ + b)(ℓ + b)`.
    Closed,
    /// Central-difference Hessian of `F²/2` in ξ.
    Numeric,
}

pub fn fundamental_tensor(
    x: &DiscPoint,
    xi: TangentVector,
    mode: TensorMode,
) -> Result<FundamentalTensor> {
    xi.require_nonzero()?;
    Ok(match mode {
        TensorMode::Closed => closed_tensor(x, xi),
        TensorMode::Numeric => numeric_tensor(x, xi),
    })
}

fn closed_tensor(x: &DiscPoint, xi: TangentVector) -> FundamentalTensor {
    let a = riemannian_metric(x)[0][0];
    let b = one_form(x);
    let split = randers_split(x, xi);
    let ratio = split.f_value / split.alpha;
    let ell = [a * xi.xi1 / split.alpha, a * xi.xi2 / split.alpha];
    let entry = |i: usize, j: usize| {
        let delta = if i == j { a } else { 0.0 };
        ratio * (delta - ell[i] * ell[j]) + (ell[i] + b[i]) * (ell[j] + b[j])
    };
    FundamentalTensor {
        g11: entry(0, 0),
        g12: entry(0, 1),
        g22: entry(1, 1),
    }
}

fn numeric_tensor(x: &DiscPoint, xi: TangentVector) -> FundamentalTensor {
    let base = x.coords();
    let half_sq = |v: [f64; 2]| 0.5 * norm_raw(base, v).powi(2);
    let h = HESSIAN_STEP * xi.norm();
    let v = xi.components();
    FundamentalTensor {
        g11: numdiff::second_partial4(&half_sq, v, 0, 0, h),
        g12: numdiff::second_partial4(&half_sq, v, 0, 1, h),
        g22: numdiff::second_partial4(&half_sq, v, 1, 1, h),
    }
}

/// `δ(x, x + tξ) / t`, which tends to `F(x, ξ)` as `t → 0⁺`.
pub fn busemann_mayer_ratio(x: &DiscPoint, xi: TangentVector, t: f64) -> Result<f64> {
    xi.require_nonzero()?;
    if !(t > 0.0) {
        return Err(GeometryError::InvalidArgument(format!(
            "t must be positive, got {t}"
        )));
    }
    let y = x.offset(xi, t)?;
    Ok(apollonian_distance(x, &y) / t)
}

/// `½(F(x, ξ) + F(x, −ξ))`.
pub fn symmetrized_norm(x: &DiscPoint, xi: TangentVector) -> f64 {
    0.5 * (finsler_norm(x, xi) + finsler_norm(x, -xi))
}

/// The indicatrix `{F(x, ·) = 1}` written in `η = x + ξ` coordinates as the
/// conic `Aη₁² + Bη₁η₂ + Cη₂² = rhs`, with its metric data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndicatrixEllipse {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rhs: f64,
    pub center: [f64; 2],
    pub focus1: [f64; 2],
    pub focus2: [f64; 2],
    pub semi_major: f64,
    pub semi_minor: f64,
    pub eccentricity: f64,
    /// Angle of the major axis from the η₁ axis, in `(-π/2, π/2]`.
    pub major_angle: f64,
}

impl IndicatrixEllipse {
    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }

    /// `Aη₁² + Bη₁η₂ + Cη₂² − rhs`.
    pub fn conic_residual(&self, eta: [f64; 2]) -> f64 {
        self.a * eta[0] * eta[0] + self.b * eta[0] * eta[1] + self.c * eta[1] * eta[1] - self.rhs
    }

    /// Point at parameter `s` on the ellipse, in η coordinates.
    pub fn point_at(&self, s: f64) -> [f64; 2] {
        let (sin_t, cos_t) = self.major_angle.sin_cos();
        let (u, v) = (self.semi_major * s.cos(), self.semi_minor * s.sin());
        [
            self.center[0] + u * cos_t - v * sin_t,
            self.center[1] + u * sin_t + v * cos_t,
        ]
    }
}

/// Conic coefficients of the indicatrix and the ellipse parameters read off
/// from the eigen-decomposition of its quadratic part.
pub fn indicatrix_ellipse(x: &DiscPoint) -> IndicatrixEllipse {
    let (x1, x2) = (x.x1(), x.x2());
    let a = 1.0 - x1 * x1;
    let b = -2.0 * x1 * x2;
    let c = 1.0 - x2 * x2;
    let rhs = x.gap();

    // Eigenvalues of [[a, b/2], [b/2, c]]; the smaller one belongs to the
    // major axis.
    let mean = 0.5 * (a + c);
    let spread = (0.25 * (a - c) * (a - c) + 0.25 * b * b).sqrt();
    let (lambda_small, lambda_big) = (mean - spread, mean + spread);
    let semi_major = (rhs / lambda_small).sqrt();
    let semi_minor = (rhs / lambda_big).sqrt();
    // Axis of the smaller eigenvalue.
    let major_angle = if spread == 0.0 {
        0.0
    } else {
        0.5 * b.atan2(a - c) + std::f64::consts::FRAC_PI_2
    };
    let major_angle = wrap_half_turn(major_angle);
    let eccentricity = (1.0 - (semi_minor / semi_major).powi(2)).max(0.0).sqrt();
    let focal = semi_major * eccentricity;
    let dir = [major_angle.cos(), major_angle.sin()];
    IndicatrixEllipse {
        a,
        b,
        c,
        rhs,
        center: [0.0, 0.0],
        focus1: [focal * dir[0], focal * dir[1]],
        focus2: [-focal * dir[0], -focal * dir[1]],
        semi_major,
        semi_minor,
        eccentricity,
        major_angle,
    }
}

fn wrap_half_turn(angle: f64) -> f64 {
    let half = std::f64::consts::PI;
    let mut a = angle.rem_euclid(half);
    if a > 0.5 * half {
        a -= half;
    }
    a
}

/// `n` unit vectors of `F(x, ·)`: the ray in direction `u_k = (cos θ_k, sin θ_k)`
/// is scaled by `1 / F(x, u_k)`.
pub fn indicatrix_sample(x: &DiscPoint, n: usize) -> Result<Vec<TangentVector>> {
    if n < 3 {
        return Err(GeometryError::InvalidArgument(format!(
            "need at least 3 samples, got {n}"
        )));
    }
    Ok((0..n)
        .map(|k| {
            let u = TangentVector::from_angle(TAU * k as f64 / n as f64);
            (1.0 / finsler_norm(x, u)) * u
        })
        .collect())
}

/// Least-squares fit of `Aη₁² + Bη₁η₂ + Cη₂² = 1` through the given points.
/// Returns `(A, B, C)`; used as an independent cross-check of the analytic
/// conic.
pub fn fit_central_conic(points: &[[f64; 2]]) -> Option<[f64; 3]> {
    let mut normal = [[0.0_f64; 3]; 3];
    let mut rhs = [0.0_f64; 3];
    for p in points {
        let row = [p[0] * p[0], p[0] * p[1], p[1] * p[1]];
        for i in 0..3 {
            rhs[i] += row[i];
            for j in 0..3 {
                normal[i][j] += row[i] * row[j];
            }
        }
    }
    solve3(normal, rhs)
}

fn solve3(mut m: [[f64; 3]; 3], mut v: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        v.swap(col, pivot);
        for row in col + 1..3 {
            let factor = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= factor * m[col][k];
            }
            v[row] -= factor * v[col];
        }
    }
    let mut out = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| m[row][k] * out[k]).sum();
        out[row] = (v[row] - tail) / m[row][row];
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x1: f64, x2: f64) -> DiscPoint {
        DiscPoint::new(x1, x2).unwrap()
    }

    const E1: TangentVector = TangentVector::new(1.0, 0.0);
    const E2: TangentVector = TangentVector::new(0.0, 1.0);

    #[test]
    fn norm_examples() {
        assert_eq!(finsler_norm(&DiscPoint::ORIGIN, E1), 1.0);
        assert!((finsler_norm(&p(0.5, 0.0), E1) - 2.0).abs() < 1e-15);
        assert!((finsler_norm(&p(0.5, 0.0), E2) - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(finsler_norm(&p(0.3, -0.2), TangentVector::ZERO), 0.0);
    }

    #[test]
    fn split_examples() {
        let s = randers_split(&DiscPoint::ORIGIN, TangentVector::new(0.3, -2.0));
        assert_eq!(s.beta, 0.0);
        let s = randers_split(&p(0.5, 0.0), E1);
        assert!((s.alpha - 4.0 / 3.0).abs() < 1e-15);
        assert!((s.beta - 2.0 / 3.0).abs() < 1e-15);
        assert!((s.f_value - 2.0).abs() < 1e-15);
        assert!((beta_norm_sq(&p(0.5, 0.0)) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn potential_examples() {
        assert!(potential_check(&DiscPoint::ORIGIN, 1e-5).unwrap() <= 1e-10);
        assert!(potential_check(&p(0.5, 0.0), 1e-5).unwrap() <= 1e-8);
        let x = p(0.5, 0.3);
        let coarse = potential_check(&x, 1e-4).unwrap();
        let fine = potential_check(&x, 5e-5).unwrap();
        assert!((coarse / fine - 4.0).abs() < 0.1, "ratio {}", coarse / fine);
        assert!(matches!(
            potential_check(&p(0.96, 0.0), 1e-5),
            Err(GeometryError::NearBoundary { .. })
        ));
    }

    #[test]
    fn tensor_examples() {
        let g = fundamental_tensor(&DiscPoint::ORIGIN, E1, TensorMode::Closed).unwrap();
        assert!((g.g11 - 1.0).abs() < 1e-15 && g.g12.abs() < 1e-15 && (g.g22 - 1.0).abs() < 1e-15);

        let x = p(0.5, 0.0);
        let g1 = fundamental_tensor(&x, E1, TensorMode::Closed).unwrap();
        let g2 = fundamental_tensor(&x, 2.0 * E1, TensorMode::Closed).unwrap();
        assert!(g1.relative_difference(&g2) < 1e-10);

        let closed = fundamental_tensor(&x, E2, TensorMode::Closed).unwrap();
        let numeric = fundamental_tensor(&x, E2, TensorMode::Numeric).unwrap();
        assert!((closed.g11 - numeric.g11).abs() < 1e-6 * closed.g11.abs());
        assert!((closed.g12 - numeric.g12).abs() < 1e-6 * closed.g11.abs());
        assert!((closed.g22 - numeric.g22).abs() < 1e-6 * closed.g22.abs());

        assert_eq!(
            fundamental_tensor(&x, TangentVector::ZERO, TensorMode::Numeric),
            Err(GeometryError::ZeroVector)
        );
    }

    #[test]
    fn tensor_reproduces_norm() {
        let x = p(-0.4, 0.7);
        let xi = TangentVector::new(0.3, -1.1);
        let g = fundamental_tensor(&x, xi, TensorMode::Closed).unwrap();
        let f = finsler_norm(&x, xi);
        assert!((g.inner(xi, xi) - f * f).abs() < 1e-12 * f * f);
        assert!(g.is_positive_definite());
    }

    #[test]
    fn busemann_mayer_examples() {
        let r = busemann_mayer_ratio(&DiscPoint::ORIGIN, E1, 1e-4).unwrap();
        let expected = -(-1e-4_f64).ln_1p() / 1e-4;
        // log of a ratio near 1, divided by t, loses ~4 digits
        assert!((r - expected).abs() < 1e-11);
        assert!((r - 1.0).abs() < 1e-4);

        let x = p(0.5, 0.0);
        let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&t| (busemann_mayer_ratio(&x, E1, t).unwrap() - 2.0).abs())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
        assert!((errs[0] / errs[1] - 10.0).abs() < 1.0);

        assert_eq!(
            busemann_mayer_ratio(&x, TangentVector::ZERO, 1e-3),
            Err(GeometryError::ZeroVector)
        );
        assert!(busemann_mayer_ratio(&x, E1, 0.6).is_err());
    }

    #[test]
    fn ellipse_examples() {
        let e = indicatrix_ellipse(&DiscPoint::ORIGIN);
        assert_eq!(e.eccentricity, 0.0);
        assert_eq!(e.focus1, [0.0, 0.0]);
        assert!((e.semi_major - 1.0).abs() < 1e-15 && (e.semi_minor - 1.0).abs() < 1e-15);

        let e = indicatrix_ellipse(&p(0.5, 0.0));
        assert!((e.semi_major - 1.0).abs() < 1e-15);
        assert!((e.semi_minor - 0.75_f64.sqrt()).abs() < 1e-15);
        assert!((e.eccentricity - 0.5).abs() < 1e-15);
        assert!((e.focus1[0].abs() - 0.5).abs() < 1e-15 && e.focus1[1].abs() < 1e-15);
        assert!((e.discriminant() + 4.0 * 0.75).abs() < 1e-15);
    }

    #[test]
    fn ellipse_major_axis_follows_point() {
        let x = p(-0.3, 0.6);
        let e = indicatrix_ellipse(&x);
        assert!((e.eccentricity - x.norm()).abs() < 1e-12);
        let foci = [e.focus1, e.focus2];
        let hits = foci
            .iter()
            .filter(|f| (f[0] - x.x1()).hypot(f[1] - x.x2()) < 1e-12)
            .count();
        assert_eq!(hits, 1);
        assert!((e.discriminant() + 4.0 * x.gap()).abs() < 1e-12);
        for s in [0.0, 1.0, 2.0, 4.0] {
            assert!(e.conic_residual(e.point_at(s)).abs() < 1e-12);
        }
    }

    #[test]
    fn sample_examples() {
        let x = p(0.5, 0.0);
        let s = indicatrix_sample(&x, 4).unwrap();
        assert!((s[0].xi1 - 0.5).abs() < 1e-15 && s[0].xi2.abs() < 1e-15);
        assert!((s[2].xi1 + 1.5).abs() < 1e-14 && s[2].xi2.abs() < 1e-14);
        let e = indicatrix_ellipse(&x);
        for v in &s {
            assert!((finsler_norm(&x, *v) - 1.0).abs() < 1e-12);
            assert!(e.conic_residual([x.x1() + v.xi1, x.x2() + v.xi2]).abs() < 1e-9);
        }
        for v in indicatrix_sample(&DiscPoint::ORIGIN, 7).unwrap() {
            assert!((v.norm() - 1.0).abs() < 1e-15);
        }
        assert!(indicatrix_sample(&x, 2).is_err());
    }

    #[test]
    fn symmetrized_examples() {
        let x = p(0.5, 0.0);
        assert!((symmetrized_norm(&x, E1) - 4.0 / 3.0).abs() < 1e-15);
        let v = TangentVector::new(0.2, -0.9);
        assert_eq!(symmetrized_norm(&x, v), symmetrized_norm(&x, -v));
        assert!((symmetrized_norm(&DiscPoint::ORIGIN, v) - v.norm()).abs() < 1e-15);
    }

    #[test]
    fn conic_fit_recovers_coefficients() {
        let x = p(0.3, 0.3);
        let e = indicatrix_ellipse(&x);
        let pts: Vec<[f64; 2]> = indicatrix_sample(&x, 64)
            .unwrap()
            .iter()
            .map(|v| [x.x1() + v.xi1, x.x2() + v.xi2])
            .collect();
        let fit = fit_central_conic(&pts).unwrap();
        assert!((fit[0] - e.a / e.rhs).abs() < 1e-8);
        assert!((fit[1] - e.b / e.rhs).abs() < 1e-8);
        assert!((fit[2] - e.c / e.rhs).abs() < 1e-8);
    }
}
