//! Spray coefficients `G^i` of the geodesic equation `ẍ + 2G(x, ẋ) = 0`.

use crate::error::Result;
use crate::finsler::FIRST_DERIVATIVE_RADIUS;
use crate::numdiff;
use crate::point::{inverse, DiscPoint, TangentVector};

use super::{norm_weighted, RandersEngine};

/// `G = Ḡ + Pξ + Q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SprayCoefficients {
    pub g_spray: [f64; 2],
    /// Spray of `α` alone.
    pub g_bar: [f64; 2],
    pub p_scalar: f64,
    /// Vanishes whenever `β` is closed.
    pub q_vec: [f64; 2],
}

impl SprayCoefficients {
    /// `|G − other| / (1 + |G|)`, using the max norm.
    pub fn relative_difference(&self, other: &SprayCoefficients) -> f64 {
        let diff = (self.g_spray[0] - other.g_spray[0])
            .abs()
            .max((self.g_spray[1] - other.g_spray[1]).abs());
        let size = self.g_spray[0].abs().max(self.g_spray[1].abs());
        diff / (1.0 + size)
    }
}

/// Closed spray in phase-space layout `[x1, x2, ξ1, ξ2]`. Callers guarantee
/// `|x| < 1` and `ξ ≠ 0`.
pub(crate) fn spray_raw(w: f64, p: [f64; 4]) -> [f64; 2] {
    split_raw(w, p).0
}

fn split_raw(w: f64, p: [f64; 4]) -> ([f64; 2], [f64; 2], f64) {
    let (x, xi) = ([p[0], p[1]], [p[2], p[3]]);
    let r2 = x[0] * x[0] + x[1] * x[1];
    let gap = 1.0 - r2;
    let pair = x[0] * xi[0] + x[1] * xi[1];
    let len2 = xi[0] * xi[0] + xi[1] * xi[1];
    let f = norm_weighted(w, x, xi);
    let g_bar = [
        (2.0 * xi[0] * pair - len2 * x[0]) / gap,
        (2.0 * xi[1] * pair - len2 * x[1]) / gap,
    ];
    let p_scalar = w * ((1.0 + r2) * len2 - 2.0 * pair * pair) / (2.0 * f * gap * gap);
    let g = [g_bar[0] + p_scalar * xi[0], g_bar[1] + p_scalar * xi[1]];
    (g, g_bar, p_scalar)
}

#[inline]
pub(crate) fn phase(x: &DiscPoint, xi: TangentVector) -> [f64; 4] {
    [x.x1(), x.x2(), xi.xi1, xi.xi2]
}

impl RandersEngine {
    pub fn spray(&self, x: &DiscPoint, xi: TangentVector) -> Result<SprayCoefficients> {
        xi.require_nonzero()?;
        let (g_spray, g_bar, p_scalar) = split_raw(self.beta_weight, phase(x, xi));
        Ok(SprayCoefficients {
            g_spray,
            g_bar,
            p_scalar,
            q_vec: [0.0; 2],
        })
    }

    /// `G^i = ¼ g^{il}([F²]_{x^k ξ^l} ξ^k − [F²]_{x^l})` with every derivative
    /// taken by central differences. Evaluated at the unit vector `ξ/|ξ|` and
    /// rescaled, so one step size serves all lengths. Five-point stencils
    /// with a step proportional to `1 − |x|²`.
    pub fn spray_numeric(&self, x: &DiscPoint, xi: TangentVector) -> Result<SprayCoefficients> {
        xi.require_nonzero()?;
        x.require_radius(FIRST_DERIVATIVE_RADIUS)?;
        let w = self.beta_weight;
        let len = xi.norm();
        let u = [xi.xi1 / len, xi.xi2 / len];
        let f2 = |q: [f64; 4]| norm_weighted(w, [q[0], q[1]], [q[2], q[3]]).powi(2);
        let p = [x.x1(), x.x2(), u[0], u[1]];
        let h = numdiff::STEP4 * x.gap();
        let hess = [
            [
                0.5 * numdiff::second_partial4(&f2, p, 2, 2, h),
                0.5 * numdiff::second_partial4(&f2, p, 2, 3, h),
            ],
            [
                0.5 * numdiff::second_partial4(&f2, p, 3, 2, h),
                0.5 * numdiff::second_partial4(&f2, p, 3, 3, h),
            ],
        ];
        let inv = inverse(&hess).ok_or(crate::error::GeometryError::Degenerate(
            "numeric fundamental tensor is singular",
        ))?;
        let bracket: [f64; 2] = std::array::from_fn(|l| {
            let mixed: f64 = (0..2)
                .map(|k| numdiff::second_partial4(&f2, p, k, 2 + l, h) * u[k])
                .sum();
            mixed - numdiff::partial4(&f2, p, l, h)
        });
        let scale = 0.25 * len * len;
        let g_spray =
            std::array::from_fn(|i| scale * (inv[i][0] * bracket[0] + inv[i][1] * bracket[1]));
        let (_, g_bar, p_scalar) = split_raw(w, phase(x, xi));
        Ok(SprayCoefficients {
            g_spray,
            g_bar,
            p_scalar,
            q_vec: [
                g_spray[0] - g_bar[0] - p_scalar * xi.xi1,
                g_spray[1] - g_bar[1] - p_scalar * xi.xi2,
            ],
        })
    }
}

/// Closed-form spray of the Apollonian norm: `Ḡ^i = (2ξ^i⟨x,ξ⟩ − |ξ|²x^i) / (1 − |x|²)`
/// and `P = ((1 + |x|²)|ξ|² − 2⟨x,ξ⟩²) / (2F(1 − |x|²)²)`.
pub fn spray_closed(x: &DiscPoint, xi: TangentVector) -> Result<SprayCoefficients> {
    RandersEngine::APOLLONIAN.spray(x, xi)
}

/// Spray from the general definition, by finite differences of `F²`.
/// The returned `g_bar` and `p_scalar` are the closed values; `q_vec` holds
/// the residual `G − Ḡ − Pξ` of the numeric route.
pub fn spray_numeric(x: &DiscPoint, xi: TangentVector) -> Result<SprayCoefficients> {
    RandersEngine::APOLLONIAN.spray_numeric(x, xi)
}
