//! Zermelo navigation data and the hyperboloid model.
//!
//! The Apollonian norm solves the navigation problem on the sea
//! `h_ij = (δ_ij − x^i x^j) / (1 − |x|²)` under the wind `W = −x`. It is also
//! half the pullback of the Lorentz–Randers norm
//! `√(v₁² + v₂² − v₃²) + v₃ / (1 + p₃)` along the projection onto the upper
//! sheet of the hyperboloid `x̃₁² + x̃₂² − x̃₃² = −1`.

use crate::error::{GeometryError, Result};
use crate::finsler::finsler_norm;
use crate::numdiff;
use crate::point::{DiscPoint, Mat2, TangentVector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZermeloData {
    pub h: Mat2,
    pub w: [f64; 2],
    /// `1 − ‖W‖²_h`
    pub lambda: f64,
    pub wind_norm_sq: f64,
}

impl ZermeloData {
    /// `h(u, v)`.
    pub fn inner(&self, u: [f64; 2], v: [f64; 2]) -> f64 {
        let h = &self.h;
        h[0][0] * u[0] * v[0]
            + h[0][1] * u[0] * v[1]
            + h[1][0] * u[1] * v[0]
            + h[1][1] * u[1] * v[1]
    }
}

pub fn zermelo_data(x: &DiscPoint) -> ZermeloData {
    let gap = x.gap();
    let c = x.coords();
    let h: Mat2 = std::array::from_fn(|i| {
        std::array::from_fn(|j| (if i == j { 1.0 } else { 0.0 } - c[i] * c[j]) / gap)
    });
    let w = [-c[0], -c[1]];
    let mut data = ZermeloData {
        h,
        w,
        lambda: 0.0,
        wind_norm_sq: 0.0,
    };
    data.wind_norm_sq = data.inner(w, w);
    data.lambda = 1.0 - data.wind_norm_sq;
    data
}

/// Randers norm recovered from navigation data:
/// `F = (√(λ h(ξ,ξ) + ⟨W,ξ⟩_h²) − ⟨W,ξ⟩_h) / λ`.
pub fn zermelo_reconstruct(data: &ZermeloData, xi: TangentVector) -> Result<f64> {
    if !(data.lambda > 0.0) {
        return Err(GeometryError::Degenerate(
            "wind is not weaker than the sea metric",
        ));
    }
    let v = xi.components();
    let wind = data.inner(data.w, v);
    Ok(((data.lambda * data.inner(v, v) + wind * wind).sqrt() - wind) / data.lambda)
}

/// A point on the upper sheet of the two-sheeted hyperboloid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperboloidPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl HyperboloidPoint {
    /// `x̃₁² + x̃₂² − x̃₃² + 1`.
    pub fn constraint_residual(&self) -> f64 {
        lorentz_inner(self.coords(), self.coords()) + 1.0
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }
}

/// `u₁v₁ + u₂v₂ − u₃v₃`.
pub fn lorentz_inner(u: [f64; 3], v: [f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] - u[2] * v[2]
}

fn projection(x: [f64; 2]) -> [f64; 3] {
    let r2 = x[0] * x[0] + x[1] * x[1];
    let gap = 1.0 - r2;
    [2.0 * x[0] / gap, 2.0 * x[1] / gap, (1.0 + r2) / gap]
}

/// `π(x) = (2x, 1 + |x|²) / (1 − |x|²)`.
pub fn hyperboloid_map(x: &DiscPoint) -> HyperboloidPoint {
    let [x1, x2, x3] = projection(x.coords());
    HyperboloidPoint { x1, x2, x3 }
}

/// `dπ_x(ξ)` from the hand-computed Jacobian.
pub fn hyperboloid_pushforward(x: &DiscPoint, xi: TangentVector) -> [f64; 3] {
    let (x1, x2) = (x.x1(), x.x2());
    let gap = x.gap();
    let g2 = gap * gap;
    let jac = [
        [2.0 * (gap + 2.0 * x1 * x1) / g2, 4.0 * x1 * x2 / g2],
        [4.0 * x1 * x2 / g2, 2.0 * (gap + 2.0 * x2 * x2) / g2],
        [4.0 * x1 / g2, 4.0 * x2 / g2],
    ];
    std::array::from_fn(|a| jac[a][0] * xi.xi1 + jac[a][1] * xi.xi2)
}

/// `dπ_x(ξ)` by central differences of `π`.
pub fn hyperboloid_pushforward_numeric(x: &DiscPoint, xi: TangentVector) -> [f64; 3] {
    let p = x.coords();
    let d: [[f64; 3]; 2] =
        std::array::from_fn(|j| numdiff::partial_vec(&projection, p, j, numdiff::STEP));
    std::array::from_fn(|a| d[0][a] * xi.xi1 + d[1][a] * xi.xi2)
}

/// `α_L(v) + β_L(v) = √(v₁² + v₂² − v₃²) + v₃ / (1 + p₃)`.
///
/// Quadratic forms that are negative beyond rounding are rejected as timelike.
pub fn lorentz_randers_value(p: &HyperboloidPoint, v: [f64; 3]) -> Result<f64> {
    let q = lorentz_inner(v, v);
    let scale = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    if q < -1e-12 * scale {
        return Err(GeometryError::Timelike(q));
    }
    Ok(q.max(0.0).sqrt() + v[2] / (1.0 + p.x3))
}

/// `(π*F_L)(x, ξ)` alongside `2F(x, ξ)`.
pub fn pullback_check(x: &DiscPoint, xi: TangentVector) -> Result<(f64, f64)> {
    let pulled = lorentz_randers_value(&hyperboloid_map(x), hyperboloid_pushforward(x, xi))?;
    Ok((pulled, 2.0 * finsler_norm(x, xi)))
}
