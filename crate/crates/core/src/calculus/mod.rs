//! Randers curvature calculus for the Apollonian Finsler norm.
//!
//! Every closed form here has an independent numeric route so the two can
//! be checked against each other. Closed routes accept any point of the
//! open disc; numeric routes refuse points beyond [`NUMERIC_RADIUS`] (or
//! [`crate::finsler::FIRST_DERIVATIVE_RADIUS`] for first-derivative routes).

pub mod connection;
pub mod curvature;
pub mod spray;
pub mod volume;

pub use connection::{beta_derivatives, christoffel, BetaDerivatives, ChristoffelSymbols};
pub use curvature::{
    curvature_report, flag_curvature, flag_printed, phi_psi_tau, ricci, ricci_printed,
    riemann_curvature, s_curvature, tau_printed_forms, CurvatureReport, PhiPsiTau, RiemannRoute,
    SRoute, TauForms,
};
pub use spray::{spray_closed, spray_numeric, SprayCoefficients};
pub use volume::{bh_density, distortion};

use crate::point::{DiscPoint, TangentVector};

/// Radius cap for second-derivative numeric routes.
pub const NUMERIC_RADIUS: f64 = 0.9;

/// Gaussian curvature of `α = |ξ| / (1 − |x|²)`.
pub const ALPHA_CURVATURE: f64 = -4.0;

/// A Randers family `α + w·β` sharing `α` and the direction of `β` with the
/// Apollonian norm.
///
/// `w = 1` is the Apollonian structure and `w = 0` the underlying Riemannian
/// metric. `tau_sign` multiplies the `τ_k` term of the closed Riemann
/// tensor; it is `1` except in the fault-injection engine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandersEngine {
    pub beta_weight: f64,
    pub tau_sign: f64,
}

impl RandersEngine {
    pub const APOLLONIAN: RandersEngine = RandersEngine {
        beta_weight: 1.0,
        tau_sign: 1.0,
    };

    /// `β` suppressed: the conformal metric `α` alone.
    pub const RIEMANNIAN: RandersEngine = RandersEngine {
        beta_weight: 0.0,
        tau_sign: 1.0,
    };

    /// Deliberately wrong sign on `τ_k`, for negative controls.
    pub const FLIPPED_TAU: RandersEngine = RandersEngine {
        beta_weight: 1.0,
        tau_sign: -1.0,
    };

    pub fn norm(&self, x: &DiscPoint, xi: TangentVector) -> f64 {
        norm_weighted(self.beta_weight, x.coords(), xi.components())
    }
}

#[inline]
pub(crate) fn norm_weighted(w: f64, x: [f64; 2], xi: [f64; 2]) -> f64 {
    let gap = 1.0 - x[0] * x[0] - x[1] * x[1];
    (xi[0].hypot(xi[1]) + w * (x[0] * xi[0] + x[1] * xi[1])) / gap
}
