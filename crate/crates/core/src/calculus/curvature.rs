//! S-curvature, Riemann, Ricci and flag curvature.
//!
//! `α = |ξ| / (1 − |x|²)` is half the curvature −1 Poincaré metric, so its
//! Gaussian curvature is [`ALPHA_CURVATURE`] = −4. The functions without a
//! `_printed` suffix use that value; [`ricci_printed`] and [`flag_printed`]
//! evaluate the published closed forms, which take it to be −1.

use crate::error::Result;
use crate::finsler::{randers_split, FIRST_DERIVATIVE_RADIUS};
use crate::numdiff;
use crate::point::{trace, DiscPoint, Mat2, TangentVector};

use super::connection::beta_derivatives_weighted;
use super::spray::{phase, spray_raw};
use super::volume::distortion;
use super::{norm_weighted, RandersEngine, ALPHA_CURVATURE, NUMERIC_RADIUS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SRoute {
    /// Projectively flat closed form `3|ξ|((1 + |x|²)|ξ| + 2⟨x,ξ⟩) / (2F(1 − |x|²)²)`.
    Closed,
    /// `3(e₀₀/2F − (s₀ + ρ₀))` from the covariant derivatives of `β`.
    General,
    /// `∂G^m/∂ξ^m − ξ^m ∂(log σ_BH)/∂x^m` by finite differences of the spray.
    Spray,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RiemannRoute {
    /// `R̄ + Ξ(δ − F_k ξ/F) + τ_k ξ` for closed `β`.
    Closed,
    /// Finite differences of the closed spray.
    Numeric,
}

/// `φ = b_{i|j}ξ^iξ^j`, `ψ = b_{i|j|k}ξ^iξ^jξ^k` and
/// `τ_k = (b_{i|j|k} − b_{i|k|j})ξ^iξ^j / F`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiPsiTau {
    pub phi: f64,
    pub psi: f64,
    pub tau: [f64; 2],
}

/// `τ_k` from its definition next to the two published closed forms, which
/// differ by an overall sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauForms {
    pub definition: [f64; 2],
    /// `4(|ξ|²x^k − ⟨x,ξ⟩ξ^k) / (F(1 − |x|²)³)`
    pub statement: [f64; 2],
    /// The negative of `statement`.
    pub proof: [f64; 2],
}

impl TauForms {
    /// Largest componentwise gap between the definition and each printed form.
    pub fn residuals(&self) -> (f64, f64) {
        let gap = |v: [f64; 2]| {
            (v[0] - self.definition[0])
                .abs()
                .max((v[1] - self.definition[1]).abs())
        };
        (gap(self.statement), gap(self.proof))
    }
}

/// Every curvature quantity at one flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureReport {
    pub f_value: f64,
    pub s_curv: f64,
    pub riemann: Mat2,
    pub riemann_bar: Mat2,
    pub ricci: f64,
    pub flag: f64,
    pub ricci_printed: f64,
    pub flag_printed: f64,
    pub phi: f64,
    pub psi: f64,
    pub tau: [f64; 2],
    /// `ρ = log √(1 − ‖β‖²_α)`
    pub rho_log: f64,
    /// `ρ₀ = ρ_{x^i} ξ^i`
    pub rho_0: f64,
    pub sigma_bh: f64,
    pub distortion: f64,
}

impl RandersEngine {
    /// `R̄^i_k = K_α(α²δ^i_k − αα_{ξ^k}ξ^i)`.
    pub fn riemann_bar(&self, x: &DiscPoint, xi: TangentVector) -> Mat2 {
        let gap2 = x.gap() * x.gap();
        let alpha2 = xi.norm_sq() / gap2;
        let v = xi.components();
        std::array::from_fn(|i| {
            std::array::from_fn(|k| {
                let delta = if i == k { alpha2 } else { 0.0 };
                ALPHA_CURVATURE * (delta - v[i] * v[k] / gap2)
            })
        })
    }

    pub fn phi_psi_tau(&self, x: &DiscPoint, xi: TangentVector) -> Result<PhiPsiTau> {
        xi.require_nonzero()?;
        let d = beta_derivatives_weighted(x, self.beta_weight);
        let v = xi.components();
        let f = self.norm(x, xi);
        let twisted = d.antisymmetrized(v);
        Ok(PhiPsiTau {
            phi: d.phi(v),
            psi: d.psi(v),
            tau: [
                self.tau_sign * twisted[0] / f,
                self.tau_sign * twisted[1] / f,
            ],
        })
    }

    pub fn riemann(&self, x: &DiscPoint, xi: TangentVector, route: RiemannRoute) -> Result<Mat2> {
        xi.require_nonzero()?;
        match route {
            RiemannRoute::Closed => self.riemann_closed(x, xi),
            RiemannRoute::Numeric => {
                x.require_radius(NUMERIC_RADIUS)?;
                Ok(self.riemann_numeric(x, xi))
            }
        }
    }

    fn riemann_closed(&self, x: &DiscPoint, xi: TangentVector) -> Result<Mat2> {
        let w = self.beta_weight;
        let gap2 = x.gap() * x.gap();
        let alpha = xi.norm() / x.gap();
        let f = self.norm(x, xi);
        let b = crate::finsler::one_form(x);
        let v = xi.components();
        let PhiPsiTau { phi, psi, tau } = self.phi_psi_tau(x, xi)?;
        let xi_term = 3.0 * (phi / (2.0 * f)).powi(2) - psi / (2.0 * f);
        let f_grad = [
            v[0] / (gap2 * alpha) + w * b[0],
            v[1] / (gap2 * alpha) + w * b[1],
        ];
        let bar = self.riemann_bar(x, xi);
        Ok(std::array::from_fn(|i| {
            std::array::from_fn(|k| {
                let delta = if i == k { 1.0 } else { 0.0 };
                bar[i][k] + xi_term * (delta - f_grad[k] * v[i] / f) + tau[k] * v[i]
            })
        }))
    }

    /// `R^i_k = 2∂G^i/∂x^k − ξ^j ∂²G^i/∂x^j∂ξ^k + 2G^j ∂²G^i/∂ξ^j∂ξ^k
    /// − ∂G^i/∂ξ^j ∂G^j/∂ξ^k`, evaluated at `ξ/|ξ|` and rescaled. Plain central
    /// differences leave about 1e−4 relative error at `|x| = 0.9`, hence the
    /// five-point stencils.
    fn riemann_numeric(&self, x: &DiscPoint, xi: TangentVector) -> Mat2 {
        let w = self.beta_weight;
        let len = xi.norm();
        let u = (1.0 / len) * xi;
        let p = phase(x, u);
        let g = |q: [f64; 4]| spray_raw(w, q);
        let h = numdiff::STEP4 * x.gap();
        let g0 = g(p);
        let dx: [[f64; 2]; 2] = std::array::from_fn(|k| numdiff::partial4_vec(&g, p, k, h));
        let dv: [[f64; 2]; 2] = std::array::from_fn(|j| numdiff::partial4_vec(&g, p, 2 + j, h));
        let u = u.components();
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (k, r) in row.iter_mut().enumerate() {
                let mut value = 2.0 * dx[k][i];
                for j in 0..2 {
                    let mixed: [f64; 2] = numdiff::second_partial4_vec(&g, p, j, 2 + k, h);
                    let vv: [f64; 2] = numdiff::second_partial4_vec(&g, p, 2 + j, 2 + k, h);
                    value += -u[j] * mixed[i] + 2.0 * g0[j] * vv[i] - dv[j][i] * dv[k][j];
                }
                *r = len * len * value;
            }
        }
        out
    }

    /// `Ric = R^i_i`.
    pub fn ricci(&self, x: &DiscPoint, xi: TangentVector) -> Result<f64> {
        Ok(trace(&self.riemann_closed_checked(x, xi)?))
    }

    /// `K = Ric / F²`.
    pub fn flag(&self, x: &DiscPoint, xi: TangentVector) -> Result<f64> {
        Ok(self.ricci(x, xi)? / self.norm(x, xi).powi(2))
    }

    fn riemann_closed_checked(&self, x: &DiscPoint, xi: TangentVector) -> Result<Mat2> {
        xi.require_nonzero()?;
        self.riemann_closed(x, xi)
    }

    /// `ρ₀ = ρ_{x^i}ξ^i` with `ρ = ½ log(1 − w²|x|²)`.
    pub fn rho_0(&self, x: &DiscPoint, xi: TangentVector) -> f64 {
        let w2 = self.beta_weight * self.beta_weight;
        -w2 * x.pair(xi) / (1.0 - w2 * x.norm_sq())
    }

    pub fn s_curvature(&self, x: &DiscPoint, xi: TangentVector, route: SRoute) -> Result<f64> {
        xi.require_nonzero()?;
        let w = self.beta_weight;
        let f = self.norm(x, xi);
        match route {
            SRoute::Closed => {
                let gap = x.gap();
                let e00 = w * ((1.0 + x.norm_sq()) * xi.norm_sq() - 2.0 * x.pair(xi).powi(2))
                    / (gap * gap);
                Ok(3.0 * (e00 / (2.0 * f) - self.rho_0(x, xi)))
            }
            SRoute::General => {
                let d = beta_derivatives_weighted(x, w);
                let v = xi.components();
                Ok(3.0 * (d.e00(v) / (2.0 * f) - (d.s0(v) + self.rho_0(x, xi))))
            }
            SRoute::Spray => {
                x.require_radius(FIRST_DERIVATIVE_RADIUS)?;
                let len = xi.norm();
                let u = (1.0 / len) * xi;
                let p = phase(x, u);
                let g = |q: [f64; 4]| spray_raw(w, q);
                let h = numdiff::STEP;
                let divergence: f64 = (0..2)
                    .map(|m| numdiff::partial_vec(&g, p, 2 + m, h)[m])
                    .sum();
                let log_sigma = |q: [f64; 2]| {
                    let r2 = q[0] * q[0] + q[1] * q[1];
                    1.5 * (1.0 - w * w * r2).ln() - 2.0 * (1.0 - r2).ln()
                };
                let c = x.coords();
                let drift: f64 = (0..2)
                    .map(|m| u.components()[m] * numdiff::partial(&log_sigma, c, m, h))
                    .sum();
                Ok(len * (divergence - drift))
            }
        }
    }
}

/// S-curvature of the Apollonian norm by the chosen route.
pub fn s_curvature(x: &DiscPoint, xi: TangentVector, route: SRoute) -> Result<f64> {
    if route == SRoute::Closed {
        xi.require_nonzero()?;
        let gap = x.gap();
        let len = xi.norm();
        let f = crate::finsler::finsler_norm(x, xi);
        return Ok(
            3.0 * len * ((1.0 + x.norm_sq()) * len + 2.0 * x.pair(xi)) / (2.0 * f * gap * gap)
        );
    }
    RandersEngine::APOLLONIAN.s_curvature(x, xi, route)
}

/// `φ`, `ψ` from their closed forms in `α`, `β`; `τ_k` from its definition.
pub fn phi_psi_tau(x: &DiscPoint, xi: TangentVector) -> Result<PhiPsiTau> {
    let defined = RandersEngine::APOLLONIAN.phi_psi_tau(x, xi)?;
    let s = randers_split(x, xi);
    let r2 = x.norm_sq();
    let (a2, b) = (s.alpha * s.alpha, s.beta);
    Ok(PhiPsiTau {
        phi: (1.0 + r2) * a2 - 2.0 * b * b,
        psi: -2.0 * (1.0 + 3.0 * r2) * a2 * b + 8.0 * b * b * b,
        tau: defined.tau,
    })
}

pub fn tau_printed_forms(x: &DiscPoint, xi: TangentVector) -> Result<TauForms> {
    let definition = RandersEngine::APOLLONIAN.phi_psi_tau(x, xi)?.tau;
    let f = crate::finsler::finsler_norm(x, xi);
    let denom = f * x.gap().powi(3);
    let (len2, pair) = (xi.norm_sq(), x.pair(xi));
    let v = xi.components();
    let c = x.coords();
    let statement: [f64; 2] = std::array::from_fn(|k| 4.0 * (len2 * c[k] - pair * v[k]) / denom);
    Ok(TauForms {
        definition,
        statement,
        proof: [-statement[0], -statement[1]],
    })
}

pub fn riemann_curvature(x: &DiscPoint, xi: TangentVector, route: RiemannRoute) -> Result<Mat2> {
    RandersEngine::APOLLONIAN.riemann(x, xi, route)
}

/// Quartic numerator shared by the two Ricci closed forms; `k` is the
/// Gaussian curvature assumed for `α`.
fn ricci_quartic(x: &DiscPoint, xi: TangentVector, k: f64) -> Result<f64> {
    xi.require_nonzero()?;
    let r2 = x.norm_sq();
    let (a, p) = (xi.norm(), x.pair(xi));
    let f = crate::finsler::finsler_norm(x, xi);
    // 4K_α α²F² expands to 4K_α(|ξ|⁴ + 2|ξ|³p + |ξ|²p²) / (1 − |x|²)⁴
    let numer = (3.0 * (1.0 + r2).powi(2) + 4.0 * k) * a.powi(4)
        + (12.0 * r2 - 4.0 + 8.0 * (k + 1.0)) * a.powi(3) * p
        + (-12.0 + 4.0 * (k + 1.0)) * a * a * p * p
        - 16.0 * a * p.powi(3)
        - 4.0 * p.powi(4);
    Ok(numer / (4.0 * f * f * x.gap().powi(4)))
}

/// Ricci scalar of the Apollonian norm from its closed quartic form.
pub fn ricci(x: &DiscPoint, xi: TangentVector) -> Result<f64> {
    ricci_quartic(x, xi, ALPHA_CURVATURE)
}

/// The published quartic, which assumes `α` has curvature −1.
pub fn ricci_printed(x: &DiscPoint, xi: TangentVector) -> Result<f64> {
    ricci_quartic(x, xi, -1.0)
}

pub fn flag_curvature(x: &DiscPoint, xi: TangentVector) -> Result<f64> {
    Ok(ricci(x, xi)? / crate::finsler::finsler_norm(x, xi).powi(2))
}

pub fn flag_printed(x: &DiscPoint, xi: TangentVector) -> Result<f64> {
    Ok(ricci_printed(x, xi)? / crate::finsler::finsler_norm(x, xi).powi(2))
}

pub fn curvature_report(x: &DiscPoint, xi: TangentVector) -> Result<CurvatureReport> {
    let engine = RandersEngine::APOLLONIAN;
    let ppt = phi_psi_tau(x, xi)?;
    let riemann = engine.riemann(x, xi, RiemannRoute::Closed)?;
    let ricci = trace(&riemann);
    let f_value = norm_weighted(1.0, x.coords(), xi.components());
    let ricci_printed = ricci_printed(x, xi)?;
    Ok(CurvatureReport {
        f_value,
        s_curv: s_curvature(x, xi, SRoute::Closed)?,
        riemann,
        riemann_bar: engine.riemann_bar(x, xi),
        ricci,
        flag: ricci / (f_value * f_value),
        ricci_printed,
        flag_printed: ricci_printed / (f_value * f_value),
        phi: ppt.phi,
        psi: ppt.psi,
        tau: ppt.tau,
        rho_log: 0.5 * (1.0 - x.norm_sq()).ln(),
        rho_0: engine.rho_0(x, xi),
        sigma_bh: super::bh_density(x),
        distortion: distortion(x, xi)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x1: f64, x2: f64) -> DiscPoint {
        DiscPoint::new(x1, x2).unwrap()
    }

    fn v(a: f64, b: f64) -> TangentVector {
        TangentVector::new(a, b)
    }

    fn flags() -> Vec<(DiscPoint, TangentVector)> {
        vec![
            (DiscPoint::ORIGIN, v(1.0, 0.0)),
            (p(0.5, 0.0), v(1.0, 0.0)),
            (p(0.5, 0.0), v(0.0, 1.0)),
            (p(0.3, 0.4), v(1.0, 1.0)),
            (p(-0.6, 0.5), v(-0.2, 1.5)),
            (p(0.1, -0.85), v(0.3, 0.4)),
        ]
    }

    #[test]
    fn s_curvature_examples() {
        let s = s_curvature(&DiscPoint::ORIGIN, v(1.0, 0.0), SRoute::Closed).unwrap();
        assert!((s - 1.5).abs() < 1e-15);
        let s = s_curvature(&p(0.5, 0.0), v(0.0, 1.0), SRoute::Closed).unwrap();
        assert!((s - 2.5).abs() < 1e-10);
        let s = s_curvature(&p(0.5, 0.0), v(1.0, 0.0), SRoute::Closed).unwrap();
        assert!((s - 3.0).abs() < 1e-12);
    }

    #[test]
    fn s_curvature_routes_agree() {
        for (x, xi) in flags() {
            let c = s_curvature(&x, xi, SRoute::Closed).unwrap();
            for route in [SRoute::General, SRoute::Spray] {
                let other = s_curvature(&x, xi, route).unwrap();
                assert!(
                    (c - other).abs() <= 1e-5 * c.abs().max(1.0),
                    "{route:?} {c} {other}"
                );
            }
            let engine = RandersEngine::APOLLONIAN
                .s_curvature(&x, xi, SRoute::Closed)
                .unwrap();
            assert!((engine - c).abs() < 1e-12 * c.abs());
        }
    }

    #[test]
    fn riemannian_engine_has_zero_s_curvature() {
        for (x, xi) in flags() {
            for route in [SRoute::Closed, SRoute::General, SRoute::Spray] {
                let s = RandersEngine::RIEMANNIAN
                    .s_curvature(&x, xi, route)
                    .unwrap();
                assert!(s.abs() < 1e-6, "{route:?} {s}");
            }
        }
    }

    #[test]
    fn phi_psi_tau_examples() {
        let t = phi_psi_tau(&DiscPoint::ORIGIN, v(0.6, 0.8)).unwrap();
        assert!((t.phi - 1.0).abs() < 1e-15);
        assert_eq!(t.psi, 0.0);
        assert!(t.tau[0].abs() < 1e-15 && t.tau[1].abs() < 1e-15);

        let t = phi_psi_tau(&p(0.5, 0.0), v(0.0, 1.0)).unwrap();
        assert!((t.phi - 20.0 / 9.0).abs() < 1e-14);
        assert_eq!(t.psi, 0.0);

        let t = phi_psi_tau(&p(0.5, 0.0), v(1.0, 0.0)).unwrap();
        assert!((t.phi - 4.0 / 3.0).abs() < 1e-14);
        assert!((t.psi + 16.0 / 9.0).abs() < 1e-13);
    }

    #[test]
    fn phi_psi_closed_forms_match_contractions() {
        for (x, xi) in flags() {
            let closed = phi_psi_tau(&x, xi).unwrap();
            let defined = RandersEngine::APOLLONIAN.phi_psi_tau(&x, xi).unwrap();
            assert!((closed.phi - defined.phi).abs() < 1e-10 * closed.phi.abs().max(1.0));
            assert!((closed.psi - defined.psi).abs() < 1e-10 * closed.psi.abs().max(1.0));
        }
    }

    #[test]
    fn tau_matches_statement_form() {
        let t = tau_printed_forms(&p(0.5, 0.0), v(0.0, 1.0)).unwrap();
        assert!((t.definition[0] - 32.0 / 9.0).abs() < 1e-12);
        assert!(t.definition[1].abs() < 1e-12);
        for (x, xi) in flags() {
            let t = tau_printed_forms(&x, xi).unwrap();
            let (statement, proof) = t.residuals();
            let size = t.definition[0].abs().max(t.definition[1].abs());
            assert!(statement <= 1e-10 * size.max(1.0));
            if size > 1e-8 {
                assert!(proof > size);
            }
        }
    }

    #[test]
    fn ricci_values() {
        let cases = [
            (DiscPoint::ORIGIN, v(1.0, 0.0), -3.25, -0.25),
            (p(0.5, 0.0), v(1.0, 0.0), -19.0 / 3.0, -1.0),
            (
                p(0.5, 0.0),
                v(0.0, 1.0),
                11.0 / 36.0 - 16.0 / 3.0,
                11.0 / 36.0,
            ),
        ];
        for (x, xi, truth, printed) in cases {
            assert!((ricci(&x, xi).unwrap() - truth).abs() < 1e-12);
            assert!((ricci_printed(&x, xi).unwrap() - printed).abs() < 1e-12);
        }
        assert!((flag_printed(&p(0.5, 0.0), v(0.0, 1.0)).unwrap() - 11.0 / 64.0).abs() < 1e-12);
        assert!((flag_curvature(&p(0.5, 0.0), v(0.0, 1.0)).unwrap() + 2.828125).abs() < 1e-12);
    }

    #[test]
    fn ricci_is_trace_and_contraction_vanishes() {
        for (x, xi) in flags() {
            let r = riemann_curvature(&x, xi, RiemannRoute::Closed).unwrap();
            let ric = ricci(&x, xi).unwrap();
            assert!((trace(&r) - ric).abs() < 1e-10 * ric.abs().max(1.0));
            let c = xi.components();
            for row in r {
                assert!((row[0] * c[0] + row[1] * c[1]).abs() < 1e-8 * ric.abs().max(1.0));
            }
        }
    }

    #[test]
    fn closed_and_numeric_riemann_agree() {
        for (x, xi) in flags() {
            let f2 = crate::finsler::finsler_norm(&x, xi).powi(2);
            let c = riemann_curvature(&x, xi, RiemannRoute::Closed).unwrap();
            let n = riemann_curvature(&x, xi, RiemannRoute::Numeric).unwrap();
            let gap = crate::point::max_abs_diff(&c, &n);
            assert!(gap <= 1e-4 * f2, "{x} {xi}: {gap} vs {f2}");
        }
        assert!(riemann_curvature(&p(0.91, 0.0), v(1.0, 0.0), RiemannRoute::Numeric).is_err());
    }

    #[test]
    fn riemannian_engine_has_constant_curvature() {
        let e = RandersEngine::RIEMANNIAN;
        for (x, xi) in flags() {
            let k = e.flag(&x, xi).unwrap();
            assert!((k - ALPHA_CURVATURE).abs() < 1e-12, "{k}");
            let n = e.riemann(&x, xi, RiemannRoute::Numeric).unwrap();
            let kn = trace(&n) / e.norm(&x, xi).powi(2);
            assert!((kn - ALPHA_CURVATURE).abs() < 1e-6, "{kn}");
        }
    }

    #[test]
    fn flipped_tau_breaks_route_agreement() {
        let (x, xi) = (p(0.5, 0.0), v(0.0, 1.0));
        let e = RandersEngine::FLIPPED_TAU;
        let c = e.riemann(&x, xi, RiemannRoute::Closed).unwrap();
        let n = e.riemann(&x, xi, RiemannRoute::Numeric).unwrap();
        assert!(crate::point::max_abs_diff(&c, &n) > 1.0);
    }

    #[test]
    fn report_is_consistent() {
        let r = curvature_report(&p(0.5, 0.0), v(0.0, 1.0)).unwrap();
        assert!((r.s_curv - 2.5).abs() < 1e-12);
        assert!((r.flag - r.ricci / (r.f_value * r.f_value)).abs() < 1e-15);
        assert!((r.sigma_bh - 0.75f64.powf(-0.5)).abs() < 1e-15);
        assert_eq!(r.rho_0, 0.0);
        assert!(curvature_report(&DiscPoint::ORIGIN, TangentVector::ZERO).is_err());
    }
}
