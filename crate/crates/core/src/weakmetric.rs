//! The Apollonian weak metric on the unit disc.
//!
//! `δ(z₁, z₂) = log sup_{a ∈ ∂𝔻} |z₁ − a| / |z₂ − a|` has the closed form
//! `log((|z₁ − z₂| + |z₁z̄₂ − 1|) / (1 − |z₂|²))`. The supremum is attained where
//! the hyperbolic geodesic ray from `z₁` through `z₂` meets the unit circle.
//! [`brute_force_supremum`] evaluates the defining supremum directly and is kept
//! independent of the closed forms so the two can be checked against each other.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{GeometryError, Result};
use crate::optimize::{bisect_sign, golden_section_max};
use crate::point::{BoundaryPoint, DiscPoint};

/// Relative threshold on `|Im(z̄₁z₂)|` below which two points are treated as
/// lying on a common diameter.
pub const COLLINEAR_TOL: f64 = 1e-12;

/// Smallest coarse grid accepted by [`brute_force_supremum`].
pub const MIN_COARSE: usize = 64;

/// Angular bracket width at which golden-section refinement stops.
pub const BRACKET_TOL: f64 = 1e-12;

fn complex(p: &DiscPoint) -> Complex64 {
    Complex64::new(p.x1(), p.x2())
}

/// Carrier of the hyperbolic geodesic through two points: a diameter or a
/// circle meeting the unit circle at right angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeodesicArc {
    Diameter { direction: [f64; 2] },
    OrthoCircle { center: [f64; 2], radius: f64 },
}

impl GeodesicArc {
    /// Unsigned distance from `p` to the carrier: `||p − c| − R|` for circles,
    /// `|⟨p, d^⊥⟩|` for diameters.
    pub fn residual(&self, p: [f64; 2]) -> f64 {
        match *self {
            GeodesicArc::Diameter { direction: d } => (-d[1] * p[0] + d[0] * p[1]).abs(),
            GeodesicArc::OrthoCircle { center, radius } => {
                ((p[0] - center[0]).hypot(p[1] - center[1]) - radius).abs()
            }
        }
    }

    /// `|c|² − R² − 1` for circles (zero when orthogonal to the unit circle),
    /// `|d| − 1` for diameters.
    pub fn orthogonality_defect(&self) -> f64 {
        match *self {
            GeodesicArc::Diameter { direction: d } => d[0].hypot(d[1]) - 1.0,
            GeodesicArc::OrthoCircle { center, radius } => {
                center[0] * center[0] + center[1] * center[1] - radius * radius - 1.0
            }
        }
    }
}

/// Both boundary endpoints of the geodesic through `z1`, `z2` and the value of
/// the supremum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupremumResult {
    /// Endpoint of the ray from `z1` through `z2`; maximizes the ratio.
    pub a_plus: BoundaryPoint,
    /// Endpoint of the reverse ray from `z2` through `z1`.
    pub a_minus: BoundaryPoint,
    /// `sup |z1 − a| / |z2 − a| = exp δ(z1, z2)`.
    pub m_value: f64,
    pub arc: GeodesicArc,
}

/// Output of the direct maximization oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BruteForceSupremum {
    pub m_estimate: f64,
    /// Argmax angle in `[0, 2π)`.
    pub t_star: f64,
}

/// The asymmetric Apollonian distance from `z1` to `z2`.
pub fn apollonian_distance(z1: &DiscPoint, z2: &DiscPoint) -> f64 {
    if z1 == z2 {
        return 0.0;
    }
    let (a, b) = (complex(z1), complex(z2));
    let chord = (a - b).norm();
    let cross = (a * b.conj() - 1.0).norm();
    ((chord + cross) / z2.gap()).ln()
}

/// `f(t) = |z1 − e^{it}|² / |z2 − e^{it}|²`, the squared ratio on the boundary.
pub fn boundary_objective(z1: &DiscPoint, z2: &DiscPoint, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    let n = (z1.x1() - c).powi(2) + (z1.x2() - s).powi(2);
    let d = (z2.x1() - c).powi(2) + (z2.x2() - s).powi(2);
    n / d
}

/// Numerator of `f'(t)`, i.e. `N'D − ND'`; has the sign of the derivative.
fn objective_slope(z1: &DiscPoint, z2: &DiscPoint, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    let n = 1.0 + z1.norm_sq() - 2.0 * (z1.x1() * c + z1.x2() * s);
    let d = 1.0 + z2.norm_sq() - 2.0 * (z2.x1() * c + z2.x2() * s);
    let dn = 2.0 * (z1.x1() * s - z1.x2() * c);
    let dd = 2.0 * (z2.x1() * s - z2.x2() * c);
    dn * d - n * dd
}

/// Direct maximization of [`boundary_objective`]: a uniform scan of
/// `n_coarse` angles, golden-section refinement of the best bracket, then a
/// sign-bisection on the analytic slope to get below the `√ε` resolution
/// limit of value comparisons at a flat maximum.
pub fn brute_force_supremum(
    z1: &DiscPoint,
    z2: &DiscPoint,
    n_coarse: usize,
) -> Result<BruteForceSupremum> {
    if z1 == z2 {
        return Err(GeometryError::Degenerate(
            "supremum argmax is undefined for coincident points",
        ));
    }
    if n_coarse < MIN_COARSE {
        return Err(GeometryError::InvalidArgument(format!(
            "n_coarse must be at least {MIN_COARSE}, got {n_coarse}"
        )));
    }
    let f = |t: f64| boundary_objective(z1, z2, t);
    let h = TAU / n_coarse as f64;
    let best =
        (0..n_coarse)
            .map(|k| (k, f(k as f64 * h)))
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (k, v)| if v > acc.1 { (k, v) } else { acc },
            );
    let centre = best.0 as f64 * h;
    let t_golden = golden_section_max(f, centre - h, centre + h, BRACKET_TOL);

    let slope = |t: f64| objective_slope(z1, z2, t);
    let mut t_star = t_golden;
    let mut window = 1e-6;
    while window <= h {
        if let Some(t) = bisect_sign(slope, t_golden - window, t_golden + window, 1e-16) {
            // Slope must go + to −, otherwise this is the minimum.
            if slope(t - window) >= 0.0 && f(t) >= f(t_golden) - 1e-14 * f(t_golden) {
                t_star = t;
            }
            break;
        }
        window *= 8.0;
    }
    Ok(BruteForceSupremum {
        m_estimate: f(t_star).sqrt(),
        t_star: t_star.rem_euclid(TAU),
    })
}

fn is_collinear(a: Complex64, b: Complex64) -> bool {
    let im = (a.conj() * b).im;
    im.abs() <= COLLINEAR_TOL * (a.norm() * b.norm()).max(1e-30)
}

/// Carrier of the hyperbolic geodesic through `z1` and `z2`.
///
/// Diameters are oriented from `z1` toward `z2`.
pub fn geodesic_arc(z1: &DiscPoint, z2: &DiscPoint) -> Result<GeodesicArc> {
    if z1 == z2 {
        return Err(GeometryError::Degenerate(
            "geodesic carrier needs two distinct points",
        ));
    }
    let (a, b) = (complex(z1), complex(z2));
    if is_collinear(a, b) {
        let anchor = if a.norm() >= b.norm() { a } else { b };
        let mut u = anchor / anchor.norm();
        if ((b - a) * u.conj()).re < 0.0 {
            u = -u;
        }
        return Ok(GeodesicArc::Diameter {
            direction: [u.re, u.im],
        });
    }
    let rho = circle_center(a, b);
    let radius = (rho.norm_sqr() - 1.0).sqrt();
    Ok(GeodesicArc::OrthoCircle {
        center: [rho.re, rho.im],
        radius,
    })
}

fn circle_center(a: Complex64, b: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let num = b * (one - a * b.conj()) - a * (one - a.conj() * b);
    let den = a.conj() * b - b.conj() * a;
    num / den
}

/// Closed-form supremum points `a⁺`, `a⁻` and the supremum value.
pub fn supremum_points(z1: &DiscPoint, z2: &DiscPoint) -> Result<SupremumResult> {
    let arc = geodesic_arc(z1, z2)?;
    let m_value = apollonian_distance(z1, z2).exp();
    let (a_plus, a_minus) = match arc {
        GeodesicArc::Diameter { direction: d } => (
            BoundaryPoint::normalized(d[0], d[1]),
            BoundaryPoint::normalized(-d[0], -d[1]),
        ),
        GeodesicArc::OrthoCircle { center, radius } => {
            // (1 ± iR)/ρ̄ are the two feet; which one continues the ray
            // z1 → z2 depends on the orientation sign of Im(z̄1 z2).
            let rho_bar = Complex64::new(center[0], -center[1]);
            let orientation = (complex(z1).conj() * complex(z2)).im.signum();
            let plus = Complex64::new(1.0, orientation * radius) / rho_bar;
            let minus = Complex64::new(1.0, -orientation * radius) / rho_bar;
            (
                BoundaryPoint::normalized(plus.re, plus.im),
                BoundaryPoint::normalized(minus.re, minus.im),
            )
        }
    };
    Ok(SupremumResult {
        a_plus,
        a_minus,
        m_value,
        arc,
    })
}

/// Arithmetic symmetrization `½(δ(z1,z2) + δ(z2,z1))`, evaluated in closed form.
pub fn barbilian_distance(z1: &DiscPoint, z2: &DiscPoint) -> f64 {
    if z1 == z2 {
        return 0.0;
    }
    let (a, b) = (complex(z1), complex(z2));
    let chord = (b - a).norm();
    let cross = (a * b.conj() - 1.0).norm();
    // cross² − chord² = (1 − |z1|²)(1 − |z2|²), avoids the cancellation.
    let lower = z1.gap() * z2.gap() / (cross + chord);
    0.5 * ((cross + chord) / lower).ln()
}
