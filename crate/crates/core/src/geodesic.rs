//! Geodesics of the Apollonian norm: RK4 integration of the spray equation,
//! Finsler length by Simpson quadrature and hyperbolic carrier sampling.

use thiserror::Error;

use crate::calculus::spray::spray_raw;
use crate::error::{GeometryError, Result};
use crate::finsler::{finsler_norm, norm_raw};
use crate::point::{angle_difference, DiscPoint, TangentVector};
use crate::weakmetric::{geodesic_arc, GeodesicArc};

/// Fixed-step integrator settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub step: f64,
    pub max_steps: usize,
    /// Integration stops once `|x| > 1 − boundary_margin`.
    pub boundary_margin: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            step: 1e-3,
            max_steps: 1_000_000,
            boundary_margin: 0.05,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(GeometryError::InvalidArgument(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if self.max_steps == 0 {
            return Err(GeometryError::InvalidArgument(
                "max_steps must be positive".into(),
            ));
        }
        if !(0.01..1.0).contains(&self.boundary_margin) {
            return Err(GeometryError::InvalidArgument(format!(
                "boundary_margin must lie in [0.01, 1), got {}",
                self.boundary_margin
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicSample {
    pub t: f64,
    pub x: DiscPoint,
    pub v: TangentVector,
}

/// An integrated geodesic with unit Finsler speed.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicPath {
    pub samples: Vec<GeodesicSample>,
    pub step: f64,
    pub method: &'static str,
}

impl GeodesicPath {
    pub fn points(&self) -> Vec<[f64; 2]> {
        self.samples.iter().map(|s| s.x.coords()).collect()
    }

    /// `max |F(x(t), v(t)) − 1|` over the samples.
    pub fn speed_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (finsler_norm(&s.x, s.v) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// The path as a curve for [`finsler_length`]. Requires uniform spacing,
    /// so a shortened final step is dropped.
    pub fn to_curve(&self) -> SampledCurve {
        let mut samples = self.samples.as_slice();
        if samples.len() > 2 {
            let last = samples[samples.len() - 1].t - samples[samples.len() - 2].t;
            if (last - self.step).abs() > 1e-12 * self.step {
                samples = &samples[..samples.len() - 1];
            }
        }
        SampledCurve {
            points: samples.iter().map(|s| s.x).collect(),
            velocities: samples.iter().map(|s| s.v).collect(),
            dt: self.step,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrationError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),

    /// The path reached the boundary margin; `path` holds everything up to
    /// the last accepted sample.
    #[error("geodesic left the region |x| <= {limit} at t = {t}")]
    BoundaryExit {
        path: GeodesicPath,
        t: f64,
        limit: f64,
    },

    #[error("step budget of {0} exhausted")]
    StepLimit(usize),
}

fn rhs(s: [f64; 4]) -> [f64; 4] {
    let g = spray_raw(1.0, s);
    [s[2], s[3], -2.0 * g[0], -2.0 * g[1]]
}

fn rk4(s: [f64; 4], h: f64) -> [f64; 4] {
    let add = |a: [f64; 4], k: [f64; 4], c: f64| std::array::from_fn(|i| a[i] + c * k[i]);
    let k1 = rhs(s);
    let k2 = rhs(add(s, k1, 0.5 * h));
    let k3 = rhs(add(s, k2, 0.5 * h));
    let k4 = rhs(add(s, k3, h));
    std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Integrates `ẍ + 2G(x, ẋ) = 0` from `x0` with initial direction `xi0`,
/// rescaled to unit Finsler speed, up to arclength `t_end`.
pub fn integrate_geodesic(
    x0: &DiscPoint,
    xi0: TangentVector,
    t_end: f64,
    config: &IntegratorConfig,
) -> std::result::Result<GeodesicPath, IntegrationError> {
    config.validate()?;
    xi0.require_nonzero()?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(
            GeometryError::InvalidArgument(format!("t_end must be positive, got {t_end}")).into(),
        );
    }
    let limit = 1.0 - config.boundary_margin;
    x0.require_radius(limit)?;
    let v0 = (1.0 / finsler_norm(x0, xi0)) * xi0;
    let mut path = GeodesicPath {
        samples: vec![GeodesicSample {
            t: 0.0,
            x: *x0,
            v: v0,
        }],
        step: config.step,
        method: "rk4",
    };
    let mut state = [x0.x1(), x0.x2(), v0.xi1, v0.xi2];
    let mut t = 0.0;
    let mut steps = 0;
    while t_end - t > 1e-12 * config.step {
        if steps == config.max_steps {
            return Err(IntegrationError::StepLimit(steps));
        }
        let h = config.step.min(t_end - t);
        let next = rk4(state, h);
        let t_next = if h < config.step { t_end } else { t + h };
        if next.iter().any(|c| !c.is_finite()) || next[0].hypot(next[1]) > limit {
            return Err(IntegrationError::BoundaryExit {
                path,
                t: t_next,
                limit,
            });
        }
        state = next;
        t = t_next;
        steps += 1;
        path.samples.push(GeodesicSample {
            t,
            x: DiscPoint::new(state[0], state[1])?,
            v: TangentVector::new(state[2], state[3]),
        });
    }
    Ok(path)
}

/// A curve sampled at uniform parameter spacing `dt`, with its velocity.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    pub points: Vec<DiscPoint>,
    pub velocities: Vec<TangentVector>,
    pub dt: f64,
}

impl SampledCurve {
    /// Straight segment from `z1` to `z2` on the parameter interval `[0, 1]`.
    pub fn segment(z1: &DiscPoint, z2: &DiscPoint, n: usize) -> Result<SampledCurve> {
        if n == 0 {
            return Err(GeometryError::InvalidArgument(
                "need at least one interval".into(),
            ));
        }
        let (a, b) = (z1.coords(), z2.coords());
        let v = TangentVector::new(b[0] - a[0], b[1] - a[1]);
        let mut points = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let s = k as f64 / n as f64;
            points.push(match k {
                0 => *z1,
                _ if k == n => *z2,
                _ => DiscPoint::new(a[0] + s * v.xi1, a[1] + s * v.xi2)?,
            });
        }
        Ok(SampledCurve {
            points,
            velocities: vec![v; n + 1],
            dt: 1.0 / n as f64,
        })
    }

    pub fn coords(&self) -> Vec<[f64; 2]> {
        self.points.iter().map(DiscPoint::coords).collect()
    }
}

/// `∫ F(γ, γ̇) dt` by composite Simpson quadrature on the sample grid. An odd
/// interval count closes with the 3/8 rule on the last three intervals.
pub fn finsler_length(curve: &SampledCurve) -> Result<f64> {
    let n = curve.points.len();
    if n < 2 || curve.velocities.len() != n {
        return Err(GeometryError::InvalidArgument(
            "curve needs at least two samples with matching velocities".into(),
        ));
    }
    let f: Vec<f64> = curve
        .points
        .iter()
        .zip(&curve.velocities)
        .map(|(x, v)| norm_raw(x.coords(), v.components()))
        .collect();
    let h = curve.dt;
    let intervals = n - 1;
    if intervals == 1 {
        return Ok(0.5 * h * (f[0] + f[1]));
    }
    let (simpson_end, tail) = if intervals % 2 == 0 {
        (intervals, 0.0)
    } else {
        let k = intervals - 3;
        (
            k,
            3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]),
        )
    };
    let mut sum = 0.0;
    for i in (0..simpson_end).step_by(2) {
        sum += f[i] + 4.0 * f[i + 1] + f[i + 2];
    }
    Ok(h / 3.0 * sum + tail)
}

/// `n + 1` samples of the hyperbolic geodesic from `z1` to `z2` on the
/// parameter interval `[0, 1]`: uniform in angle on circles, linear on
/// diameters. Endpoints are copied exactly.
pub fn hyperbolic_segment(z1: &DiscPoint, z2: &DiscPoint, n: usize) -> Result<SampledCurve> {
    if n < 16 {
        return Err(GeometryError::InvalidArgument(format!(
            "need n >= 16, got {n}"
        )));
    }
    match geodesic_arc(z1, z2)? {
        GeodesicArc::Diameter { .. } => SampledCurve::segment(z1, z2, n),
        GeodesicArc::OrthoCircle { center, radius } => {
            let angle = |p: &DiscPoint| (p.x2() - center[1]).atan2(p.x1() - center[0]);
            let theta1 = angle(z1);
            let sweep = angle_difference(angle(z2), theta1);
            let mut points = Vec::with_capacity(n + 1);
            let mut velocities = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let th = theta1 + sweep * k as f64 / n as f64;
                let (sin, cos) = th.sin_cos();
                points.push(match k {
                    0 => *z1,
                    _ if k == n => *z2,
                    _ => DiscPoint::new(center[0] + radius * cos, center[1] + radius * sin)?,
                });
                velocities.push(TangentVector::new(
                    -radius * sweep * sin,
                    radius * sweep * cos,
                ));
            }
            Ok(SampledCurve {
                points,
                velocities,
                dt: 1.0 / n as f64,
            })
        }
    }
}

/// Finsler length of the hyperbolic segment from `z1` to `z2`.
pub fn distance_via_length(z1: &DiscPoint, z2: &DiscPoint, n: usize) -> Result<f64> {
    if n < 64 {
        return Err(GeometryError::InvalidArgument(format!(
            "need n >= 64, got {n}"
        )));
    }
    finsler_length(&hyperbolic_segment(z1, z2, n)?)
}

/// Largest carrier residual over a set of points.
pub fn trajectory_residual(points: &[[f64; 2]], arc: &GeodesicArc) -> f64 {
    points.iter().map(|p| arc.residual(*p)).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weakmetric::apollonian_distance;

    fn p(x1: f64, x2: f64) -> DiscPoint {
        DiscPoint::new(x1, x2).unwrap()
    }

    #[test]
    fn radial_geodesic_stays_on_axis() {
        let path = integrate_geodesic(
            &DiscPoint::ORIGIN,
            TangentVector::new(1.0, 0.0),
            1.0,
            &IntegratorConfig::default(),
        )
        .unwrap();
        assert!(path
            .samples
            .iter()
            .all(|s| s.x.x2().abs() < 1e-10 && s.x.x1() >= 0.0));
        assert!(path.speed_drift() < 1e-8);
        // unit speed on the axis means ẋ = 1 − x
        let end = path.samples.last().unwrap();
        assert!((end.x.x1() - (1.0 - (-1.0f64).exp())).abs() < 1e-10);
    }

    #[test]
    fn geodesic_follows_orthogonal_circle() {
        let (a, b) = (p(0.0, 0.5), p(0.5, 0.0));
        let arc = geodesic_arc(&a, &b).unwrap();
        let start = hyperbolic_segment(&a, &b, 16).unwrap().velocities[0];
        let path = integrate_geodesic(&a, start, 0.8, &IntegratorConfig::default()).unwrap();
        assert!(trajectory_residual(&path.points(), &arc) < 1e-6);
        assert!(path.speed_drift() < 1e-8);
    }

    #[test]
    fn halving_step_is_fourth_order() {
        let (a, b) = (p(0.0, 0.5), p(0.5, 0.0));
        let arc = geodesic_arc(&a, &b).unwrap();
        let start = hyperbolic_segment(&a, &b, 16).unwrap().velocities[0];
        let residual = |step: f64| {
            let config = IntegratorConfig {
                step,
                ..IntegratorConfig::default()
            };
            let path = integrate_geodesic(&a, start, 1.0, &config).unwrap();
            trajectory_residual(&path.points(), &arc)
        };
        let ratio = residual(0.04) / residual(0.02);
        assert!((10.0..24.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn boundary_exit_carries_partial_path() {
        let err = integrate_geodesic(
            &DiscPoint::ORIGIN,
            TangentVector::new(0.0, 1.0),
            50.0,
            &IntegratorConfig::default(),
        )
        .unwrap_err();
        match err {
            IntegrationError::BoundaryExit { path, limit, .. } => {
                assert!(path.samples.len() > 1);
                assert!(path.samples.iter().all(|s| s.x.norm() <= limit));
            }
            other => panic!("{other:?}"),
        }
        assert!(integrate_geodesic(
            &DiscPoint::ORIGIN,
            TangentVector::ZERO,
            1.0,
            &IntegratorConfig::default()
        )
        .is_err());
    }

    #[test]
    fn radial_lengths() {
        let (o, q) = (DiscPoint::ORIGIN, p(0.5, 0.0));
        let out = finsler_length(&SampledCurve::segment(&o, &q, 256).unwrap()).unwrap();
        let back = finsler_length(&SampledCurve::segment(&q, &o, 256).unwrap()).unwrap();
        assert!((out - 2f64.ln()).abs() < 1e-8);
        assert!((back - 1.5f64.ln()).abs() < 1e-8);
        assert!((distance_via_length(&o, &q, 256).unwrap() - 2f64.ln()).abs() < 1e-8);
        assert!((distance_via_length(&q, &o, 256).unwrap() - 1.5f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn constant_curve_has_zero_length() {
        let c = SampledCurve::segment(&p(0.2, 0.1), &p(0.2, 0.1), 10).unwrap();
        assert_eq!(finsler_length(&c).unwrap(), 0.0);
    }

    #[test]
    fn odd_interval_counts_are_handled() {
        let (o, q) = (DiscPoint::ORIGIN, p(0.5, 0.0));
        let l = finsler_length(&SampledCurve::segment(&o, &q, 255).unwrap()).unwrap();
        assert!((l - 2f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn hyperbolic_segment_lies_on_carrier() {
        let (a, b) = (p(0.0, 0.5), p(0.5, 0.0));
        let c = hyperbolic_segment(&a, &b, 64).unwrap();
        assert_eq!(c.points[0], a);
        assert_eq!(*c.points.last().unwrap(), b);
        for q in &c.points {
            assert!(((q.x1() - 1.25).hypot(q.x2() - 1.25) - 2.125f64.sqrt()).abs() < 1e-12);
        }
        assert!(hyperbolic_segment(&a, &a, 64).is_err());
    }

    #[test]
    fn length_matches_distance_and_beats_chord() {
        let (a, b) = (p(0.0, 0.5), p(0.5, 0.0));
        let d = apollonian_distance(&a, &b);
        assert!((distance_via_length(&a, &b, 1024).unwrap() - d).abs() < 1e-6);
        let chord = SampledCurve::segment(&a, &b, 1024).unwrap();
        assert!(finsler_length(&chord).unwrap() > d);
        let arc = geodesic_arc(&a, &b).unwrap();
        assert!(trajectory_residual(&chord.coords(), &arc) > 1e-3);
    }
}
