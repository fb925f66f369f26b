//! Seeded, deterministic validation sweep over every cross-checked property.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::calculus::{
    self, s_curvature, spray_closed, spray_numeric, tau_printed_forms, RandersEngine, RiemannRoute,
    SRoute, NUMERIC_RADIUS,
};
use crate::error::{GeometryError, Result};
use crate::finsler::{
    finsler_norm, fundamental_tensor, indicatrix_ellipse, randers_split, symmetrized_norm,
    TensorMode,
};
use crate::geodesic::{distance_via_length, integrate_geodesic, IntegratorConfig};
use crate::navigation::{
    hyperboloid_map, hyperboloid_pushforward, lorentz_inner, pullback_check, zermelo_data,
    zermelo_reconstruct,
};
use crate::point::{angle_difference, max_abs_diff, trace, DiscPoint, TangentVector};
use crate::weakmetric::{
    apollonian_distance, barbilian_distance, brute_force_supremum, supremum_points,
};

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Polar grid: `radii` rings up to `max_radius` (plus the origin), `angles`
/// base points per ring and `directions` unit tangent vectors per point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub radii: usize,
    pub angles: usize,
    pub directions: usize,
    pub max_radius: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            radii: 9,
            angles: 16,
            directions: 16,
            max_radius: 0.9,
        }
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<DiscPoint> {
        let mut out = vec![DiscPoint::ORIGIN];
        for k in 1..=self.radii {
            let r = self.max_radius * k as f64 / self.radii as f64;
            for j in 0..self.angles {
                let theta = TAU * j as f64 / self.angles as f64;
                out.push(DiscPoint::from_polar(r, theta).expect("grid radius below one"));
            }
        }
        out
    }

    pub fn directions(&self) -> Vec<TangentVector> {
        (0..self.directions)
            .map(|j| TangentVector::from_angle(TAU * j as f64 / self.directions as f64))
            .collect()
    }

    /// Every `(x, ξ)` pair of the grid.
    pub fn flags(&self) -> Vec<(DiscPoint, TangentVector)> {
        let dirs = self.directions();
        self.points()
            .into_iter()
            .flat_map(|x| dirs.iter().map(move |&v| (x, v)))
            .collect()
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{}x{}@{}",
            self.radii, self.angles, self.directions, self.max_radius
        )
    }
}

impl FromStr for GridSpec {
    type Err = GeometryError;

    /// `RADIIxANGLESxDIRECTIONS[@MAX_RADIUS]`, e.g. `9x16x16@0.9`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || GeometryError::InvalidArgument(format!("grid spec `{s}` is not RxAxD[@MAX]"));
        let (counts, max) = match s.split_once('@') {
            Some((c, m)) => (c, m.trim().parse::<f64>().map_err(|_| bad())?),
            None => (s, 0.9),
        };
        let parts: Vec<usize> = counts
            .split('x')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let [radii, angles, directions] = parts[..] else {
            return Err(bad());
        };
        if radii == 0 || angles == 0 || directions == 0 || !(max > 0.0 && max < 1.0) {
            return Err(bad());
        }
        Ok(GridSpec {
            radii,
            angles,
            directions,
            max_radius: max,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub id: &'static str,
    pub grid: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub seed: u64,
    pub grid: GridSpec,
    pub fault: bool,
    pub checks: Vec<CheckRecord>,
    pub wall_time: Duration,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// The report without the wall time; identical for identical inputs.
    pub fn body(&self) -> String {
        let mut out = format!(
            "seed {}\ngrid {}\nfault {}\n",
            self.seed, self.grid, self.fault
        );
        for c in &self.checks {
            out.push_str(&format!(
                "{:<28} {:<18} residual {:.16e} tol {:.16e} {}\n",
                c.id,
                c.grid,
                c.max_residual,
                c.tolerance,
                if c.passed { "PASS" } else { "FAIL" }
            ));
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "summary {} checks, {} failed\n",
            self.checks.len(),
            failed
        ));
        out
    }
}

/// Uniform point in the disc of radius `max_radius`.
pub fn random_point<R: Rng>(rng: &mut R, max_radius: f64) -> DiscPoint {
    let r = max_radius * rng.gen::<f64>().sqrt();
    DiscPoint::from_polar(r, rng.gen_range(0.0..TAU)).expect("radius below one")
}

pub fn random_pair<R: Rng>(rng: &mut R, max_radius: f64) -> (DiscPoint, DiscPoint) {
    loop {
        let (a, b) = (random_point(rng, max_radius), random_point(rng, max_radius));
        if a.distance_to(&b) > 1e-3 {
            return (a, b);
        }
    }
}

pub struct Validator {
    pub seed: u64,
    pub grid: GridSpec,
    pub tol_scale: f64,
    /// Flip the sign of `τ_k` in the closed Riemann route.
    pub fault: bool,
}

impl Default for Validator {
    fn default() -> Self {
        Validator {
            seed: DEFAULT_SEED,
            grid: GridSpec::default(),
            tol_scale: 1.0,
            fault: false,
        }
    }
}

type FlagCheck = (
    &'static str,
    f64,
    fn(&DiscPoint, TangentVector, &RandersEngine) -> f64,
);

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn ok_or_inf(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::INFINITY)
}

/// Residual checks evaluated on every grid flag. Each returns the residual
/// of one flag; the report keeps the maximum.
fn flag_checks() -> Vec<FlagCheck> {
    vec![
        ("tensor.dual_path", 1e-6, |x, v, _| {
            let c = fundamental_tensor(x, v, TensorMode::Closed).unwrap();
            c.relative_difference(&fundamental_tensor(x, v, TensorMode::Numeric).unwrap())
        }),
        ("tensor.positive_definite", 0.0, |x, v, _| {
            let c = fundamental_tensor(x, v, TensorMode::Closed).unwrap();
            if c.is_positive_definite() {
                0.0
            } else {
                1.0
            }
        }),
        ("tensor.euler", 1e-10, |x, v, _| {
            let c = fundamental_tensor(x, v, TensorMode::Closed).unwrap();
            let f2 = finsler_norm(x, v).powi(2);
            (c.inner(v, v) - f2).abs() / f2
        }),
        ("symmetrization.alpha", 1e-14, |x, v, _| {
            let a = randers_split(x, v).alpha;
            (symmetrized_norm(x, v) - a).abs() / a
        }),
        ("spray.dual_path", 1e-5, |x, v, _| {
            if x.norm() > NUMERIC_RADIUS + 1e-12 {
                return 0.0;
            }
            spray_closed(x, v)
                .unwrap()
                .relative_difference(&spray_numeric(x, v).unwrap())
        }),
        ("spray.homogeneity", 1e-12, |x, v, _| {
            let one = spray_closed(x, v).unwrap().g_spray;
            let two = spray_closed(x, 2.0 * v).unwrap().g_spray;
            (0..2)
                .map(|i| (two[i] - 4.0 * one[i]).abs() / (1.0 + 4.0 * one[i].abs()))
                .fold(0.0, f64::max)
        }),
        ("s.routes", 1e-5, |x, v, _| {
            let c = s_curvature(x, v, SRoute::Closed).unwrap();
            let g = s_curvature(x, v, SRoute::General).unwrap();
            let s = ok_or_inf(s_curvature(x, v, SRoute::Spray));
            rel(g, c).max(rel(s, c))
        }),
        ("s.lower_bound", 1e-10, |x, v, _| {
            let gap = s_curvature(x, v, SRoute::Closed).unwrap() - 1.5 * finsler_norm(x, v);
            (-gap).max(0.0)
        }),
        ("s.equality_when_parallel", 1e-9, |x, v, _| {
            let cross = x.x1() * v.xi2 - x.x2() * v.xi1;
            if cross.abs() > 1e-12 {
                return 0.0;
            }
            (s_curvature(x, v, SRoute::Closed).unwrap() - 1.5 * finsler_norm(x, v)).abs()
        }),
        ("tau.statement_form", 1e-10, |x, v, _| {
            let t = tau_printed_forms(x, v).unwrap();
            let size = t.definition[0].abs().max(t.definition[1].abs()).max(1.0);
            t.residuals().0 / size
        }),
        ("phi.two_routes", 1e-10, |x, v, _| {
            let closed = calculus::phi_psi_tau(x, v).unwrap();
            let contracted = RandersEngine::APOLLONIAN.phi_psi_tau(x, v).unwrap();
            rel(closed.phi, contracted.phi).max(rel(closed.psi, contracted.psi))
        }),
        ("riemann.routes", 1e-4, |x, v, e| {
            if x.norm() > NUMERIC_RADIUS + 1e-12 {
                return 0.0;
            }
            let c = e.riemann(x, v, RiemannRoute::Closed).unwrap();
            let n = e.riemann(x, v, RiemannRoute::Numeric).unwrap();
            max_abs_diff(&c, &n) / e.norm(x, v).powi(2)
        }),
        ("riemann.contraction", 1e-8, |x, v, e| {
            let r = e.riemann(x, v, RiemannRoute::Closed).unwrap();
            let c = v.components();
            let scale = e.norm(x, v).powi(2).max(1.0);
            r.iter()
                .map(|row| (row[0] * c[0] + row[1] * c[1]).abs() / scale)
                .fold(0.0, f64::max)
        }),
        ("ricci.trace", 1e-10, |x, v, e| {
            let r = e.riemann(x, v, RiemannRoute::Closed).unwrap();
            rel(trace(&r), calculus::ricci(x, v).unwrap())
        }),
        ("flag.lower_bound", 1e-10, |x, v, _| {
            (-0.25 - calculus::flag_curvature(x, v).unwrap()).max(0.0)
        }),
        ("flag.upper_bound", 0.0, |x, v, _| {
            let k = calculus::flag_curvature(x, v).unwrap();
            if k < 2.0 {
                0.0
            } else {
                k - 2.0 + f64::MIN_POSITIVE
            }
        }),
        ("flag_printed.lower_bound", 1e-10, |x, v, _| {
            (-0.25 - calculus::flag_printed(x, v).unwrap()).max(0.0)
        }),
        ("riemannian_limit.minus_one", 1e-6, |x, v, _| {
            (RandersEngine::RIEMANNIAN.flag(x, v).unwrap() + 1.0).abs()
        }),
        ("riemannian_limit.alpha", 1e-6, |x, v, _| {
            let e = RandersEngine::RIEMANNIAN;
            if x.norm() > NUMERIC_RADIUS + 1e-12 {
                return 0.0;
            }
            let n = e.riemann(x, v, RiemannRoute::Numeric).unwrap();
            (trace(&n) / e.norm(x, v).powi(2) - calculus::ALPHA_CURVATURE).abs()
        }),
        ("zermelo.round_trip", 1e-12, |x, v, _| {
            let f = finsler_norm(x, v);
            (zermelo_reconstruct(&zermelo_data(x), v).unwrap() - f).abs() / f
        }),
        ("zermelo.wind_norm", 1e-12, |x, _, _| {
            (zermelo_data(x).wind_norm_sq - x.norm_sq()).abs()
        }),
        ("hyperboloid.constraint", 1e-12, |x, _, _| {
            hyperboloid_map(x).constraint_residual().abs()
        }),
        ("hyperboloid.tangent", 1e-10, |x, v, _| {
            let d = hyperboloid_pushforward(x, v);
            let scale = d.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
            lorentz_inner(d, hyperboloid_map(x).coords()).abs() / scale
        }),
        ("pullback.ratio_two", 1e-10, |x, v, _| {
            let (pulled, twice) = pullback_check(x, v).unwrap();
            (pulled / twice - 1.0).abs() * 2.0
        }),
        ("indicatrix.discriminant", 1e-12, |x, _, _| {
            (indicatrix_ellipse(x).discriminant() + 4.0 * x.gap()).abs()
        }),
        ("indicatrix.eccentricity", 1e-10, |x, _, _| {
            (indicatrix_ellipse(x).eccentricity - x.norm()).abs()
        }),
    ]
}

impl Validator {
    pub fn run(&self) -> ValidationReport {
        let start = Instant::now();
        let engine = if self.fault {
            RandersEngine::FLIPPED_TAU
        } else {
            RandersEngine::APOLLONIAN
        };
        let checks = flag_checks();
        let flags = self.grid.flags();
        let per_flag: Vec<Vec<f64>> = flags
            .par_iter()
            .map(|(x, v)| checks.iter().map(|c| (c.2)(x, *v, &engine)).collect())
            .collect();
        let grid_label = format!("grid {}", self.grid);
        let mut records: Vec<CheckRecord> = checks
            .iter()
            .enumerate()
            .map(|(k, (id, tol, _))| {
                let worst = per_flag.iter().map(|r| r[k]).fold(0.0, |m: f64, r| {
                    if r.is_nan() {
                        f64::INFINITY
                    } else {
                        m.max(r)
                    }
                });
                self.record(id, grid_label.clone(), worst, *tol)
            })
            .collect();
        records.extend(self.sampled_checks());
        ValidationReport {
            seed: self.seed,
            grid: self.grid,
            fault: self.fault,
            checks: records,
            wall_time: start.elapsed(),
        }
    }

    fn record(&self, id: &'static str, grid: String, max_residual: f64, tol: f64) -> CheckRecord {
        let tolerance = tol * self.tol_scale;
        CheckRecord {
            id,
            grid,
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
        }
    }

    /// Checks over seeded random pairs, triples and geodesic launches.
    fn sampled_checks(&self) -> Vec<CheckRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let pairs: Vec<_> = (0..100).map(|_| random_pair(&mut rng, 0.9)).collect();
        let triples: Vec<_> = (0..10_000)
            .map(|_| {
                (
                    random_point(&mut rng, 0.9),
                    random_point(&mut rng, 0.9),
                    random_point(&mut rng, 0.9),
                )
            })
            .collect();
        let near: Vec<_> = (0..50).map(|_| random_pair(&mut rng, 0.8)).collect();
        let launches: Vec<_> = (0..8)
            .map(|_| {
                (
                    random_point(&mut rng, 0.6),
                    TangentVector::from_angle(rng.gen_range(0.0..TAU)),
                )
            })
            .collect();

        let oracle = pairs
            .par_iter()
            .map(|(a, b)| {
                let brute = brute_force_supremum(a, b, 4096).unwrap();
                (apollonian_distance(a, b) - brute.m_estimate.ln()).abs()
            })
            .reduce(|| 0.0, f64::max);
        let argmax = pairs
            .par_iter()
            .map(|(a, b)| {
                let closed = supremum_points(a, b).unwrap().a_plus.angle();
                let brute = brute_force_supremum(a, b, 4096).unwrap().t_star;
                angle_difference(closed, brute).abs()
            })
            .reduce(|| 0.0, f64::max);
        let identity = pairs
            .iter()
            .map(|(a, _)| apollonian_distance(a, a).abs())
            .fold(0.0, f64::max);
        let triangle = triples
            .par_iter()
            .map(|(x, y, z)| {
                (apollonian_distance(x, z) - apollonian_distance(x, y) - apollonian_distance(y, z))
                    .max(0.0)
            })
            .reduce(|| 0.0, f64::max);
        let barbilian = pairs
            .iter()
            .map(|(a, b)| {
                let avg = 0.5 * (apollonian_distance(a, b) + apollonian_distance(b, a));
                (barbilian_distance(a, b) - avg).abs()
            })
            .fold(0.0, f64::max);
        let length = near
            .par_iter()
            .map(|(a, b)| {
                (distance_via_length(a, b, 1024).unwrap() - apollonian_distance(a, b)).abs()
            })
            .reduce(|| 0.0, f64::max);
        let config = IntegratorConfig::default();
        let (speed, carrier) = launches
            .par_iter()
            .map(|(x, v)| match integrate_geodesic(x, *v, 0.5, &config) {
                Ok(path) => {
                    let pts = path.points();
                    let arc = crate::weakmetric::geodesic_arc(
                        &path.samples[0].x,
                        path.samples.last().map(|s| &s.x).unwrap(),
                    );
                    let res = arc
                        .map(|a| crate::geodesic::trajectory_residual(&pts, &a))
                        .unwrap_or(f64::INFINITY);
                    (path.speed_drift(), res)
                }
                Err(_) => (f64::INFINITY, f64::INFINITY),
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));

        vec![
            self.record("dist.oracle", "pairs 100@0.9".into(), oracle, 1e-9),
            self.record("dist.identity", "pairs 100@0.9".into(), identity, 0.0),
            self.record("dist.triangle", "triples 10000@0.9".into(), triangle, 1e-12),
            self.record("supremum.argmax", "pairs 100@0.9".into(), argmax, 1e-8),
            self.record(
                "barbilian.average",
                "pairs 100@0.9".into(),
                barbilian,
                1e-12,
            ),
            self.record("geodesic.length", "pairs 50@0.8".into(), length, 1e-6),
            self.record("geodesic.unit_speed", "launches 8@0.6".into(), speed, 1e-8),
            self.record("geodesic.carrier", "launches 8@0.6".into(), carrier, 1e-6),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_round_trip() {
        let g: GridSpec = "9x16x16@0.9".parse().unwrap();
        assert_eq!(g, GridSpec::default());
        assert_eq!(g.to_string().parse::<GridSpec>().unwrap(), g);
        assert_eq!("3x4x5".parse::<GridSpec>().unwrap().max_radius, 0.9);
        for bad in ["", "3x4", "3x4x5@1.2", "0x1x1", "axbxc"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
        assert_eq!(g.points().len(), 1 + 9 * 16);
        assert_eq!(g.flags().len(), (1 + 9 * 16) * 16);
    }

    #[test]
    fn small_run_is_deterministic() {
        let v = Validator {
            grid: "2x4x4@0.5".parse().unwrap(),
            ..Validator::default()
        };
        let (a, b) = (v.run(), v.run());
        assert_eq!(a.body(), b.body());
        let failing: Vec<_> = a.failures().map(|c| c.id).collect();
        let expected_failures = ["flag.lower_bound", "riemannian_limit.minus_one"];
        assert!(
            failing.iter().all(|id| expected_failures.contains(id)),
            "{failing:?}"
        );
    }

    #[test]
    fn fault_is_detected() {
        let v = Validator {
            grid: "2x4x4@0.5".parse().unwrap(),
            fault: true,
            ..Validator::default()
        };
        let report = v.run();
        assert!(report.failures().any(|c| c.id == "riemann.routes"));
    }
}
