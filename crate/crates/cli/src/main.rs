mod figure;
mod record;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use apollonian::calculus::{
    self, curvature_report, s_curvature, spray_closed, spray_numeric, tau_printed_forms,
    RiemannRoute, SRoute, NUMERIC_RADIUS,
};
use apollonian::finsler::{finsler_norm, FIRST_DERIVATIVE_RADIUS};
use apollonian::geodesic::{integrate_geodesic, trajectory_residual, GeodesicPath};
use apollonian::point::max_abs_diff;
use apollonian::validation::{Validator, DEFAULT_SEED};
use apollonian::weakmetric::{barbilian_distance, geodesic_arc, supremum_points};
use apollonian::{
    apollonian_distance, DiscPoint, GeodesicArc, GeometryError, GridSpec, IntegrationError,
    IntegratorConfig, TangentVector,
};

use record::{num, Format, Record};

/// Apollonian weak metric and its Finsler geometry on the unit disc.
#[derive(Parser)]
#[command(name = "apollonian", version)]
struct Cli {
    /// Output layout for records.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distances both ways, Barbilian value, supremum points and carrier.
    Dist {
        #[arg(allow_negative_numbers = true)]
        x1: f64,
        #[arg(allow_negative_numbers = true)]
        x2: f64,
        #[arg(allow_negative_numbers = true)]
        y1: f64,
        #[arg(allow_negative_numbers = true)]
        y2: f64,
    },
    /// S, Riemann, Ricci and flag curvature at one flag.
    Curvature {
        #[arg(allow_negative_numbers = true)]
        x1: f64,
        #[arg(allow_negative_numbers = true)]
        x2: f64,
        #[arg(allow_negative_numbers = true)]
        xi1: f64,
        #[arg(allow_negative_numbers = true)]
        xi2: f64,
    },
    /// Integrate a unit-speed geodesic and write the sampled path.
    Geodesic {
        #[arg(allow_negative_numbers = true)]
        x1: f64,
        #[arg(allow_negative_numbers = true)]
        x2: f64,
        #[arg(allow_negative_numbers = true)]
        xi1: f64,
        #[arg(allow_negative_numbers = true)]
        xi2: f64,
        /// Finsler arclength to integrate.
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 0.05)]
        boundary_margin: f64,
        /// Keep every k-th sample in the output.
        #[arg(long, default_value_t = 10)]
        every: usize,
    },
    /// Run every cross-check over a seeded grid.
    Validate {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// RADIIxANGLESxDIRECTIONS[@MAX_RADIUS]
        #[arg(long, default_value = "9x16x16@0.9")]
        grid: GridSpec,
        /// Multiplies every tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        /// Flip the sign of τ_k in the closed Riemann route.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Write an SVG figure.
    Figure {
        #[arg(value_enum)]
        kind: FigureKind,
        /// Base points for `indicatrix`, as x1,x2.
        #[arg(long, num_args = 1.., value_parser = parse_pair, allow_negative_numbers = true)]
        points: Vec<[f64; 2]>,
        /// Point pairs for `geodesics`, as x1,x2 y1,y2; repeatable.
        #[arg(long, num_args = 2, value_parser = parse_pair, allow_negative_numbers = true)]
        pair: Vec<[f64; 2]>,
        /// Direction for `curvature-field`, as xi1,xi2.
        #[arg(long, value_parser = parse_pair, default_value = "1,0", allow_negative_numbers = true)]
        direction: [f64; 2],
        /// Cells per side for `curvature-field`.
        #[arg(long, default_value_t = 48)]
        cells: usize,
        /// Use the published Ricci formula in `curvature-field`.
        #[arg(long)]
        printed: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FigureKind {
    Indicatrix,
    Geodesics,
    CurvatureField,
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected x1,x2 but got `{s}`"))?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok([parse(a)?, parse(b)?])
}

enum Failure {
    Domain(String),
    Validation,
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(format!("io: {e}"))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn point(x1: f64, x2: f64) -> Result<DiscPoint, Failure> {
    Ok(DiscPoint::new(x1, x2)?)
}

fn arc_fields(r: &mut Record, key: &str, arc: &GeodesicArc) {
    match arc {
        GeodesicArc::Diameter { direction } => {
            r.text(format!("{key}.kind"), "diameter");
            r.pair(&format!("{key}.direction"), *direction);
        }
        GeodesicArc::OrthoCircle { center, radius } => {
            r.text(format!("{key}.kind"), "circle");
            r.pair(&format!("{key}.center"), *center);
            r.num(format!("{key}.radius"), *radius);
        }
    }
}

fn cmd_dist(z1: DiscPoint, z2: DiscPoint) -> Record {
    let mut r = Record::new();
    r.pair("z1", z1.coords()).pair("z2", z2.coords());
    r.num("forward", apollonian_distance(&z1, &z2));
    r.num("backward", apollonian_distance(&z2, &z1));
    r.num("barbilian", barbilian_distance(&z1, &z2));
    match supremum_points(&z1, &z2) {
        Ok(s) => {
            r.pair("a_plus", s.a_plus.coords());
            r.pair("a_minus", s.a_minus.coords());
            r.num("supremum", s.m_value);
            arc_fields(&mut r, "arc", &s.arc);
        }
        Err(e) => {
            r.text("a_plus", "degenerate");
            r.text("a_minus", "degenerate");
            r.text("arc", "degenerate");
            r.text("note", e.to_string());
        }
    }
    r
}

fn cmd_curvature(x: DiscPoint, xi: TangentVector) -> Result<Record, Failure> {
    let c = curvature_report(&x, xi)?;
    let mut r = Record::new();
    r.pair("x", x.coords()).pair("xi", xi.components());
    r.num("F", c.f_value);
    r.num("S", c.s_curv);
    r.num("S_minus_three_halves_F", c.s_curv - 1.5 * c.f_value);
    r.num("Ric", c.ricci);
    r.num("K", c.flag);
    r.num("K_plus_quarter", c.flag + 0.25);
    r.num("two_minus_K", 2.0 - c.flag);
    r.num("Ric_printed", c.ricci_printed);
    r.num("K_printed", c.flag_printed);
    r.matrix("riemann", &c.riemann);
    r.matrix("riemann_bar", &c.riemann_bar);
    r.num("phi", c.phi).num("psi", c.psi);
    r.pair("tau", c.tau);
    r.num("sigma_bh", c.sigma_bh)
        .num("distortion", c.distortion);
    r.num("rho", c.rho_log).num("rho_0", c.rho_0);

    let closed = spray_closed(&x, xi)?;
    r.pair("spray", closed.g_spray);
    let (tau_statement, tau_proof) = tau_printed_forms(&x, xi)?.residuals();
    r.num("residual.tau_statement_form", tau_statement);
    r.num("residual.tau_proof_form", tau_proof);
    r.num(
        "residual.s_general",
        (s_curvature(&x, xi, SRoute::General)? - c.s_curv).abs(),
    );
    if x.norm() <= FIRST_DERIVATIVE_RADIUS {
        r.num(
            "residual.spray_dual_path",
            closed.relative_difference(&spray_numeric(&x, xi)?),
        );
        r.num(
            "residual.s_spray",
            (s_curvature(&x, xi, SRoute::Spray)? - c.s_curv).abs(),
        );
    } else {
        r.text("residual.spray_dual_path", "skipped");
        r.text("residual.s_spray", "skipped");
    }
    if x.norm() <= NUMERIC_RADIUS {
        let numeric = calculus::riemann_curvature(&x, xi, RiemannRoute::Numeric)?;
        r.num(
            "residual.riemann_routes",
            max_abs_diff(&c.riemann, &numeric) / (c.f_value * c.f_value),
        );
    } else {
        r.text("residual.riemann_routes", "skipped");
    }
    Ok(r)
}

fn path_table(path: &GeodesicPath, arc: Option<&GeodesicArc>, every: usize) -> String {
    let mut out = String::from("t\tx1\tx2\tv1\tv2\tF\tresidual\n");
    let last = path.samples.len().saturating_sub(1);
    for (k, s) in path.samples.iter().enumerate() {
        if k % every.max(1) != 0 && k != last {
            continue;
        }
        let residual = arc.map_or(0.0, |a| a.residual(s.x.coords()));
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            num(s.t),
            num(s.x.x1()),
            num(s.x.x2()),
            num(s.v.xi1),
            num(s.v.xi2),
            num(finsler_norm(&s.x, s.v)),
            num(residual)
        ));
    }
    out
}

fn carrier_of(path: &GeodesicPath) -> Option<GeodesicArc> {
    let first = path.samples.first()?.x;
    let last = path.samples.last()?.x;
    geodesic_arc(&first, &last).ok()
}

fn cmd_geodesic(
    x0: DiscPoint,
    xi0: TangentVector,
    t_end: f64,
    config: IntegratorConfig,
    every: usize,
    cli: &Cli,
) -> Result<(), Failure> {
    let (path, exit) = match integrate_geodesic(&x0, xi0, t_end, &config) {
        Ok(path) => (path, None),
        Err(IntegrationError::BoundaryExit { path, t, limit }) => (
            path,
            Some(format!(
                "boundary exit at t = {t}: |x| passed {limit}; partial path written"
            )),
        ),
        Err(IntegrationError::Geometry(e)) => return Err(e.into()),
        Err(e) => return Err(Failure::Domain(e.to_string())),
    };
    let arc = carrier_of(&path);
    let table = path_table(&path, arc.as_ref(), every);
    let pts = path.points();
    if let Some(out) = &cli.out {
        fs::write(out, &table)?;
        let mut r = Record::new();
        r.text("samples", path.samples.len().to_string());
        r.num("t_final", path.samples.last().map_or(0.0, |s| s.t));
        r.num("speed_drift", path.speed_drift());
        r.num(
            "max_residual",
            arc.map_or(0.0, |a| trajectory_residual(&pts, &a)),
        );
        if let Some(a) = &arc {
            arc_fields(&mut r, "arc", a);
        }
        r.text("path", out.display().to_string());
        print!("{}", r.render(cli.format));
    } else {
        print!("{table}");
    }
    match exit {
        Some(msg) => Err(Failure::Domain(msg)),
        None => Ok(()),
    }
}

fn cmd_figure(
    kind: FigureKind,
    points: &[[f64; 2]],
    pairs: &[[f64; 2]],
    direction: [f64; 2],
    cells: usize,
    printed: bool,
) -> Result<String, Failure> {
    match kind {
        FigureKind::Indicatrix => {
            let pts = if points.is_empty() {
                &figure::DEFAULT_POINTS[..]
            } else {
                points
            };
            let pts = pts
                .iter()
                .map(|p| point(p[0], p[1]))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(figure::indicatrix(&pts))
        }
        FigureKind::Geodesics => {
            let defaults = [
                [0.0, 0.5],
                [0.5, 0.0],
                [0.0, 0.0],
                [0.5, 0.0],
                [-0.6, -0.2],
                [0.3, -0.7],
            ];
            let flat = if pairs.is_empty() {
                &defaults[..]
            } else {
                pairs
            };
            let pairs = flat
                .chunks(2)
                .map(|c| Ok((point(c[0][0], c[0][1])?, point(c[1][0], c[1][1])?)))
                .collect::<Result<Vec<_>, Failure>>()?;
            Ok(figure::geodesics(&pairs)?)
        }
        FigureKind::CurvatureField => {
            if cells == 0 {
                return Err(Failure::Domain("cells must be positive".into()));
            }
            let v = TangentVector::from(direction);
            v.require_nonzero()?;
            Ok(figure::curvature_field(v, cells, 0.95, printed)?)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Dist { x1, x2, y1, y2 } => {
            let r = cmd_dist(point(*x1, *x2)?, point(*y1, *y2)?);
            emit(out, &r.render(cli.format))
        }
        Command::Curvature { x1, x2, xi1, xi2 } => {
            let r = cmd_curvature(point(*x1, *x2)?, TangentVector::new(*xi1, *xi2))?;
            emit(out, &r.render(cli.format))
        }
        Command::Geodesic {
            x1,
            x2,
            xi1,
            xi2,
            t_end,
            step,
            boundary_margin,
            every,
        } => {
            let config = IntegratorConfig {
                step: *step,
                boundary_margin: *boundary_margin,
                ..IntegratorConfig::default()
            };
            cmd_geodesic(
                point(*x1, *x2)?,
                TangentVector::new(*xi1, *xi2),
                *t_end,
                config,
                *every,
                cli,
            )
        }
        Command::Validate {
            seed,
            grid,
            tol_scale,
            inject_fault,
        } => {
            if !tol_scale.is_finite() || *tol_scale <= 0.0 {
                return Err(Failure::Domain(format!(
                    "tol-scale must be positive, got {tol_scale}"
                )));
            }
            let report = Validator {
                seed: *seed,
                grid: *grid,
                tol_scale: *tol_scale,
                fault: *inject_fault,
            }
            .run();
            let body = match cli.format {
                Format::Text => report.body(),
                Format::Tabular => {
                    let mut t = String::from("check\tgrid\tmax_residual\ttolerance\tpassed\n");
                    for c in &report.checks {
                        t.push_str(&format!(
                            "{}\t{}\t{}\t{}\t{}\n",
                            c.id,
                            c.grid,
                            num(c.max_residual),
                            num(c.tolerance),
                            c.passed
                        ));
                    }
                    t
                }
            };
            emit(out, &body)?;
            eprintln!("wall time {:.3} s", report.wall_time.as_secs_f64());
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::Validation)
            }
        }
        Command::Figure {
            kind,
            points,
            pair,
            direction,
            cells,
            printed,
        } => {
            let svg = cmd_figure(*kind, points, pair, *direction, *cells, *printed)?;
            emit(out, &svg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation) => ExitCode::from(1),
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
