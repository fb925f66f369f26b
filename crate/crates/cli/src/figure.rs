//! Standalone SVG figures drawn in disc coordinates.

use std::f64::consts::TAU;
use std::fmt::Write;

use apollonian::calculus::{flag_curvature, flag_printed};
use apollonian::finsler::indicatrix_ellipse;
use apollonian::geodesic::hyperbolic_segment;
use apollonian::weakmetric::{geodesic_arc, supremum_points};
use apollonian::{DiscPoint, GeodesicArc, Result, TangentVector};

const SIZE: f64 = 640.0;
const SCALE: f64 = 280.0;

/// Default base points for the indicatrix figure.
pub const DEFAULT_POINTS: [[f64; 2]; 3] = [[0.3, 0.3], [0.5, 0.5], [0.68, 0.68]];

const COLORS: [&str; 6] = [
    "#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2c3e50",
];

fn sx(x: f64) -> f64 {
    SIZE / 2.0 + SCALE * x
}

fn sy(y: f64) -> f64 {
    SIZE / 2.0 - SCALE * y
}

struct Svg {
    body: String,
}

impl Svg {
    fn new(title: &str) -> Svg {
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let _ = writeln!(body, "<title>{title}</title>");
        let _ = writeln!(body, r#"<rect width="100%" height="100%" fill="white"/>"#);
        Svg { body }
    }

    fn unit_circle(&mut self) {
        let _ = writeln!(
            self.body,
            r#"<circle id="unit-circle" cx="{:.3}" cy="{:.3}" r="{SCALE:.3}" fill="none" stroke="black" stroke-width="1.5"/>"#,
            sx(0.0),
            sy(0.0)
        );
    }

    fn polyline(&mut self, id: &str, pts: &[[f64; 2]], color: &str, width: f64, closed: bool) {
        let coords: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.3},{:.3}", sx(p[0]), sy(p[1])))
            .collect();
        let tag = if closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            self.body,
            r#"<{tag} id="{id}" points="{}" fill="none" stroke="{color}" stroke-width="{width}"/>"#,
            coords.join(" ")
        );
    }

    fn dot(&mut self, p: [f64; 2], color: &str, r: f64) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{r}" fill="{color}"/>"#,
            sx(p[0]),
            sy(p[1])
        );
    }

    fn label(&mut self, p: [f64; 2], text: &str, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12" fill="{color}">{text}</text>"#,
            sx(p[0]) + 6.0,
            sy(p[1]) - 6.0
        );
    }

    fn rect(&mut self, p: [f64; 2], w: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{fill}"/>"#,
            sx(p[0]),
            sy(p[1] + w),
            SCALE * w,
            SCALE * w
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

/// Indicatrices at the given base points, drawn in `η = x + ξ` coordinates
/// with their foci `±x`.
pub fn indicatrix(points: &[DiscPoint]) -> String {
    let mut svg = Svg::new("Indicatrices of the Apollonian Finsler norm");
    svg.unit_circle();
    for (k, x) in points.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let e = indicatrix_ellipse(x);
        let pts: Vec<[f64; 2]> = (0..256)
            .map(|j| e.point_at(TAU * j as f64 / 256.0))
            .collect();
        svg.polyline(&format!("indicatrix-{k}"), &pts, color, 1.5, true);
        svg.dot(x.coords(), color, 3.0);
        svg.dot(e.focus2, color, 2.0);
        svg.label(x.coords(), &format!("e = {:.4}", e.eccentricity), color);
    }
    svg.finish()
}

fn carrier_points(arc: &GeodesicArc, from: [f64; 2], to: [f64; 2]) -> Vec<[f64; 2]> {
    match *arc {
        GeodesicArc::Diameter { .. } => vec![from, to],
        GeodesicArc::OrthoCircle { center, radius } => {
            let angle = |p: [f64; 2]| (p[1] - center[1]).atan2(p[0] - center[0]);
            let start = angle(from);
            let sweep = apollonian::point::angle_difference(angle(to), start);
            (0..=128)
                .map(|j| {
                    let t = start + sweep * j as f64 / 128.0;
                    [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
                })
                .collect()
        }
    }
}

/// Full carriers through each pair, the segment between the points, and the
/// supremum points `a⁺` (filled) and `a⁻` (hollow).
pub fn geodesics(pairs: &[(DiscPoint, DiscPoint)]) -> Result<String> {
    let mut svg = Svg::new("Geodesic carriers and supremum points");
    svg.unit_circle();
    for (k, (a, b)) in pairs.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let arc = geodesic_arc(a, b)?;
        let sup = supremum_points(a, b)?;
        let (plus, minus) = (sup.a_plus.coords(), sup.a_minus.coords());
        svg.polyline(
            &format!("carrier-{k}"),
            &carrier_points(&arc, minus, plus),
            color,
            0.8,
            false,
        );
        let seg = hyperbolic_segment(a, b, 64)?.coords();
        svg.polyline(&format!("segment-{k}"), &seg, color, 2.5, false);
        if let GeodesicArc::OrthoCircle { center, radius } = arc {
            let _ = writeln!(
                svg.body,
                r#"<desc id="carrier-{k}-circle">center {:.6},{:.6} radius {:.6}</desc>"#,
                center[0], center[1], radius
            );
        }
        svg.dot(a.coords(), color, 3.0);
        svg.dot(b.coords(), color, 3.0);
        svg.dot(plus, color, 4.5);
        let _ = writeln!(
            svg.body,
            r#"<circle cx="{:.3}" cy="{:.3}" r="4.5" fill="white" stroke="{color}"/>"#,
            sx(minus[0]),
            sy(minus[1])
        );
        svg.label(plus, "a+", color);
        svg.label(minus, "a-", color);
    }
    Ok(svg.finish())
}

fn heat(t: f64) -> String {
    // t in [-1, 1]: blue through white to red
    let t = t.clamp(-1.0, 1.0);
    let (r, g, b) = if t < 0.0 {
        let s = 1.0 + t;
        (s, s, 1.0)
    } else {
        (1.0, 1.0 - t, 1.0 - t)
    };
    format!(
        "#{:02x}{:02x}{:02x}",
        (r * 255.0) as u8,
        (g * 255.0) as u8,
        (b * 255.0) as u8
    )
}

/// Flag curvature `K(x, ξ)` for a fixed direction on an `n × n` cell grid,
/// coloured on a symmetric scale around zero. Cells whose centre lies
/// beyond `max_radius` are left blank.
pub fn curvature_field(
    direction: TangentVector,
    n: usize,
    max_radius: f64,
    printed: bool,
) -> Result<String> {
    let mut svg = Svg::new("Flag curvature field");
    let w = 2.0 / n as f64;
    let mut cells = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let corner = [-1.0 + i as f64 * w, -1.0 + j as f64 * w];
            let c = [corner[0] + 0.5 * w, corner[1] + 0.5 * w];
            if c[0].hypot(c[1]) > max_radius {
                continue;
            }
            let x = DiscPoint::new(c[0], c[1])?;
            let k = if printed {
                flag_printed(&x, direction)?
            } else {
                flag_curvature(&x, direction)?
            };
            cells.push((corner, k));
        }
    }
    let extent = cells.iter().map(|c| c.1.abs()).fold(1e-300, f64::max);
    for (corner, k) in &cells {
        svg.rect(*corner, w, &heat(k / extent));
    }
    let (lo, hi) = cells
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
            (lo.min(c.1), hi.max(c.1))
        });
    let _ = writeln!(
        svg.body,
        r#"<desc id="range">K min {lo:.6} max {hi:.6}</desc>"#
    );
    svg.unit_circle();
    svg.label([-1.0, -1.02], &format!("K in [{lo:.4}, {hi:.4}]"), "black");
    Ok(svg.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_indicatrices_have_expected_eccentricities() {
        let pts: Vec<DiscPoint> = DEFAULT_POINTS
            .iter()
            .map(|p| DiscPoint::new(p[0], p[1]).unwrap())
            .collect();
        let svg = indicatrix(&pts);
        for e in ["0.4243", "0.7071", "0.9617"] {
            assert!(svg.contains(&format!("e = {e}")), "{e}");
        }
        assert_eq!(svg.matches("<polygon").count(), 3);
    }

    #[test]
    fn heat_scale_ends() {
        assert_eq!(heat(-1.0), "#0000ff");
        assert_eq!(heat(0.0), "#ffffff");
        assert_eq!(heat(1.0), "#ff0000");
    }
}
