use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::fmt_num;
use crate::coords::Vec3;
use crate::error::{Error, Result};
use crate::patterns::PlaneCut;
use crate::scene::{Color, Geometry, Scene};

pub const DEFAULT_SVG_SIZE: u32 = 400;
pub const DEFAULT_RINGS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

/// `#RRGGBB`, channels clamped to `[0, 1]`.
pub fn color_hex(c: Color) -> String {
    let ch = |v: f64| (v.clamp(0.0, 1.0) * 255.0).round() as u8;
    format!("#{:02X}{:02X}{:02X}", ch(c.r), ch(c.g), ch(c.b))
}

fn open_svg(s: &mut String, size: u32) {
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{size}" height="{size}" fill="#FFFFFF"/>"##);
}

/// Polar plot of jointly normalized cuts on a linear radial scale.
///
/// The outer ring is value 1; each cut is one closed `<path>` stroked with
/// its role color, in input order.
pub fn write_svg_polar(cuts: &[PlaneCut], size_px: u32, rings: &[f64]) -> Result<String> {
    if cuts.is_empty() {
        return Err(Error::invalid("cuts", "need at least one cut"));
    }
    if size_px < 16 {
        return Err(Error::invalid("size_px", "must be at least 16"));
    }
    if cuts.iter().any(|c| c.is_empty() || c.angles.len() != c.values.len()) {
        return Err(Error::invalid("cuts", "every cut needs matching angles and values"));
    }
    let size = size_px as f64;
    let c = size / 2.0;
    let r_max = 0.42 * size;
    let mut s = String::new();
    open_svg(&mut s, size_px);
    let _ = writeln!(s, r##"<g fill="none" stroke="#C0C0C0" stroke-width="1">"##);
    for &r in rings {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{}"/>"#,
            fmt_num(c),
            fmt_num(c),
            fmt_num(r * r_max)
        );
    }
    for k in 0..12 {
        let a = (k as f64) * std::f64::consts::PI / 6.0;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            fmt_num(c),
            fmt_num(c),
            fmt_num(c + r_max * a.cos()),
            fmt_num(c - r_max * a.sin())
        );
    }
    let _ = writeln!(s, "</g>");
    for cut in cuts {
        let mut d = String::new();
        for (k, (&a, &v)) in cut.angles.iter().zip(&cut.values).enumerate() {
            let r = v.max(0.0) * r_max;
            let _ = write!(
                d,
                "{}{} {} ",
                if k == 0 { "M" } else { "L" },
                fmt_num(c + r * a.cos()),
                fmt_num(c - r * a.sin())
            );
        }
        d.push('Z');
        let _ = writeln!(
            s,
            r#"<path d="{d}" fill="none" stroke="{}" stroke-width="2"/>"#,
            color_hex(cut.role_color.into())
        );
    }
    for (k, cut) in cuts.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="8" y="{}" font-family="sans-serif" font-size="12" fill="{}">{}</text>"#,
            16 + 14 * k,
            color_hex(cut.role_color.into()),
            cut.plane.name()
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Orthographic wireframe of a scene's static pose, seen from its first
/// viewpoint. One `<path>` per mesh or line node; text is skipped.
pub fn write_svg_projection(scene: &Scene, size_px: u32) -> Result<String> {
    scene.validate()?;
    let vp = scene
        .viewpoints
        .first()
        .ok_or_else(|| Error::InvalidScene("projection needs a viewpoint".into()))?;
    let inv = vp.orientation().inverse();
    let project = |p: Vec3| {
        let q = inv.apply(p - vp.position);
        (q.x, q.y)
    };

    let mut paths: Vec<(Color, Vec<((f64, f64), (f64, f64))>)> = Vec::new();
    for node in &scene.nodes {
        let world = |p: Vec3| project(node.transform.apply(p));
        let mut edges = BTreeSet::new();
        let pts: Vec<Vec3> = match &node.geometry {
            Geometry::Mesh(m) => {
                for f in &m.faces {
                    for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                        edges.insert((a.min(b), a.max(b)));
                    }
                }
                m.vertices.clone()
            }
            Geometry::Lines(lines) => {
                let mut base = 0;
                for l in lines {
                    let n = l.points.len();
                    let segs = if l.closed { n } else { n.saturating_sub(1) };
                    for k in 0..segs {
                        let (a, b) = (base + k, base + (k + 1) % n);
                        edges.insert((a.min(b), a.max(b)));
                    }
                    base += n;
                }
                lines.iter().flat_map(|l| l.points.iter().copied()).collect()
            }
            Geometry::Text { .. } => continue,
        };
        let proj: Vec<(f64, f64)> = pts.into_iter().map(world).collect();
        paths.push((node.color, edges.into_iter().map(|(a, b)| (proj[a], proj[b])).collect()));
    }

    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for (_, edges) in &paths {
        for &(p, q) in edges {
            for (x, y) in [p, q] {
                lo = (lo.0.min(x), lo.1.min(y));
                hi = (hi.0.max(x), hi.1.max(y));
            }
        }
    }
    let size = size_px as f64;
    let span = (hi.0 - lo.0).max(hi.1 - lo.1);
    let scale = if span.is_finite() && span > 0.0 { 0.9 * size / span } else { 1.0 };
    let mid = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
    let screen = |(x, y): (f64, f64)| {
        (
            fmt_num(size / 2.0 + (x - mid.0) * scale),
            fmt_num(size / 2.0 - (y - mid.1) * scale),
        )
    };

    let mut s = String::new();
    open_svg(&mut s, size_px);
    for (color, edges) in &paths {
        if edges.is_empty() {
            continue;
        }
        let mut d = String::new();
        for &(p, q) in edges {
            let (px, py) = screen(p);
            let (qx, qy) = screen(q);
            let _ = write!(d, "M{px} {py} L{qx} {qy} ");
        }
        let _ = writeln!(
            s,
            r#"<path d="{}" fill="none" stroke="{}" stroke-width="0.5"/>"#,
            d.trim_end(),
            color_hex(*color)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::RoleColor;
    use crate::patterns::MainPlane;
    use std::f64::consts::TAU;

    fn unit_cut(plane: MainPlane) -> PlaneCut {
        let angles: Vec<f64> = (0..36).map(|k| TAU * k as f64 / 36.0).collect();
        PlaneCut {
            plane,
            values: vec![1.0; angles.len()],
            angles,
            role_color: plane.role_color(),
        }
    }

    #[test]
    fn hex_colors() {
        assert_eq!(color_hex(Color::RED), "#FF0000");
        assert_eq!(color_hex(RoleColor::B.into()), "#0000FF");
    }

    #[test]
    fn constant_cut_on_outer_ring() {
        let svg = write_svg_polar(&[unit_cut(MainPlane::Xoy)], 400, &DEFAULT_RINGS).unwrap();
        // outer ring radius 168 around 200
        assert!(svg.contains(r#"<circle cx="200" cy="200" r="168"/>"#));
        assert!(svg.contains(r#"d="M368 200 L"#));
    }

    #[test]
    fn rejects_empty() {
        assert!(write_svg_polar(&[], 400, &DEFAULT_RINGS).is_err());
    }
}
