use std::fmt::Write as _;

use super::{fmt_num, VRML_HEADER};
use crate::coords::{Polyline, Rotation, Vec3};
use crate::error::Result;
use crate::scene::{AnimationTrack, Color, Geometry, Scene, SceneNode, TrackValues};

struct Out {
    buf: String,
    depth: usize,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) {
        for _ in 0..self.depth {
            self.buf.push_str("  ");
        }
        self.buf.push_str(s.as_ref());
        self.buf.push('\n');
    }

    fn open(&mut self, s: impl AsRef<str>) {
        self.line(s);
        self.depth += 1;
    }

    fn close(&mut self, s: &str) {
        self.depth -= 1;
        self.line(s);
    }
}

fn vec3(v: Vec3) -> String {
    format!("{} {} {}", fmt_num(v.x), fmt_num(v.y), fmt_num(v.z))
}

fn color(c: Color) -> String {
    format!("{} {} {}", fmt_num(c.r), fmt_num(c.g), fmt_num(c.b))
}

fn rotation(r: Rotation) -> String {
    let (axis, angle) = r.to_axis_angle();
    format!("{} {}", vec3(axis), fmt_num(angle))
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for ch in s.chars() {
        if ch == '"' || ch == '\\' {
            q.push('\\');
        }
        q.push(ch);
    }
    q.push('"');
    q
}

/// Names of the nested transforms that rotation/position tracks drive.
fn transform_track_names(scene: &Scene, node: &SceneNode) -> Vec<String> {
    scene
        .tracks
        .iter()
        .enumerate()
        .filter(|(_, t)| t.target_id == node.id && !t.values.is_morph())
        .map(|(k, _)| format!("T{k}"))
        .collect()
}

/// Serializes a validated scene as a VRML97 world.
///
/// Layout: header, `Background`, every `Viewpoint`, one
/// `DEF N<k> Transform` per node (nesting a `DEF T<j> Transform` per
/// rotation or position track), then per track a `TimeSensor`, an
/// interpolator and two `ROUTE`s.
pub fn write_vrml(scene: &Scene) -> Result<String> {
    scene.validate()?;
    let mut o = Out {
        buf: String::new(),
        depth: 0,
    };
    o.line(VRML_HEADER);
    o.line(format!("Background {{ skyColor [ {} ] }}", color(scene.background)));
    for v in &scene.viewpoints {
        o.open("Viewpoint {");
        o.line(format!("position {}", vec3(v.position)));
        o.line(format!("orientation {}", rotation(v.orientation())));
        o.line(format!("description {}", quote(&v.description)));
        o.close("}");
    }
    for node in &scene.nodes {
        write_node(&mut o, scene, node);
    }
    for (k, track) in scene.tracks.iter().enumerate() {
        write_track(&mut o, k, track);
    }
    Ok(o.buf)
}

fn write_node(o: &mut Out, scene: &Scene, node: &SceneNode) {
    let t = node.transform;
    o.open(format!("DEF {} Transform {{", node.id));
    o.line(format!("translation {}", vec3(t.translation)));
    o.line(format!("rotation {}", rotation(t.rotation)));
    o.line(format!("scale {0} {0} {0}", fmt_num(t.scale)));
    o.open("children [");
    let nested = transform_track_names(scene, node);
    for name in &nested {
        o.open(format!("DEF {name} Transform {{"));
        o.open("children [");
    }
    write_shape(o, node);
    for _ in &nested {
        o.close("]");
        o.close("}");
    }
    o.close("]");
    o.close("}");
}

fn write_shape(o: &mut Out, node: &SceneNode) {
    let unlit = !matches!(node.geometry, Geometry::Mesh(_));
    o.open("Shape {");
    o.open("appearance Appearance {");
    o.open("material Material {");
    o.line(format!("diffuseColor {}", color(node.color)));
    if unlit {
        o.line(format!("emissiveColor {}", color(node.color)));
    }
    o.line(format!("transparency {}", fmt_num(1.0 - node.opacity)));
    o.close("}");
    o.close("}");
    match &node.geometry {
        Geometry::Mesh(m) => {
            o.open("geometry IndexedFaceSet {");
            o.line(format!("solid {}", if node.double_sided { "FALSE" } else { "TRUE" }));
            write_coords(o, &node.id, &m.vertices);
            o.open("coordIndex [");
            for f in &m.faces {
                o.line(format!("{}, {}, {}, -1,", f[0], f[1], f[2]));
            }
            o.close("]");
            o.close("}");
        }
        Geometry::Lines(lines) => {
            o.open("geometry IndexedLineSet {");
            let pts: Vec<Vec3> = lines.iter().flat_map(|l| l.points.iter().copied()).collect();
            write_coords(o, &node.id, &pts);
            o.open("coordIndex [");
            let mut base = 0;
            for l in lines {
                o.line(line_indices(l, base));
                base += l.points.len();
            }
            o.close("]");
            o.close("}");
        }
        Geometry::Text { text, size } => {
            o.open("geometry Text {");
            o.line(format!("string [ {} ]", quote(text)));
            o.line(format!("fontStyle FontStyle {{ size {} }}", fmt_num(*size)));
            o.close("}");
        }
    }
    o.close("}");
}

fn line_indices(l: &Polyline, base: usize) -> String {
    let mut s = String::new();
    for k in 0..l.points.len() {
        let _ = write!(s, "{}, ", base + k);
    }
    if l.closed {
        let _ = write!(s, "{base}, ");
    }
    s.push_str("-1,");
    s
}

fn write_coords(o: &mut Out, id: &str, pts: &[Vec3]) {
    o.open(format!("coord DEF {id}_coord Coordinate {{"));
    o.open("point [");
    for p in pts {
        o.line(format!("{},", vec3(*p)));
    }
    o.close("]");
    o.close("}");
}

fn write_track(o: &mut Out, k: usize, track: &AnimationTrack) {
    let name = format!("T{k}");
    o.line(format!(
        "DEF {name}_clock TimeSensor {{ cycleInterval {} loop TRUE }}",
        fmt_num(track.period)
    ));
    let (kind, target) = match &track.values {
        TrackValues::Rotation(_) => ("OrientationInterpolator", format!("{name}.set_rotation")),
        TrackValues::Position(_) => ("PositionInterpolator", format!("{name}.set_translation")),
        TrackValues::Morph(_) => ("CoordinateInterpolator", format!("{}_coord.set_point", track.target_id)),
    };
    o.open(format!("DEF {name}_interp {kind} {{"));
    let keys: Vec<String> = track.fractions.iter().map(|&f| fmt_num(f)).collect();
    o.line(format!("key [ {} ]", keys.join(" ")));
    o.open("keyValue [");
    match &track.values {
        TrackValues::Rotation(v) => v.iter().for_each(|r| o.line(format!("{},", rotation(*r)))),
        TrackValues::Position(v) => v.iter().for_each(|p| o.line(format!("{},", vec3(*p)))),
        TrackValues::Morph(frames) => {
            for f in frames {
                for p in f {
                    o.line(format!("{},", vec3(*p)));
                }
            }
        }
    }
    o.close("]");
    o.close("}");
    o.line(format!("ROUTE {name}_clock.fraction_changed TO {name}_interp.set_fraction"));
    o.line(format!("ROUTE {name}_interp.value_changed TO {target}"));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{axes_triad, default_first_octant_viewpoint};

    #[test]
    fn empty_scene_layout() {
        let mut s = Scene::new();
        s.add_viewpoint(default_first_octant_viewpoint());
        let doc = write_vrml(&s).unwrap();
        let lines: Vec<&str> = doc.lines().collect();
        assert_eq!(lines[0], "#VRML V2.0 utf8");
        assert!(lines[1].starts_with("Background"));
        assert_eq!(lines[2], "Viewpoint {");
        assert!(lines[3].starts_with("  position 2.5 2 1.5"));
        assert_eq!(lines.len(), 7);
        assert!(!doc.contains("Transform"));
        assert!(!doc.contains('\r'));
    }

    #[test]
    fn triad_colors() {
        let mut s = Scene::new();
        s.add_viewpoint(default_first_octant_viewpoint());
        axes_triad(&mut s, 1.0).unwrap();
        let doc = write_vrml(&s).unwrap();
        for c in ["diffuseColor 1 0 0", "diffuseColor 0 1 0", "diffuseColor 0 0 1"] {
            assert!(doc.contains(c), "{c}");
        }
        assert_eq!(doc, write_vrml(&s).unwrap());
        assert!(!doc.contains("-0 ") && !doc.contains("-0,"));
    }

    #[test]
    fn invalid_scene_rejected() {
        assert!(write_vrml(&Scene::new()).is_err());
    }

    #[test]
    fn text_is_escaped() {
        let mut s = Scene::new();
        s.add_viewpoint(default_first_octant_viewpoint());
        s.add(SceneNode::text("say \"hi\"", Vec3::X, 0.1));
        let doc = write_vrml(&s).unwrap();
        assert!(doc.contains(r#"string [ "say \"hi\"" ]"#));
    }
}
