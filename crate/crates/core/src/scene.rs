//! A small scene graph: colored nodes, viewpoints, and looping animation
//! tracks.
//!
//! Tracks loop independently with their own periods. Several tracks may
//! target one node; their transforms nest in insertion order inside the
//! node's static transform.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::coords::{Polyline, RoleColor, Rotation, SurfaceMesh, Vec3};
use crate::error::{Error, Result};

/// Cross-section segments of an arrow.
pub const ARROW_SEGMENTS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Color {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl Color {
    pub const RED: Color = Color::new(1.0, 0.0, 0.0);
    pub const GREEN: Color = Color::new(0.0, 1.0, 0.0);
    pub const BLUE: Color = Color::new(0.0, 0.0, 1.0);
    pub const WHITE: Color = Color::new(1.0, 1.0, 1.0);
    pub const BLACK: Color = Color::new(0.0, 0.0, 0.0);
    pub const GRAY: Color = Color::new(0.5, 0.5, 0.5);

    pub const fn new(r: f64, g: f64, b: f64) -> Self {
        Color { r, g, b }
    }

    pub fn in_range(&self) -> bool {
        [self.r, self.g, self.b].iter().all(|c| (0.0..=1.0).contains(c))
    }
}

impl From<RoleColor> for Color {
    fn from(c: RoleColor) -> Self {
        let [r, g, b] = c.rgb();
        Color { r, g, b }
    }
}

/// Coordinate a node stands for; fixes its color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordinateRole {
    X,
    Y,
    Z,
    R,
    Theta,
    Phi,
}

impl CoordinateRole {
    pub fn color(self) -> Color {
        match self {
            CoordinateRole::X | CoordinateRole::R => Color::RED,
            CoordinateRole::Y | CoordinateRole::Theta => Color::GREEN,
            CoordinateRole::Z | CoordinateRole::Phi => Color::BLUE,
        }
    }
}

/// Translation, rotation and uniform scale, applied scale first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub translation: Vec3,
    pub rotation: Rotation,
    pub scale: f64,
}

impl Default for Transform {
    fn default() -> Self {
        Transform::IDENTITY
    }
}

impl Transform {
    pub const IDENTITY: Transform = Transform {
        translation: Vec3::ZERO,
        rotation: Rotation::IDENTITY,
        scale: 1.0,
    };

    pub fn translate(t: Vec3) -> Self {
        Transform {
            translation: t,
            ..Transform::IDENTITY
        }
    }

    pub fn rotate(r: Rotation) -> Self {
        Transform {
            rotation: r,
            ..Transform::IDENTITY
        }
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        self.rotation.apply(v * self.scale) + self.translation
    }

    /// `self ∘ inner`: `inner` acts first.
    pub fn compose(&self, inner: &Transform) -> Transform {
        Transform {
            translation: self.apply(inner.translation),
            rotation: self.rotation.compose(inner.rotation),
            scale: self.scale * inner.scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Mesh,
    Polyline,
    Arrow,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Mesh(SurfaceMesh),
    Lines(Vec<Polyline>),
    Text { text: String, size: f64 },
}

impl Geometry {
    /// Number of coordinates a morph track must supply.
    pub fn point_count(&self) -> usize {
        match self {
            Geometry::Mesh(m) => m.vertices.len(),
            Geometry::Lines(ls) => ls.iter().map(|l| l.points.len()).sum(),
            Geometry::Text { .. } => 0,
        }
    }

    /// Replaces all coordinates in order. Mesh faces the new points
    /// collapse to zero area are dropped.
    pub fn with_points(&self, pts: &[Vec3]) -> Geometry {
        match self {
            Geometry::Mesh(m) => Geometry::Mesh(
                SurfaceMesh {
                    vertices: pts.to_vec(),
                    ..m.clone()
                }
                .without_degenerate_faces(),
            ),
            Geometry::Lines(ls) => {
                let mut k = 0;
                Geometry::Lines(
                    ls.iter()
                        .map(|l| {
                            let n = l.points.len();
                            k += n;
                            Polyline {
                                points: pts[k - n..k].to_vec(),
                                ..l.clone()
                            }
                        })
                        .collect(),
                )
            }
            g @ Geometry::Text { .. } => g.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneNode {
    /// Assigned by [`Scene::add`] as `N0`, `N1`, …
    pub id: String,
    pub kind: NodeKind,
    pub geometry: Geometry,
    pub color: Color,
    pub opacity: f64,
    pub transform: Transform,
    pub double_sided: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<CoordinateRole>,
}

impl SceneNode {
    fn with_geometry(kind: NodeKind, geometry: Geometry, color: Color) -> Self {
        SceneNode {
            id: String::new(),
            kind,
            geometry,
            color,
            opacity: 1.0,
            transform: Transform::IDENTITY,
            double_sided: true,
            role: None,
        }
    }

    pub fn mesh(mesh: SurfaceMesh) -> Self {
        let color = mesh.role_color.into();
        SceneNode::with_geometry(NodeKind::Mesh, Geometry::Mesh(mesh), color)
    }

    /// Line set; the color is taken from the first polyline.
    pub fn lines(lines: Vec<Polyline>) -> Self {
        let color = lines.first().map(|l| l.role_color.into()).unwrap_or(Color::WHITE);
        SceneNode::with_geometry(NodeKind::Polyline, Geometry::Lines(lines), color)
    }

    pub fn polyline(line: Polyline) -> Self {
        SceneNode::lines(vec![line])
    }

    pub fn text(text: impl Into<String>, position: Vec3, size: f64) -> Self {
        let mut n = SceneNode::with_geometry(
            NodeKind::Text,
            Geometry::Text {
                text: text.into(),
                size,
            },
            Color::WHITE,
        );
        n.transform = Transform::translate(position);
        n
    }

    pub fn colored(mut self, c: Color) -> Self {
        self.color = c;
        self
    }

    pub fn with_opacity(mut self, o: f64) -> Self {
        self.opacity = o;
        self
    }

    pub fn with_transform(mut self, t: Transform) -> Self {
        self.transform = t;
        self
    }

    /// Tags the node with a coordinate role and its convention color.
    pub fn with_role(mut self, role: CoordinateRole) -> Self {
        self.role = Some(role);
        self.color = role.color();
        self
    }
}

/// Arrow mesh from `from` to `to`.
///
/// Shaft: a 12-sided cylinder of `shaft_radius`. Head: a cone of radius
/// `2·shaft_radius` and length `min(|to − from|/4, 4·shaft_radius)`.
/// Vertices, in order: shaft base ring (12), shaft top ring (12), head ring
/// (12), apex, base center — 38 in all, with 72 faces.
pub fn arrow_mesh(from: Vec3, to: Vec3, shaft_radius: f64) -> Result<SurfaceMesh> {
    let axis = to - from;
    let len = axis.norm();
    let d = axis
        .normalized()
        .filter(|_| len > 1e-12)
        .ok_or_else(|| Error::invalid("arrow", "zero-length arrow"))?;
    if !(shaft_radius > 0.0) {
        return Err(Error::invalid("shaft_radius", "must be positive"));
    }
    let head = (0.25 * len).min(4.0 * shaft_radius);
    let u = d.any_perpendicular();
    let v = d.cross(u);
    let ring = |center: Vec3, r: f64| -> Vec<Vec3> {
        (0..ARROW_SEGMENTS)
            .map(|k| {
                let a = TAU * k as f64 / ARROW_SEGMENTS as f64;
                center + (u * a.cos() + v * a.sin()) * r
            })
            .collect()
    };
    let neck = from + d * (len - head);
    let mut vertices = ring(from, shaft_radius);
    vertices.extend(ring(neck, shaft_radius));
    vertices.extend(ring(neck, 2.0 * shaft_radius));
    vertices.push(to);
    vertices.push(from);
    let n = ARROW_SEGMENTS;
    let (apex, base) = (3 * n, 3 * n + 1);
    let mut faces = Vec::with_capacity(6 * n);
    for k in 0..n {
        let k1 = (k + 1) % n;
        faces.push([k, k1, n + k1]);
        faces.push([k, n + k1, n + k]);
        faces.push([n + k, n + k1, 2 * n + k1]);
        faces.push([n + k, 2 * n + k1, 2 * n + k]);
        faces.push([2 * n + k, 2 * n + k1, apex]);
        faces.push([base, k1, k]);
    }
    SurfaceMesh::new(vertices, faces, RoleColor::Custom(1.0, 1.0, 1.0))
}

pub fn arrow(from: Vec3, to: Vec3, color: Color, shaft_radius: f64) -> Result<SceneNode> {
    let mut n = SceneNode::mesh(arrow_mesh(from, to, shaft_radius)?).colored(color);
    n.kind = NodeKind::Arrow;
    Ok(n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Viewpoint {
    pub position: Vec3,
    pub look_at: Vec3,
    pub description: String,
}

impl Viewpoint {
    pub fn new(position: Vec3, look_at: Vec3, description: impl Into<String>) -> Result<Self> {
        if position.distance(look_at) < 1e-12 {
            return Err(Error::invalid("viewpoint", "position coincides with look_at"));
        }
        Ok(Viewpoint {
            position,
            look_at,
            description: description.into(),
        })
    }

    /// Camera rotation for a renderer that looks along local −z with +y up;
    /// world +z is kept up where possible.
    pub fn orientation(&self) -> Rotation {
        let back = (self.position - self.look_at).normalized().unwrap_or(Vec3::Z);
        let up = if back.cross(Vec3::Z).norm() < 1e-9 { Vec3::Y } else { Vec3::Z };
        let x = up.cross(back).normalized().unwrap_or(Vec3::X);
        let y = back.cross(x);
        Rotation::from_basis(x, y, back)
    }
}

/// Looks at the origin from (2.5, 2.0, 1.5).
pub fn default_first_octant_viewpoint() -> Viewpoint {
    Viewpoint::new(Vec3::new(2.5, 2.0, 1.5), Vec3::ZERO, "First octant").expect("distinct points")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackValues {
    Rotation(Vec<Rotation>),
    Position(Vec<Vec3>),
    /// Full coordinate list of the target per key.
    Morph(Vec<Vec<Vec3>>),
}

impl TrackValues {
    pub fn len(&self) -> usize {
        match self {
            TrackValues::Rotation(v) => v.len(),
            TrackValues::Position(v) => v.len(),
            TrackValues::Morph(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_morph(&self) -> bool {
        matches!(self, TrackValues::Morph(_))
    }
}

/// Keyframed, looping animation of one node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnimationTrack {
    pub target_id: String,
    /// Seconds per loop.
    pub period: f64,
    /// Strictly increasing, from 0 to 1.
    pub fractions: Vec<f64>,
    pub values: TrackValues,
}

/// Value of a track at one instant.
#[derive(Debug, Clone, PartialEq)]
pub enum TrackSample {
    Transform(Transform),
    Points(Vec<Vec3>),
}

impl AnimationTrack {
    pub fn new(target_id: impl Into<String>, period: f64, fractions: Vec<f64>, values: TrackValues) -> Self {
        AnimationTrack {
            target_id: target_id.into(),
            period,
            fractions,
            values,
        }
    }

    /// Keys at `k/n` for each of the `n` values plus a closing key at 1.
    ///
    /// `periodic` closes on the first value (a seamless loop); otherwise
    /// the last value is held.
    pub fn from_frames(target_id: impl Into<String>, period: f64, values: TrackValues, periodic: bool) -> Self {
        let n = values.len();
        let mut fractions: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
        fractions.push(1.0);
        let close = |first: usize| if periodic { 0 } else { first };
        let values = match values {
            TrackValues::Rotation(mut v) => {
                v.push(v[close(n - 1)]);
                TrackValues::Rotation(v)
            }
            TrackValues::Position(mut v) => {
                v.push(v[close(n - 1)]);
                TrackValues::Position(v)
            }
            TrackValues::Morph(mut v) => {
                let c = v[close(n - 1)].clone();
                v.push(c);
                TrackValues::Morph(v)
            }
        };
        AnimationTrack::new(target_id, period, fractions, values)
    }

    /// One full turn about `axis` over `steps` keys.
    pub fn turntable(target_id: impl Into<String>, period: f64, axis: Vec3, steps: usize) -> Self {
        let rots = (0..steps)
            .map(|k| Rotation::from_axis_angle(axis, TAU * k as f64 / steps as f64))
            .collect();
        AnimationTrack::from_frames(target_id, period, TrackValues::Rotation(rots), true)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScene(format!("track on {}: {m}", self.target_id)));
        if !(self.period > 0.0) || !self.period.is_finite() {
            return bad("period must be positive".into());
        }
        let f = &self.fractions;
        if f.len() < 2 || f[0] != 0.0 || f[f.len() - 1] != 1.0 {
            return bad("key fractions must start at 0 and end at 1".into());
        }
        if f.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("key fractions must be strictly increasing".into());
        }
        if self.values.len() != f.len() {
            return bad(format!("{} keys but {} values", f.len(), self.values.len()));
        }
        if let TrackValues::Morph(frames) = &self.values {
            let n = frames[0].len();
            if frames.iter().any(|fr| fr.len() != n) {
                return bad("morph frames differ in point count".into());
            }
        }
        Ok(())
    }

    /// Interpolated value at loop fraction `t ∈ [0, 1]`.
    pub fn sample(&self, t: f64) -> TrackSample {
        let f = &self.fractions;
        let t = t.clamp(0.0, 1.0);
        let k = match f.iter().position(|&x| x > t) {
            Some(0) => 0,
            Some(i) => i - 1,
            None => f.len() - 1,
        };
        let (k1, w) = if k + 1 < f.len() {
            (k + 1, (t - f[k]) / (f[k + 1] - f[k]))
        } else {
            (k, 0.0)
        };
        match &self.values {
            TrackValues::Rotation(v) => {
                let r = if w == 0.0 { v[k] } else { v[k].slerp(v[k1], w) };
                TrackSample::Transform(Transform::rotate(r))
            }
            TrackValues::Position(v) => {
                let p = if w == 0.0 { v[k] } else { v[k].lerp(v[k1], w) };
                TrackSample::Transform(Transform::translate(p))
            }
            TrackValues::Morph(v) => TrackSample::Points(if w == 0.0 {
                v[k].clone()
            } else {
                v[k].iter().zip(&v[k1]).map(|(a, b)| a.lerp(*b, w)).collect()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub nodes: Vec<SceneNode>,
    pub tracks: Vec<AnimationTrack>,
    pub viewpoints: Vec<Viewpoint>,
    pub background: Color,
}

impl Default for Scene {
    fn default() -> Self {
        Scene::new()
    }
}

impl Scene {
    pub fn new() -> Self {
        Scene {
            nodes: Vec::new(),
            tracks: Vec::new(),
            viewpoints: Vec::new(),
            background: Color::BLACK,
        }
    }

    /// Adds a node and returns its freshly assigned id.
    pub fn add(&mut self, mut node: SceneNode) -> String {
        node.id = format!("N{}", self.nodes.len());
        let id = node.id.clone();
        self.nodes.push(node);
        id
    }

    pub fn node(&self, id: &str) -> Option<&SceneNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn add_viewpoint(&mut self, v: Viewpoint) {
        self.viewpoints.push(v);
    }

    /// Appends a validated track.
    pub fn add_track(&mut self, track: AnimationTrack) -> Result<()> {
        track.validate()?;
        let node = self
            .node(&track.target_id)
            .ok_or_else(|| Error::InvalidScene(format!("unknown track target {}", track.target_id)))?;
        if let TrackValues::Morph(frames) = &track.values {
            let want = node.geometry.point_count();
            if frames[0].len() != want {
                return Err(Error::InvalidScene(format!(
                    "morph of {} supplies {} points, node has {want}",
                    track.target_id,
                    frames[0].len()
                )));
            }
            if self
                .tracks
                .iter()
                .any(|t| t.target_id == track.target_id && t.values.is_morph())
            {
                return Err(Error::InvalidScene(format!("{} already has a morph track", track.target_id)));
            }
        }
        self.tracks.push(track);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.viewpoints.is_empty() {
            return Err(Error::InvalidScene("scene needs at least one viewpoint".into()));
        }
        if !self.background.in_range() {
            return Err(Error::InvalidScene("background color out of range".into()));
        }
        for (k, n) in self.nodes.iter().enumerate() {
            if n.id != format!("N{k}") {
                return Err(Error::InvalidScene(format!("node {k} has id {}", n.id)));
            }
            if !n.color.in_range() || !(0.0..=1.0).contains(&n.opacity) {
                return Err(Error::InvalidScene(format!("{}: color or opacity out of range", n.id)));
            }
            if let Some(role) = n.role {
                if n.color != role.color() {
                    return Err(Error::InvalidScene(format!("{}: color does not match its role", n.id)));
                }
            }
            if let Geometry::Mesh(m) = &n.geometry {
                m.validate()?;
            }
        }
        for t in &self.tracks {
            t.validate()?;
            if self.node(&t.target_id).is_none() {
                return Err(Error::InvalidScene(format!("unknown track target {}", t.target_id)));
            }
        }
        Ok(())
    }

    /// Longest track period, the reference clock for frame baking.
    pub fn reference_period(&self) -> Option<f64> {
        self.tracks.iter().map(|t| t.period).reduce(f64::max)
    }

    /// Loop fraction of `track` at global fraction `t` of the reference
    /// period.
    pub fn track_fraction(&self, track: &AnimationTrack, t: f64) -> f64 {
        let t_ref = self.reference_period().unwrap_or(track.period);
        (t * t_ref / track.period).rem_euclid(1.0)
    }

    /// A static copy with every track applied at global fraction `t` and
    /// the tracks removed.
    pub fn baked(&self, t: f64) -> Scene {
        let mut out = self.clone();
        out.tracks.clear();
        for node in &mut out.nodes {
            let mut xf = node.transform;
            for track in self.tracks.iter().filter(|tr| tr.target_id == node.id) {
                match track.sample(self.track_fraction(track, t)) {
                    TrackSample::Transform(inner) => xf = xf.compose(&inner),
                    TrackSample::Points(pts) => node.geometry = node.geometry.with_points(&pts),
                }
            }
            node.transform = xf;
        }
        out
    }

    /// [`Scene::baked`] at frame `k` of `n`.
    pub fn frame(&self, k: usize, n: usize) -> Scene {
        self.baked(k as f64 / n as f64)
    }
}

/// Arrows along +x, +y, +z colored red, green, blue.
pub fn axes_triad(scene: &mut Scene, length: f64) -> Result<[String; 3]> {
    if !(length > 0.0) {
        return Err(Error::invalid("length", "must be positive"));
    }
    let r = 0.01 * length;
    let mk = |dir: Vec3, role: CoordinateRole| arrow(Vec3::ZERO, dir * length, role.color(), r).map(|n| n.with_role(role));
    let x = mk(Vec3::X, CoordinateRole::X)?;
    let y = mk(Vec3::Y, CoordinateRole::Y)?;
    let z = mk(Vec3::Z, CoordinateRole::Z)?;
    Ok([scene.add(x), scene.add(y), scene.add(z)])
}
