use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{scs_to_ccs, wrap_phi, RoleColor, SphericalPoint, Vec3};
use crate::error::{Error, Result};

/// Samples on closed circles unless a caller asks otherwise.
pub const CIRCLE_SAMPLES: usize = 72;

/// Indexed triangle mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[usize; 3]>,
    pub role_color: RoleColor,
}

impl SurfaceMesh {
    /// Checks index ranges and rejects zero-area faces.
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[usize; 3]>, role_color: RoleColor) -> Result<Self> {
        let mesh = SurfaceMesh {
            vertices,
            faces,
            role_color,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        for (k, f) in self.faces.iter().enumerate() {
            if f.iter().any(|&i| i >= n) {
                return Err(Error::invalid("faces", format!("face {k} indexes past {n} vertices")));
            }
            if triangle_is_degenerate(&self.vertices, *f) {
                return Err(Error::invalid("faces", format!("face {k} has zero area")));
            }
        }
        Ok(())
    }

    /// Drops faces with repeated indices or zero area.
    pub fn without_degenerate_faces(mut self) -> Self {
        let v = &self.vertices;
        self.faces.retain(|&f| !triangle_is_degenerate(v, f));
        self
    }

    pub fn with_color(mut self, c: RoleColor) -> Self {
        self.role_color = c;
        self
    }

    /// Same geometry with every face wound the other way.
    pub fn flipped(&self) -> Self {
        SurfaceMesh {
            vertices: self.vertices.clone(),
            faces: self.faces.iter().map(|&[a, b, c]| [a, c, b]).collect(),
            role_color: self.role_color,
        }
    }
}

fn triangle_is_degenerate(v: &[Vec3], [a, b, c]: [usize; 3]) -> bool {
    if a == b || b == c || a == c {
        return true;
    }
    let e1 = v[b] - v[a];
    let e2 = v[c] - v[a];
    let area2 = e1.cross(e2).norm();
    area2 <= f64::EPSILON * e1.norm() * e2.norm() || area2 == 0.0
}

/// Ordered points, optionally closed back to the first one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<Vec3>,
    pub closed: bool,
    pub role_color: RoleColor,
}

impl Polyline {
    pub fn new(points: Vec<Vec3>, closed: bool, role_color: RoleColor) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("points", "a polyline needs at least 2 points"));
        }
        Ok(Polyline {
            points,
            closed,
            role_color,
        })
    }
}

/// Connectivity of a rows × columns parametric grid.
///
/// Rows flagged as welded collapse onto a single vertex (poles, apexes). The
/// face list is complete: faces that lose area through welding are dropped,
/// but faces that are only degenerate for particular vertex positions are
/// kept so that morph frames can share one topology.
#[derive(Debug, Clone, PartialEq)]
pub struct GridTopology {
    pub rows: usize,
    pub cols: usize,
    pub wrap: bool,
    /// `index[row][col]` is the vertex id for that grid sample.
    pub index: Vec<Vec<usize>>,
    pub vertex_count: usize,
    pub faces: Vec<[usize; 3]>,
    /// Grid cell `(row, col)` each face came from.
    pub face_cells: Vec<(usize, usize)>,
}

impl GridTopology {
    /// Collects vertex positions in id order from a per-sample function.
    pub fn positions(&self, mut f: impl FnMut(usize, usize) -> Vec3) -> Vec<Vec3> {
        let mut out = vec![Vec3::ZERO; self.vertex_count];
        let mut seen = vec![false; self.vertex_count];
        for (r, row) in self.index.iter().enumerate() {
            for (c, &id) in row.iter().enumerate() {
                if !seen[id] {
                    seen[id] = true;
                    out[id] = f(r, c);
                }
            }
        }
        out
    }
}

/// Builds grid connectivity; `wrap` joins the last column to the first.
pub fn grid_topology(rows: usize, cols: usize, wrap: bool, welded: &[bool]) -> GridTopology {
    let mut index = Vec::with_capacity(rows);
    let mut next = 0;
    for r in 0..rows {
        if welded.get(r).copied().unwrap_or(false) {
            index.push(vec![next; cols]);
            next += 1;
        } else {
            index.push((next..next + cols).collect());
            next += cols;
        }
    }
    let col_cells = if wrap { cols } else { cols.saturating_sub(1) };
    let mut faces = Vec::new();
    let mut face_cells = Vec::new();
    for r in 0..rows.saturating_sub(1) {
        for c in 0..col_cells {
            let c1 = (c + 1) % cols;
            let a = index[r][c];
            let b = index[r][c1];
            let cc = index[r + 1][c1];
            let d = index[r + 1][c];
            for f in [[a, d, cc], [a, cc, b]] {
                if f[0] != f[1] && f[1] != f[2] && f[0] != f[2] {
                    faces.push(f);
                    face_cells.push((r, c));
                }
            }
        }
    }
    GridTopology {
        rows,
        cols,
        wrap,
        index,
        vertex_count: next,
        faces,
        face_cells,
    }
}

/// The three families of spherical coordinate surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SurfaceKind {
    /// r = radius.
    Sphere { radius: f64 },
    /// θ = theta, a half-cone opening from the origin.
    Cone { theta: f64 },
    /// φ = phi, a half-plane bounded by the z-axis.
    SemiPlane { phi: f64 },
}

/// Parameters for [`coordinate_surface_mesh`].
///
/// Each kind uses the two ranges it is not fixed in: spheres span θ × φ,
/// cones span r × φ, half-planes span r × θ. `resolution` counts intervals
/// along those two directions in that order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub kind: SurfaceKind,
    pub r_range: (f64, f64),
    pub theta_range: (f64, f64),
    pub phi_range: (f64, f64),
    pub resolution: (usize, usize),
    /// Faces whose φ-midpoint falls in this interval are removed.
    pub cutout: Option<(f64, f64)>,
}

impl SurfaceSpec {
    pub fn sphere(radius: f64) -> Self {
        SurfaceSpec {
            kind: SurfaceKind::Sphere { radius },
            r_range: (0.0, radius),
            theta_range: (0.0, PI),
            phi_range: (0.0, TAU),
            resolution: (18, 36),
            cutout: None,
        }
    }

    pub fn cone(theta: f64, r_max: f64) -> Self {
        SurfaceSpec {
            kind: SurfaceKind::Cone { theta },
            r_range: (0.0, r_max),
            theta_range: (theta, theta),
            phi_range: (0.0, TAU),
            resolution: (12, 36),
            cutout: None,
        }
    }

    pub fn semiplane(phi: f64, r_max: f64) -> Self {
        SurfaceSpec {
            kind: SurfaceKind::SemiPlane { phi },
            r_range: (0.0, r_max),
            theta_range: (0.0, PI),
            phi_range: (phi, phi),
            resolution: (12, 12),
            cutout: None,
        }
    }

    pub fn with_resolution(mut self, a: usize, b: usize) -> Self {
        self.resolution = (a, b);
        self
    }

    pub fn with_cutout(mut self, from: f64, to: f64) -> Self {
        self.cutout = Some((from, to));
        self
    }

    pub fn with_r_range(mut self, lo: f64, hi: f64) -> Self {
        self.r_range = (lo, hi);
        self
    }

    pub fn with_theta_range(mut self, lo: f64, hi: f64) -> Self {
        self.theta_range = (lo, hi);
        self
    }

    pub fn with_phi_range(mut self, lo: f64, hi: f64) -> Self {
        self.phi_range = (lo, hi);
        self
    }

    /// The two free parameter ranges, in resolution order.
    fn free_ranges(&self) -> ((f64, f64), (f64, f64)) {
        match self.kind {
            SurfaceKind::Sphere { .. } => (self.theta_range, self.phi_range),
            SurfaceKind::Cone { .. } => (self.r_range, self.phi_range),
            SurfaceKind::SemiPlane { .. } => (self.r_range, self.theta_range),
        }
    }

    fn point(&self, u: f64, v: f64) -> Vec3 {
        let (r, theta, phi) = match self.kind {
            SurfaceKind::Sphere { radius } => (radius, u, v),
            SurfaceKind::Cone { theta } => (u, theta, v),
            SurfaceKind::SemiPlane { phi } => (u, v, phi),
        };
        scs_to_ccs(SphericalPoint { r, theta, phi })
    }
}

fn in_phi_interval(phi: f64, (from, to): (f64, f64)) -> bool {
    let (lo, hi, p) = (wrap_phi(from), wrap_phi(to), wrap_phi(phi));
    if to - from >= TAU {
        return true;
    }
    if lo <= hi {
        p >= lo && p <= hi
    } else {
        p >= lo || p <= hi
    }
}

/// Tessellates a spherical coordinate surface.
///
/// Colors follow the role convention: spheres R, cones G, half-planes B.
pub fn coordinate_surface_mesh(spec: &SurfaceSpec) -> Result<SurfaceMesh> {
    let (color, axis_row_welds) = match spec.kind {
        SurfaceKind::Sphere { radius } => {
            if !(radius > 0.0) {
                return Err(Error::invalid("radius", "sphere radius must be positive"));
            }
            (RoleColor::R, true)
        }
        SurfaceKind::Cone { theta } => {
            if !(theta > 0.0 && theta < PI) {
                return Err(Error::invalid("theta", "cone angle must lie in (0, π)"));
            }
            (RoleColor::G, true)
        }
        SurfaceKind::SemiPlane { phi } => {
            if !phi.is_finite() {
                return Err(Error::invalid("phi", "half-plane angle must be finite"));
            }
            (RoleColor::B, true)
        }
    };
    let ((u0, u1), (v0, v1)) = spec.free_ranges();
    let (nu, nv) = spec.resolution;
    if nu == 0 || nv == 0 || !(u1 > u0) || !(v1 > v0) {
        return Err(Error::DegenerateSurface);
    }
    if spec.r_range.0 < 0.0 {
        return Err(Error::invalid("r_range", "radius must be non-negative"));
    }
    let wrap_v = matches!(spec.kind, SurfaceKind::Sphere { .. } | SurfaceKind::Cone { .. })
        && v1 - v0 >= TAU - 1e-12;
    let cols = if wrap_v { nv } else { nv + 1 };
    let rows = nu + 1;
    let u_at = |i: usize| u0 + (u1 - u0) * i as f64 / nu as f64;
    let v_at = |j: usize| v0 + (v1 - v0) * j as f64 / nv as f64;

    // Rows that collapse onto the z-axis or the origin are welded.
    let welded: Vec<bool> = (0..rows)
        .map(|i| {
            axis_row_welds && {
                let first = spec.point(u_at(i), v_at(0));
                (1..cols).all(|j| spec.point(u_at(i), v_at(j)).distance(first) <= 1e-12)
            }
        })
        .collect();
    let topo = grid_topology(rows, cols, wrap_v, &welded);
    let vertices = topo.positions(|i, j| spec.point(u_at(i), v_at(j)));

    let mut faces = Vec::with_capacity(topo.faces.len());
    for (f, &(_, j)) in topo.faces.iter().zip(&topo.face_cells) {
        if let Some(cut) = spec.cutout {
            let phi_mid = match spec.kind {
                SurfaceKind::SemiPlane { phi } => phi,
                _ => v0 + (v1 - v0) * (j as f64 + 0.5) / nv as f64,
            };
            if in_phi_interval(phi_mid, cut) {
                continue;
            }
        }
        faces.push(*f);
    }
    let mesh = SurfaceMesh {
        vertices,
        faces,
        role_color: color,
    }
    .without_degenerate_faces();
    if mesh.faces.is_empty() {
        return Err(Error::DegenerateSurface);
    }
    Ok(mesh)
}

/// Coordinate curves: where two of the three coordinates are held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CurveKind {
    /// Fixed r and θ: a closed circle about the z-axis.
    PhiCircle { r: f64, theta: f64 },
    /// Fixed r and φ: a half-circle from +z to -z.
    Meridian { r: f64, phi: f64 },
    /// Fixed θ and φ: a straight segment from the origin.
    Ray { theta: f64, phi: f64, r_max: f64 },
}

/// Samples a coordinate curve with `n` points. Rays are R, meridians G and
/// φ-circles B.
pub fn coordinate_curve(kind: CurveKind, n: usize) -> Result<Polyline> {
    if n < 2 {
        return Err(Error::invalid("n", "a curve needs at least 2 samples"));
    }
    let t = |k: usize, d: usize| k as f64 / d as f64;
    let (points, closed, color) = match kind {
        CurveKind::PhiCircle { r, theta } => (
            (0..n)
                .map(|k| scs_to_ccs(SphericalPoint { r, theta, phi: TAU * t(k, n) }))
                .collect(),
            true,
            RoleColor::B,
        ),
        CurveKind::Meridian { r, phi } => (
            (0..n)
                .map(|k| scs_to_ccs(SphericalPoint { r, theta: PI * t(k, n - 1), phi }))
                .collect(),
            false,
            RoleColor::G,
        ),
        CurveKind::Ray { theta, phi, r_max } => (
            (0..n)
                .map(|k| scs_to_ccs(SphericalPoint { r: r_max * t(k, n - 1), theta, phi }))
                .collect(),
            false,
            RoleColor::R,
        ),
    };
    Polyline::new(points, closed, color)
}

/// Circle where the sphere `r` meets the cone `θ`.
///
/// At θ = 0 or π the circle shrinks to a pole; the polyline then repeats
/// that point so it keeps [`CIRCLE_SAMPLES`] entries.
pub fn sphere_cone_intersection(r: f64, theta: f64) -> Polyline {
    let (mut s, c) = theta.sin_cos();
    let mut height = r * c;
    if s.abs() < super::AXIS_EPS {
        s = 0.0;
        height = if c > 0.0 { r } else { -r };
    }
    let points = (0..CIRCLE_SAMPLES)
        .map(|k| {
            let phi = TAU * k as f64 / CIRCLE_SAMPLES as f64;
            Vec3::new(r * s * phi.cos(), r * s * phi.sin(), height)
        })
        .collect();
    Polyline {
        points,
        closed: true,
        role_color: RoleColor::B,
    }
}

/// Corner and extent of a spherical volume element `dV = r² sinθ dr dθ dφ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeElementSpec {
    pub r0: f64,
    pub dr: f64,
    pub theta0: f64,
    pub dtheta: f64,
    pub phi0: f64,
    pub dphi: f64,
}

impl Default for VolumeElementSpec {
    /// Spans φ from 75° to 105°, so the element straddles the x = 0 plane
    /// between the first and second octants.
    fn default() -> Self {
        VolumeElementSpec {
            r0: 1.0,
            dr: 0.3,
            theta0: 40f64.to_radians(),
            dtheta: 30f64.to_radians(),
            phi0: 75f64.to_radians(),
            dphi: 30f64.to_radians(),
        }
    }
}

const ELEMENT_STEPS: (usize, usize, usize) = (3, 6, 6);

/// The six bounding patches of a volume element: inner and outer sphere,
/// lower and upper cone, first and second half-plane.
///
/// Patches share their sample points along common edges.
pub fn volume_element(spec: &VolumeElementSpec) -> Result<[SurfaceMesh; 6]> {
    let VolumeElementSpec {
        r0,
        dr,
        theta0,
        dtheta,
        phi0,
        dphi,
    } = *spec;
    if !(dr > 0.0) {
        return Err(Error::invalid("dr", "must be positive"));
    }
    if !(dtheta > 0.0) {
        return Err(Error::invalid("dtheta", "must be positive"));
    }
    if !(dphi > 0.0) || dphi > TAU + 1e-12 {
        return Err(Error::invalid("dphi", "must lie in (0, 2π]"));
    }
    if !(r0 >= 0.0) {
        return Err(Error::invalid("r0", "must be non-negative"));
    }
    if !(theta0 >= 0.0 && theta0 + dtheta <= PI + 1e-12) {
        return Err(Error::invalid("theta0", "θ range must stay within [0, π]"));
    }
    let (nr, nt, np) = ELEMENT_STEPS;
    let (r1, t1, p1) = (r0 + dr, theta0 + dtheta, phi0 + dphi);

    let patch = |kind: SurfaceKind, color: RoleColor| -> Result<SurfaceMesh> {
        let spec = SurfaceSpec {
            kind,
            r_range: (r0, r1),
            theta_range: (theta0, t1),
            phi_range: (phi0, p1),
            resolution: match kind {
                SurfaceKind::Sphere { .. } => (nt, np),
                SurfaceKind::Cone { .. } => (nr, np),
                SurfaceKind::SemiPlane { .. } => (nr, nt),
            },
            cutout: None,
        };
        element_patch(&spec).map(|m| m.with_color(color))
    };
    Ok([
        patch(SurfaceKind::Sphere { radius: r0 }, RoleColor::R)?,
        patch(SurfaceKind::Sphere { radius: r1 }, RoleColor::R)?,
        patch(SurfaceKind::Cone { theta: theta0 }, RoleColor::G)?,
        patch(SurfaceKind::Cone { theta: t1 }, RoleColor::G)?,
        patch(SurfaceKind::SemiPlane { phi: phi0 }, RoleColor::B)?,
        patch(SurfaceKind::SemiPlane { phi: p1 }, RoleColor::B)?,
    ])
}

/// Like [`coordinate_surface_mesh`] but never wraps φ, so a full-ring element
/// keeps separate (coincident) boundary columns, and accepts r0 = 0 or poles.
fn element_patch(spec: &SurfaceSpec) -> Result<SurfaceMesh> {
    let ((u0, u1), (v0, v1)) = spec.free_ranges();
    let (nu, nv) = spec.resolution;
    let rows = nu + 1;
    let cols = nv + 1;
    let u_at = |i: usize| u0 + (u1 - u0) * i as f64 / nu as f64;
    let v_at = |j: usize| v0 + (v1 - v0) * j as f64 / nv as f64;
    let welded: Vec<bool> = (0..rows)
        .map(|i| {
            let first = spec.point(u_at(i), v_at(0));
            (1..cols).all(|j| spec.point(u_at(i), v_at(j)).distance(first) <= 1e-12)
        })
        .collect();
    let topo = grid_topology(rows, cols, false, &welded);
    let vertices = topo.positions(|i, j| spec.point(u_at(i), v_at(j)));
    let mesh = SurfaceMesh {
        vertices,
        faces: topo.faces,
        role_color: RoleColor::R,
    }
    .without_degenerate_faces();
    if mesh.faces.is_empty() {
        return Err(Error::DegenerateSurface);
    }
    Ok(mesh)
}

#[cfg(test)]
fn phi_of(v: Vec3) -> f64 {
    super::ccs_to_scs(v).phi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::ccs_to_scs;
    use crate::coords::direction;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    #[test]
    fn sphere_vertices_on_surface() {
        let m = coordinate_surface_mesh(&SurfaceSpec::sphere(1.0)).unwrap();
        assert!(m.vertices.iter().all(|v| (v.norm() - 1.0).abs() <= 1e-9));
        assert_eq!(m.role_color, RoleColor::R);
        // two welded poles plus 17 rings of 36
        assert_eq!(m.vertices.len(), 2 + 17 * 36);
        assert_eq!(m.faces.len(), 2 * 18 * 36 - 2 * 36);
        m.validate().unwrap();
    }

    #[test]
    fn cone_vertices_at_fifty_degrees() {
        let m = coordinate_surface_mesh(&SurfaceSpec::cone(deg(50.0), 1.0)).unwrap();
        assert_eq!(m.role_color, RoleColor::G);
        for v in &m.vertices {
            if v.norm() > 0.0 {
                assert!(((v.z / v.norm()).acos() - deg(50.0)).abs() <= 1e-9);
            }
        }
        m.validate().unwrap();
    }

    #[test]
    fn semiplane_is_blue_and_flat() {
        let m = coordinate_surface_mesh(&SurfaceSpec::semiplane(deg(30.0), 1.0)).unwrap();
        assert_eq!(m.role_color, RoleColor::B);
        let n = Vec3::new(-deg(30.0).sin(), deg(30.0).cos(), 0.0);
        assert!(m.vertices.iter().all(|v| v.dot(n).abs() < 1e-12));
        assert!(m.vertices.iter().all(|v| v.dot(direction(deg(90.0), deg(30.0))) >= -1e-12));
    }

    #[test]
    fn cutout_removes_faces() {
        let spec = SurfaceSpec::sphere(1.0).with_cutout(0.0, deg(30.0));
        let m = coordinate_surface_mesh(&spec).unwrap();
        for f in &m.faces {
            let c = (m.vertices[f[0]] + m.vertices[f[1]] + m.vertices[f[2]]) / 3.0;
            let phi = phi_of(c);
            assert!(!(phi > 1e-9 && phi < deg(30.0) - 1e-9), "face centroid at φ={phi}");
        }
        let full = coordinate_surface_mesh(&SurfaceSpec::sphere(1.0)).unwrap();
        assert_eq!(full.faces.len() - m.faces.len(), 3 * (2 * 18 - 2));
    }

    #[test]
    fn collapsed_ranges_are_degenerate() {
        let spec = SurfaceSpec::sphere(1.0).with_theta_range(0.5, 0.5);
        assert_eq!(coordinate_surface_mesh(&spec), Err(Error::DegenerateSurface));
        assert!(coordinate_surface_mesh(&SurfaceSpec::sphere(0.0)).is_err());
        assert!(coordinate_surface_mesh(&SurfaceSpec::cone(0.0, 1.0)).is_err());
    }

    #[test]
    fn curves() {
        let eq = coordinate_curve(CurveKind::PhiCircle { r: 1.0, theta: deg(90.0) }, 36).unwrap();
        assert!(eq.closed);
        assert_eq!(eq.role_color, RoleColor::B);
        assert!(eq.points.iter().all(|p| p.z.abs() < 1e-15 && (p.norm() - 1.0).abs() < 1e-15));

        let m = coordinate_curve(CurveKind::Meridian { r: 1.0, phi: 0.0 }, 19).unwrap();
        assert!(!m.closed);
        assert_eq!(m.role_color, RoleColor::G);
        assert!(m.points.iter().all(|p| p.y == 0.0 && p.x >= 0.0));

        let c = coordinate_curve(CurveKind::PhiCircle { r: 2.0, theta: deg(50.0) }, 50).unwrap();
        assert!(c.points.iter().all(|p| (p.x.hypot(p.y) - 1.532089).abs() < 1e-6));
        assert!(c
            .points
            .iter()
            .all(|p| (p.x.hypot(p.y) - 2.0 * deg(50.0).sin()).abs() < 1e-9));

        let ray = coordinate_curve(CurveKind::Ray { theta: 0.3, phi: 0.2, r_max: 2.0 }, 5).unwrap();
        assert_eq!(ray.role_color, RoleColor::R);
        assert_eq!(ray.points[0], Vec3::ZERO);
        assert!((ray.points[4].norm() - 2.0).abs() < 1e-15);
        assert!(coordinate_curve(CurveKind::Ray { theta: 0.3, phi: 0.2, r_max: 2.0 }, 1).is_err());
    }

    #[test]
    fn intersection_circle() {
        let c = sphere_cone_intersection(1.0, deg(90.0));
        assert!(c.points.iter().all(|p| (p.norm() - 1.0).abs() < 1e-12 && p.z.abs() < 1e-15));
        let c = sphere_cone_intersection(1.0, deg(50.0));
        for p in &c.points {
            assert!((p.x.hypot(p.y) - 0.766044).abs() < 1e-6);
            assert!((p.z - deg(50.0).cos()).abs() < 1e-15);
        }
        let pole = sphere_cone_intersection(1.0, 0.0);
        assert!(pole.points.iter().all(|p| *p == Vec3::new(0.0, 0.0, 1.0)));
        let south = sphere_cone_intersection(2.0, PI);
        assert!(south.points.iter().all(|p| *p == Vec3::new(0.0, 0.0, -2.0)));
    }

    #[test]
    fn volume_element_straddles_x_zero() {
        let patches = volume_element(&VolumeElementSpec::default()).unwrap();
        assert_eq!(patches.len(), 6);
        let all: Vec<Vec3> = patches.iter().flat_map(|m| m.vertices.clone()).collect();
        assert!(all.iter().any(|v| v.x > 1e-9));
        assert!(all.iter().any(|v| v.x < -1e-9));
        assert!(all.iter().all(|v| v.y > 0.0 && v.z > 0.0));
    }

    #[test]
    fn volume_element_edges_are_shared() {
        let [inner, _outer, lower, _upper, first, _second] =
            volume_element(&VolumeElementSpec::default()).unwrap();
        let spec = VolumeElementSpec::default();
        let on = |v: &Vec3, r: f64, t: f64| {
            let s = ccs_to_scs(*v);
            (s.r - r).abs() < 1e-9 && (s.theta - t).abs() < 1e-9
        };
        // inner sphere ∩ lower cone edge: same samples from both patches
        let a: Vec<Vec3> = inner.vertices.iter().filter(|v| on(v, spec.r0, spec.theta0)).copied().collect();
        let b: Vec<Vec3> = lower.vertices.iter().filter(|v| on(v, spec.r0, spec.theta0)).copied().collect();
        assert_eq!(a.len(), ELEMENT_STEPS.2 + 1);
        assert_eq!(a.len(), b.len());
        for p in &a {
            assert!(b.iter().any(|q| q.distance(*p) <= 1e-9));
        }
        // first half-plane ∩ lower cone edge
        let edge: Vec<Vec3> = first
            .vertices
            .iter()
            .filter(|v| (ccs_to_scs(**v).theta - spec.theta0).abs() < 1e-9)
            .copied()
            .collect();
        assert_eq!(edge.len(), ELEMENT_STEPS.0 + 1);
        for p in &edge {
            assert!(lower.vertices.iter().any(|q| q.distance(*p) <= 1e-9));
        }
    }

    #[test]
    fn full_ring_semiplanes_coincide() {
        let spec = VolumeElementSpec {
            dphi: TAU,
            ..VolumeElementSpec::default()
        };
        let patches = volume_element(&spec).unwrap();
        let (a, b) = (&patches[4], &patches[5]);
        assert_eq!(a.vertices.len(), b.vertices.len());
        for (p, q) in a.vertices.iter().zip(&b.vertices) {
            assert!(p.distance(*q) <= 1e-9);
        }
    }

    #[test]
    fn volume_element_rejects_bad_extent() {
        let bad = VolumeElementSpec {
            dr: 0.0,
            ..VolumeElementSpec::default()
        };
        assert!(volume_element(&bad).is_err());
    }

    #[test]
    fn topology_welds_rows() {
        let t = grid_topology(3, 4, true, &[true, false, true]);
        assert_eq!(t.vertex_count, 6);
        assert_eq!(t.faces.len(), 8);
    }
}
