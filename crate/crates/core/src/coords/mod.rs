//! Cartesian and spherical coordinates.
//!
//! Angles are radians everywhere in this module. θ is measured from +z and
//! lies in `[0, π]`; φ is measured from +x toward +y and lies in `[0, 2π)`.
//! On the z-axis φ is canonicalized to 0, and the unit-vector triple carries
//! the singularity through its `defined` flag.
//!
//! Coordinate roles follow one color convention throughout the crate:
//! `(x, y, z)` and `(r, θ, φ)` map to `(R, G, B)` in that order.

mod geometry;
mod rotation;
mod vec3;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

pub use geometry::{
    coordinate_curve, coordinate_surface_mesh, grid_topology, sphere_cone_intersection,
    volume_element, CurveKind, GridTopology, Polyline, SurfaceKind, SurfaceMesh, SurfaceSpec,
    VolumeElementSpec, CIRCLE_SAMPLES,
};
pub use rotation::Rotation;
pub use vec3::Vec3;

/// Below this value of `sin θ` a direction is treated as lying on the z-axis.
pub const AXIS_EPS: f64 = 1e-12;

/// A point in spherical coordinates, `r` in wavelengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    /// Normalizes the angles into `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    ///
    /// A negative radius is folded into the antipodal direction.
    pub fn new(r: f64, theta: f64, phi: f64) -> Self {
        let (mut r, mut theta, mut phi) = (r, theta, phi);
        if r < 0.0 {
            r = -r;
            theta = PI - theta;
            phi += PI;
        }
        theta = theta.rem_euclid(TAU);
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        SphericalPoint {
            r,
            theta,
            phi: wrap_phi(phi),
        }
    }

    pub fn direction(theta: f64, phi: f64) -> Self {
        SphericalPoint::new(1.0, theta, phi)
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_phi(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

pub fn scs_to_ccs(p: SphericalPoint) -> Vec3 {
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    Vec3::new(p.r * st * cp, p.r * st * sp, p.r * ct)
}

/// Unit vector toward `(θ, φ)`.
pub fn direction(theta: f64, phi: f64) -> Vec3 {
    scs_to_ccs(SphericalPoint {
        r: 1.0,
        theta,
        phi,
    })
}

pub fn ccs_to_scs(v: Vec3) -> SphericalPoint {
    let r = v.norm();
    if r == 0.0 {
        return SphericalPoint {
            r: 0.0,
            theta: 0.0,
            phi: 0.0,
        };
    }
    let rho = v.x.hypot(v.y);
    let theta = rho.atan2(v.z);
    let phi = if rho <= AXIS_EPS * r {
        0.0
    } else {
        wrap_phi(v.y.atan2(v.x))
    };
    SphericalPoint { r, theta, phi }
}

/// The local orthonormal frame `(e_r, e_θ, e_φ)` at a direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitTriple {
    pub direction: SphericalPoint,
    pub e_r: Vec3,
    pub e_theta: Vec3,
    pub e_phi: Vec3,
    /// False on the z-axis, where e_θ and e_φ depend on an arbitrary φ.
    pub defined: bool,
}

pub fn unit_triple(theta: f64, phi: f64) -> UnitTriple {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    UnitTriple {
        direction: SphericalPoint::direction(theta, phi),
        e_r: Vec3::new(st * cp, st * sp, ct),
        e_theta: Vec3::new(ct * cp, ct * sp, -st),
        e_phi: Vec3::new(-sp, cp, 0.0),
        defined: st.abs() >= AXIS_EPS,
    }
}

/// Unit triples for a list of `(θ, φ)` directions.
///
/// With `None`, uses the union of the three main-plane great circles sampled
/// every 45°: 16 regular directions plus the two poles, which come back with
/// `defined == false`.
pub fn standard_triples(directions: Option<&[(f64, f64)]>) -> Vec<UnitTriple> {
    match directions {
        Some(list) => list.iter().map(|&(t, p)| unit_triple(t, p)).collect(),
        None => default_triple_directions()
            .into_iter()
            .map(|(t, p)| unit_triple(t, p))
            .collect(),
    }
}

/// The default direction set of [`standard_triples`], in emission order.
pub fn default_triple_directions() -> Vec<(f64, f64)> {
    let step = PI / 4.0;
    let mut candidates = Vec::new();
    // xoy, yoz, zox circles in that order
    for k in 0..8 {
        let a = k as f64 * step;
        candidates.push(Vec3::new(a.cos(), a.sin(), 0.0));
    }
    for k in 0..8 {
        let a = k as f64 * step;
        candidates.push(Vec3::new(0.0, a.cos(), a.sin()));
    }
    for k in 0..8 {
        let a = k as f64 * step;
        candidates.push(Vec3::new(a.sin(), 0.0, a.cos()));
    }
    let mut unique: Vec<Vec3> = Vec::new();
    for c in candidates {
        if !unique.iter().any(|u| u.distance(c) < 1e-9) {
            unique.push(c);
        }
    }
    unique
        .into_iter()
        .map(|v| {
            let s = ccs_to_scs(v);
            (s.theta, s.phi)
        })
        .collect()
}

/// Color assigned to a geometric role.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RoleColor {
    R,
    G,
    B,
    Custom(f64, f64, f64),
}

impl RoleColor {
    pub fn rgb(self) -> [f64; 3] {
        match self {
            RoleColor::R => [1.0, 0.0, 0.0],
            RoleColor::G => [0.0, 1.0, 0.0],
            RoleColor::B => [0.0, 0.0, 1.0],
            RoleColor::Custom(r, g, b) => [r, g, b],
        }
    }
}
