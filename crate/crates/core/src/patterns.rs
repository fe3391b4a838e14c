//! Radiation intensity on spheres and planes, and derived dipole figures.
//!
//! Intensity is `U = |E|²` in the relative units of [`crate::farfield`].
//! Directivity integrates with composite Simpson in θ and the periodic
//! trapezoid rule in φ; the radiation resistance integral is one-dimensional
//! Simpson.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coords::{direction, grid_topology, GridTopology, Polyline, RoleColor, Rotation, SurfaceMesh, Vec3};
use crate::error::{Error, Result};
use crate::farfield::{array_farfield, pattern_factor, AntennaArray, DipoleElement, DipoleKind};

/// Default `(n_theta, n_phi)` for [`directivity`].
pub const DEFAULT_QUADRATURE: (usize, usize) = (512, 512);
/// Default Simpson panel count for [`input_radiation_resistance`].
pub const DEFAULT_RESISTANCE_PANELS: usize = 4096;
/// Free-space impedance 120π Ω.
pub const ETA: f64 = 120.0 * PI;

/// Samples `θ_i = iπ/(n_theta−1)`, `φ_j = 2πj/n_phi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphericalGrid {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl SphericalGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 {
            return Err(Error::invalid("n_theta", "need at least 2 rows"));
        }
        if n_phi < 2 {
            return Err(Error::invalid("n_phi", "need at least 2 columns"));
        }
        Ok(SphericalGrid { n_theta, n_phi })
    }

    pub fn theta(&self, i: usize) -> f64 {
        PI * i as f64 / (self.n_theta - 1) as f64
    }

    pub fn phi(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n_phi as f64
    }

    pub fn direction(&self, i: usize, j: usize) -> Vec3 {
        direction(self.theta(i), self.phi(j))
    }

    /// Every `(θ, φ)` in row-major order.
    pub fn directions(&self) -> Vec<(f64, f64)> {
        (0..self.n_theta)
            .flat_map(|i| (0..self.n_phi).map(move |j| (self.theta(i), self.phi(j))))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Normalized intensity samples, row-major over θ then φ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternGrid {
    pub grid: SphericalGrid,
    pub values: Vec<f64>,
}

impl PatternGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n_phi + j]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// `|E|²` toward `dir`.
pub fn radiated_intensity(array: &AntennaArray, dir: Vec3) -> f64 {
    array_farfield(array, dir).norm_sqr()
}

fn raw_grid(array: &AntennaArray, grid: SphericalGrid) -> Vec<f64> {
    (0..grid.n_theta)
        .into_par_iter()
        .map(|i| {
            (0..grid.n_phi)
                .map(|j| radiated_intensity(array, grid.direction(i, j)))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .concat()
}

/// Samples the pattern on `grid`, normalized so the largest sample is 1.
pub fn pattern_grid(array: &AntennaArray, grid: SphericalGrid) -> Result<PatternGrid> {
    let mut values = raw_grid(array, grid);
    let max = values.iter().copied().fold(0.0, f64::max);
    if !(max > 0.0) || !max.is_finite() {
        return Err(Error::DegeneratePattern);
    }
    for v in &mut values {
        *v /= max;
    }
    Ok(PatternGrid { grid, values })
}

/// How a normalized intensity becomes a surface radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternMapping {
    /// Radius `√U`, the field magnitude.
    #[default]
    Field,
    /// Radius `U`.
    Power,
}

impl PatternMapping {
    pub fn radius(self, value: f64) -> f64 {
        match self {
            PatternMapping::Field => value.sqrt(),
            PatternMapping::Power => value,
        }
    }
}

/// Grid connectivity for a pattern surface; the first and last rows are
/// welded to single pole vertices.
pub fn pattern_topology(grid: SphericalGrid) -> GridTopology {
    let mut welded = vec![false; grid.n_theta];
    welded[0] = true;
    welded[grid.n_theta - 1] = true;
    grid_topology(grid.n_theta, grid.n_phi, true, &welded)
}

/// Vertex positions of the pattern surface, in [`pattern_topology`] order.
pub fn pattern_vertices(pg: &PatternGrid, mapping: PatternMapping) -> Vec<Vec3> {
    pattern_topology(pg.grid).positions(|i, j| pg.grid.direction(i, j) * mapping.radius(pg.value(i, j)))
}

/// Normalized intensity per surface vertex, in [`pattern_topology`] order.
pub fn pattern_vertex_values(pg: &PatternGrid) -> Vec<f64> {
    pattern_topology(pg.grid)
        .positions(|i, j| Vec3::new(pg.value(i, j), 0.0, 0.0))
        .into_iter()
        .map(|v| v.x)
        .collect()
}

/// The 3D pattern as a radial surface. Faces collapsed by pattern nulls are
/// dropped.
pub fn pattern_surface(pg: &PatternGrid, mapping: PatternMapping) -> SurfaceMesh {
    let topo = pattern_topology(pg.grid);
    SurfaceMesh {
        vertices: pattern_vertices(pg, mapping),
        faces: topo.faces,
        role_color: RoleColor::Custom(0.8, 0.6, 0.2),
    }
    .without_degenerate_faces()
}

/// One of the three Cartesian main planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MainPlane {
    Xoy,
    Yoz,
    Zox,
}

impl MainPlane {
    pub const ALL: [MainPlane; 3] = [MainPlane::Xoy, MainPlane::Yoz, MainPlane::Zox];

    /// Direction at in-plane angle `a`: from +x toward +y in xoy, from +z
    /// toward +y in yoz, from +z toward +x in zox.
    pub fn direction(self, a: f64) -> Vec3 {
        let (s, c) = a.sin_cos();
        match self {
            MainPlane::Xoy => Vec3::new(c, s, 0.0),
            MainPlane::Yoz => Vec3::new(0.0, s, c),
            MainPlane::Zox => Vec3::new(s, 0.0, c),
        }
    }

    pub fn role_color(self) -> RoleColor {
        match self {
            MainPlane::Xoy => RoleColor::R,
            MainPlane::Yoz => RoleColor::G,
            MainPlane::Zox => RoleColor::B,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MainPlane::Xoy => "xoy",
            MainPlane::Yoz => "yoz",
            MainPlane::Zox => "zox",
        }
    }
}

/// Pattern samples along a main plane at uniform angles over `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneCut {
    pub plane: MainPlane,
    /// Radians.
    pub angles: Vec<f64>,
    pub values: Vec<f64>,
    pub role_color: RoleColor,
}

impl PlaneCut {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The cut as a closed curve in its plane, radius mapped per `mapping`.
    pub fn polyline(&self, mapping: PatternMapping) -> Result<Polyline> {
        let pts = self
            .angles
            .iter()
            .zip(&self.values)
            .map(|(&a, &v)| self.plane.direction(a) * mapping.radius(v))
            .collect();
        Polyline::new(pts, true, self.role_color)
    }
}

fn cut_samples(f: &impl Fn(Vec3) -> f64, plane: MainPlane, n: usize) -> (Vec<f64>, Vec<f64>) {
    let angles: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let values = angles.iter().map(|&a| f(plane.direction(a))).collect();
    (angles, values)
}

/// Maximum of `f` over the sphere: a coarse scan followed by a compass
/// search from the best few samples.
pub fn peak_intensity(f: impl Fn(Vec3) -> f64 + Sync) -> f64 {
    const N_THETA: usize = 37;
    const N_PHI: usize = 72;
    let mut samples: Vec<(f64, f64, f64)> = (0..N_THETA)
        .flat_map(|i| {
            (0..N_PHI).map(move |j| (PI * i as f64 / (N_THETA - 1) as f64, TAU * j as f64 / N_PHI as f64))
        })
        .map(|(t, p)| (f(direction(t, p)), t, p))
        .collect();
    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    samples.truncate(8);
    samples
        .par_iter()
        .map(|&(v, t, p)| compass_search(&f, v, t, p, PI / (N_THETA - 1) as f64))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max)
}

fn compass_search(f: &impl Fn(Vec3) -> f64, mut best: f64, mut t: f64, mut p: f64, mut step: f64) -> f64 {
    while step > 1e-10 {
        let mut moved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let v = f(direction(t + dt, p + dp));
            if v > best {
                best = v;
                t += dt;
                p += dp;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    best
}

/// Cuts through the xoy, yoz and zox planes, each with `n` samples, jointly
/// normalized by the global pattern maximum and colored R, G, B.
///
/// When the global maximum lies off the main planes the cuts peak below 1.
pub fn main_plane_cuts(array: &AntennaArray, n: usize) -> Result<Vec<PlaneCut>> {
    if n < 8 {
        return Err(Error::invalid("n", "need at least 8 samples per cut"));
    }
    let f = |d: Vec3| radiated_intensity(array, d);
    let raw: Vec<_> = MainPlane::ALL.iter().map(|&pl| (pl, cut_samples(&f, pl, n))).collect();
    let cut_max = raw
        .iter()
        .flat_map(|(_, (_, v))| v.iter().copied())
        .fold(0.0, f64::max);
    let max = cut_max.max(peak_intensity(f));
    if !(max > 0.0) {
        return Err(Error::DegeneratePattern);
    }
    Ok(raw
        .into_iter()
        .map(|(plane, (angles, values))| PlaneCut {
            plane,
            angles,
            values: values.into_iter().map(|v| v / max).collect(),
            role_color: plane.role_color(),
        })
        .collect())
}

/// Composite Simpson weights for `n` (even) intervals over `[0, π]`.
fn simpson_weights(n: usize) -> Vec<f64> {
    let h = PI / n as f64;
    (0..=n)
        .map(|i| {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

/// Directivity `D = 4π U_max / ∬ U sinθ dθ dφ`.
///
/// `quadrature = (n_theta, n_phi)`: `n_theta` Simpson intervals (even,
/// ≥ 64) and `n_phi` trapezoid points (≥ 64).
pub fn directivity(array: &AntennaArray, quadrature: (usize, usize)) -> Result<f64> {
    let (nt, np) = quadrature;
    if nt < 64 || nt % 2 != 0 {
        return Err(Error::invalid("n_theta", "must be even and at least 64"));
    }
    if np < 64 {
        return Err(Error::invalid("n_phi", "must be at least 64"));
    }
    let w = simpson_weights(nt);
    let dphi = TAU / np as f64;
    let rows: Vec<(f64, f64)> = (0..=nt)
        .into_par_iter()
        .map(|i| {
            let theta = PI * i as f64 / nt as f64;
            let mut sum = 0.0;
            let mut max: f64 = 0.0;
            for j in 0..np {
                let u = radiated_intensity(array, direction(theta, dphi * j as f64));
                sum += u;
                max = max.max(u);
            }
            (w[i] * theta.sin() * sum * dphi, max)
        })
        .collect();
    let total: f64 = rows.iter().map(|r| r.0).sum();
    let grid_max = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let u_max = grid_max.max(peak_intensity(|d| radiated_intensity(array, d)));
    if !(total > 0.0) || !(u_max > 0.0) {
        return Err(Error::DegeneratePattern);
    }
    Ok(4.0 * PI * u_max / total)
}

/// Radiation resistance referred to the loop current,
/// `R_m = (η/2π) ∫₀^π F(θ)² sin θ dθ`, with `n` (even) Simpson panels.
pub fn loop_radiation_resistance(length: f64, n: usize) -> Result<f64> {
    if !(length > 0.0) {
        return Err(Error::invalid("length", "must be positive"));
    }
    if n < 2 || n % 2 != 0 {
        return Err(Error::invalid("n", "panel count must be even and at least 2"));
    }
    let kind = DipoleKind::Sinusoidal { length };
    let w = simpson_weights(n);
    let integral: f64 = (0..=n)
        .map(|i| {
            let theta = PI * i as f64 / n as f64;
            let f = pattern_factor(kind, theta);
            w[i] * f * f * theta.sin()
        })
        .sum();
    Ok(ETA / TAU * integral)
}

/// Input radiation resistance `R_m / sin²(πL)`, in ohms.
pub fn input_radiation_resistance(length: f64, n: usize) -> Result<f64> {
    let s = (PI * length).sin();
    if length > 0.0 && s.abs() < 1e-6 {
        return Err(Error::AntiResonant { length });
    }
    Ok(loop_radiation_resistance(length, n)? / (s * s))
}

/// First local maximum of `|F(ψ)|` in `(0°, 90°]`, in degrees.
///
/// Scans at `scan_step_deg` and refines the bracketing interval by
/// golden-section search to better than 1e-3°. Returns 90 when `|F|`
/// rises all the way to broadside.
pub fn first_maximum_from_axis(length: f64, scan_step_deg: f64) -> Result<f64> {
    if !(length > 0.0) {
        return Err(Error::invalid("length", "must be positive"));
    }
    if !(scan_step_deg > 0.0 && scan_step_deg <= 0.5) {
        return Err(Error::invalid("scan_step", "must lie in (0°, 0.5°]"));
    }
    let kind = DipoleKind::Sinusoidal { length };
    let f = |deg: f64| pattern_factor(kind, deg.to_radians()).abs();
    let n = (90.0 / scan_step_deg).ceil() as usize;
    let at = |k: usize| (90.0 * k as f64 / n as f64).min(90.0);
    let mut prev = f(at(1));
    for k in 1..n {
        let cur = prev;
        let next = f(at(k + 1));
        let before = f(at(k - 1));
        if cur > before && cur > next {
            return Ok(golden_max(&f, at(k - 1), at(k + 1)));
        }
        prev = next;
    }
    Ok(90.0)
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-7 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Figures of one center-fed dipole along z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DipoleCharacteristics {
    pub length: f64,
    pub theta_max_deg: f64,
    pub directivity: f64,
    /// `None` at anti-resonant lengths.
    pub r_in: Option<f64>,
    pub anti_resonant: bool,
    pub cut: PlaneCut,
}

/// Samples per characteristics cut.
pub const CHARACTERISTICS_CUT_SAMPLES: usize = 72;

pub fn dipole_characteristics(length: f64) -> Result<DipoleCharacteristics> {
    let array = AntennaArray::single(DipoleElement::centered(Vec3::Z, length)?);
    let directivity = directivity(&array, DEFAULT_QUADRATURE)?;
    let (r_in, anti_resonant) = match input_radiation_resistance(length, DEFAULT_RESISTANCE_PANELS) {
        Ok(r) => (Some(r), false),
        Err(Error::AntiResonant { .. }) => (None, true),
        Err(e) => return Err(e),
    };
    let cut = main_plane_cuts(&array, CHARACTERISTICS_CUT_SAMPLES)?
        .into_iter()
        .find(|c| c.plane == MainPlane::Zox)
        .expect("three cuts");
    Ok(DipoleCharacteristics {
        length,
        theta_max_deg: first_maximum_from_axis(length, 0.1)?,
        directivity,
        r_in,
        anti_resonant,
        cut,
    })
}

/// Lengths spaced uniformly over `[l_min, l_max]`.
pub fn sweep_lengths(l_min: f64, l_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(l_min > 0.0 && l_min < l_max) || !l_max.is_finite() {
        return Err(Error::invalid("l_min", "need 0 < l_min < l_max"));
    }
    if steps < 2 {
        return Err(Error::invalid("steps", "need at least 2 steps"));
    }
    Ok((0..steps)
        .map(|i| l_min + (l_max - l_min) * i as f64 / (steps - 1) as f64)
        .collect())
}

/// One [`DipoleCharacteristics`] row per length.
pub fn characteristics_sweep(l_min: f64, l_max: f64, steps: usize) -> Result<Vec<DipoleCharacteristics>> {
    sweep_lengths(l_min, l_max, steps)?
        .into_par_iter()
        .map(dipole_characteristics)
        .collect()
}

/// Anything that radiates an intensity pattern.
pub trait IntensitySource: Sync {
    fn intensity(&self, dir: Vec3) -> f64;

    /// Largest intensity over all directions.
    fn peak(&self) -> f64 {
        peak_intensity(|d| self.intensity(d))
    }
}

impl IntensitySource for AntennaArray {
    fn intensity(&self, dir: Vec3) -> f64 {
        radiated_intensity(self, dir)
    }
}

/// Radiates equally in all directions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Isotropic;

impl IntensitySource for Isotropic {
    fn intensity(&self, _dir: Vec3) -> f64 {
        1.0
    }

    fn peak(&self) -> f64 {
        1.0
    }
}

/// Samples recorded while an antenna turns in front of a fixed receiver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementTrace {
    pub rotation_axis: Vec3,
    pub receiver: Vec3,
    /// Rotation angle per step, radians.
    pub angles: Vec<f64>,
    /// Normalized intensity per step.
    pub values: Vec<f64>,
    /// Polar plot of the trace in the plane normal to the rotation axis.
    pub points: Vec<Vec3>,
}

impl MeasurementTrace {
    /// The trace as recorded after `k` steps: `k + 1` points.
    pub fn progressive(&self, k: usize) -> &[Vec3] {
        &self.points[..(k + 1).min(self.points.len())]
    }
}

/// Turns the source by `2πk/n_steps` about `rotation_axis` and records the
/// intensity toward `receiver`, normalized by the source peak.
pub fn measurement_sweep(
    source: &dyn IntensitySource,
    rotation_axis: Vec3,
    receiver: Vec3,
    n_steps: usize,
) -> Result<MeasurementTrace> {
    if n_steps < 4 {
        return Err(Error::invalid("n_steps", "need at least 4 steps"));
    }
    let axis = rotation_axis
        .normalized()
        .ok_or_else(|| Error::invalid("rotation_axis", "must be non-zero"))?;
    let rx = receiver
        .normalized()
        .ok_or_else(|| Error::invalid("receiver", "must be non-zero"))?;
    let peak = source.peak();
    if !(peak > 0.0) {
        return Err(Error::DegeneratePattern);
    }
    let u = (rx - axis * axis.dot(rx))
        .normalized()
        .unwrap_or_else(|| axis.any_perpendicular());
    let v = axis.cross(u);
    let angles: Vec<f64> = (0..n_steps).map(|k| TAU * k as f64 / n_steps as f64).collect();
    let values: Vec<f64> = angles
        .iter()
        .map(|&a| {
            // rotating the antenna by a is seeing the fixed receiver at −a
            let seen = Rotation::from_axis_angle(axis, -a).apply(rx);
            source.intensity(seen) / peak
        })
        .collect();
    let points = angles
        .iter()
        .zip(&values)
        .map(|(&a, &val)| (u * a.cos() + v * a.sin()) * val)
        .collect();
    Ok(MeasurementTrace {
        rotation_axis: axis,
        receiver: rx,
        angles,
        values,
        points,
    })
}

/// Half-wave dipole along z, the default stand-in for the measured antenna.
pub fn default_stand_in() -> AntennaArray {
    AntennaArray::single(DipoleElement::centered(Vec3::Z, 0.5).expect("valid dipole"))
}
