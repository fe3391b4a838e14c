use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::params::*;
use super::{ScenarioParams, ScenarioSpec};
use crate::coords::{
    coordinate_curve, coordinate_surface_mesh, direction, grid_topology, scs_to_ccs, sphere_cone_intersection,
    standard_triples, unit_triple, volume_element, CurveKind, Polyline, RoleColor, SphericalPoint, SurfaceMesh,
    SurfaceSpec, UnitTriple, Vec3, VolumeElementSpec,
};
use crate::error::{Error, Result};
use crate::export::{characteristics_json, CharacteristicsJson, CutJson, PolarizationJson};
use crate::farfield::{
    array_farfield, decompose, polarization, AntennaArray, DipoleElement, DipoleKind, Handedness,
    HandednessConvention, PhasorVec,
};
use crate::patterns::{
    characteristics_sweep, default_stand_in, directivity, main_plane_cuts, measurement_sweep, pattern_grid,
    pattern_surface, pattern_topology, pattern_vertices, MainPlane, PatternGrid, PatternMapping, PlaneCut,
    SphericalGrid, DEFAULT_QUADRATURE,
};
use crate::scene::{
    arrow, arrow_mesh, axes_triad, AnimationTrack, Color, CoordinateRole, Scene, SceneNode, TrackValues,
};
use crate::waves::{rotating_phasor_frames, wave_frames, TerminatedWire, WaveComponents, WaveFrameSet};

/// A built scenario: the scene and the numbers behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildOutput {
    pub scene: Scene,
    pub data: ScenarioData,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavesData {
    pub gamma: [f64; 2],
    #[serde(flatten)]
    pub frames: WaveFrameSet<WaveComponents>,
}

/// A field sample and its polarization readout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllipseData {
    pub label: String,
    pub position: Vec3,
    pub propagation: Vec3,
    pub e_c: Vec3,
    pub e_s: Vec3,
    /// `None` where the field vanishes.
    pub polarization: Option<PolarizationJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChamberData {
    pub rotation_axis: Vec3,
    pub receiver: Vec3,
    pub angles_deg: Vec<f64>,
    pub values: Vec<f64>,
}

/// Data products per kind; serialized with a `"type"` tag.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScenarioData {
    Waves(WavesData),
    Phasors(WaveFrameSet<Vec3>),
    VolumeElement {
        r0: f64,
        dr: f64,
        theta0_deg: f64,
        dtheta_deg: f64,
        phi0_deg: f64,
        dphi_deg: f64,
        volume: f64,
    },
    UnitTriples {
        triples: Vec<UnitTriple>,
    },
    Point {
        point: SphericalPoint,
        position: Vec3,
        triple: UnitTriple,
    },
    SphereCone {
        thetas_deg: Vec<f64>,
        radii: Vec<f64>,
        heights: Vec<f64>,
    },
    Ellipses {
        ellipses: Vec<EllipseData>,
    },
    PolarizationSweep {
        theta_deg: f64,
        phis_deg: Vec<f64>,
        samples: Vec<Option<PolarizationJson>>,
        marks: Vec<EllipseData>,
    },
    Pattern {
        directivity: f64,
        max: f64,
        cuts: Vec<CutJson>,
        #[serde(skip)]
        grid: PatternGrid,
        #[serde(skip)]
        plane_cuts: Vec<PlaneCut>,
    },
    Chamber(ChamberData),
    Characteristics {
        table: Vec<CharacteristicsJson>,
    },
}

impl ScenarioData {
    /// Main-plane cuts, for kinds that have them.
    pub fn cuts(&self) -> Option<&[PlaneCut]> {
        match self {
            ScenarioData::Pattern { plane_cuts, .. } => Some(plane_cuts),
            _ => None,
        }
    }

    pub fn pattern(&self) -> Option<&PatternGrid> {
        match self {
            ScenarioData::Pattern { grid, .. } => Some(grid),
            _ => None,
        }
    }
}

/// Builds the scene and data of a validated spec. Deterministic.
pub fn build(spec: &ScenarioSpec) -> Result<BuildOutput> {
    spec.validate()?;
    let mut scene = Scene::new();
    for v in spec.effective_viewpoints() {
        scene.add_viewpoint(v);
    }
    let n = spec.n_frames;
    let data = match &spec.params {
        ScenarioParams::WavesLine(p) => waves_line(&mut scene, p, n)?,
        ScenarioParams::StandingPhasor(p) => standing_phasor(&mut scene, p, n)?,
        ScenarioParams::VolumeElement(p) => volume_element_scene(&mut scene, p)?,
        ScenarioParams::UnitTriples(p) => unit_triples(&mut scene, p)?,
        ScenarioParams::ScsComposite(p) => scs_composite(&mut scene, p)?,
        ScenarioParams::SphereConeSweep(p) => sphere_cone_sweep(&mut scene, p, n)?,
        ScenarioParams::PolarizationTriptych(p) => polarization_triptych(&mut scene, p)?,
        ScenarioParams::FieldDecomposition(p) => field_decomposition(&mut scene, p, n)?,
        ScenarioParams::EllipseTrace(p) => ellipse_trace(&mut scene, p, n)?,
        ScenarioParams::FarfieldEllipse(p) => farfield_ellipse(&mut scene, p, n)?,
        ScenarioParams::CrossedDipoles(p) => crossed_dipoles(&mut scene, p, n)?,
        ScenarioParams::TwoDipoleArray(p) => two_dipole_array(&mut scene, p, n)?,
        ScenarioParams::AnechoicSweep(p) => anechoic_sweep(&mut scene, p, n)?,
        ScenarioParams::ExplorerDefault(p) => explorer(&mut scene, p)?,
        ScenarioParams::Characteristics(p) => characteristics(&mut scene, p)?,
    };
    scene.validate()?;
    Ok(BuildOutput { scene, data })
}

// ---- shared pieces -------------------------------------------------------

const FIELD: Color = Color::new(1.0, 0.85, 0.0);
const TRACE: Color = Color::WHITE;
const EC: Color = Color::new(1.0, 0.5, 0.0);
const ES: Color = Color::new(0.0, 0.8, 0.8);

fn deg(x: f64) -> f64 {
    x.to_radians()
}

/// `k/(n−1)` over `n` samples; a single sample sits at 0.
fn sweep_fraction(k: usize, n: usize) -> f64 {
    if n > 1 {
        k as f64 / (n - 1) as f64
    } else {
        0.0
    }
}

fn line(points: Vec<Vec3>, closed: bool) -> Result<Polyline> {
    Polyline::new(points, closed, RoleColor::Custom(1.0, 1.0, 1.0))
}

fn segment(a: Vec3, b: Vec3) -> Polyline {
    Polyline {
        points: vec![a, b],
        closed: false,
        role_color: RoleColor::Custom(1.0, 1.0, 1.0),
    }
}

/// Arrow vertices, or all vertices at `from` when the arrow is too short
/// to draw.
fn arrow_points(from: Vec3, to: Vec3, r: f64) -> Vec<Vec3> {
    match arrow_mesh(from, to, r) {
        Ok(m) if from.distance(to) > 1e-6 => m.vertices,
        _ => vec![from; 3 * crate::scene::ARROW_SEGMENTS + 2],
    }
}

fn arrow_faces() -> Vec<[usize; 3]> {
    arrow_mesh(Vec3::ZERO, Vec3::X, 0.01).expect("unit arrow").faces
}

/// Mesh drawn for a morph: the first key with no collapsed face, else the
/// key keeping the most faces.
fn representative_mesh(faces: &[[usize; 3]], frames: &[Vec<Vec3>], color: RoleColor) -> SurfaceMesh {
    let mut best: Option<SurfaceMesh> = None;
    for f in frames {
        let m = SurfaceMesh {
            vertices: f.clone(),
            faces: faces.to_vec(),
            role_color: color,
        }
        .without_degenerate_faces();
        if m.faces.len() == faces.len() {
            return m;
        }
        if best.as_ref().map_or(true, |b| m.faces.len() > b.faces.len()) {
            best = Some(m);
        }
    }
    best.expect("at least one frame")
}

/// Adds a mesh node morphing through `frames`.
fn add_morph_mesh(
    scene: &mut Scene,
    faces: &[[usize; 3]],
    frames: Vec<Vec<Vec3>>,
    color: Color,
    period: f64,
    periodic: bool,
) -> Result<String> {
    let mesh = representative_mesh(faces, &frames, RoleColor::Custom(color.r, color.g, color.b));
    let id = scene.add(SceneNode::mesh(mesh).colored(color));
    scene.add_track(AnimationTrack::from_frames(&id, period, TrackValues::Morph(frames), periodic))?;
    Ok(id)
}

fn add_morph_arrow(
    scene: &mut Scene,
    keys: &[(Vec3, Vec3)],
    r: f64,
    color: Color,
    period: f64,
    periodic: bool,
) -> Result<String> {
    let frames = keys.iter().map(|&(a, b)| arrow_points(a, b, r)).collect();
    let id = add_morph_mesh(scene, &arrow_faces(), frames, color, period, periodic)?;
    if let Some(n) = scene.nodes.last_mut() {
        n.kind = crate::scene::NodeKind::Arrow;
    }
    Ok(id)
}

/// Adds a line node (one polyline per entry of each key) morphing through
/// `frames`.
fn add_morph_lines(
    scene: &mut Scene,
    frames: Vec<Vec<Vec<Vec3>>>,
    closed: bool,
    color: Color,
    period: f64,
    periodic: bool,
) -> Result<String> {
    let lines = frames[0]
        .iter()
        .map(|pts| line(pts.clone(), closed))
        .collect::<Result<Vec<_>>>()?;
    let id = scene.add(SceneNode::lines(lines).colored(color));
    let flat = frames.into_iter().map(|f| f.concat()).collect();
    scene.add_track(AnimationTrack::from_frames(&id, period, TrackValues::Morph(flat), periodic))?;
    Ok(id)
}

/// Frames of a curve drawn progressively: frame `k` shows the first
/// `counts[k]` points, the rest parked on the last shown point.
fn progressive(curve: &[Vec3], counts: &[usize]) -> Vec<Vec<Vec3>> {
    counts
        .iter()
        .map(|&c| {
            let c = c.clamp(1, curve.len());
            let mut f = curve[..c].to_vec();
            f.resize(curve.len(), curve[c - 1]);
            f
        })
        .collect()
}

fn label(scene: &mut Scene, text: &str, at: Vec3, size: f64, color: Color) -> String {
    scene.add(SceneNode::text(text, at, size).colored(color))
}

fn ellipse_data(
    label: &str,
    position: Vec3,
    propagation: Vec3,
    e: &PhasorVec,
    convention: HandednessConvention,
) -> Result<EllipseData> {
    let d = decompose(e);
    let pol = match polarization(e, propagation, convention) {
        Ok(p) => Some(PolarizationJson::from(&p)),
        Err(Error::NullField) => None,
        Err(err) => return Err(err),
    };
    Ok(EllipseData {
        label: label.to_string(),
        position,
        propagation: propagation.normalized().unwrap_or(propagation),
        e_c: d.e_c,
        e_s: d.e_s,
        polarization: pol,
    })
}

/// Tip path `E(τ)` over one period, `n` samples from τ = 0.
fn field_path(e: &PhasorVec, n: usize) -> Vec<Vec3> {
    let d = decompose(e);
    (0..n).map(|k| d.at(TAU * k as f64 / n as f64)).collect()
}

/// Phasor whose ellipse has the given major axis, axial ratio and sense
/// about `propagation` under `convention`.
pub(crate) fn ellipse_phasor(
    major: Vec3,
    propagation: Vec3,
    axial_ratio: f64,
    handedness: Handedness,
    convention: HandednessConvention,
) -> Result<PhasorVec> {
    let p = propagation
        .normalized()
        .ok_or_else(|| Error::invalid("propagation", "must be non-zero"))?;
    let m = major.normalized().ok_or_else(|| Error::invalid("major_axis", "must be non-zero"))?;
    let a = major.norm();
    // e_c × e_s = σ·a·b·p, so σ = +1 turns CCW as seen facing the wave.
    let ccw_sign = match convention {
        HandednessConvention::TowardObserver => 1.0,
        HandednessConvention::TowardSource => -1.0,
    };
    let sigma = match handedness {
        Handedness::Ccw => ccw_sign,
        _ => -ccw_sign,
    };
    let e_c = m * a;
    let e_s = p.cross(m) * (sigma * a / axial_ratio);
    Ok(PhasorVec::from_parts(e_c, -e_s))
}

fn triad(scene: &mut Scene, length: f64) -> Result<()> {
    axes_triad(scene, length).map(|_| ())
}

// ---- builders ------------------------------------------------------------

fn waves_line(scene: &mut Scene, p: &WavesLineParams, n: usize) -> Result<ScenarioData> {
    let wire = TerminatedWire::new(p.z0, Complex64::new(p.load[0], p.load[1]), p.wire_length)?;
    let set = wave_frames(&wire, p.n_points, n)?;
    triad(scene, 0.5)?;
    // Load at the right end: x = L − z.
    let x_of = |z: f64| p.wire_length - z;
    let rows: [(&str, f64, Color, Option<f64>, fn(&WaveComponents) -> f64); 5] = [
        ("p", 2.4, Color::WHITE, Some(1.0), |w| w.p),
        ("i", 1.2, Color::new(1.0, 0.6, 0.0), Some(1.0), |w| w.i),
        ("r", 0.0, Color::new(0.0, 0.8, 1.0), Some(-1.0), |w| w.r),
        ("s", -1.2, Color::new(1.0, 0.0, 1.0), None, |w| w.s),
        ("t", -2.4, Color::new(1.0, 1.0, 0.0), Some(1.0), |w| w.t),
    ];
    let (y, scale) = (1.0, 0.3);
    for (name, z0, color, dir, get) in rows {
        let base = Vec3::new(0.0, y, z0);
        scene.add(
            SceneNode::polyline(line(vec![base, base + Vec3::X * p.wire_length], false)?).colored(Color::GRAY),
        );
        let frames: Vec<Vec<Vec<Vec3>>> = set
            .frames
            .iter()
            .map(|f| {
                vec![set
                    .positions
                    .iter()
                    .zip(f)
                    .map(|(&z, w)| Vec3::new(x_of(z), y, z0 + scale * get(w)))
                    .collect()]
            })
            .collect();
        add_morph_lines(scene, frames, false, color, p.period, true)?;
        label(scene, name, Vec3::new(-0.35, y, z0 - 0.1), 0.25, color);
        if let Some(s) = dir {
            let from = Vec3::new(-0.25 + if s < 0.0 { 0.4 } else { 0.0 }, y, z0 + 0.35);
            scene.add(arrow(from, from + Vec3::X * (0.4 * s), color, 0.015)?);
        }
    }
    label(scene, "Z_L", Vec3::new(p.wire_length + 0.15, y, -0.1), 0.25, Color::GRAY);
    let g = wire.gamma();
    Ok(ScenarioData::Waves(WavesData {
        gamma: [g.re, g.im],
        frames: set,
    }))
}

fn standing_phasor(scene: &mut Scene, p: &StandingPhasorParams, n: usize) -> Result<ScenarioData> {
    let set = rotating_phasor_frames(p.length, p.n_points, n)?;
    triad(scene, 1.0)?;
    let half = 0.5 * p.length;
    scene.add(
        SceneNode::polyline(line(vec![Vec3::Z * -half, Vec3::Z * half], false)?).colored(Color::GRAY),
    );
    let scale = 0.5;
    let spokes: Vec<Vec<Vec<Vec3>>> = set
        .frames
        .iter()
        .map(|f| {
            set.positions
                .iter()
                .zip(f)
                .map(|(&z, v)| vec![Vec3::Z * z, Vec3::Z * z + *v * scale])
                .collect()
        })
        .collect();
    let tips: Vec<Vec<Vec<Vec3>>> = set
        .frames
        .iter()
        .map(|f| vec![set.positions.iter().zip(f).map(|(&z, v)| Vec3::Z * z + *v * scale).collect()])
        .collect();
    add_morph_lines(scene, spokes, false, FIELD, p.period, true)?;
    add_morph_lines(scene, tips, false, Color::WHITE, p.period, true)?;
    Ok(ScenarioData::Phasors(set))
}

fn volume_element_scene(scene: &mut Scene, p: &VolumeElementParams) -> Result<ScenarioData> {
    let spec = VolumeElementSpec {
        r0: p.r0,
        dr: p.dr,
        theta0: deg(p.theta0_deg),
        dtheta: deg(p.dtheta_deg),
        phi0: deg(p.phi0_deg),
        dphi: deg(p.dphi_deg),
    };
    let patches = volume_element(&spec)?;
    triad(scene, 1.2 * (p.r0 + p.dr))?;
    let roles = [
        CoordinateRole::R,
        CoordinateRole::R,
        CoordinateRole::Theta,
        CoordinateRole::Theta,
        CoordinateRole::Phi,
        CoordinateRole::Phi,
    ];
    for (m, role) in patches.into_iter().zip(roles) {
        scene.add(SceneNode::mesh(m).with_role(role).with_opacity(0.85));
    }
    let (t1, p1) = (spec.theta0 + spec.dtheta, spec.phi0 + spec.dphi);
    let r1 = p.r0 + p.dr;
    let rays = [(spec.theta0, spec.phi0), (spec.theta0, p1), (t1, spec.phi0), (t1, p1)]
        .into_iter()
        .map(|(t, f)| segment(Vec3::ZERO, scs_to_ccs(SphericalPoint::new(r1, t, f))))
        .collect();
    scene.add(SceneNode::lines(rays).colored(Color::GRAY));
    let volume = (r1.powi(3) - p.r0.powi(3)) / 3.0 * (spec.theta0.cos() - t1.cos()) * spec.dphi;
    Ok(ScenarioData::VolumeElement {
        r0: p.r0,
        dr: p.dr,
        theta0_deg: p.theta0_deg,
        dtheta_deg: p.dtheta_deg,
        phi0_deg: p.phi0_deg,
        dphi_deg: p.dphi_deg,
        volume,
    })
}

fn merge(meshes: &[SurfaceMesh], color: RoleColor) -> SurfaceMesh {
    let mut out = SurfaceMesh {
        vertices: Vec::new(),
        faces: Vec::new(),
        role_color: color,
    };
    for m in meshes {
        let base = out.vertices.len();
        out.vertices.extend_from_slice(&m.vertices);
        out.faces.extend(m.faces.iter().map(|f| f.map(|i| i + base)));
    }
    out
}

fn unit_triples(scene: &mut Scene, p: &UnitTriplesParams) -> Result<ScenarioData> {
    let dirs: Option<Vec<(f64, f64)>> = p
        .directions_deg
        .as_ref()
        .map(|d| d.iter().map(|&[t, f]| (deg(t), deg(f))).collect());
    let triples = standard_triples(dirs.as_deref());
    triad(scene, 1.5)?;
    let circles = MainPlane::ALL
        .iter()
        .map(|plane| line((0..72).map(|k| plane.direction(TAU * k as f64 / 72.0)).collect(), true))
        .collect::<Result<Vec<_>>>()?;
    scene.add(SceneNode::lines(circles).colored(Color::GRAY).with_opacity(0.6));
    let r = 0.012;
    let (mut er, mut et, mut ep) = (Vec::new(), Vec::new(), Vec::new());
    for t in triples.iter().filter(|t| t.defined) {
        let at = t.e_r;
        er.push(arrow_mesh(at, at + t.e_r * p.arrow_length, r)?);
        et.push(arrow_mesh(at, at + t.e_theta * p.arrow_length, r)?);
        ep.push(arrow_mesh(at, at + t.e_phi * p.arrow_length, r)?);
    }
    for (set, role) in [(er, CoordinateRole::R), (et, CoordinateRole::Theta), (ep, CoordinateRole::Phi)] {
        if !set.is_empty() {
            scene.add(SceneNode::mesh(merge(&set, RoleColor::Custom(1.0, 1.0, 1.0))).with_role(role));
        }
    }
    for t in triples.iter().filter(|t| !t.defined) {
        let at = t.e_r * 1.15;
        label(scene, "undefined", at, 0.1, Color::GRAY);
    }
    Ok(ScenarioData::UnitTriples { triples })
}

fn scs_composite(scene: &mut Scene, p: &ScsCompositeParams) -> Result<ScenarioData> {
    let (theta, phi, r) = (deg(p.theta_deg), deg(p.phi_deg), p.r);
    let reach = 1.4 * r;
    triad(scene, 1.6 * r)?;
    let sphere = coordinate_surface_mesh(&SurfaceSpec::sphere(r))?;
    let cone = coordinate_surface_mesh(&SurfaceSpec::cone(theta, reach))?;
    let plane = coordinate_surface_mesh(&SurfaceSpec::semiplane(phi, reach))?;
    scene.add(SceneNode::mesh(sphere).with_role(CoordinateRole::R).with_opacity(0.3));
    scene.add(SceneNode::mesh(cone).with_role(CoordinateRole::Theta).with_opacity(0.45));
    scene.add(SceneNode::mesh(plane).with_role(CoordinateRole::Phi).with_opacity(0.45));
    let curves = [
        (CurveKind::Ray { theta, phi, r_max: reach }, CoordinateRole::R),
        (CurveKind::Meridian { r, phi }, CoordinateRole::Theta),
        (CurveKind::PhiCircle { r, theta }, CoordinateRole::Phi),
    ];
    for (kind, role) in curves {
        scene.add(SceneNode::polyline(coordinate_curve(kind, 73)?).with_role(role));
    }
    let t = unit_triple(theta, phi);
    let at = t.e_r * r;
    let len = 0.4 * r;
    for (v, role) in [(t.e_r, CoordinateRole::R), (t.e_theta, CoordinateRole::Theta), (t.e_phi, CoordinateRole::Phi)] {
        scene.add(arrow(at, at + v * len, role.color(), 0.015 * r)?.with_role(role));
    }
    Ok(ScenarioData::Point {
        point: SphericalPoint::new(r, theta, phi),
        position: at,
        triple: t,
    })
}

fn sphere_cone_sweep(scene: &mut Scene, p: &SphereConeSweepParams, n: usize) -> Result<ScenarioData> {
    let r = p.r;
    triad(scene, 1.5 * r)?;
    let sphere = coordinate_surface_mesh(
        &SurfaceSpec::sphere(r)
            .with_resolution(24, 48)
            .with_cutout(deg(p.cutout_deg[0]), deg(p.cutout_deg[1])),
    )?;
    let inner = sphere.flipped();
    let mut outer = SceneNode::mesh(sphere).with_role(CoordinateRole::R);
    outer.double_sided = false;
    let mut inside = SceneNode::mesh(inner).colored(Color::new(1.0, 0.8, 0.55));
    inside.double_sided = false;
    scene.add(outer);
    scene.add(inside);

    let thetas: Vec<f64> = (0..n)
        .map(|k| p.theta_start_deg + (p.theta_end_deg - p.theta_start_deg) * sweep_fraction(k, n))
        .collect();
    let (nr, nphi) = (12, 48);
    let reach = 1.3 * r;
    let mut welded = vec![false; nr + 1];
    welded[0] = true;
    let topo = grid_topology(nr + 1, nphi, true, &welded);
    let cone_frames: Vec<Vec<Vec3>> = thetas
        .iter()
        .map(|&t| {
            topo.positions(|i, j| {
                scs_to_ccs(SphericalPoint::new(
                    reach * i as f64 / nr as f64,
                    deg(t),
                    TAU * j as f64 / nphi as f64,
                ))
            })
        })
        .collect();
    let cone_id = add_morph_mesh(scene, &topo.faces, cone_frames, Color::GREEN, p.period, false)?;
    if let Some(node) = scene.nodes.iter_mut().find(|nd| nd.id == cone_id) {
        node.role = Some(CoordinateRole::Theta);
        node.opacity = 0.6;
    }
    let circles: Vec<Vec<Vec<Vec3>>> = thetas
        .iter()
        .map(|&t| vec![sphere_cone_intersection(r, deg(t)).points])
        .collect();
    let circle_id = add_morph_lines(scene, circles, true, Color::BLUE, p.period, false)?;
    if let Some(node) = scene.nodes.iter_mut().find(|nd| nd.id == circle_id) {
        node.role = Some(CoordinateRole::Phi);
    }
    Ok(ScenarioData::SphereCone {
        radii: thetas.iter().map(|&t| r * deg(t).sin().abs()).collect(),
        heights: thetas.iter().map(|&t| r * deg(t).cos()).collect(),
        thetas_deg: thetas,
    })
}

/// An ellipse at `at`: static trace, a rotating field arrow and a
/// propagation arrow.
fn add_field_site(
    scene: &mut Scene,
    at: Vec3,
    prop: Vec3,
    e: &PhasorVec,
    steps: usize,
    period: f64,
) -> Result<()> {
    let trace: Vec<Vec3> = field_path(e, 72).into_iter().map(|v| at + v).collect();
    scene.add(SceneNode::polyline(line(trace, true)?).colored(TRACE));
    let keys: Vec<(Vec3, Vec3)> = field_path(e, steps).into_iter().map(|v| (at, at + v)).collect();
    add_morph_arrow(scene, &keys, 0.012, FIELD, period, true)?;
    let dir = prop.normalized().unwrap_or(Vec3::X);
    scene.add(arrow(at, at + dir * 0.3, Color::GRAY, 0.008)?);
    Ok(())
}

fn polarization_triptych(scene: &mut Scene, p: &PolarizationTriptychParams) -> Result<ScenarioData> {
    triad(scene, 1.5)?;
    let a = p.amplitude;
    let conv = HandednessConvention::TowardObserver;
    let sites = [
        ("linear", Vec3::X, PhasorVec::from_parts(Vec3::Z * a, Vec3::ZERO)),
        ("circular", Vec3::Y, ellipse_phasor(Vec3::Z * a, Vec3::Y, 1.0, Handedness::Ccw, conv)?),
        ("elliptical", Vec3::Z, ellipse_phasor(Vec3::X * a, Vec3::Z, p.axial_ratio, Handedness::Ccw, conv)?),
    ];
    let mut ellipses = Vec::new();
    for (name, at, e) in sites {
        add_field_site(scene, at, at, &e, p.steps, p.period)?;
        label(scene, name, at * 1.1 + Vec3::Z * 0.45, 0.1, Color::WHITE);
        ellipses.push(ellipse_data(name, at, at, &e, conv)?);
    }
    Ok(ScenarioData::Ellipses { ellipses })
}

fn field_decomposition(scene: &mut Scene, p: &FieldDecompositionParams, n: usize) -> Result<ScenarioData> {
    let e = PhasorVec::from_parts(p.e_re, p.e_im);
    let data = ellipse_data("E", Vec3::ZERO, p.propagation, &e, HandednessConvention::TowardObserver)?;
    triad(scene, 1.2)?;
    let d = decompose(&e);
    let trace = field_path(&e, 72);
    scene.add(SceneNode::polyline(line(trace, true)?).colored(TRACE));
    let prop = p.propagation.normalized().unwrap_or(Vec3::X);
    scene.add(arrow(Vec3::ZERO, prop * 0.6, Color::GRAY, 0.01)?);
    if d.e_c.norm() > 1e-9 {
        scene.add(arrow(Vec3::ZERO, d.e_c, EC, 0.008)?.with_opacity(0.5));
        label(scene, "E_c", d.e_c * 1.1, 0.08, EC);
    }
    if d.e_s.norm() > 1e-9 {
        scene.add(arrow(Vec3::ZERO, d.e_s, ES, 0.008)?.with_opacity(0.5));
        label(scene, "E_s", d.e_s * 1.1, 0.08, ES);
    }
    let taus: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let keys = |v: &dyn Fn(f64) -> Vec3| taus.iter().map(|&t| (Vec3::ZERO, v(t))).collect::<Vec<_>>();
    add_morph_arrow(scene, &keys(&|t| d.at(t)), 0.014, FIELD, p.period, true)?;
    add_morph_arrow(scene, &keys(&|t| d.e_c * t.cos()), 0.01, EC, p.period, true)?;
    add_morph_arrow(scene, &keys(&|t| d.e_s * t.sin()), 0.01, ES, p.period, true)?;
    let guides = taus
        .iter()
        .map(|&t| {
            let (c, s, tip) = (d.e_c * t.cos(), d.e_s * t.sin(), d.at(t));
            vec![vec![c, tip], vec![s, tip]]
        })
        .collect();
    add_morph_lines(scene, guides, false, Color::GRAY, p.period, true)?;
    Ok(ScenarioData::Ellipses { ellipses: vec![data] })
}

fn ellipse_trace(scene: &mut Scene, p: &EllipseTraceParams, n: usize) -> Result<ScenarioData> {
    let e = ellipse_phasor(
        p.major_axis.normalized().unwrap() * 0.8,
        p.propagation,
        p.axial_ratio,
        p.handedness,
        p.convention,
    )?;
    let data = ellipse_data("E", Vec3::ZERO, p.propagation, &e, p.convention)?;
    triad(scene, 1.2)?;
    let d = decompose(&e);
    let prop = p.propagation.normalized().unwrap();
    scene.add(arrow(Vec3::ZERO, prop * 0.8, Color::GRAY, 0.01)?);
    let taus: Vec<f64> = (0..n).map(|k| TAU * sweep_fraction(k, n)).collect();
    let keys: Vec<(Vec3, Vec3)> = taus.iter().map(|&t| (Vec3::ZERO, d.at(t))).collect();
    add_morph_arrow(scene, &keys, 0.014, FIELD, p.period, false)?;
    let sub = 8;
    let samples = sub * n.max(2);
    let curve: Vec<Vec3> = (0..=samples).map(|k| d.at(TAU * k as f64 / samples as f64)).collect();
    let counts: Vec<usize> = (0..n)
        .map(|k| (sweep_fraction(k, n) * samples as f64).round() as usize + 1)
        .collect();
    add_morph_lines(
        scene,
        progressive(&curve, &counts).into_iter().map(|f| vec![f]).collect(),
        false,
        TRACE,
        p.period,
        false,
    )?;
    Ok(ScenarioData::Ellipses { ellipses: vec![data] })
}

fn farfield_ellipse(scene: &mut Scene, p: &FarfieldEllipseParams, n: usize) -> Result<ScenarioData> {
    let (theta, phi) = (deg(p.theta_deg), deg(p.phi_deg));
    let t = unit_triple(theta, phi);
    let at = t.e_r * 1.2;
    let conv = HandednessConvention::TowardObserver;
    let e = ellipse_phasor(t.e_theta * 0.45, t.e_r, p.axial_ratio, p.handedness, conv)?;
    let data = ellipse_data("E", at, t.e_r, &e, conv)?;
    triad(scene, 1.0)?;
    scene.add(SceneNode::polyline(line(vec![Vec3::ZERO, at], false)?).with_role(CoordinateRole::R));
    for (v, role) in [(t.e_r, CoordinateRole::R), (t.e_theta, CoordinateRole::Theta), (t.e_phi, CoordinateRole::Phi)] {
        scene.add(arrow(at, at + v * 0.6, role.color(), 0.01)?.with_role(role));
    }
    let trace: Vec<Vec3> = field_path(&e, 72).into_iter().map(|v| at + v).collect();
    scene.add(SceneNode::polyline(line(trace, true)?).colored(TRACE));
    let keys: Vec<(Vec3, Vec3)> = field_path(&e, n).into_iter().map(|v| (at, at + v)).collect();
    add_morph_arrow(scene, &keys, 0.012, FIELD, p.period, true)?;
    Ok(ScenarioData::Ellipses { ellipses: vec![data] })
}

pub(crate) fn crossed_array(phase_deg: f64) -> Result<AntennaArray> {
    // the y-dipole leads
    AntennaArray::new(vec![
        DipoleElement::short(Vec3::Z, 0.0)?,
        DipoleElement::short(Vec3::Y, deg(phase_deg))?,
    ])
}

fn crossed_dipoles(scene: &mut Scene, p: &CrossedDipolesParams, n: usize) -> Result<ScenarioData> {
    let array = crossed_array(p.phase_deg)?;
    let theta = deg(p.theta_deg);
    let phis: Vec<f64> = (0..n).map(|k| 360.0 * sweep_fraction(k, n)).collect();
    let sample = |phi_deg: f64| -> Result<(Vec3, PhasorVec, EllipseData)> {
        let dir = direction(theta, deg(phi_deg));
        let e = array_farfield(&array, dir);
        let at = dir * p.distance;
        let data = ellipse_data(&format!("φ = {phi_deg}°"), at, dir, &e, p.convention)?;
        Ok((at, e, data))
    };
    let samples = phis.iter().map(|&f| sample(f)).collect::<Result<Vec<_>>>()?;
    let marks = p.marks_deg.iter().map(|&f| sample(f)).collect::<Result<Vec<_>>>()?;
    let peak = samples
        .iter()
        .chain(&marks)
        .map(|(_, e, _)| e.norm())
        .fold(0.0, f64::max);
    let s = if peak > 0.0 { 0.45 / peak } else { 1.0 };

    triad(scene, 1.0)?;
    scene.add(SceneNode::polyline(line(vec![Vec3::Y * -0.2, Vec3::Y * 0.2], false)?).with_role(CoordinateRole::Y));
    scene.add(SceneNode::polyline(line(vec![Vec3::Z * -0.2, Vec3::Z * 0.2], false)?).with_role(CoordinateRole::Z));
    let ring = line(
        (0..72).map(|k| direction(theta, TAU * k as f64 / 72.0) * p.distance).collect(),
        true,
    )?;
    scene.add(SceneNode::polyline(ring).colored(Color::GRAY).with_opacity(0.6));

    let ellipse_at = |at: Vec3, e: &PhasorVec| -> Vec<Vec3> { field_path(e, 72).into_iter().map(|v| at + v * s).collect() };
    if !marks.is_empty() {
        let lines = marks
            .iter()
            .map(|(at, e, _)| line(ellipse_at(*at, e), true))
            .collect::<Result<Vec<_>>>()?;
        scene.add(SceneNode::lines(lines).colored(Color::WHITE).with_opacity(0.5));
        for ((at, _, _), &f) in marks.iter().zip(&p.marks_deg) {
            label(scene, &format!("φ = {f}°"), *at * 1.3, 0.12, Color::WHITE);
        }
    }
    let rays = samples.iter().map(|(at, _, _)| vec![vec![Vec3::ZERO, *at]]).collect();
    add_morph_lines(scene, rays, false, Color::GRAY, p.period, false)?;
    let traces = samples.iter().map(|(at, e, _)| vec![ellipse_at(*at, e)]).collect();
    add_morph_lines(scene, traces, true, FIELD, p.period, false)?;
    let axes: Vec<(Vec3, Vec3)> = samples
        .iter()
        .map(|(at, _, d)| {
            let major = d.polarization.as_ref().map_or(Vec3::ZERO, |q| Vec3::new(q.major[0], q.major[1], q.major[2]));
            (*at, *at + major * s)
        })
        .collect();
    add_morph_arrow(scene, &axes, 0.01, EC, p.period, false)?;
    let sense: Vec<(Vec3, Vec3)> = samples
        .iter()
        .map(|(at, _, d)| match &d.polarization {
            Some(q) => {
                let major = Vec3::new(q.major[0], q.major[1], q.major[2]) * s;
                let minor = Vec3::new(q.minor[0], q.minor[1], q.minor[2]) * s;
                (*at + major, *at + major + minor * 0.6)
            }
            None => (*at, *at),
        })
        .collect();
    add_morph_arrow(scene, &sense, 0.008, ES, p.period, false)?;

    Ok(ScenarioData::PolarizationSweep {
        theta_deg: p.theta_deg,
        phis_deg: phis,
        samples: samples.into_iter().map(|(_, _, d)| d.polarization).collect(),
        marks: marks.into_iter().map(|(_, _, d)| d).collect(),
    })
}

pub(crate) fn two_dipole_array_antenna(p: &TwoDipoleArrayParams) -> Result<AntennaArray> {
    let u = p.spacing_axis.normalized().ok_or_else(|| Error::invalid("spacing_axis", "must be non-zero"))?;
    let kind = DipoleKind::Sinusoidal { length: p.length };
    AntennaArray::new(vec![
        DipoleElement::new(u * (-0.5 * p.spacing), p.axis, kind, 1.0, deg(p.phases_deg[0]))?,
        DipoleElement::new(u * (0.5 * p.spacing), p.axis, kind, 1.0, deg(p.phases_deg[1]))?,
    ])
}

fn cut_nodes(scene: &mut Scene, cuts: &[PlaneCut], mapping: PatternMapping) -> Result<Vec<String>> {
    let roles = [CoordinateRole::X, CoordinateRole::Y, CoordinateRole::Z];
    cuts.iter()
        .map(|c| {
            let role = roles[MainPlane::ALL.iter().position(|&pl| pl == c.plane).expect("main plane")];
            Ok(scene.add(SceneNode::polyline(c.polyline(mapping)?).with_role(role)))
        })
        .collect()
}

fn pattern_data(array: &AntennaArray, grid: PatternGrid, cuts: Vec<PlaneCut>) -> Result<ScenarioData> {
    Ok(ScenarioData::Pattern {
        directivity: directivity(array, DEFAULT_QUADRATURE)?,
        max: grid.max(),
        cuts: cuts.iter().map(CutJson::from).collect(),
        grid,
        plane_cuts: cuts,
    })
}

fn two_dipole_array(scene: &mut Scene, p: &TwoDipoleArrayParams, n: usize) -> Result<ScenarioData> {
    let array = two_dipole_array_antenna(p)?;
    let grid = pattern_grid(&array, SphericalGrid::new(p.grid[0], p.grid[1])?)?;
    let shown = pattern_grid(&array, SphericalGrid::new(p.display_grid[0], p.display_grid[1])?)?;
    let cuts = main_plane_cuts(&array, p.cut_samples)?;

    triad(scene, 1.3)?;
    scene.add(SceneNode::mesh(pattern_surface(&shown, p.mapping)).with_opacity(0.7));
    cut_nodes(scene, &cuts, p.mapping)?;
    let wires = array
        .elements()
        .iter()
        .map(|e| segment(e.center - e.axis() * 0.3, e.center + e.axis() * 0.3))
        .collect();
    scene.add(SceneNode::lines(wires).colored(Color::WHITE));
    let ids: Vec<String> = scene.nodes.iter().map(|nd| nd.id.clone()).collect();
    for id in ids {
        scene.add_track(AnimationTrack::turntable(id, p.period, Vec3::Z, n.max(3)))?;
    }
    pattern_data(&array, grid, cuts)
}

fn box_mesh(half: Vec3) -> SurfaceMesh {
    let v = |sx: f64, sy: f64, sz: f64| Vec3::new(sx * half.x, sy * half.y, sz * half.z);
    let vertices = vec![
        v(-1.0, -1.0, -1.0),
        v(1.0, -1.0, -1.0),
        v(1.0, 1.0, -1.0),
        v(-1.0, 1.0, -1.0),
        v(-1.0, -1.0, 1.0),
        v(1.0, -1.0, 1.0),
        v(1.0, 1.0, 1.0),
        v(-1.0, 1.0, 1.0),
    ];
    let quads = [[0, 3, 2, 1], [4, 5, 6, 7], [0, 1, 5, 4], [2, 3, 7, 6], [1, 2, 6, 5], [0, 4, 7, 3]];
    let faces = quads.iter().flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]).collect();
    SurfaceMesh {
        vertices,
        faces,
        role_color: RoleColor::Custom(0.35, 0.35, 0.4),
    }
}

/// Square pyramids on the plane through `origin` spanned by `u`, `v`,
/// pointing along `normal`.
fn absorbers(origin: Vec3, u: Vec3, v: Vec3, normal: Vec3, extent: (f64, f64), pitch: f64) -> SurfaceMesh {
    let (nu, nv) = ((extent.0 / pitch).floor() as usize, (extent.1 / pitch).floor() as usize);
    let mut parts = Vec::new();
    for i in 0..nu {
        for j in 0..nv {
            let c = origin + u * (-0.5 * extent.0 + pitch * (i as f64 + 0.5)) + v * (-0.5 * extent.1 + pitch * (j as f64 + 0.5));
            let h = 0.5 * pitch;
            let vertices = vec![
                c - u * h - v * h,
                c + u * h - v * h,
                c + u * h + v * h,
                c - u * h + v * h,
                c + normal * (1.5 * pitch),
            ];
            let faces = vec![[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]];
            parts.push(SurfaceMesh {
                vertices,
                faces,
                role_color: RoleColor::Custom(0.15, 0.15, 0.25),
            });
        }
    }
    merge(&parts, RoleColor::Custom(0.15, 0.15, 0.25))
}

fn anechoic_sweep(scene: &mut Scene, p: &AnechoicSweepParams, n: usize) -> Result<ScenarioData> {
    let aut = default_stand_in();
    let trace = measurement_sweep(&aut, p.rotation_axis, p.receiver, p.samples)?;
    let axis = trace.rotation_axis;
    let rx = trace.receiver;
    let half = Vec3::new(p.room[0], p.room[1], p.room[2]) * 0.5;

    triad(scene, 0.4)?;
    scene.add(SceneNode::mesh(box_mesh(half)).with_opacity(0.2));
    let floor = absorbers(Vec3::Z * -half.z, Vec3::X, Vec3::Y, Vec3::Z, (p.room[0], p.room[1]), p.absorber_spacing);
    let wall = absorbers(Vec3::X * half.x, Vec3::Y, Vec3::Z, -Vec3::X, (p.room[1], p.room[2]), p.absorber_spacing);
    scene.add(SceneNode::mesh(merge(&[floor, wall], RoleColor::Custom(0.15, 0.15, 0.25))));
    scene.add(SceneNode::polyline(line(vec![Vec3::Z * -half.z, Vec3::Z * -0.3], false)?).colored(Color::GRAY));

    // the probe: a small horn facing the antenna
    let probe = rx * p.receiver_distance;
    let horn_axis = -rx;
    let hu = horn_axis.any_perpendicular();
    let hv = horn_axis.cross(hu);
    let mouth = probe + horn_axis * 0.15;
    let s = 0.12;
    let horn = SurfaceMesh::new(
        vec![
            probe,
            mouth - hu * s - hv * s,
            mouth + hu * s - hv * s,
            mouth + hu * s + hv * s,
            mouth - hu * s + hv * s,
        ],
        vec![[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1]],
        RoleColor::Custom(0.8, 0.8, 0.8),
    )?;
    scene.add(SceneNode::mesh(horn));
    scene.add(SceneNode::polyline(line(vec![Vec3::ZERO, probe], false)?).colored(Color::GRAY).with_opacity(0.5));

    let angles: Vec<f64> = (0..n).map(|k| TAU * sweep_fraction(k, n)).collect();
    let rotations: Vec<_> = angles.iter().map(|&a| crate::coords::Rotation::from_axis_angle(axis, a)).collect();
    let wire = scene.add(SceneNode::polyline(line(vec![Vec3::Z * -0.25, Vec3::Z * 0.25], false)?).colored(Color::WHITE));
    let lobe_grid = pattern_grid(&aut, SphericalGrid::new(19, 36)?)?;
    let lobe = scene.add(
        SceneNode::mesh(pattern_surface(&lobe_grid, PatternMapping::Field))
            .with_opacity(0.35)
            .with_transform(crate::scene::Transform {
                scale: 0.6,
                ..crate::scene::Transform::IDENTITY
            }),
    );
    for id in [wire, lobe] {
        scene.add_track(AnimationTrack::from_frames(id, p.period, TrackValues::Rotation(rotations.clone()), false))?;
    }

    let mut curve = trace.points.clone();
    curve.push(trace.points[0]);
    let counts: Vec<usize> = (0..n)
        .map(|k| (sweep_fraction(k, n) * p.samples as f64).round() as usize + 1)
        .collect();
    add_morph_lines(
        scene,
        progressive(&curve, &counts).into_iter().map(|f| vec![f]).collect(),
        false,
        FIELD,
        p.period,
        false,
    )?;
    Ok(ScenarioData::Chamber(ChamberData {
        rotation_axis: axis,
        receiver: rx,
        angles_deg: trace.angles.iter().map(|a| a.to_degrees()).collect(),
        values: trace.values,
    }))
}

fn explorer(scene: &mut Scene, p: &ExplorerParams) -> Result<ScenarioData> {
    let u = direction(deg(p.theta_deg), deg(p.phi_deg));
    let array = AntennaArray::single(DipoleElement::centered(u, p.length)?);
    let grid = SphericalGrid::new(p.grid[0], p.grid[1])?;
    let pg = pattern_grid(&array, grid)?;
    let cuts = main_plane_cuts(&array, 72)?;
    let [t_field, t_morph, t_turn] = p.periods;
    let wire_scale = 0.4;

    triad(scene, 1.3)?;
    let mut ids = Vec::new();
    ids.push(scene.add(
        SceneNode::polyline(line(vec![u * (-0.5 * p.length * wire_scale), u * (0.5 * p.length * wire_scale)], false)?)
            .colored(Color::WHITE),
    ));
    ids.extend(cut_nodes(scene, &cuts, PatternMapping::Field)?);

    let lengths: Vec<f64> = (0..p.morph_steps)
        .map(|k| p.length_range[0] + (p.length_range[1] - p.length_range[0]) * sweep_fraction(k, p.morph_steps))
        .collect();
    let frames = lengths
        .iter()
        .map(|&l| {
            let a = AntennaArray::single(DipoleElement::centered(u, l)?);
            Ok(pattern_vertices(&pattern_grid(&a, grid)?, PatternMapping::Field))
        })
        .collect::<Result<Vec<_>>>()?;
    let surf = add_morph_mesh(
        scene,
        &pattern_topology(grid).faces,
        frames,
        Color::new(0.8, 0.6, 0.2),
        t_morph,
        true,
    )?;
    if let Some(nd) = scene.nodes.iter_mut().find(|nd| nd.id == surf) {
        nd.opacity = p.opacity;
    }
    ids.push(surf);

    let set = rotating_phasor_frames(p.length, 21, p.phasor_steps)?;
    let w1 = u.any_perpendicular();
    let w2 = u.cross(w1);
    let spokes = set
        .frames
        .iter()
        .map(|f| {
            set.positions
                .iter()
                .zip(f)
                .map(|(&z, v)| {
                    let base = u * (z * wire_scale);
                    vec![base, base + (w1 * v.x + w2 * v.y) * 0.25]
                })
                .collect()
        })
        .collect();
    ids.push(add_morph_lines(scene, spokes, false, FIELD, t_field, true)?);
    for id in ids {
        scene.add_track(AnimationTrack::turntable(id, t_turn, Vec3::Z, 24))?;
    }
    pattern_data(&array, pg, cuts)
}

fn characteristics(scene: &mut Scene, p: &CharacteristicsParams) -> Result<ScenarioData> {
    let table = characteristics_sweep(p.l_min, p.l_max, p.steps)?;
    let sgrid = SphericalGrid::new(p.surface_grid[0], p.surface_grid[1])?;
    let panel_b = Vec3::new(3.5, 0.0, 0.0);
    let panel_c = Vec3::new(0.0, 0.0, -3.5);
    let panel_d = Vec3::new(3.5, 0.0, -3.5);

    triad(scene, 1.2)?;
    for (text, at) in [
        ("plane pattern", Vec3::new(-1.0, 0.0, 1.3)),
        ("space pattern", panel_b + Vec3::new(-1.0, 0.0, 1.3)),
        ("first maximum", panel_c + Vec3::new(-1.0, 0.0, 1.3)),
        ("D and R_in", panel_d + Vec3::new(-1.0, 0.0, 1.3)),
    ] {
        label(scene, text, at, 0.2, Color::WHITE);
    }

    // plane pattern: the zox cut
    let cut_frames = table
        .iter()
        .map(|c| Ok(vec![c.cut.polyline(PatternMapping::Field)?.points]))
        .collect::<Result<Vec<_>>>()?;
    let cut_id = add_morph_lines(scene, cut_frames, true, Color::BLUE, p.period, false)?;
    if let Some(nd) = scene.nodes.iter_mut().find(|nd| nd.id == cut_id) {
        nd.role = Some(CoordinateRole::Z);
    }

    // space pattern
    let frames = table
        .iter()
        .map(|c| {
            let a = AntennaArray::single(DipoleElement::centered(Vec3::Z, c.length)?);
            Ok(pattern_vertices(&pattern_grid(&a, sgrid)?, PatternMapping::Field)
                .into_iter()
                .map(|v| v + panel_b)
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    add_morph_mesh(scene, &pattern_topology(sgrid).faces, frames, Color::new(0.8, 0.6, 0.2), p.period, false)?;

    // first maximum, measured from the dipole axis
    scene.add(
        SceneNode::polyline(line(vec![panel_c - Vec3::Z, panel_c + Vec3::Z], false)?).colored(Color::GRAY),
    );
    let rays = table
        .iter()
        .map(|c| {
            let t = deg(c.theta_max_deg);
            vec![vec![panel_c, panel_c + Vec3::new(t.sin(), 0.0, t.cos())]]
        })
        .collect();
    add_morph_lines(scene, rays, false, FIELD, p.period, false)?;

    // chart: D and clipped R_in against length
    let (w, h) = (2.5, 2.0);
    let x_of = |l: f64| panel_d.x - 0.5 * w + w * (l - p.l_min) / (p.l_max - p.l_min);
    let d_max = table.iter().map(|c| c.directivity).fold(0.0, f64::max);
    let d_at = |c: &crate::patterns::DipoleCharacteristics| {
        Vec3::new(x_of(c.length), 0.0, panel_d.z - 0.5 * h + h * c.directivity / d_max)
    };
    let r_at = |l: f64, r: f64| Vec3::new(x_of(l), 0.0, panel_d.z - 0.5 * h + h * r.min(p.r_clip) / p.r_clip);
    scene.add(
        SceneNode::lines(vec![
            segment(
                Vec3::new(panel_d.x - 0.5 * w, 0.0, panel_d.z - 0.5 * h),
                Vec3::new(panel_d.x + 0.5 * w, 0.0, panel_d.z - 0.5 * h),
            ),
            segment(
                Vec3::new(panel_d.x - 0.5 * w, 0.0, panel_d.z - 0.5 * h),
                Vec3::new(panel_d.x - 0.5 * w, 0.0, panel_d.z + 0.5 * h),
            ),
        ])
        .colored(Color::GRAY),
    );
    let d_curve = line(table.iter().map(d_at).collect(), false)?;
    scene.add(SceneNode::polyline(d_curve).colored(FIELD));
    let mut r_runs: Vec<Vec<Vec3>> = vec![Vec::new()];
    for c in &table {
        match c.r_in {
            Some(r) if r <= p.r_clip => r_runs.last_mut().unwrap().push(r_at(c.length, r)),
            _ => {
                if !r_runs.last().unwrap().is_empty() {
                    r_runs.push(Vec::new());
                }
            }
        }
    }
    let r_lines: Vec<Polyline> = r_runs.into_iter().filter(|r| r.len() >= 2).map(|r| line(r, false)).collect::<Result<_>>()?;
    if !r_lines.is_empty() {
        scene.add(SceneNode::lines(r_lines).colored(ES));
    }
    let marker = |c: Color| -> Result<SceneNode> { Ok(arrow(Vec3::Z * 0.12, Vec3::ZERO, c, 0.012)?) };
    let d_marker = scene.add(marker(FIELD)?);
    scene.add_track(AnimationTrack::from_frames(
        d_marker,
        p.period,
        TrackValues::Position(table.iter().map(d_at).collect()),
        false,
    ))?;
    let r_marker = scene.add(marker(ES)?);
    scene.add_track(AnimationTrack::from_frames(
        r_marker,
        p.period,
        TrackValues::Position(table.iter().map(|c| r_at(c.length, c.r_in.unwrap_or(f64::INFINITY))).collect()),
        false,
    ))?;

    Ok(ScenarioData::Characteristics {
        table: table.iter().map(characteristics_json).collect(),
    })
}
