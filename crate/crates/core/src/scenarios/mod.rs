//! The figure catalog: declarative scenario specs, a JSON config loader,
//! and builders that turn a spec into a scene plus its data products.
//!
//! Config schema:
//!
//! ```json
//! {"id": "t", "title": "…", "kind": "characteristics",
//!  "params": {"l_min": 0.1, "l_max": 3.0, "steps": 100},
//!  "frames": 100, "viewpoints": [{"position": [2.5, 2, 1.5], "look_at": [0, 0, 0], "description": "First octant"}]}
//! ```
//!
//! Only `id` and `kind` are required; unknown keys are rejected.

mod artifacts;
mod build;
mod params;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use artifacts::{
    artifacts, build_to_dir, parse_formats, scenario_json, scenario_svg, svg_file_name, Artifact, Format,
    DEFAULT_FORMATS,
};
pub use build::{build, BuildOutput, ChamberData, EllipseData, ScenarioData, WavesData};
pub use params::*;

use crate::error::{Error, Result};
use crate::scene::{default_first_octant_viewpoint, Viewpoint};
use crate::coords::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    WavesLine,
    StandingPhasor,
    VolumeElement,
    UnitTriples,
    ScsComposite,
    SphereConeSweep,
    PolarizationTriptych,
    FieldDecomposition,
    EllipseTrace,
    FarfieldEllipse,
    CrossedDipoles,
    TwoDipoleArray,
    AnechoicSweep,
    ExplorerDefault,
    Characteristics,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 15] = [
        ScenarioKind::WavesLine,
        ScenarioKind::StandingPhasor,
        ScenarioKind::VolumeElement,
        ScenarioKind::UnitTriples,
        ScenarioKind::ScsComposite,
        ScenarioKind::SphereConeSweep,
        ScenarioKind::PolarizationTriptych,
        ScenarioKind::FieldDecomposition,
        ScenarioKind::EllipseTrace,
        ScenarioKind::FarfieldEllipse,
        ScenarioKind::CrossedDipoles,
        ScenarioKind::TwoDipoleArray,
        ScenarioKind::AnechoicSweep,
        ScenarioKind::ExplorerDefault,
        ScenarioKind::Characteristics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::WavesLine => "waves_line",
            ScenarioKind::StandingPhasor => "standing_phasor",
            ScenarioKind::VolumeElement => "volume_element",
            ScenarioKind::UnitTriples => "unit_triples",
            ScenarioKind::ScsComposite => "scs_composite",
            ScenarioKind::SphereConeSweep => "sphere_cone_sweep",
            ScenarioKind::PolarizationTriptych => "polarization_triptych",
            ScenarioKind::FieldDecomposition => "field_decomposition",
            ScenarioKind::EllipseTrace => "ellipse_trace",
            ScenarioKind::FarfieldEllipse => "farfield_ellipse",
            ScenarioKind::CrossedDipoles => "crossed_dipoles",
            ScenarioKind::TwoDipoleArray => "two_dipole_array",
            ScenarioKind::AnechoicSweep => "anechoic_sweep",
            ScenarioKind::ExplorerDefault => "explorer_default",
            ScenarioKind::Characteristics => "characteristics",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        ScenarioKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Kind-specific parameters; the variant fixes the kind.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioParams {
    WavesLine(WavesLineParams),
    StandingPhasor(StandingPhasorParams),
    VolumeElement(VolumeElementParams),
    UnitTriples(UnitTriplesParams),
    ScsComposite(ScsCompositeParams),
    SphereConeSweep(SphereConeSweepParams),
    PolarizationTriptych(PolarizationTriptychParams),
    FieldDecomposition(FieldDecompositionParams),
    EllipseTrace(EllipseTraceParams),
    FarfieldEllipse(FarfieldEllipseParams),
    CrossedDipoles(CrossedDipolesParams),
    TwoDipoleArray(TwoDipoleArrayParams),
    AnechoicSweep(AnechoicSweepParams),
    ExplorerDefault(ExplorerParams),
    Characteristics(CharacteristicsParams),
}

macro_rules! each_params {
    ($self:expr, $p:ident => $body:expr) => {
        match $self {
            ScenarioParams::WavesLine($p) => $body,
            ScenarioParams::StandingPhasor($p) => $body,
            ScenarioParams::VolumeElement($p) => $body,
            ScenarioParams::UnitTriples($p) => $body,
            ScenarioParams::ScsComposite($p) => $body,
            ScenarioParams::SphereConeSweep($p) => $body,
            ScenarioParams::PolarizationTriptych($p) => $body,
            ScenarioParams::FieldDecomposition($p) => $body,
            ScenarioParams::EllipseTrace($p) => $body,
            ScenarioParams::FarfieldEllipse($p) => $body,
            ScenarioParams::CrossedDipoles($p) => $body,
            ScenarioParams::TwoDipoleArray($p) => $body,
            ScenarioParams::AnechoicSweep($p) => $body,
            ScenarioParams::ExplorerDefault($p) => $body,
            ScenarioParams::Characteristics($p) => $body,
        }
    };
}

fn from_json<T: serde::de::DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Config(format!("params: {e}")))
}

impl ScenarioParams {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            ScenarioParams::WavesLine(_) => ScenarioKind::WavesLine,
            ScenarioParams::StandingPhasor(_) => ScenarioKind::StandingPhasor,
            ScenarioParams::VolumeElement(_) => ScenarioKind::VolumeElement,
            ScenarioParams::UnitTriples(_) => ScenarioKind::UnitTriples,
            ScenarioParams::ScsComposite(_) => ScenarioKind::ScsComposite,
            ScenarioParams::SphereConeSweep(_) => ScenarioKind::SphereConeSweep,
            ScenarioParams::PolarizationTriptych(_) => ScenarioKind::PolarizationTriptych,
            ScenarioParams::FieldDecomposition(_) => ScenarioKind::FieldDecomposition,
            ScenarioParams::EllipseTrace(_) => ScenarioKind::EllipseTrace,
            ScenarioParams::FarfieldEllipse(_) => ScenarioKind::FarfieldEllipse,
            ScenarioParams::CrossedDipoles(_) => ScenarioKind::CrossedDipoles,
            ScenarioParams::TwoDipoleArray(_) => ScenarioKind::TwoDipoleArray,
            ScenarioParams::AnechoicSweep(_) => ScenarioKind::AnechoicSweep,
            ScenarioParams::ExplorerDefault(_) => ScenarioKind::ExplorerDefault,
            ScenarioParams::Characteristics(_) => ScenarioKind::Characteristics,
        }
    }

    pub fn default_for(kind: ScenarioKind) -> Self {
        Self::from_value(kind, Value::Object(Default::default())).expect("defaults are valid")
    }

    /// Parses and validates the `params` object of a `kind`.
    pub fn from_value(kind: ScenarioKind, v: Value) -> Result<Self> {
        let v = if v.is_null() { Value::Object(Default::default()) } else { v };
        let p = match kind {
            ScenarioKind::WavesLine => ScenarioParams::WavesLine(from_json(v)?),
            ScenarioKind::StandingPhasor => ScenarioParams::StandingPhasor(from_json(v)?),
            ScenarioKind::VolumeElement => ScenarioParams::VolumeElement(from_json(v)?),
            ScenarioKind::UnitTriples => ScenarioParams::UnitTriples(from_json(v)?),
            ScenarioKind::ScsComposite => ScenarioParams::ScsComposite(from_json(v)?),
            ScenarioKind::SphereConeSweep => ScenarioParams::SphereConeSweep(from_json(v)?),
            ScenarioKind::PolarizationTriptych => ScenarioParams::PolarizationTriptych(from_json(v)?),
            ScenarioKind::FieldDecomposition => ScenarioParams::FieldDecomposition(from_json(v)?),
            ScenarioKind::EllipseTrace => ScenarioParams::EllipseTrace(from_json(v)?),
            ScenarioKind::FarfieldEllipse => ScenarioParams::FarfieldEllipse(from_json(v)?),
            ScenarioKind::CrossedDipoles => ScenarioParams::CrossedDipoles(from_json(v)?),
            ScenarioKind::TwoDipoleArray => ScenarioParams::TwoDipoleArray(from_json(v)?),
            ScenarioKind::AnechoicSweep => ScenarioParams::AnechoicSweep(from_json(v)?),
            ScenarioKind::ExplorerDefault => ScenarioParams::ExplorerDefault(from_json(v)?),
            ScenarioKind::Characteristics => ScenarioParams::Characteristics(from_json(v)?),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn to_value(&self) -> Value {
        each_params!(self, p => serde_json::to_value(p).expect("params serialize"))
    }

    pub fn validate(&self) -> Result<()> {
        each_params!(self, p => p.validate())
    }
}

/// One presentation: what to build and how many frames to export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct ScenarioSpec {
    pub id: String,
    pub title: String,
    pub params: ScenarioParams,
    pub n_frames: usize,
    /// Empty means the kind's default viewpoints.
    pub viewpoints: Vec<Viewpoint>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    title: String,
    kind: String,
    #[serde(default)]
    params: Value,
    #[serde(default = "one_frame")]
    frames: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    viewpoints: Vec<Viewpoint>,
}

fn one_frame() -> usize {
    1
}

/// Longest accepted frame count.
pub const MAX_FRAMES: usize = 10_000;

impl TryFrom<RawSpec> for ScenarioSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let kind =
            ScenarioKind::from_name(&raw.kind).ok_or_else(|| Error::Config(format!("unknown kind `{}`", raw.kind)))?;
        let spec = ScenarioSpec {
            id: raw.id,
            title: raw.title,
            params: ScenarioParams::from_value(kind, raw.params)?,
            n_frames: raw.frames,
            viewpoints: raw.viewpoints,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<ScenarioSpec> for RawSpec {
    fn from(s: ScenarioSpec) -> Self {
        RawSpec {
            id: s.id,
            title: s.title,
            kind: s.params.kind().name().to_string(),
            params: s.params.to_value(),
            frames: s.n_frames,
            viewpoints: s.viewpoints,
        }
    }
}

impl ScenarioSpec {
    pub fn new(id: impl Into<String>, title: impl Into<String>, params: ScenarioParams, n_frames: usize) -> Self {
        ScenarioSpec {
            id: id.into(),
            title: title.into(),
            params,
            n_frames,
            viewpoints: Vec::new(),
        }
    }

    pub fn kind(&self) -> ScenarioKind {
        self.params.kind()
    }

    pub fn validate(&self) -> Result<()> {
        let id_ok = !self.id.is_empty()
            && self.id.len() <= 64
            && self.id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if !id_ok {
            return Err(Error::Config(format!(
                "invalid parameter `id`: {:?} must be 1-64 characters of [A-Za-z0-9_-]",
                self.id
            )));
        }
        if !(1..=MAX_FRAMES).contains(&self.n_frames) {
            return Err(Error::Config(format!("invalid parameter `frames`: must lie in [1, {MAX_FRAMES}]")));
        }
        for v in &self.viewpoints {
            if !v.position.is_finite() || !v.look_at.is_finite() || v.position.distance(v.look_at) < 1e-12 {
                return Err(Error::Config(
                    "invalid parameter `viewpoints`: position and look_at must be finite and distinct".into(),
                ));
            }
        }
        self.params.validate()
    }

    /// Explicit viewpoints, or the kind's defaults when none are given.
    pub fn effective_viewpoints(&self) -> Vec<Viewpoint> {
        if self.viewpoints.is_empty() {
            default_viewpoints(&self.params)
        } else {
            self.viewpoints.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

/// Parses a JSON scenario config.
pub fn parse_config(text: &str) -> Result<ScenarioSpec> {
    serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

fn vp(pos: [f64; 3], look: [f64; 3], d: &str) -> Viewpoint {
    Viewpoint::new(Vec3::new(pos[0], pos[1], pos[2]), Vec3::new(look[0], look[1], look[2]), d).expect("distinct")
}

/// Viewpoints a kind starts from.
pub fn default_viewpoints(params: &ScenarioParams) -> Vec<Viewpoint> {
    let first = default_first_octant_viewpoint();
    match params.kind() {
        ScenarioKind::WavesLine => vec![vp([1.5, -4.5, 2.0], [1.5, 0.0, 0.3], "First octant")],
        ScenarioKind::StandingPhasor | ScenarioKind::ExplorerDefault => {
            let mut v = vec![first];
            v.extend([
                vp([4.0, 0.0, 0.0], [0.0, 0.0, 0.0], "Front (+x)"),
                vp([0.0, 4.0, 0.0], [0.0, 0.0, 0.0], "Side (+y)"),
                vp([0.0, 0.0, 4.0], [0.0, 0.0, 0.0], "Top (+z)"),
                vp([-2.5, -2.0, 1.5], [0.0, 0.0, 0.0], "Seventh octant"),
                vp([2.5, 2.0, -1.5], [0.0, 0.0, 0.0], "Below"),
            ]);
            v
        }
        ScenarioKind::FarfieldEllipse => {
            let ScenarioParams::FarfieldEllipse(p) = params else { unreachable!() };
            // the first view mirrored across the plane normal to e_φ
            let n = crate::coords::unit_triple(p.theta_deg.to_radians(), p.phi_deg.to_radians()).e_phi;
            let pos = first.position - n * (2.0 * first.position.dot(n));
            let mirrored = Viewpoint::new(pos, Vec3::ZERO, "Mirrored across the e_φ plane").expect("distinct");
            vec![first, mirrored]
        }
        // off the default azimuth, which sees the φ = 40° semiplane edge-on
        ScenarioKind::ScsComposite => vec![vp([1.2, 3.2, 1.8], [0.0, 0.0, 0.0], "First octant")],
        ScenarioKind::CrossedDipoles => vec![vp([3.0, 2.5, 2.5], [0.0, 0.0, 0.0], "First octant")],
        ScenarioKind::AnechoicSweep => vec![
            vp([2.4, 1.6, 1.2], [0.0, 0.0, 0.0], "First octant"),
            vp([0.0, -1.9, 0.0], [0.0, 0.0, 0.0], "Side of the measurement plane"),
        ],
        ScenarioKind::Characteristics => vec![
            vp([1.75, -9.0, -1.75], [1.75, 0.0, -1.75], "Panels"),
            vp([6.0, 5.0, 4.0], [1.75, 0.0, -1.75], "First octant"),
        ],
        _ => vec![first],
    }
}

/// The fifteen built-in presentations.
pub fn catalog() -> Vec<ScenarioSpec> {
    use ScenarioKind as K;
    let d = ScenarioParams::default_for;
    let entries: [(&str, &str, ScenarioKind, usize); 15] = [
        ("fig1_left", "Current waves on a 3λ terminated wire", K::WavesLine, 12),
        ("fig1_right", "Standing current as rotating phasors", K::StandingPhasor, 12),
        ("fig2_left", "Spherical volume element", K::VolumeElement, 1),
        ("fig2_right", "Spherical unit vector triples", K::UnitTriples, 1),
        ("fig3_left", "Spherical coordinate surfaces, curves and unit vectors", K::ScsComposite, 1),
        ("fig3_right", "Sphere-cone intersection, θ from 0° to 180°", K::SphereConeSweep, 37),
        ("fig4_left", "Linear, circular and elliptical polarization on x, y, z", K::PolarizationTriptych, 1),
        ("fig4_right", "CCW field and its E_c/E_s decomposition", K::FieldDecomposition, 20),
        ("fig5_left", "CW elliptical field traced toward +y", K::EllipseTrace, 23),
        ("fig5_right", "CCW elliptical far field", K::FarfieldEllipse, 19),
        ("fig6", "Crossed short dipoles: polarization versus φ", K::CrossedDipoles, 73),
        ("fig7", "Two-dipole array: 3D pattern and main-plane cuts", K::TwoDipoleArray, 38),
        ("fig8", "Anechoic chamber pattern-cut measurement", K::AnechoicSweep, 12),
        ("fig9", "Dipole explorer", K::ExplorerDefault, 1),
        ("fig10", "Dipole characteristics versus length", K::Characteristics, 100),
    ];
    entries
        .into_iter()
        .map(|(id, title, kind, frames)| {
            let params = d(kind);
            ScenarioSpec {
                viewpoints: default_viewpoints(&params),
                ..ScenarioSpec::new(id, title, params, frames)
            }
        })
        .collect()
}

/// Catalog entry by id.
pub fn find(id: &str) -> Option<ScenarioSpec> {
    catalog().into_iter().find(|s| s.id == id)
}
