//! Per-kind scenario parameters. Angles are in degrees, lengths in λ.
//! Every field has a default, so a config may give only what it changes.

use serde::{Deserialize, Serialize};

use crate::coords::Vec3;
use crate::error::{Error, Result};
use crate::farfield::{AntennaArray, DipoleElement, DipoleKind, Handedness, HandednessConvention};
use crate::patterns::PatternMapping;

pub(crate) fn bad(key: &str, reason: &str) -> Error {
    Error::Config(format!("invalid parameter `params.{key}`: {reason}"))
}

fn positive(key: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(bad(key, "must be positive"))
    }
}

fn finite(key: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(bad(key, "must be finite"))
    }
}

fn in_range(key: &str, x: f64, lo: f64, hi: f64) -> Result<()> {
    if (lo..=hi).contains(&x) {
        Ok(())
    } else {
        Err(bad(key, &format!("must lie in [{lo}, {hi}]")))
    }
}

fn at_least(key: &str, n: usize, min: usize) -> Result<()> {
    if n >= min {
        Ok(())
    } else {
        Err(bad(key, &format!("must be at least {min}")))
    }
}

fn nonzero(key: &str, v: Vec3) -> Result<()> {
    if v.is_finite() && v.norm() > 1e-9 {
        Ok(())
    } else {
        Err(bad(key, "must be a non-zero vector"))
    }
}

fn grid(key: &str, g: [usize; 2]) -> Result<()> {
    if g[0] >= 3 && g[1] >= 3 && g[0] * g[1] <= 4_000_000 {
        Ok(())
    } else {
        Err(bad(key, "need at least 3×3 and at most 4e6 samples"))
    }
}

/// `fig1_left`: the five current waves on a terminated wire.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WavesLineParams {
    pub wire_length: f64,
    /// Characteristic impedance, Ω.
    pub z0: f64,
    /// Load impedance `[re, im]`, Ω.
    pub load: [f64; 2],
    pub n_points: usize,
    pub period: f64,
}

impl Default for WavesLineParams {
    fn default() -> Self {
        WavesLineParams {
            wire_length: 3.0,
            z0: 50.0,
            load: [100.0, 50.0],
            n_points: 121,
            period: 4.0,
        }
    }
}

impl WavesLineParams {
    pub fn validate(&self) -> Result<()> {
        positive("wire_length", self.wire_length)?;
        positive("z0", self.z0)?;
        finite("load", self.load[0])?;
        finite("load", self.load[1])?;
        at_least("n_points", self.n_points, 2)?;
        positive("period", self.period)
    }
}

/// `fig1_right`: standing current drawn as rotating phasors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StandingPhasorParams {
    pub length: f64,
    pub n_points: usize,
    pub period: f64,
}

impl Default for StandingPhasorParams {
    fn default() -> Self {
        StandingPhasorParams {
            length: 1.5,
            n_points: 31,
            period: 4.0,
        }
    }
}

impl StandingPhasorParams {
    pub fn validate(&self) -> Result<()> {
        positive("length", self.length)?;
        at_least("n_points", self.n_points, 2)?;
        positive("period", self.period)
    }
}

/// `fig2_left`: the spherical volume element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VolumeElementParams {
    pub r0: f64,
    pub dr: f64,
    pub theta0_deg: f64,
    pub dtheta_deg: f64,
    pub phi0_deg: f64,
    pub dphi_deg: f64,
}

impl Default for VolumeElementParams {
    fn default() -> Self {
        VolumeElementParams {
            r0: 1.0,
            dr: 0.3,
            theta0_deg: 40.0,
            dtheta_deg: 30.0,
            phi0_deg: 75.0,
            dphi_deg: 30.0,
        }
    }
}

impl VolumeElementParams {
    pub fn validate(&self) -> Result<()> {
        positive("r0", self.r0)?;
        positive("dr", self.dr)?;
        in_range("theta0_deg", self.theta0_deg, 0.0, 180.0)?;
        positive("dtheta_deg", self.dtheta_deg)?;
        in_range("dtheta_deg", self.theta0_deg + self.dtheta_deg, 0.0, 180.0)?;
        finite("phi0_deg", self.phi0_deg)?;
        positive("dphi_deg", self.dphi_deg)?;
        in_range("dphi_deg", self.dphi_deg, 0.0, 360.0)
    }
}

/// `fig2_right`: unit vector triples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnitTriplesParams {
    pub arrow_length: f64,
    /// `[θ, φ]` pairs; `None` uses the main-plane set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directions_deg: Option<Vec<[f64; 2]>>,
}

impl Default for UnitTriplesParams {
    fn default() -> Self {
        UnitTriplesParams {
            arrow_length: 0.25,
            directions_deg: None,
        }
    }
}

impl UnitTriplesParams {
    pub fn validate(&self) -> Result<()> {
        in_range("arrow_length", self.arrow_length, 1e-3, 10.0)?;
        if let Some(d) = &self.directions_deg {
            if d.is_empty() {
                return Err(bad("directions_deg", "must not be empty"));
            }
            for &[t, p] in d {
                in_range("directions_deg", t, 0.0, 180.0)?;
                finite("directions_deg", p)?;
            }
        }
        Ok(())
    }
}

/// `fig3_left`: coordinate surfaces, curves and unit vectors through one
/// point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScsCompositeParams {
    pub r: f64,
    pub theta_deg: f64,
    pub phi_deg: f64,
}

impl Default for ScsCompositeParams {
    fn default() -> Self {
        ScsCompositeParams {
            r: 1.0,
            theta_deg: 55.0,
            phi_deg: 40.0,
        }
    }
}

impl ScsCompositeParams {
    pub fn validate(&self) -> Result<()> {
        positive("r", self.r)?;
        in_range("theta_deg", self.theta_deg, 1.0, 179.0)?;
        finite("phi_deg", self.phi_deg)
    }
}

/// `fig3_right`: a cone sweeping through a cut-open sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SphereConeSweepParams {
    pub r: f64,
    pub theta_start_deg: f64,
    pub theta_end_deg: f64,
    /// φ-interval removed from the sphere.
    pub cutout_deg: [f64; 2],
    pub period: f64,
}

impl Default for SphereConeSweepParams {
    fn default() -> Self {
        SphereConeSweepParams {
            r: 1.0,
            theta_start_deg: 0.0,
            theta_end_deg: 180.0,
            cutout_deg: [0.0, 90.0],
            period: 8.0,
        }
    }
}

impl SphereConeSweepParams {
    pub fn validate(&self) -> Result<()> {
        positive("r", self.r)?;
        in_range("theta_start_deg", self.theta_start_deg, 0.0, 180.0)?;
        in_range("theta_end_deg", self.theta_end_deg, 0.0, 180.0)?;
        finite("cutout_deg", self.cutout_deg[0])?;
        finite("cutout_deg", self.cutout_deg[1])?;
        if !(self.cutout_deg[1] > self.cutout_deg[0] && self.cutout_deg[1] - self.cutout_deg[0] < 360.0) {
            return Err(bad("cutout_deg", "need from < to spanning less than 360"));
        }
        positive("period", self.period)
    }
}

/// `fig4_left`: linear, circular and elliptical fields on x, y, z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolarizationTriptychParams {
    pub amplitude: f64,
    /// Of the elliptical sample.
    pub axial_ratio: f64,
    pub steps: usize,
    pub period: f64,
}

impl Default for PolarizationTriptychParams {
    fn default() -> Self {
        PolarizationTriptychParams {
            amplitude: 0.4,
            axial_ratio: 2.0,
            steps: 24,
            period: 4.0,
        }
    }
}

impl PolarizationTriptychParams {
    pub fn validate(&self) -> Result<()> {
        positive("amplitude", self.amplitude)?;
        if !(self.axial_ratio > 1.0 && self.axial_ratio.is_finite()) {
            return Err(bad("axial_ratio", "must be finite and above 1"));
        }
        at_least("steps", self.steps, 3)?;
        positive("period", self.period)
    }
}

/// `fig4_right`: a field and its cosine/sine parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldDecompositionParams {
    pub propagation: Vec3,
    /// Phasor `E = e_re + j·e_im`.
    pub e_re: Vec3,
    pub e_im: Vec3,
    pub period: f64,
}

impl Default for FieldDecompositionParams {
    fn default() -> Self {
        FieldDecompositionParams {
            propagation: Vec3::X,
            e_re: Vec3::new(0.0, 0.8, 0.3),
            e_im: Vec3::new(0.0, 0.2, -0.5),
            period: 4.0,
        }
    }
}

impl FieldDecompositionParams {
    pub fn validate(&self) -> Result<()> {
        nonzero("propagation", self.propagation)?;
        if !self.e_re.is_finite() || !self.e_im.is_finite() {
            return Err(bad("e_re", "must be finite"));
        }
        positive("period", self.period)
    }
}

/// `fig5_left`: the field tip tracing its ellipse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EllipseTraceParams {
    pub axial_ratio: f64,
    pub major_axis: Vec3,
    pub propagation: Vec3,
    pub handedness: Handedness,
    pub convention: HandednessConvention,
    pub period: f64,
}

impl Default for EllipseTraceParams {
    fn default() -> Self {
        EllipseTraceParams {
            axial_ratio: 2.0,
            major_axis: Vec3::Z,
            propagation: Vec3::Y,
            handedness: Handedness::Cw,
            convention: HandednessConvention::TowardObserver,
            period: 4.0,
        }
    }
}

impl EllipseTraceParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.axial_ratio >= 1.0 && self.axial_ratio.is_finite()) {
            return Err(bad("axial_ratio", "must be finite and at least 1"));
        }
        nonzero("major_axis", self.major_axis)?;
        nonzero("propagation", self.propagation)?;
        let (m, p) = (self.major_axis.normalized().unwrap(), self.propagation.normalized().unwrap());
        if m.dot(p).abs() > 1e-9 {
            return Err(bad("major_axis", "must be perpendicular to propagation"));
        }
        if self.handedness == Handedness::Linear {
            return Err(bad("handedness", "must be CW or CCW"));
        }
        positive("period", self.period)
    }
}

/// `fig5_right`: a normalized far field in one direction, seen in the
/// local spherical frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FarfieldEllipseParams {
    pub theta_deg: f64,
    pub phi_deg: f64,
    pub axial_ratio: f64,
    pub handedness: Handedness,
    pub period: f64,
}

impl Default for FarfieldEllipseParams {
    fn default() -> Self {
        FarfieldEllipseParams {
            theta_deg: 60.0,
            phi_deg: 30.0,
            axial_ratio: 2.0,
            handedness: Handedness::Ccw,
            period: 4.0,
        }
    }
}

impl FarfieldEllipseParams {
    pub fn validate(&self) -> Result<()> {
        in_range("theta_deg", self.theta_deg, 1.0, 179.0)?;
        finite("phi_deg", self.phi_deg)?;
        if !(self.axial_ratio >= 1.0 && self.axial_ratio.is_finite()) {
            return Err(bad("axial_ratio", "must be finite and at least 1"));
        }
        if self.handedness == Handedness::Linear {
            return Err(bad("handedness", "must be CW or CCW"));
        }
        positive("period", self.period)
    }
}

/// `fig6`: short crossed dipoles on y and z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrossedDipolesParams {
    pub theta_deg: f64,
    /// Feed phase of the z dipole relative to the y dipole.
    pub phase_deg: f64,
    pub marks_deg: Vec<f64>,
    pub distance: f64,
    pub convention: HandednessConvention,
    pub period: f64,
}

impl Default for CrossedDipolesParams {
    fn default() -> Self {
        CrossedDipolesParams {
            theta_deg: 90.0,
            phase_deg: 90.0,
            marks_deg: vec![0.0, 240.0, 270.0],
            distance: 1.5,
            convention: HandednessConvention::TowardSource,
            period: 12.0,
        }
    }
}

impl CrossedDipolesParams {
    pub fn validate(&self) -> Result<()> {
        in_range("theta_deg", self.theta_deg, 0.0, 180.0)?;
        finite("phase_deg", self.phase_deg)?;
        for &m in &self.marks_deg {
            finite("marks_deg", m)?;
        }
        positive("distance", self.distance)?;
        positive("period", self.period)
    }
}

/// `fig7`: two parallel dipoles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwoDipoleArrayParams {
    pub length: f64,
    pub axis: Vec3,
    pub spacing: f64,
    pub spacing_axis: Vec3,
    pub phases_deg: [f64; 2],
    /// Data grid `[n_theta, n_phi]`.
    pub grid: [usize; 2],
    /// Grid of the drawn surface.
    pub display_grid: [usize; 2],
    pub cut_samples: usize,
    pub mapping: PatternMapping,
    pub period: f64,
}

impl Default for TwoDipoleArrayParams {
    fn default() -> Self {
        TwoDipoleArrayParams {
            length: 2.4,
            axis: Vec3::new(0.2, 0.4, 0.894),
            spacing: 0.25,
            spacing_axis: Vec3::new(0.3, 0.5, 0.812),
            phases_deg: [0.0, 30.0],
            grid: [181, 360],
            display_grid: [61, 120],
            cut_samples: 360,
            mapping: PatternMapping::Field,
            period: 10.0,
        }
    }
}

impl TwoDipoleArrayParams {
    pub fn validate(&self) -> Result<()> {
        positive("length", self.length)?;
        nonzero("axis", self.axis)?;
        if !(self.spacing >= 0.0 && self.spacing.is_finite()) {
            return Err(bad("spacing", "must be finite and non-negative"));
        }
        nonzero("spacing_axis", self.spacing_axis)?;
        finite("phases_deg", self.phases_deg[0])?;
        finite("phases_deg", self.phases_deg[1])?;
        grid("grid", self.grid)?;
        grid("display_grid", self.display_grid)?;
        at_least("cut_samples", self.cut_samples, 8)?;
        positive("period", self.period)
    }
}

/// `fig8`: the measurement of a pattern cut in an anechoic chamber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnechoicSweepParams {
    pub rotation_axis: Vec3,
    /// Direction from the antenna to the probe.
    pub receiver: Vec3,
    pub receiver_distance: f64,
    pub samples: usize,
    /// Room size `[x, y, z]`.
    pub room: [f64; 3],
    pub absorber_spacing: f64,
    pub period: f64,
}

impl Default for AnechoicSweepParams {
    fn default() -> Self {
        AnechoicSweepParams {
            rotation_axis: Vec3::Y,
            receiver: Vec3::X,
            receiver_distance: 2.5,
            samples: 72,
            room: [6.0, 4.0, 3.0],
            absorber_spacing: 0.5,
            period: 12.0,
        }
    }
}

impl AnechoicSweepParams {
    pub fn validate(&self) -> Result<()> {
        nonzero("rotation_axis", self.rotation_axis)?;
        nonzero("receiver", self.receiver)?;
        positive("receiver_distance", self.receiver_distance)?;
        at_least("samples", self.samples, 4)?;
        for &d in &self.room {
            positive("room", d)?;
        }
        let probe = self.receiver.normalized().unwrap() * self.receiver_distance;
        if [probe.x, probe.y, probe.z].iter().zip(&self.room).any(|(c, d)| c.abs() >= 0.5 * d) {
            return Err(bad("receiver_distance", "probe must fit inside the room"));
        }
        in_range("absorber_spacing", self.absorber_spacing, 0.05, 10.0)?;
        positive("period", self.period)
    }
}

/// `fig9`: the interactive single-dipole explorer's starting state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExplorerParams {
    pub theta_deg: f64,
    pub phi_deg: f64,
    pub length: f64,
    pub grid: [usize; 2],
    pub opacity: f64,
    /// Range of the length morph.
    pub length_range: [f64; 2],
    pub morph_steps: usize,
    pub phasor_steps: usize,
    /// Periods of the field-rotation, length-morph and scene-rotation
    /// tracks, s.
    pub periods: [f64; 3],
}

impl Default for ExplorerParams {
    fn default() -> Self {
        ExplorerParams {
            theta_deg: 90.0,
            phi_deg: 0.0,
            length: 0.5,
            grid: [46, 90],
            opacity: 0.6,
            length_range: [0.5, 1.5],
            morph_steps: 11,
            phasor_steps: 24,
            periods: [4.0, 6.0, 10.0],
        }
    }
}

impl ExplorerParams {
    pub fn validate(&self) -> Result<()> {
        in_range("theta_deg", self.theta_deg, 0.0, 180.0)?;
        finite("phi_deg", self.phi_deg)?;
        in_range("length", self.length, 0.05, 3.0)?;
        grid("grid", self.grid)?;
        in_range("opacity", self.opacity, 0.0, 1.0)?;
        in_range("length_range", self.length_range[0], 0.05, 3.0)?;
        in_range("length_range", self.length_range[1], 0.05, 3.0)?;
        if !(self.length_range[0] < self.length_range[1]) {
            return Err(bad("length_range", "need min < max"));
        }
        at_least("morph_steps", self.morph_steps, 2)?;
        at_least("phasor_steps", self.phasor_steps, 3)?;
        for &p in &self.periods {
            positive("periods", p)?;
        }
        Ok(())
    }
}

/// `fig10`: dipole characteristics over a length sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CharacteristicsParams {
    pub l_min: f64,
    pub l_max: f64,
    pub steps: usize,
    /// Grid of the small 3D panel.
    pub surface_grid: [usize; 2],
    /// Resistances above this are drawn clipped, Ω.
    pub r_clip: f64,
    pub period: f64,
}

impl Default for CharacteristicsParams {
    fn default() -> Self {
        CharacteristicsParams {
            l_min: 0.1,
            l_max: 3.0,
            steps: 100,
            surface_grid: [13, 16],
            r_clip: 500.0,
            period: 20.0,
        }
    }
}

impl CharacteristicsParams {
    pub fn validate(&self) -> Result<()> {
        positive("l_min", self.l_min)?;
        positive("l_max", self.l_max)?;
        if !(self.l_min < self.l_max) {
            return Err(bad("l_max", "must exceed l_min"));
        }
        in_range("steps", self.steps as f64, 2.0, 2000.0)?;
        grid("surface_grid", self.surface_grid)?;
        positive("r_clip", self.r_clip)?;
        positive("period", self.period)
    }
}

/// Dipole kind in element configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    #[default]
    Sinusoidal,
    Short,
}

/// One dipole as written in configs and API bodies:
/// `{"center":[0,0,0],"axis":[0,0,1],"kind":"sinusoidal","length":0.5,"amplitude":1,"phase_deg":0}`.
///
/// `length` is required for sinusoidal elements and ignored by short ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    #[serde(default)]
    pub center: Vec3,
    pub axis: Vec3,
    #[serde(default)]
    pub kind: ElementKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub phase_deg: f64,
}

fn one() -> f64 {
    1.0
}

impl ElementSpec {
    /// Errors name the key as `{prefix}.{key}`.
    pub fn to_element(&self, prefix: &str) -> Result<DipoleElement> {
        let bad = |key: &str, reason: &str| Error::Config(format!("invalid parameter `{prefix}.{key}`: {reason}"));
        if !self.center.is_finite() {
            return Err(bad("center", "must be finite"));
        }
        if !self.axis.is_finite() || self.axis.norm() <= 1e-9 {
            return Err(bad("axis", "must be a non-zero vector"));
        }
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(bad("amplitude", "must be finite and non-negative"));
        }
        if !self.phase_deg.is_finite() {
            return Err(bad("phase_deg", "must be finite"));
        }
        let kind = match self.kind {
            ElementKind::Short => DipoleKind::Short,
            ElementKind::Sinusoidal => match self.length {
                Some(l) if l > 0.0 && l.is_finite() => DipoleKind::Sinusoidal { length: l },
                Some(_) => return Err(bad("length", "must be positive")),
                None => return Err(bad("length", "required for sinusoidal elements")),
            },
        };
        DipoleElement::new(self.center, self.axis, kind, self.amplitude, self.phase_deg.to_radians())
    }
}

/// Array from element specs; errors name `elements[i].key`.
pub fn array_from_specs(specs: &[ElementSpec]) -> Result<AntennaArray> {
    if specs.is_empty() {
        return Err(Error::Config("invalid parameter `elements`: need at least one element".into()));
    }
    let elements = specs
        .iter()
        .enumerate()
        .map(|(i, s)| s.to_element(&format!("elements[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    AntennaArray::new(elements)
}
