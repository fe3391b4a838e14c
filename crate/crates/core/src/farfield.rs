//! Far-field phasors of thin-wire dipoles and arrays, and their polarization.
//!
//! Time convention: `E(τ) = Re{E e^{jτ}}`. All fields are relative; the
//! common `e^{-jkr}/r` factor and impedance constants are dropped. Lengths are
//! in wavelengths, so `k = 2π`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coords::{direction, SphericalPoint, Vec3};
use crate::error::{Error, Result};

const K: f64 = TAU;

/// A complex vector phasor.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasorVec {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl PhasorVec {
    pub const ZERO: PhasorVec = PhasorVec {
        x: Complex64::new(0.0, 0.0),
        y: Complex64::new(0.0, 0.0),
        z: Complex64::new(0.0, 0.0),
    };

    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        PhasorVec { x, y, z }
    }

    /// `re + j·im`.
    pub fn from_parts(re: Vec3, im: Vec3) -> Self {
        PhasorVec {
            x: Complex64::new(re.x, im.x),
            y: Complex64::new(re.y, im.y),
            z: Complex64::new(re.z, im.z),
        }
    }

    pub fn re(&self) -> Vec3 {
        Vec3::new(self.x.re, self.y.re, self.z.re)
    }

    pub fn im(&self) -> Vec3 {
        Vec3::new(self.x.im, self.y.im, self.z.im)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        PhasorVec {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }

    pub fn add(&self, o: &PhasorVec) -> Self {
        PhasorVec {
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
        }
    }

    /// `E·v` for a real vector `v`.
    pub fn dot_real(&self, v: Vec3) -> Complex64 {
        self.x * v.x + self.y * v.y + self.z * v.z
    }

    /// `|E|² = E·E*`.
    pub fn norm_sqr(&self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// Current distribution of a thin dipole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DipoleKind {
    /// Sinusoidal standing current on a wire of `length` wavelengths.
    Sinusoidal { length: f64 },
    /// Electrically short (Hertzian) dipole.
    Short,
}

/// One radiating thin-wire element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipoleElement {
    pub center: Vec3,
    axis: Vec3,
    pub kind: DipoleKind,
    pub amplitude: f64,
    /// Feed phase in radians.
    pub phase: f64,
}

impl DipoleElement {
    /// The axis is normalized here, so it need not be exactly unit length.
    pub fn new(center: Vec3, axis: Vec3, kind: DipoleKind, amplitude: f64, phase: f64) -> Result<Self> {
        let axis = axis
            .normalized()
            .ok_or_else(|| Error::invalid("axis", "dipole axis must be non-zero"))?;
        if let DipoleKind::Sinusoidal { length } = kind {
            if !(length > 0.0) {
                return Err(Error::invalid("length", "dipole length must be positive"));
            }
        }
        if !(amplitude >= 0.0) || !amplitude.is_finite() {
            return Err(Error::invalid("amplitude", "must be finite and non-negative"));
        }
        if !center.is_finite() || !phase.is_finite() {
            return Err(Error::invalid("center", "must be finite"));
        }
        Ok(DipoleElement {
            center,
            axis,
            kind,
            amplitude,
            phase,
        })
    }

    /// Unit-amplitude sinusoidal dipole at the origin.
    pub fn centered(axis: Vec3, length: f64) -> Result<Self> {
        DipoleElement::new(Vec3::ZERO, axis, DipoleKind::Sinusoidal { length }, 1.0, 0.0)
    }

    /// Unit-amplitude short dipole at the origin.
    pub fn short(axis: Vec3, phase: f64) -> Result<Self> {
        DipoleElement::new(Vec3::ZERO, axis, DipoleKind::Short, 1.0, phase)
    }

    pub fn axis(&self) -> Vec3 {
        self.axis
    }

    /// Same element rigidly moved by `f` (applied to center and axis).
    pub fn transformed(&self, f: impl Fn(Vec3) -> Vec3) -> Self {
        DipoleElement {
            center: f(self.center),
            axis: f(self.axis).normalized().unwrap_or(self.axis),
            ..*self
        }
    }
}

/// A set of elements radiating together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntennaArray {
    elements: Vec<DipoleElement>,
}

impl AntennaArray {
    pub fn new(elements: Vec<DipoleElement>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::invalid("elements", "an array needs at least one element"));
        }
        Ok(AntennaArray { elements })
    }

    pub fn single(e: DipoleElement) -> Self {
        AntennaArray { elements: vec![e] }
    }

    pub fn elements(&self) -> &[DipoleElement] {
        &self.elements
    }

    pub fn transformed(&self, f: impl Fn(Vec3) -> Vec3) -> Self {
        AntennaArray {
            elements: self.elements.iter().map(|e| e.transformed(&f)).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        AntennaArray {
            elements: self
                .elements
                .iter()
                .map(|e| DipoleElement {
                    amplitude: e.amplitude * factor,
                    ..*e
                })
                .collect(),
        }
    }
}

/// Element pattern versus the angle ψ from the dipole axis.
///
/// Short: `sin ψ`. Sinusoidal with `kh = πL`:
/// `[cos(kh cos ψ) − cos kh] / sin ψ`, taken as 0 on the axis.
pub fn pattern_factor(kind: DipoleKind, psi: f64) -> f64 {
    let s = psi.sin();
    match kind {
        DipoleKind::Short => s,
        DipoleKind::Sinusoidal { length } => {
            if s.abs() < 1e-9 {
                return 0.0;
            }
            let kh = PI * length;
            ((kh * psi.cos()).cos() - kh.cos()) / s
        }
    }
}

/// Far field of one element toward `dir`.
///
/// The field points along `t = a − (a·r̂)r̂`, the axis projected transverse
/// to `r̂`.
pub fn element_farfield(elem: &DipoleElement, dir: Vec3) -> PhasorVec {
    let Some(r) = dir.normalized() else {
        return PhasorVec::ZERO;
    };
    let a = elem.axis;
    let cos_psi = a.dot(r).clamp(-1.0, 1.0);
    let t = a - r * cos_psi;
    let excitation = Complex64::from_polar(elem.amplitude, elem.phase + K * r.dot(elem.center));
    let transverse = match elem.kind {
        DipoleKind::Short => t,
        DipoleKind::Sinusoidal { .. } => {
            let tn = t.norm();
            if tn < 1e-9 {
                return PhasorVec::ZERO;
            }
            t * (pattern_factor(elem.kind, cos_psi.acos()) / tn)
        }
    };
    PhasorVec::from_parts(transverse, Vec3::ZERO).scale(excitation)
}

/// Superposition of all element fields toward `dir`.
pub fn array_farfield(array: &AntennaArray, dir: Vec3) -> PhasorVec {
    array
        .elements
        .iter()
        .fold(PhasorVec::ZERO, |acc, e| acc.add(&element_farfield(e, dir)))
}

/// Cosine and sine parts of a phasor: `E(τ) = e_c cos τ + e_s sin τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldDecomposition {
    pub e_c: Vec3,
    pub e_s: Vec3,
}

impl FieldDecomposition {
    pub fn at(&self, tau: f64) -> Vec3 {
        let (s, c) = tau.sin_cos();
        self.e_c * c + self.e_s * s
    }
}

pub fn decompose(e: &PhasorVec) -> FieldDecomposition {
    FieldDecomposition {
        e_c: e.re(),
        e_s: -e.im(),
    }
}

pub fn instantaneous_field(e: &PhasorVec, tau: f64) -> Vec3 {
    decompose(e).at(tau)
}

/// Which way the observer looks when naming the sense of rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HandednessConvention {
    /// Observer faces the oncoming wave (looks toward the source).
    #[default]
    TowardObserver,
    /// Observer looks along the propagation direction.
    TowardSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Handedness {
    Cw,
    Ccw,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizationClass {
    Linear,
    Circular,
    Elliptical,
}

/// Shape and sense of the curve traced by the field tip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationEllipse {
    /// Semi-major axis, the tip position at the instant of maximum |E|.
    pub major_axis: Vec3,
    pub minor_axis: Vec3,
    /// `|major| / |minor|`, infinite for linear polarization.
    pub axial_ratio: f64,
    pub handedness: Handedness,
    pub classification: PolarizationClass,
    pub convention: HandednessConvention,
    /// Phase at which the tip sits on `major_axis`.
    pub tau_major: f64,
}

impl PolarizationEllipse {
    /// Tip positions over one period, `n` samples.
    pub fn trace(&self, n: usize) -> Vec<Vec3> {
        let (a, b) = (self.major_axis, self.minor_axis);
        (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                a * t.cos() + b * t.sin()
            })
            .collect()
    }
}

/// Polarization ellipse of a transverse phasor.
///
/// The semi-axes come from the closed form
/// `τ₀ = ½ atan2(2 e_c·e_s, |e_c|² − |e_s|²)`, with `E(τ₀)` the major and
/// `E(τ₀ + π/2)` the minor axis. The sense follows the sign of
/// `h = r̂·(e_c × e_s)`: positive is CCW for an observer facing the oncoming
/// wave.
pub fn polarization(
    e: &PhasorVec,
    propagation: Vec3,
    convention: HandednessConvention,
) -> Result<PolarizationEllipse> {
    let p = propagation
        .normalized()
        .ok_or_else(|| Error::invalid("propagation", "must be non-zero"))?;
    let mag = e.norm();
    if mag == 0.0 || !mag.is_finite() {
        return Err(Error::NullField);
    }
    let along = e.dot_real(p).norm();
    if along > 1e-6 * mag {
        return Err(Error::NotTransverse { residual: along });
    }
    let d = decompose(e);
    let (ec, es) = (d.e_c, d.e_s);
    let tau0 = 0.5 * (2.0 * ec.dot(es)).atan2(ec.norm_squared() - es.norm_squared());
    let mut major = d.at(tau0);
    let mut minor = d.at(tau0 + FRAC_PI_2);
    let mut tau_major = tau0;
    if minor.norm() > major.norm() {
        std::mem::swap(&mut major, &mut minor);
        tau_major = tau0 + FRAC_PI_2;
    }
    let (a, b) = (major.norm(), minor.norm());

    let linear = b <= 1e-9 * a;
    let axial_ratio = if linear { f64::INFINITY } else { a / b };
    let classification = if linear {
        PolarizationClass::Linear
    } else if a - b <= 1e-9 * a {
        PolarizationClass::Circular
    } else {
        PolarizationClass::Elliptical
    };

    let h = p.dot(ec.cross(es));
    let handedness = if linear || h.abs() <= 1e-12 * ec.norm() * es.norm() {
        Handedness::Linear
    } else {
        let ccw = (h > 0.0) == (convention == HandednessConvention::TowardObserver);
        if ccw {
            Handedness::Ccw
        } else {
            Handedness::Cw
        }
    };
    // Orient the minor axis along the sense of rotation so the trace starts
    // on the major axis and moves toward +minor.
    if !linear && ec.cross(es).dot(major.cross(minor)) < 0.0 {
        minor = -minor;
    }
    Ok(PolarizationEllipse {
        major_axis: major,
        minor_axis: minor,
        axial_ratio,
        handedness,
        classification,
        convention,
        tau_major: tau_major.rem_euclid(TAU),
    })
}

/// Polarization of an array in one direction.
pub fn array_polarization(
    array: &AntennaArray,
    theta: f64,
    phi: f64,
    convention: HandednessConvention,
) -> Result<PolarizationEllipse> {
    let r = direction(theta, phi);
    polarization(&array_farfield(array, r), r, convention)
}

/// One entry of a polarization map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationSample {
    pub direction: SphericalPoint,
    /// `None` where the field is null (below 1e-12 of the map maximum).
    pub ellipse: Option<PolarizationEllipse>,
}

/// Polarization over a set of directions.
pub fn polarization_map(
    array: &AntennaArray,
    directions: &[(f64, f64)],
    convention: HandednessConvention,
) -> Vec<PolarizationSample> {
    let fields: Vec<(SphericalPoint, Vec3, PhasorVec)> = directions
        .iter()
        .map(|&(t, p)| {
            let r = direction(t, p);
            (SphericalPoint::direction(t, p), r, array_farfield(array, r))
        })
        .collect();
    let max = fields.iter().map(|(_, _, e)| e.norm()).fold(0.0, f64::max);
    fields
        .into_iter()
        .map(|(sp, r, e)| PolarizationSample {
            direction: sp,
            ellipse: if e.norm() <= 1e-12 * max {
                None
            } else {
                polarization(&e, r, convention).ok()
            },
        })
        .collect()
}
