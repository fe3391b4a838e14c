//! Time-harmonic current waves on a terminated wire and on a dipole.
//!
//! Positions are in wavelengths, so the wavenumber is `k = 2π`. The incident
//! wave has unit amplitude and travels toward the load at `z = 0`; `z`
//! increases toward the source. With `Γ = |Γ| e^{jψ}` the real waves at phase
//! `τ` are
//!
//! ```text
//! i = cos(τ + kz)                        incident
//! r = |Γ| cos(τ − kz + ψ)                reflected
//! t = (1 − |Γ|) cos(τ + kz)              transmitted (traveling) part
//! s = 2|Γ| cos(kz − ψ/2) cos(τ + ψ/2)    standing part
//! p = i + r = s + t                      total
//! ```

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coords::Vec3;
use crate::error::{Error, Result};

const K: f64 = TAU;

/// A wire of real characteristic impedance `z0` terminated in `zl`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TerminatedWire {
    pub z0: f64,
    pub zl: Complex64,
    pub length: f64,
}

impl TerminatedWire {
    pub fn new(z0: f64, zl: Complex64, length: f64) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::invalid("length", "must be positive"));
        }
        reflection_coefficient(z0, zl)?;
        Ok(TerminatedWire { z0, zl, length })
    }

    pub fn gamma(&self) -> Complex64 {
        reflection_coefficient(self.z0, self.zl).expect("validated on construction")
    }
}

/// Γ = (Z_L − Z_0) / (Z_L + Z_0).
pub fn reflection_coefficient(z0: f64, zl: Complex64) -> Result<Complex64> {
    if !(z0 > 0.0) {
        return Err(Error::invalid("z0", "characteristic impedance must be positive"));
    }
    let den = zl + z0;
    if den.norm() <= 1e-12 * z0 {
        return Err(Error::SingularLoad);
    }
    Ok((zl - z0) / den)
}

/// Instantaneous wave values at one point and phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveComponents {
    pub p: f64,
    pub i: f64,
    pub r: f64,
    pub s: f64,
    pub t: f64,
}

/// Wave components for reflection coefficient `gamma` at distance `z` from
/// the load and phase `tau`.
pub fn components_for_gamma(gamma: Complex64, z: f64, tau: f64) -> WaveComponents {
    let mag = gamma.norm();
    let psi = if mag == 0.0 { 0.0 } else { gamma.arg() };
    let kz = K * z;
    let i = (tau + kz).cos();
    let r = mag * (tau - kz + psi).cos();
    let t = (1.0 - mag) * (tau + kz).cos();
    let s = 2.0 * mag * (kz - 0.5 * psi).cos() * (tau + 0.5 * psi).cos();
    WaveComponents { p: i + r, i, r, s, t }
}

pub fn wave_components(wire: &TerminatedWire, z: f64, tau: f64) -> Result<WaveComponents> {
    if !(0.0..=wire.length).contains(&z) {
        return Err(Error::invalid("z", format!("must lie in [0, {}]", wire.length)));
    }
    Ok(components_for_gamma(wire.gamma(), z, tau))
}

/// Standing current on a center-fed dipole, `I(ζ) = sin(k(L/2 − |ζ|))`.
///
/// `zeta` is measured from the wire center and should satisfy `|ζ| ≤ L/2`.
pub fn standing_current_profile(length: f64, zeta: f64) -> f64 {
    (K * (0.5 * length - zeta.abs())).sin()
}

/// Per-frame samples along a wire.
///
/// Frame `k` is taken at phase `τ_k = 2πk / n_frames`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveFrameSet<T> {
    /// Sample coordinates along the wire, in wavelengths.
    pub positions: Vec<f64>,
    pub phases: Vec<f64>,
    pub frames: Vec<Vec<T>>,
}

impl<T> WaveFrameSet<T> {
    pub fn n_frames(&self) -> usize {
        self.frames.len()
    }

    pub fn n_points(&self) -> usize {
        self.positions.len()
    }
}

fn frame_phases(n_frames: usize) -> Vec<f64> {
    (0..n_frames)
        .map(|k| TAU * k as f64 / n_frames as f64)
        .collect()
}

fn check_counts(n_points: usize, n_frames: usize) -> Result<()> {
    if n_points < 2 {
        return Err(Error::invalid("n_points", "need at least 2 points"));
    }
    if n_frames < 1 {
        return Err(Error::invalid("n_frames", "need at least 1 frame"));
    }
    Ok(())
}

/// Samples all five waves over the whole wire, load end first.
pub fn wave_frames(
    wire: &TerminatedWire,
    n_points: usize,
    n_frames: usize,
) -> Result<WaveFrameSet<WaveComponents>> {
    check_counts(n_points, n_frames)?;
    let gamma = wire.gamma();
    let positions: Vec<f64> = (0..n_points)
        .map(|j| wire.length * j as f64 / (n_points - 1) as f64)
        .collect();
    let phases = frame_phases(n_frames);
    let frames = phases
        .iter()
        .map(|&tau| {
            positions
                .iter()
                .map(|&z| components_for_gamma(gamma, z, tau))
                .collect()
        })
        .collect();
    Ok(WaveFrameSet {
        positions,
        phases,
        frames,
    })
}

/// The standing dipole current drawn as phasors rotating about the wire.
///
/// The wire lies on the z-axis, centered at the origin. At ζ and phase τ the
/// vector is `I(ζ)·(cos τ, sin τ, 0)`: magnitude `|I(ζ)|`, perpendicular to
/// the wire, with a negative current showing up as a half-turn offset. Its
/// x-component at frame 0 equals `I(ζ)`.
pub fn rotating_phasor_frames(
    length: f64,
    n_points: usize,
    n_frames: usize,
) -> Result<WaveFrameSet<Vec3>> {
    if !(length > 0.0) {
        return Err(Error::invalid("length", "must be positive"));
    }
    check_counts(n_points, n_frames)?;
    let positions: Vec<f64> = (0..n_points)
        .map(|j| -0.5 * length + length * j as f64 / (n_points - 1) as f64)
        .collect();
    let currents: Vec<f64> = positions
        .iter()
        .map(|&zeta| standing_current_profile(length, zeta))
        .collect();
    let phases = frame_phases(n_frames);
    let frames = phases
        .iter()
        .map(|&tau| {
            let (s, c) = tau.sin_cos();
            currents.iter().map(|&i| Vec3::new(i * c, i * s, 0.0)).collect()
        })
        .collect();
    Ok(WaveFrameSet {
        positions,
        phases,
        frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(reflection_coefficient(50.0, c(50.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(reflection_coefficient(50.0, c(0.0, 0.0)).unwrap(), c(-1.0, 0.0));
        let g = reflection_coefficient(50.0, c(100.0, 50.0)).unwrap();
        assert!((g - c(0.4, 0.2)).norm() < 1e-15);
        // |Γ|·|zl+z0| = |zl−z0|
        assert!((g.norm() * c(150.0, 50.0).norm() - c(50.0, 50.0).norm()).abs() < 1e-12);
        assert_eq!(reflection_coefficient(50.0, c(-50.0, 0.0)), Err(Error::SingularLoad));
        assert!(reflection_coefficient(0.0, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn matched_load_has_no_reflection() {
        let w = TerminatedWire::new(50.0, c(50.0, 0.0), 3.0).unwrap();
        for k in 0..40 {
            let (z, tau) = (3.0 * k as f64 / 39.0, 0.37 * k as f64);
            let v = wave_components(&w, z, tau).unwrap();
            assert_eq!(v.r, 0.0);
            assert_eq!(v.s, 0.0);
            assert_eq!(v.p, v.i);
            assert_eq!(v.t, v.i);
        }
    }

    #[test]
    fn short_circuit_node_at_load() {
        let w = TerminatedWire::new(50.0, c(0.0, 0.0), 3.0).unwrap();
        for k in 0..100 {
            let v = wave_components(&w, 0.0, TAU * k as f64 / 100.0).unwrap();
            assert!(v.p.abs() < 1e-15);
        }
    }

    #[test]
    fn position_outside_wire_rejected() {
        let w = TerminatedWire::new(50.0, c(75.0, 0.0), 3.0).unwrap();
        assert!(wave_components(&w, 3.5, 0.0).is_err());
        assert!(wave_components(&w, -0.1, 0.0).is_err());
    }

    #[test]
    fn standing_profile_examples() {
        assert!((standing_current_profile(0.5, 0.0) - 1.0).abs() < 1e-15);
        assert!(standing_current_profile(0.5, 0.25).abs() < 1e-15);
        assert!(standing_current_profile(1.7, -0.85).abs() < 1e-15);
        assert!((standing_current_profile(1.25, 0.0) + 0.707107).abs() < 1e-6);
    }

    #[test]
    fn phasor_frames() {
        let set = rotating_phasor_frames(1.5, 31, 12).unwrap();
        assert_eq!(set.n_frames(), 12);
        for (k, tau) in set.phases.iter().enumerate() {
            assert!((tau - (k as f64 * 30.0).to_radians()).abs() < 1e-15);
        }
        for (j, &zeta) in set.positions.iter().enumerate() {
            let i = standing_current_profile(1.5, zeta);
            assert_eq!(set.frames[0][j].x, i);
            for frame in &set.frames {
                assert!((frame[j].norm() - i.abs()).abs() <= 1e-12);
                assert_eq!(frame[j].z, 0.0);
            }
        }
        assert!(rotating_phasor_frames(1.5, 1, 12).is_err());
        assert!(rotating_phasor_frames(1.5, 5, 0).is_err());
    }

    #[test]
    fn standing_part_factorizes() {
        let g = c(0.3, -0.5);
        let zs = [0.1, 0.37, 0.8, 1.55, 2.9];
        let taus = [0.0, 0.4, 1.9, 3.3, 5.0];
        for &z1 in &zs {
            for &z2 in &zs {
                for &t1 in &taus {
                    for &t2 in &taus {
                        let s = |z, t| components_for_gamma(g, z, t).s;
                        assert!((s(z1, t1) * s(z2, t2) - s(z1, t2) * s(z2, t1)).abs() <= 1e-9);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn decomposition_identities(
            mag in 0.0..=1.0f64, arg in -PI..PI, z in 0.0..3.0f64, tau in 0.0..TAU
        ) {
            let v = components_for_gamma(Complex64::from_polar(mag, arg), z, tau);
            prop_assert!((v.p - (v.i + v.r)).abs() <= 1e-12);
            prop_assert!((v.p - (v.s + v.t)).abs() <= 1e-12);
        }

        #[test]
        fn transmitted_part_travels(
            mag in 0.0..=1.0f64, z in 0.0..3.0f64, tau in 0.0..TAU, delta in -1.0..1.0f64
        ) {
            let g = Complex64::from_polar(mag, 0.7);
            let a = components_for_gamma(g, z, tau).t;
            let b = components_for_gamma(g, z + delta, tau - K * delta).t;
            prop_assert!((a - b).abs() <= 1e-12);
        }

        #[test]
        fn passive_loads_reflect_at_most_fully(re in 0.0..1e4f64, im in -1e4..1e4f64, z0 in 1.0..600.0f64) {
            let g = reflection_coefficient(z0, Complex64::new(re, im)).unwrap();
            prop_assert!(g.norm() <= 1.0 + 1e-15);
        }
    }
}
