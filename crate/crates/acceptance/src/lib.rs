//! Independent oracles for the acceptance suite.
//!
//! Nothing here calls into `virtlab`: each value is recomputed from its
//! closed form with plain loops, on plain `[f64; 3]` vectors, so a bug in
//! the library cannot cancel against the same bug in its check.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

pub type V3 = [f64; 3];
pub type C3 = [Complex64; 3];

pub fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

pub fn dir(theta: f64, phi: f64) -> V3 {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Far field of a short dipole along `axis` fed with phase `phase`:
/// the transverse part of the axis, `axis − (axis·r̂) r̂`.
pub fn short_dipole_field(axis: V3, phase: f64, r: V3) -> C3 {
    let a = dot(axis, r);
    let w = Complex64::from_polar(1.0, phase);
    [0, 1, 2].map(|k| w * (axis[k] - a * r[k]))
}

pub fn add(a: C3, b: C3) -> C3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// `Re{E e^{jτ}}`.
pub fn instant(e: C3, tau: f64) -> V3 {
    let w = Complex64::from_polar(1.0, tau);
    [0, 1, 2].map(|k| (e[k] * w).re)
}

/// Axial ratio by brute force: max/min of `|E(τ)|` over `n` samples of a
/// half period (the ellipse is centrally symmetric). Infinite when the
/// minimum vanishes.
pub fn axial_ratio_by_sampling(e: C3, n: usize) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for k in 0..n {
        let m = norm(instant(e, PI * k as f64 / n as f64));
        lo = lo.min(m);
        hi = hi.max(m);
    }
    if lo <= 1e-12 * hi {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Sense of rotation of the field tip about `r`: positive when
/// counter-clockwise for an observer the wave travels toward.
pub fn rotation_sense(e: C3, r: V3) -> f64 {
    // E(τ) = e_c cos τ + e_s sin τ with e_c = Re E, e_s = −Im E
    let ec = [0, 1, 2].map(|k| e[k].re);
    let es = [0, 1, 2].map(|k| -e[k].im);
    dot(r, cross(ec, es))
}

/// Pattern factor of a center-fed sinusoidal dipole of length `l` at
/// angle `theta` from its axis.
pub fn dipole_factor(l: f64, theta: f64) -> f64 {
    let kh = PI * l;
    let s = theta.sin();
    if s.abs() < 1e-15 {
        return 0.0;
    }
    ((kh * theta.cos()).cos() - kh.cos()) / s
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + h * k as f64) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Directivity of an axisymmetric pattern `U(θ)`: `2 U_max / ∫ U sinθ dθ`.
pub fn axisymmetric_directivity(u: impl Fn(f64) -> f64, n: usize) -> f64 {
    let total = simpson(|t| u(t) * t.sin(), 0.0, PI, n);
    let peak = (0..=n).map(|k| u(PI * k as f64 / n as f64)).fold(0.0, f64::max);
    2.0 * peak / total
}

/// Input radiation resistance `R_m / sin²(kh)` with
/// `R_m = η/(2π) ∫ F² sinθ dθ` and η = 120π Ω.
pub fn input_resistance(l: f64, n: usize) -> f64 {
    let rm = 60.0 * simpson(|t| dipole_factor(l, t).powi(2) * t.sin(), 0.0, PI, n);
    rm / (PI * l).sin().powi(2)
}

/// First local maximum of `|F|` from the axis, in degrees, on a uniform
/// scan of `n` steps over (0°, 90°].
pub fn first_max_deg(l: f64, n: usize) -> f64 {
    let f = |k: usize| dipole_factor(l, (90.0 * k as f64 / n as f64).to_radians()).abs();
    for k in 1..n {
        if f(k) >= f(k - 1) && f(k) > f(k + 1) {
            return 90.0 * k as f64 / n as f64;
        }
    }
    90.0
}

/// Total current `p = Re{(e^{jkz} + Γ e^{−jkz}) e^{jτ}}`, z from the load.
pub fn total_wave(gamma: Complex64, z: f64, tau: f64) -> f64 {
    let kz = TAU * z;
    ((Complex64::from_polar(1.0, kz) + gamma * Complex64::from_polar(1.0, -kz)) * Complex64::from_polar(1.0, tau)).re
}
