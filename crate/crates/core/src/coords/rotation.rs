use serde::{Deserialize, Serialize};

use super::Vec3;

/// A proper rotation, stored as a unit quaternion `(w, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl Default for Rotation {
    fn default() -> Self {
        Rotation::IDENTITY
    }
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Right-handed rotation by `angle` radians about `axis`.
    ///
    /// A zero axis yields the identity.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Self {
        let Some(a) = axis.normalized() else {
            return Rotation::IDENTITY;
        };
        let (s, c) = (0.5 * angle).sin_cos();
        Rotation {
            w: c,
            x: a.x * s,
            y: a.y * s,
            z: a.z * s,
        }
    }

    /// Axis and angle in `[0, π]`. The identity reports `(ẑ, 0)`.
    pub fn to_axis_angle(self) -> (Vec3, f64) {
        let q = if self.w < 0.0 { self.negated() } else { self };
        let v = Vec3::new(q.x, q.y, q.z);
        let s = v.norm();
        if s < 1e-15 {
            return (Vec3::Z, 0.0);
        }
        (v / s, 2.0 * s.atan2(q.w))
    }

    /// Builds the rotation whose matrix has the given columns.
    ///
    /// The columns must form a right-handed orthonormal basis.
    pub fn from_basis(cx: Vec3, cy: Vec3, cz: Vec3) -> Self {
        let (m00, m01, m02) = (cx.x, cy.x, cz.x);
        let (m10, m11, m12) = (cx.y, cy.y, cz.y);
        let (m20, m21, m22) = (cx.z, cy.z, cz.z);
        let trace = m00 + m11 + m22;
        let q = if trace > 0.0 {
            let s = (trace + 1.0).sqrt() * 2.0;
            Rotation {
                w: 0.25 * s,
                x: (m21 - m12) / s,
                y: (m02 - m20) / s,
                z: (m10 - m01) / s,
            }
        } else if m00 > m11 && m00 > m22 {
            let s = (1.0 + m00 - m11 - m22).sqrt() * 2.0;
            Rotation {
                w: (m21 - m12) / s,
                x: 0.25 * s,
                y: (m01 + m10) / s,
                z: (m02 + m20) / s,
            }
        } else if m11 > m22 {
            let s = (1.0 + m11 - m00 - m22).sqrt() * 2.0;
            Rotation {
                w: (m02 - m20) / s,
                x: (m01 + m10) / s,
                y: 0.25 * s,
                z: (m12 + m21) / s,
            }
        } else {
            let s = (1.0 + m22 - m00 - m11).sqrt() * 2.0;
            Rotation {
                w: (m10 - m01) / s,
                x: (m02 + m20) / s,
                y: (m12 + m21) / s,
                z: 0.25 * s,
            }
        };
        q.renormalized()
    }

    pub fn apply(self, v: Vec3) -> Vec3 {
        // v' = v + 2w (q × v) + 2 q × (q × v)
        let q = Vec3::new(self.x, self.y, self.z);
        let t = q.cross(v) * 2.0;
        v + t * self.w + q.cross(t)
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(self, other: Rotation) -> Rotation {
        let (a, b) = (self, other);
        Rotation {
            w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        }
        .renormalized()
    }

    pub fn inverse(self) -> Rotation {
        Rotation {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Shortest-arc interpolation, `t ∈ [0, 1]`.
    pub fn slerp(self, other: Rotation, t: f64) -> Rotation {
        let mut b = other;
        let mut cos = self.w * b.w + self.x * b.x + self.y * b.y + self.z * b.z;
        if cos < 0.0 {
            b = b.negated();
            cos = -cos;
        }
        let (ka, kb) = if cos > 1.0 - 1e-12 {
            (1.0 - t, t)
        } else {
            let omega = cos.min(1.0).acos();
            let s = omega.sin();
            (((1.0 - t) * omega).sin() / s, (t * omega).sin() / s)
        };
        Rotation {
            w: ka * self.w + kb * b.w,
            x: ka * self.x + kb * b.x,
            y: ka * self.y + kb * b.y,
            z: ka * self.z + kb * b.z,
        }
        .renormalized()
    }

    fn negated(self) -> Rotation {
        Rotation {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    fn renormalized(self) -> Rotation {
        let n = (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        Rotation {
            w: self.w / n,
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: Vec3, b: Vec3) -> bool {
        a.distance(b) < 1e-12
    }

    #[test]
    fn quarter_turn_about_z() {
        let r = Rotation::from_axis_angle(Vec3::Z, FRAC_PI_2);
        assert!(close(r.apply(Vec3::X), Vec3::Y));
        assert!(close(r.apply(Vec3::Y), -Vec3::X));
    }

    #[test]
    fn basis_round_trip() {
        let r = Rotation::from_axis_angle(Vec3::new(1.0, 2.0, -0.5), 2.3);
        let back = Rotation::from_basis(r.apply(Vec3::X), r.apply(Vec3::Y), r.apply(Vec3::Z));
        for v in [Vec3::X, Vec3::Y, Vec3::new(0.3, -0.7, 0.1)] {
            assert!(close(r.apply(v), back.apply(v)));
        }
    }

    #[test]
    fn axis_angle_round_trip() {
        let axis = Vec3::new(0.0, 0.6, 0.8);
        let (a, ang) = Rotation::from_axis_angle(axis, 1.1).to_axis_angle();
        assert!(close(a, axis));
        assert!((ang - 1.1).abs() < 1e-12);
        assert_eq!(Rotation::IDENTITY.to_axis_angle(), (Vec3::Z, 0.0));
    }

    #[test]
    fn slerp_same_axis_is_linear_in_angle() {
        let a = Rotation::from_axis_angle(Vec3::Z, 0.0);
        let b = Rotation::from_axis_angle(Vec3::Z, PI / 2.0);
        let (_, ang) = a.slerp(b, 0.25).to_axis_angle();
        assert!((ang - PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn composition_order() {
        let rz = Rotation::from_axis_angle(Vec3::Z, FRAC_PI_2);
        let rx = Rotation::from_axis_angle(Vec3::X, FRAC_PI_2);
        // rx first maps y to z, then rz leaves z alone
        assert!(close(rz.compose(rx).apply(Vec3::Y), Vec3::Z));
        assert!(close(rz.compose(rz.inverse()).apply(Vec3::Y), Vec3::Y));
    }
}
