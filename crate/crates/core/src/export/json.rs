use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{color_hex, fmt_sig, round_sig};
use crate::coords::SurfaceMesh;
use crate::error::{Error, Result};
use crate::farfield::{Handedness, HandednessConvention, PolarizationClass, PolarizationEllipse};
use crate::patterns::{
    pattern_surface, pattern_vertex_values, DipoleCharacteristics, MainPlane, PatternGrid, PatternMapping, PlaneCut,
};

const JSON_DIGITS: usize = 9;

fn num(x: f64) -> String {
    fmt_sig(x, JSON_DIGITS)
}

/// `{"vertices":[[x,y,z],…],"faces":[[i,j,k],…],"values":[…]}`, compact,
/// keys in that order; `values` only when given.
pub fn write_mesh_json(mesh: &SurfaceMesh, values: Option<&[f64]>) -> String {
    let mut s = String::from("{\"vertices\":[");
    for (k, v) in mesh.vertices.iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        s.push_str(&format!("[{},{},{}]", num(v.x), num(v.y), num(v.z)));
    }
    s.push_str("],\"faces\":[");
    for (k, f) in mesh.faces.iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        s.push_str(&format!("[{},{},{}]", f[0], f[1], f[2]));
    }
    s.push(']');
    if let Some(values) = values {
        s.push_str(",\"values\":[");
        let vals: Vec<String> = values.iter().map(|&v| num(v)).collect();
        s.push_str(&vals.join(","));
        s.push(']');
    }
    s.push('}');
    s
}

/// The pattern surface with the normalized intensity at every vertex.
pub fn write_pattern_json(pg: &PatternGrid, mapping: PatternMapping) -> String {
    let mesh = pattern_surface(pg, mapping);
    let values = pattern_vertex_values(pg);
    write_mesh_json(&mesh, Some(&values))
}

/// Rounds every float in `v` to 9 significant digits.
pub fn round_json_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(0.0), JSON_DIGITS);
            serde_json::Number::from_f64(if x == 0.0 { 0.0 } else { x })
                .map(Value::Number)
                .unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json_numbers(v))).collect()),
        other => other,
    }
}

fn write_value(v: &Value, s: &mut String) {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => s.push_str(&num(x)),
            _ => s.push_str(&n.to_string()),
        },
        Value::Array(a) => {
            s.push('[');
            for (k, x) in a.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                write_value(x, s);
            }
            s.push(']');
        }
        Value::Object(o) => {
            s.push('{');
            for (k, (key, x)) in o.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                s.push_str(&Value::String(key.clone()).to_string());
                s.push(':');
                write_value(x, s);
            }
            s.push('}');
        }
        other => s.push_str(&other.to_string()),
    }
}

/// Compact JSON of any serializable value, floats at 9 significant digits
/// and struct fields in declaration order.
pub fn data_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Config(e.to_string()))?;
    let mut s = String::new();
    write_value(&v, &mut s);
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutJson {
    pub plane: MainPlane,
    pub color: String,
    pub angles_deg: Vec<f64>,
    pub values: Vec<f64>,
}

impl From<&PlaneCut> for CutJson {
    fn from(c: &PlaneCut) -> Self {
        CutJson {
            plane: c.plane,
            color: color_hex(c.role_color.into()),
            angles_deg: c.angles.iter().map(|a| a.to_degrees()).collect(),
            values: c.values.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicsJson {
    pub length: f64,
    pub directivity: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r_in: Option<f64>,
    pub anti_resonant: bool,
    pub theta_max_deg: f64,
    pub cut: CutJson,
}

pub fn characteristics_json(c: &DipoleCharacteristics) -> CharacteristicsJson {
    CharacteristicsJson {
        length: c.length,
        directivity: c.directivity,
        r_in: c.r_in,
        anti_resonant: c.anti_resonant,
        theta_max_deg: c.theta_max_deg,
        cut: CutJson::from(&c.cut),
    }
}

/// Polarization readout. `axial_ratio` is `null` for linear polarization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarizationJson {
    pub axial_ratio: Option<f64>,
    pub handedness: Handedness,
    pub classification: PolarizationClass,
    pub convention: HandednessConvention,
    pub major: [f64; 3],
    pub minor: [f64; 3],
}

impl From<&PolarizationEllipse> for PolarizationJson {
    fn from(e: &PolarizationEllipse) -> Self {
        PolarizationJson {
            axial_ratio: e.axial_ratio.is_finite().then_some(e.axial_ratio),
            handedness: e.handedness,
            classification: e.classification,
            convention: e.convention,
            major: [e.major_axis.x, e.major_axis.y, e.major_axis.z],
            minor: [e.minor_axis.x, e.minor_axis.y, e.minor_axis.z],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{RoleColor, Vec3};

    #[test]
    fn unit_triangle_text() {
        let m = SurfaceMesh::new(vec![Vec3::ZERO, Vec3::X, Vec3::Y], vec![[0, 1, 2]], RoleColor::R).unwrap();
        assert_eq!(
            write_mesh_json(&m, None),
            r#"{"vertices":[[0,0,0],[1,0,0],[0,1,0]],"faces":[[0,1,2]]}"#
        );
        assert_eq!(
            write_mesh_json(&m, Some(&[1.0, 0.5, 1.0 / 3.0])),
            r#"{"vertices":[[0,0,0],[1,0,0],[0,1,0]],"faces":[[0,1,2]],"values":[1,0.5,0.333333333]}"#
        );
    }

    #[test]
    fn data_json_is_compact_and_rounded() {
        #[derive(Serialize)]
        struct D {
            b: f64,
            a: Vec<f64>,
            n: Option<f64>,
        }
        let s = data_json(&D {
            b: 0.1 + 0.2,
            a: vec![1.0, -0.0],
            n: None,
        })
        .unwrap();
        assert_eq!(s, r#"{"b":0.3,"a":[1,0],"n":null}"#);
    }
}
