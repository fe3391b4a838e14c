//! Deterministic text writers: VRML97 worlds, SVG plots, JSON data, and
//! per-frame VRML sequences.
//!
//! Every writer is a pure function of its input. Numbers go through
//! [`fmt_num`] (VRML, SVG) or [`fmt_sig`] (JSON) so output is byte-stable.

mod json;
mod reader;
mod svg;
mod vrml;

use std::fs;
use std::path::{Path, PathBuf};

pub use json::{
    characteristics_json, data_json, round_json_numbers, write_mesh_json, write_pattern_json, CutJson,
    CharacteristicsJson, PolarizationJson,
};
pub use reader::{read_vrml, VrmlSummary};
pub use svg::{color_hex, write_svg_polar, write_svg_projection, DEFAULT_RINGS, DEFAULT_SVG_SIZE};
pub use vrml::write_vrml;

use crate::error::{Error, Result};
use crate::scene::Scene;

/// First line of every VRML97 document.
pub const VRML_HEADER: &str = "#VRML V2.0 utf8";

/// Values this close to zero print as `0`.
pub const SNAP: f64 = 1e-9;

/// Shortest decimal with at most 6 significant digits; `-0` and values
/// below [`SNAP`] in magnitude print as `0`.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return "0".to_string();
    }
    if x.abs() < SNAP {
        return "0".to_string();
    }
    round_sig(x, 6).to_string()
}

/// Shortest decimal with at most `digits` significant digits; `-0` prints
/// as `0`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    let r = round_sig(x, digits);
    if r == 0.0 || !r.is_finite() {
        "0".to_string()
    } else {
        r.to_string()
    }
}

/// `x` rounded to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("formatted float parses")
}

/// Name of frame `k` in a sequence.
pub fn frame_file_name(k: usize) -> String {
    format!("frame_{k:03}.wrl")
}

/// VRML text of every frame: frame `k` bakes all tracks at `k/n`.
pub fn frame_documents(scene: &Scene, n_frames: usize) -> Result<Vec<String>> {
    if n_frames == 0 {
        return Err(Error::invalid("n_frames", "need at least 1 frame"));
    }
    if scene.tracks.is_empty() {
        return Err(Error::InvalidScene("frame sequence needs at least one track".into()));
    }
    scene.validate()?;
    (0..n_frames).map(|k| write_vrml(&scene.frame(k, n_frames))).collect()
}

/// Writes `frame_000.wrl` … into `out_dir` and returns the paths.
pub fn write_frame_sequence(scene: &Scene, n_frames: usize, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let docs = frame_documents(scene, n_frames)?;
    fs::create_dir_all(out_dir)?;
    docs.into_iter()
        .enumerate()
        .map(|(k, doc)| {
            let path = out_dir.join(frame_file_name(k));
            fs::write(&path, doc)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(-1e-12), "0");
        assert_eq!(fmt_num(0.1234567), "0.123457");
        assert_eq!(fmt_num(2.5), "2.5");
        assert_eq!(fmt_num(-123456.7), "-123457");
        assert_eq!(fmt_num(std::f64::consts::PI), "3.14159");
        assert_eq!(fmt_num(1e-5), "0.00001");
        assert_eq!(fmt_sig(0.1 + 0.2, 9), "0.3");
        assert_eq!(fmt_sig(-0.0, 9), "0");
        assert_eq!(fmt_sig(1.0 / 3.0, 9), "0.333333333");
    }

    #[test]
    fn frame_names() {
        assert_eq!(frame_file_name(0), "frame_000.wrl");
        assert_eq!(frame_file_name(36), "frame_036.wrl");
    }
}
