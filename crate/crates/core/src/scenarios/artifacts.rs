use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{build, BuildOutput, ScenarioData, ScenarioParams, ScenarioSpec};
use crate::error::{Error, Result};
use crate::export::{
    data_json, frame_documents, frame_file_name, write_svg_polar, write_svg_projection, write_vrml, DEFAULT_RINGS,
    DEFAULT_SVG_SIZE,
};

/// An output format of `build`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Format {
    Vrml,
    Svg,
    Json,
    Frames,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Vrml => "vrml",
            Format::Svg => "svg",
            Format::Json => "json",
            Format::Frames => "frames",
        }
    }

    pub fn from_name(s: &str) -> Option<Format> {
        match s {
            "vrml" | "wrl" => Some(Format::Vrml),
            "svg" => Some(Format::Svg),
            "json" => Some(Format::Json),
            "frames" => Some(Format::Frames),
            _ => None,
        }
    }
}

/// Parses `vrml,svg,json`; blanks are ignored, duplicates collapse.
pub fn parse_formats(list: &str) -> Result<BTreeSet<Format>> {
    let mut out = BTreeSet::new();
    for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let f = Format::from_name(tok)
            .ok_or_else(|| Error::Config(format!("unknown format `{tok}` (expected vrml, svg, json or frames)")))?;
        out.insert(f);
    }
    if out.is_empty() {
        return Err(Error::Config("no output format given".into()));
    }
    Ok(out)
}

pub const DEFAULT_FORMATS: [Format; 2] = [Format::Vrml, Format::Json];

/// A named output document, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub path: PathBuf,
    pub contents: String,
}

#[derive(Serialize)]
struct Document<'a> {
    id: &'a str,
    title: &'a str,
    kind: &'static str,
    frames: usize,
    data: &'a ScenarioData,
}

/// The JSON document of a built scenario.
pub fn scenario_json(spec: &ScenarioSpec, out: &BuildOutput) -> Result<String> {
    let mut s = data_json(&Document {
        id: &spec.id,
        title: &spec.title,
        kind: spec.kind().name(),
        frames: spec.n_frames,
        data: &out.data,
    })?;
    s.push('\n');
    Ok(s)
}

/// Polar plot of the main-plane cuts when the scenario has them, else a
/// wireframe projection of the scene.
pub fn scenario_svg(out: &BuildOutput) -> Result<String> {
    match out.data.cuts() {
        Some(cuts) if !cuts.is_empty() => write_svg_polar(cuts, DEFAULT_SVG_SIZE, &DEFAULT_RINGS),
        _ => write_svg_projection(&out.scene, DEFAULT_SVG_SIZE),
    }
}

pub fn svg_file_name(spec: &ScenarioSpec, out: &BuildOutput) -> String {
    match out.data.cuts() {
        Some(c) if !c.is_empty() => format!("{}_cuts.svg", spec.id),
        _ => format!("{}.svg", spec.id),
    }
}

/// Every document of `formats`, in a fixed order. Frames go to
/// `<id>_frames/frame_000.wrl` …; a scene without tracks yields a single
/// frame, its static pose.
pub fn artifacts(spec: &ScenarioSpec, out: &BuildOutput, formats: &BTreeSet<Format>) -> Result<Vec<Artifact>> {
    let mut docs = Vec::new();
    for f in formats {
        match f {
            Format::Vrml => docs.push(Artifact {
                path: format!("{}.wrl", spec.id).into(),
                contents: write_vrml(&out.scene)?,
            }),
            Format::Svg => docs.push(Artifact {
                path: svg_file_name(spec, out).into(),
                contents: scenario_svg(out)?,
            }),
            Format::Json => docs.push(Artifact {
                path: format!("{}.json", spec.id).into(),
                contents: scenario_json(spec, out)?,
            }),
            Format::Frames => {
                let dir = PathBuf::from(format!("{}_frames", spec.id));
                let frames = if out.scene.tracks.is_empty() {
                    vec![write_vrml(&out.scene)?]
                } else {
                    frame_documents(&out.scene, spec.n_frames)?
                };
                docs.extend(frames.into_iter().enumerate().map(|(k, contents)| Artifact {
                    path: dir.join(frame_file_name(k)),
                    contents,
                }));
            }
        }
    }
    Ok(docs)
}

/// Builds `spec` and writes its documents under `out_dir`.
pub fn build_to_dir(spec: &ScenarioSpec, formats: &BTreeSet<Format>, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let out = build(spec)?;
    let docs = artifacts(spec, &out, formats)?;
    let mut written = Vec::with_capacity(docs.len());
    for d in docs {
        let path = out_dir.join(&d.path);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, d.contents)?;
        written.push(path);
    }
    Ok(written)
}

impl ScenarioSpec {
    /// Replaces the evaluation grid of kinds that have one.
    pub fn with_grid(mut self, n_theta: usize, n_phi: usize) -> Result<Self> {
        match &mut self.params {
            ScenarioParams::TwoDipoleArray(p) => p.grid = [n_theta, n_phi],
            ScenarioParams::ExplorerDefault(p) => p.grid = [n_theta, n_phi],
            ScenarioParams::Characteristics(p) => p.surface_grid = [n_theta, n_phi],
            other => {
                return Err(Error::Config(format!(
                    "invalid parameter `grid`: kind `{}` has no evaluation grid",
                    other.kind().name()
                )))
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn with_frames(mut self, n_frames: usize) -> Result<Self> {
        self.n_frames = n_frames;
        self.validate()?;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::find;

    #[test]
    fn formats_parse() {
        let f = parse_formats("svg, vrml,,svg").unwrap();
        assert_eq!(f.into_iter().collect::<Vec<_>>(), vec![Format::Vrml, Format::Svg]);
        assert!(parse_formats("png").unwrap_err().to_string().contains("png"));
        assert!(parse_formats("").is_err());
    }

    #[test]
    fn grid_override_only_where_meaningful() {
        assert!(find("fig2_left").unwrap().with_grid(10, 10).is_err());
        let s = find("fig9").unwrap().with_grid(10, 20).unwrap();
        let ScenarioParams::ExplorerDefault(p) = &s.params else { panic!() };
        assert_eq!(p.grid, [10, 20]);
        assert!(find("fig9").unwrap().with_grid(1, 20).is_err());
    }
}
