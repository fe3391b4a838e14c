use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn virtlab(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_virtlab"))
        .args(args)
        .current_dir(cwd)
        .env_remove("VIRTLAB_OUT")
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn list_prints_the_catalog() {
    let tmp = tempfile::tempdir().unwrap();
    let o = virtlab(&["list"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 15);
    assert!(text.lines().any(|l| l.starts_with("fig7 ") && l.contains("Two-dipole array")));
}

#[test]
fn show_prints_spec_json() {
    let tmp = tempfile::tempdir().unwrap();
    let o = virtlab(&["show", "fig7"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "two_dipole_array");
    assert_eq!(v["params"]["spacing"], 0.25);
}

#[test]
fn build_fig7_vrml_and_svg() {
    let tmp = tempfile::tempdir().unwrap();
    let o = virtlab(&["build", "fig7", "--out", "./o", "--formats", "vrml,svg"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(listing(&tmp.path().join("o")), ["fig7.wrl", "fig7_cuts.svg"]);
    let wrl = fs::read_to_string(tmp.path().join("o/fig7.wrl")).unwrap();
    assert_eq!(wrl.lines().next(), Some("#VRML V2.0 utf8"));
}

#[test]
fn default_out_and_formats() {
    let tmp = tempfile::tempdir().unwrap();
    let o = virtlab(&["build", "fig2_left"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(listing(&tmp.path().join("out")), ["fig2_left.json", "fig2_left.wrl"]);
}

#[test]
fn virtlab_out_overrides_default_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_virtlab"))
        .args(["build", "fig2_left", "--formats", "vrml"])
        .current_dir(tmp.path())
        .env("VIRTLAB_OUT", "elsewhere")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(tmp.path().join("elsewhere/fig2_left.wrl").is_file());
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn frames_flag_sets_file_count() {
    let tmp = tempfile::tempdir().unwrap();
    let o = virtlab(&["build", "fig4_right", "--formats", "json", "--frames", "5"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let frames = listing(&tmp.path().join("out/fig4_right_frames"));
    assert_eq!(frames, ["frame_000.wrl", "frame_001.wrl", "frame_002.wrl", "frame_003.wrl", "frame_004.wrl"]);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("out/fig4_right.json")).unwrap()).unwrap();
    assert_eq!(json["frames"], 5);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    for dir in ["a", "b"] {
        let o = virtlab(&["build", "fig6", "--out", dir, "--formats", "vrml,svg,json"], tmp.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for name in listing(&tmp.path().join("a")) {
        let a = fs::read(tmp.path().join("a").join(&name)).unwrap();
        let b = fs::read(tmp.path().join("b").join(&name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn config_file_and_grid_override() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(
        tmp.path().join("t.json"),
        r#"{"id":"t","kind":"explorer_default","params":{"length":1.5}}"#,
    )
    .unwrap();
    let o = virtlab(&["build", "t.json", "--formats", "svg", "--grid", "19x36"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(listing(&tmp.path().join("out")), ["t_cuts.svg"]);
}

#[test]
fn usage_errors_exit_1() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 8] = [
        &["build", "nope"],
        &[],
        &["frobnicate"],
        &["build", "fig7", "--formats", "png"],
        &["build", "fig7", "--grid", "big"],
        &["build", "fig2_left", "--grid", "10x10"],
        &["build", "missing.json"],
        &["build", "fig7", "--frames", "0"],
    ];
    for args in cases {
        let o = virtlab(args, tmp.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
        assert!(o.stdout.is_empty(), "{args:?}");
    }
    let o = virtlab(&["build", "nope"], tmp.path());
    assert!(stderr(&o).contains("unknown scenario"));
}

#[test]
fn bad_config_names_the_key() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("c.json"), r#"{"id":"c","kind":"characteristics","params":{"steps":0}}"#).unwrap();
    let o = virtlab(&["build", "c.json"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("params.steps"), "{}", stderr(&o));
}

#[test]
fn sweep_writes_table() {
    let tmp = tempfile::tempdir().unwrap();
    let o = virtlab(&["sweep", "--l-min", "0.1", "--l-max", "3.0", "--steps", "100", "--out", "t/s.json"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows: Vec<serde_json::Value> =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("t/s.json")).unwrap()).unwrap();
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r["directivity"].is_number() && r["cut"].is_object()));

    let o = virtlab(&["sweep", "--l-min", "0.5", "--l-max", "1.0", "--steps", "2"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows[1]["anti_resonant"], true);
}

#[test]
fn sweep_bad_range_is_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = virtlab(&["sweep", "--l-min", "2", "--l-max", "1", "--steps", "10"], tmp.path());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn unwritable_output_is_compute_error() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("blocker"), "").unwrap();
    let o = virtlab(&["build", "fig2_left", "--out", "blocker/x"], tmp.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn help_exits_0() {
    let tmp = tempfile::tempdir().unwrap();
    let o = virtlab(&["--help"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for cmd in ["list", "show", "build", "sweep", "serve"] {
        assert!(text.contains(cmd), "{cmd}");
    }
}
