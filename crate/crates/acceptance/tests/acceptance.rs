//! One PASS/FAIL line per acceptance criterion; exits non-zero on any FAIL.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use tower::ServiceExt;

use virtlab::coords::{ccs_to_scs, direction, scs_to_ccs, sphere_cone_intersection, unit_triple, SphericalPoint, Vec3};
use virtlab::export::{
    characteristics_json, data_json, frame_documents, read_vrml, write_pattern_json, write_vrml, PolarizationJson,
    VRML_HEADER,
};
use virtlab::farfield::{
    array_farfield, polarization, AntennaArray, DipoleElement, Handedness, HandednessConvention, PolarizationClass,
    PolarizationEllipse,
};
use virtlab::patterns::{
    dipole_characteristics, directivity, input_radiation_resistance, pattern_grid, radiated_intensity, PatternMapping,
    SphericalGrid, DEFAULT_QUADRATURE, DEFAULT_RESISTANCE_PANELS,
};
use virtlab::scenarios::{artifacts, build, catalog, BuildOutput, Format, ScenarioData, ScenarioParams, ScenarioSpec};
use virtlab::scene::{Geometry, TrackValues};
use virtlab::waves::{components_for_gamma, wave_components, TerminatedWire};
use virtlab::Error;
use virtlab_acceptance as oracle;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn close(what: &str, got: f64, want: f64, tol: f64) -> Check {
    ensure!((got - want).abs() <= tol, "{what}: got {got}, want {want} ± {tol}");
    Ok(())
}

fn v3(v: Vec3) -> oracle::V3 {
    [v.x, v.y, v.z]
}

fn deg(x: f64) -> f64 {
    x.to_radians()
}

/// Every catalog entry, built once and shared.
fn built() -> &'static [(ScenarioSpec, BuildOutput)] {
    static BUILT: OnceLock<Vec<(ScenarioSpec, BuildOutput)>> = OnceLock::new();
    BUILT.get_or_init(|| {
        catalog()
            .into_iter()
            .map(|s| {
                let out = build(&s).unwrap_or_else(|e| panic!("{}: {e}", s.id));
                (s, out)
            })
            .collect()
    })
}

// --- polarization -----------------------------------------------------------

fn crossed_params() -> Check {
    let Some((spec, _)) = built().iter().find(|(s, _)| s.id == "fig6") else {
        return Err("fig6 missing from catalog".into());
    };
    let ScenarioParams::CrossedDipoles(p) = &spec.params else {
        return Err("fig6 is not a crossed-dipole scenario".into());
    };
    ensure!(p.phase_deg == 90.0, "fig6 phase is {}°, want 90°", p.phase_deg);
    Ok(())
}

fn crossed_polarization() -> Check {
    crossed_params()?;
    let array = AntennaArray::new(vec![
        DipoleElement::short(Vec3::Z, 0.0).map_err(|e| e.to_string())?,
        DipoleElement::short(Vec3::Y, deg(90.0)).map_err(|e| e.to_string())?,
    ])
    .map_err(|e| e.to_string())?;
    let field = |phi: f64| {
        let r = direction(deg(90.0), deg(phi));
        let e = array_farfield(&array, r);
        let o = oracle::add(
            oracle::short_dipole_field([0.0, 0.0, 1.0], 0.0, v3(r)),
            oracle::short_dipole_field([0.0, 1.0, 0.0], deg(90.0), v3(r)),
        );
        (r, e, o)
    };
    let pol = |phi: f64, conv| -> Result<PolarizationEllipse, String> {
        let (r, e, _) = field(phi);
        polarization(&e, r, conv).map_err(|e| format!("φ={phi}: {e}"))
    };

    // shape: library against the sampled oracle
    let (r0, _, o0) = field(0.0);
    let (r240, _, o240) = field(240.0);
    let (_, _, o270) = field(270.0);
    let p0 = pol(0.0, HandednessConvention::TowardObserver)?;
    let p240 = pol(240.0, HandednessConvention::TowardObserver)?;
    let p270 = pol(270.0, HandednessConvention::TowardObserver)?;
    close("AR(φ=0°)", p0.axial_ratio, 1.0, 1e-9)?;
    close("oracle AR(φ=0°)", oracle::axial_ratio_by_sampling(o0, 20_000), 1.0, 1e-9)?;
    ensure!(p0.classification == PolarizationClass::Circular, "φ=0°: {:?}", p0.classification);
    close("AR(φ=240°)", p240.axial_ratio, 2.0, 1e-6)?;
    close("oracle AR(φ=240°)", oracle::axial_ratio_by_sampling(o240, 20_000), 2.0, 1e-6)?;
    ensure!(p240.classification == PolarizationClass::Elliptical, "φ=240°: {:?}", p240.classification);
    ensure!(
        p270.classification == PolarizationClass::Linear && p270.handedness == Handedness::Linear,
        "φ=270°: {:?} {:?}",
        p270.classification,
        p270.handedness
    );
    ensure!(oracle::axial_ratio_by_sampling(o270, 20_000).is_infinite(), "oracle: φ=270° is not linear");

    // sense flips between φ=0° and φ=240°, under both conventions
    let (h0, h240) = (oracle::rotation_sense(o0, v3(r0)), oracle::rotation_sense(o240, v3(r240)));
    ensure!(h0 * h240 < 0.0, "oracle senses {h0} and {h240} do not differ");
    for conv in [HandednessConvention::TowardObserver, HandednessConvention::TowardSource] {
        let (a, b) = (pol(0.0, conv)?.handedness, pol(240.0, conv)?.handedness);
        ensure!(a != b && a != Handedness::Linear && b != Handedness::Linear, "{conv:?}: {a:?} / {b:?}");
    }

    // labels under the looking-toward-source convention
    let src = HandednessConvention::TowardSource;
    let want = [
        (0.0, Handedness::Cw, PolarizationClass::Circular),
        (240.0, Handedness::Ccw, PolarizationClass::Elliptical),
        (270.0, Handedness::Linear, PolarizationClass::Linear),
    ];
    for (phi, hand, class) in want {
        let p = pol(phi, src)?;
        ensure!(p.handedness == hand && p.classification == class, "φ={phi}°: {:?} {:?}", p.handedness, p.classification);
        // toward the source, positive sense about r̂ reads as CW
        let (r, _, o) = field(phi);
        let h = oracle::rotation_sense(o, v3(r));
        let oracle_hand = if hand == Handedness::Linear {
            Handedness::Linear
        } else if h < 0.0 {
            Handedness::Ccw
        } else {
            Handedness::Cw
        };
        ensure!(oracle_hand == hand, "oracle label at φ={phi}°: {oracle_hand:?}");
    }

    // the scenario's own marks say the same
    let (_, out) = built().iter().find(|(s, _)| s.id == "fig6").expect("checked above");
    let ScenarioData::PolarizationSweep { marks, .. } = &out.data else {
        return Err("fig6 data is not a polarization sweep".into());
    };
    let labels: Vec<(Handedness, PolarizationClass)> = marks
        .iter()
        .map(|m| {
            let p = m.polarization.as_ref().expect("marks are non-null");
            (p.handedness, p.classification)
        })
        .collect();
    let expected: Vec<_> = want.iter().map(|&(_, h, c)| (h, c)).collect();
    ensure!(labels == expected, "fig6 marks: {labels:?}");
    Ok(())
}

// --- dipole constants -------------------------------------------------------

fn dipole_constants() -> Check {
    let single = |e: Result<DipoleElement, Error>| e.map(AntennaArray::single).map_err(|e| e.to_string());
    let d_short = directivity(&single(DipoleElement::short(Vec3::Z, 0.0))?, DEFAULT_QUADRATURE).map_err(|e| e.to_string())?;
    let o_short = oracle::axisymmetric_directivity(|t| t.sin().powi(2), 20_000);
    close("D(short)", d_short, 1.5, 1e-3)?;
    close("oracle D(short)", o_short, 1.5, 1e-3)?;

    let half = dipole_characteristics(0.5).map_err(|e| e.to_string())?;
    let o_half = oracle::axisymmetric_directivity(|t| oracle::dipole_factor(0.5, t).powi(2), 20_000);
    close("D(0.5λ)", half.directivity, 1.641, 0.005)?;
    close("oracle D(0.5λ)", o_half, 1.641, 0.005)?;
    close("D(0.5λ) vs oracle", half.directivity, o_half, 1e-6)?;

    let r_half = half.r_in.ok_or("R_in(0.5λ) missing")?;
    let o_r = oracle::input_resistance(0.5, 20_000);
    close("R_in(0.5λ)", r_half, 73.1, 0.2)?;
    close("oracle R_in(0.5λ)", o_r, 73.1, 0.2)?;
    close("R_in(0.5λ) vs oracle", r_half, o_r, 1e-6)?;
    let direct = input_radiation_resistance(0.5, DEFAULT_RESISTANCE_PANELS).map_err(|e| e.to_string())?;
    ensure!(direct == r_half, "R_in paths disagree: {direct} vs {r_half}");

    match input_radiation_resistance(1.0, DEFAULT_RESISTANCE_PANELS) {
        Err(Error::AntiResonant { .. }) => {}
        other => return Err(format!("R_in(1.0λ): expected anti-resonant, got {other:?}")),
    }
    let full = dipole_characteristics(1.0).map_err(|e| e.to_string())?;
    ensure!(full.anti_resonant && full.r_in.is_none(), "characteristics(1.0λ) not flagged anti-resonant");

    close("first max(0.5λ)", half.theta_max_deg, 90.0, 5e-4)?;
    close("oracle first max(0.5λ)", oracle::first_max_deg(0.5, 90_000), 90.0, 5e-4)?;
    let l15 = dipole_characteristics(1.5).map_err(|e| e.to_string())?;
    close("first max(1.5λ)", l15.theta_max_deg, 42.6, 0.1)?;
    close("oracle first max(1.5λ)", oracle::first_max_deg(1.5, 90_000), 42.6, 0.1)?;
    Ok(())
}

// --- waves ------------------------------------------------------------------

fn wave_identities() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut worst = [0.0f64; 3];
    for _ in 0..100_000 {
        // uniform over the closed unit disk
        let gamma = Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(-PI..=PI));
        let z = rng.gen_range(0.0..=5.0);
        let tau = rng.gen_range(0.0..TAU);
        let w = components_for_gamma(gamma, z, tau);
        worst[0] = worst[0].max((w.p - (w.i + w.r)).abs());
        worst[1] = worst[1].max((w.p - (w.s + w.t)).abs());
        worst[2] = worst[2].max((w.p - oracle::total_wave(gamma, z, tau)).abs());
    }
    ensure!(worst[0] <= 1e-12, "max |p − (i + r)| = {:e}", worst[0]);
    ensure!(worst[1] <= 1e-12, "max |p − (s + t)| = {:e}", worst[1]);
    ensure!(worst[2] <= 1e-12, "max |p − oracle| = {:e}", worst[2]);

    let matched = TerminatedWire::new(50.0, Complex64::new(50.0, 0.0), 3.0).map_err(|e| e.to_string())?;
    let shorted = TerminatedWire::new(50.0, Complex64::new(0.0, 0.0), 3.0).map_err(|e| e.to_string())?;
    ensure!(shorted.gamma() == Complex64::new(-1.0, 0.0), "short-circuit Γ = {}", shorted.gamma());
    for k in 0..=600 {
        let z = 3.0 * k as f64 / 600.0;
        for j in 0..24 {
            let tau = TAU * j as f64 / 24.0;
            let w = wave_components(&matched, z, tau).map_err(|e| e.to_string())?;
            ensure!(w.r == 0.0 && w.s == 0.0, "matched load: r={} s={} at z={z}", w.r, w.s);
        }
    }
    for j in 0..360 {
        let tau = TAU * j as f64 / 360.0;
        let w = wave_components(&shorted, 0.0, tau).map_err(|e| e.to_string())?;
        ensure!(w.p.abs() <= 1e-12, "Γ=−1: p(0, τ={tau}) = {:e}", w.p);
        ensure!(oracle::total_wave(shorted.gamma(), 0.0, tau).abs() <= 1e-12, "oracle: no node at the load");
    }
    Ok(())
}

// --- coordinates ------------------------------------------------------------

fn coordinate_suite() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    for _ in 0..1000 {
        let (theta, phi) = (rng.gen_range(0.0..=PI), rng.gen_range(0.0..TAU));
        let t = unit_triple(theta, phi);
        let (r, th, ph) = (v3(t.e_r), v3(t.e_theta), v3(t.e_phi));
        for (name, a, b, want) in [
            ("e_r·e_r", r, r, 1.0),
            ("e_θ·e_θ", th, th, 1.0),
            ("e_φ·e_φ", ph, ph, 1.0),
            ("e_r·e_θ", r, th, 0.0),
            ("e_r·e_φ", r, ph, 0.0),
            ("e_θ·e_φ", th, ph, 0.0),
        ] {
            close(&format!("{name} at ({theta}, {phi})"), oracle::dot(a, b), want, 1e-12)?;
        }
        let c = oracle::cross(r, th);
        let gap = oracle::norm([c[0] - ph[0], c[1] - ph[1], c[2] - ph[2]]);
        ensure!(gap <= 1e-12, "e_r × e_θ ≠ e_φ at ({theta}, {phi}): {gap:e}");
        let d = oracle::dir(theta, phi);
        close("|e_r − r̂|", oracle::norm([r[0] - d[0], r[1] - d[1], r[2] - d[2]]), 0.0, 1e-12)?;

        let mag = 10f64.powf(rng.gen_range(-6.0..=6.0));
        let v = Vec3::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)) * mag;
        let back = scs_to_ccs(ccs_to_scs(v));
        ensure!((back - v).norm() <= 1e-12 * v.norm(), "ccs→scs→ccs drift {:e} for {v:?}", (back - v).norm());
        let s = SphericalPoint::new(mag, theta, phi);
        let s2 = ccs_to_scs(scs_to_ccs(s));
        ensure!((s2.r - s.r).abs() <= 1e-12 * mag, "scs→ccs→scs radius drift at {s:?}");
        let p1 = v3(scs_to_ccs(s2));
        let p0 = oracle::dir(theta, phi).map(|x| x * mag);
        let d = [p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]];
        ensure!(oracle::norm(d) <= 1e-12 * mag, "scs→ccs→scs moved {s:?}");

        let radius = rng.gen_range(0.1..=5.0);
        for p in sphere_cone_intersection(radius, theta).points {
            close("intersection ρ", p.x.hypot(p.y), radius * theta.sin(), 1e-9)?;
            close("intersection z", p.z, radius * theta.cos(), 1e-9)?;
        }
    }
    let ring = sphere_cone_intersection(1.0, deg(50.0));
    close("ρ(50°)", ring.points[0].x.hypot(ring.points[0].y), 0.766044, 5e-7)?;
    let (_, out) = built().iter().find(|(s, _)| s.id == "fig3_right").ok_or("fig3_right missing")?;
    let ScenarioData::SphereCone { thetas_deg, radii, .. } = &out.data else {
        return Err("fig3_right data is not a sphere-cone sweep".into());
    };
    let k = thetas_deg.iter().position(|&t| t == 50.0).ok_or("no 50° frame in fig3_right")?;
    close("fig3_right radius at 50°", radii[k], 0.766044, 5e-7)?;
    Ok(())
}

// --- fig7 -------------------------------------------------------------------

fn fig7() -> Check {
    let spec = catalog().into_iter().find(|s| s.id == "fig7").ok_or("fig7 missing")?;
    let ScenarioParams::TwoDipoleArray(p) = &spec.params else {
        return Err("fig7 is not a two-dipole array".into());
    };
    let start = Instant::now();
    let out = build(&spec).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(10), "fig7 built in {took:?}");

    let grid = out.data.pattern().ok_or("fig7 has no pattern grid")?;
    ensure!(
        (grid.grid.n_theta, grid.grid.n_phi) == (181, 360),
        "grid is {}×{}",
        grid.grid.n_theta,
        grid.grid.n_phi
    );
    close("normalized max", grid.max(), 1.0, 0.0)?;

    let ScenarioData::Pattern { cuts, .. } = &out.data else {
        return Err("fig7 data is not a pattern".into());
    };
    let planes: Vec<(String, &str)> = cuts
        .iter()
        .map(|c| (serde_json::to_value(c.plane).unwrap().as_str().unwrap().to_string(), c.color.as_str()))
        .collect();
    let want = [("xoy", "#FF0000"), ("yoz", "#00FF00"), ("zox", "#0000FF")];
    ensure!(
        planes.iter().map(|(a, b)| (a.as_str(), *b)).eq(want.iter().copied()),
        "cuts: {planes:?}"
    );

    // grid against an independent array-factor evaluation
    let axis = v3(p.axis.normalized().ok_or("zero axis")?);
    let u = v3(p.spacing_axis.normalized().ok_or("zero spacing axis")?);
    let raw = |r: oracle::V3| {
        let cos_psi = oracle::dot(axis, r).clamp(-1.0, 1.0);
        let f = oracle::dipole_factor(p.length, cos_psi.acos());
        let af: Complex64 = [(-0.5, p.phases_deg[0]), (0.5, p.phases_deg[1])]
            .iter()
            .map(|&(s, ph)| {
                let c = u.map(|x| x * s * p.spacing);
                Complex64::from_polar(1.0, deg(ph) + TAU * oracle::dot(r, c))
            })
            .sum();
        f * f * af.norm_sqr()
    };
    let g = grid.grid;
    let mut expect = Vec::with_capacity(g.len());
    for i in 0..g.n_theta {
        for j in 0..g.n_phi {
            expect.push(raw(oracle::dir(g.theta(i), g.phi(j))));
        }
    }
    let peak = expect.iter().copied().fold(0.0, f64::max);
    let worst = grid
        .values
        .iter()
        .zip(&expect)
        .map(|(a, b)| (a - b / peak).abs())
        .fold(0.0, f64::max);
    ensure!(worst <= 1e-9, "grid deviates from oracle by {worst:e}");

    // rotating the antenna rotates its pattern
    let array = AntennaArray::new(vec![
        DipoleElement::new(
            p.spacing_axis.normalized().unwrap() * (-0.5 * p.spacing),
            p.axis,
            virtlab::farfield::DipoleKind::Sinusoidal { length: p.length },
            1.0,
            deg(p.phases_deg[0]),
        )
        .map_err(|e| e.to_string())?,
        DipoleElement::new(
            p.spacing_axis.normalized().unwrap() * (0.5 * p.spacing),
            p.axis,
            virtlab::farfield::DipoleKind::Sinusoidal { length: p.length },
            1.0,
            deg(p.phases_deg[1]),
        )
        .map_err(|e| e.to_string())?,
    ])
    .map_err(|e| e.to_string())?;
    let scale = (0..g.n_theta)
        .flat_map(|i| (0..g.n_phi).map(move |j| (i, j)))
        .map(|(i, j)| radiated_intensity(&array, g.direction(i, j)))
        .fold(0.0, f64::max);
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    for _ in 0..50 {
        let axis = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let rot = virtlab::coords::Rotation::from_axis_angle(axis.normalized().unwrap_or(Vec3::Z), rng.gen_range(0.0..TAU));
        let turned = array.transformed(|v| rot.apply(v));
        for _ in 0..200 {
            let d = direction(rng.gen_range(0.0..=PI), rng.gen_range(0.0..TAU));
            let a = radiated_intensity(&array, d);
            let b = radiated_intensity(&turned, rot.apply(d));
            ensure!((a - b).abs() <= 1e-9 * scale, "U(d)={a} but U_R(Rd)={b}");
        }
    }
    Ok(())
}

// --- catalog ----------------------------------------------------------------

fn catalog_frames() -> Check {
    let specs = catalog();
    ensure!(specs.len() == 15, "{} scenarios", specs.len());
    let first = built();
    let mut animated = Vec::new();
    for (spec, (s0, out0)) in specs.iter().zip(first) {
        ensure!(spec == s0, "catalog() is not stable for {}", spec.id);
        let out1 = build(spec).map_err(|e| format!("{}: {e}", spec.id))?;
        let a = (write_vrml(&out0.scene), data_json(&out0.data));
        let b = (write_vrml(&out1.scene), data_json(&out1.data));
        ensure!(
            matches!((&a, &b), ((Ok(v0), Ok(j0)), (Ok(v1), Ok(j1))) if v0 == v1 && j0 == j1),
            "{} builds differently twice",
            spec.id
        );
        if spec.n_frames > 1 {
            let docs = frame_documents(&out0.scene, spec.n_frames).map_err(|e| format!("{}: {e}", spec.id))?;
            ensure!(
                docs.iter().all(|d| d.lines().next() == Some(VRML_HEADER)),
                "{}: frame without VRML header",
                spec.id
            );
            animated.push(docs.len());
        }
    }
    ensure!(
        animated == [12, 12, 37, 20, 23, 19, 73, 38, 12, 100],
        "frame counts {animated:?}"
    );
    Ok(())
}

// --- export -----------------------------------------------------------------

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden")
}

fn export_determinism() -> Check {
    let formats: BTreeSet<Format> = [Format::Vrml, Format::Svg, Format::Json].into_iter().collect();
    let mut compared = 0;
    for (spec, out) in built() {
        let docs = artifacts(spec, out, &formats).map_err(|e| format!("{}: {e}", spec.id))?;
        ensure!(docs.len() == 3, "{}: {} artifacts", spec.id, docs.len());
        for doc in &docs {
            let path = golden_dir().join(&doc.path);
            let frozen = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            ensure!(frozen == doc.contents, "{} differs from its golden", doc.path.display());
            compared += 1;
        }
        let wrl = docs
            .iter()
            .find(|d| d.path.extension().is_some_and(|e| e == "wrl"))
            .ok_or(format!("{}: no .wrl", spec.id))?;
        ensure!(wrl.contents.lines().next() == Some(VRML_HEADER), "{}: bad header", spec.id);

        let s = read_vrml(&wrl.contents).map_err(|e| format!("{}: {e}", spec.id))?;
        let scene = &out.scene;
        let count = |k: &str| s.node_counts.get(k).copied().unwrap_or(0);
        let meshes = scene.nodes.iter().filter(|n| matches!(n.geometry, Geometry::Mesh(_))).count();
        let lines = scene.nodes.iter().filter(|n| matches!(n.geometry, Geometry::Lines(_))).count();
        let want = [
            ("IndexedFaceSet", meshes),
            ("IndexedLineSet", lines),
            ("Text", scene.nodes.len() - meshes - lines),
            ("Viewpoint", scene.viewpoints.len()),
            ("TimeSensor", scene.tracks.len()),
        ];
        for (k, n) in want {
            ensure!(count(k) == n, "{}: {k} count {} ≠ {n}", spec.id, count(k));
        }

        let mut defs: BTreeSet<String> = BTreeSet::new();
        let mut routes: BTreeSet<(String, String)> = BTreeSet::new();
        for n in &scene.nodes {
            defs.insert(n.id.clone());
            if matches!(n.geometry, Geometry::Mesh(_) | Geometry::Lines(_)) {
                defs.insert(format!("{}_coord", n.id));
            }
        }
        for (k, t) in scene.tracks.iter().enumerate() {
            defs.insert(format!("T{k}_clock"));
            defs.insert(format!("T{k}_interp"));
            routes.insert((format!("T{k}_clock.fraction_changed"), format!("T{k}_interp.set_fraction")));
            let sink = if t.values.is_morph() {
                format!("{}_coord.set_point", t.target_id)
            } else {
                defs.insert(format!("T{k}"));
                let field = match t.values {
                    TrackValues::Rotation(_) => "set_rotation",
                    _ => "set_translation",
                };
                format!("T{k}.{field}")
            };
            routes.insert((format!("T{k}_interp.value_changed"), sink));
        }
        let got_defs: BTreeSet<String> = s.def_names.iter().cloned().collect();
        ensure!(got_defs == defs, "{}: DEF names {:?} vs {:?}", spec.id, got_defs, defs);
        ensure!(s.def_names.len() == got_defs.len(), "{}: duplicate DEF names", spec.id);
        let got_routes: BTreeSet<(String, String)> = s.routes.iter().cloned().collect();
        ensure!(got_routes == routes, "{}: ROUTEs {:?} vs {:?}", spec.id, got_routes, routes);
        ensure!(s.routes.len() == routes.len(), "{}: duplicate ROUTEs", spec.id);
    }
    ensure!(compared == 45, "{compared} goldens compared");
    Ok(())
}

// --- service ----------------------------------------------------------------

async fn call(app: &Router, req: Request<Body>) -> (StatusCode, String) {
    let res = app.clone().oneshot(req).await.expect("infallible router");
    let status = res.status();
    let bytes = res.into_body().collect().await.expect("body").to_bytes();
    (status, String::from_utf8_lossy(&bytes).into_owned())
}

async fn get(app: &Router, uri: &str) -> (StatusCode, String) {
    call(app, Request::get(uri).body(Body::empty()).unwrap()).await
}

async fn post(app: &Router, uri: &str, body: &Value) -> (StatusCode, String) {
    let req = Request::post(uri)
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    call(app, req).await
}

async fn expect_body(app: &Router, uri: &str, body: Option<&Value>, want: &str) -> Check {
    let (status, got) = match body {
        Some(b) => post(app, uri, b).await,
        None => get(app, uri).await,
    };
    ensure!(status == StatusCode::OK, "{uri}: {status} {got}");
    ensure!(got == want, "{uri}: body differs from the library path");
    Ok(())
}

async fn service() -> Check {
    let app = virtlab_service::router(&virtlab_service::ServiceConfig::default());
    let err = |e: Error| e.to_string();

    let list: Vec<Value> = built()
        .iter()
        .map(|(s, _)| json!({"id": s.id, "title": s.title, "kind": s.kind().name()}))
        .collect();
    expect_body(&app, "/api/v1/scenarios", None, &data_json(&list).map_err(err)?).await?;
    for (spec, out) in built() {
        let base = format!("/api/v1/scenarios/{}", spec.id);
        expect_body(&app, &base, None, &spec.to_json()).await?;
        expect_body(&app, &format!("{base}/scene"), None, &data_json(&out.scene).map_err(err)?).await?;
        expect_body(&app, &format!("{base}/export.wrl"), None, &write_vrml(&out.scene).map_err(err)?).await?;
        for f in [0, spec.n_frames / 2, spec.n_frames - 1] {
            let want = data_json(&out.scene.frame(f, spec.n_frames)).map_err(err)?;
            expect_body(&app, &format!("{base}/scene?frame={f}"), None, &want).await?;
        }
    }

    // POST endpoints against direct library calls
    let pattern_req = json!({
        "elements": [
            {"center": [-0.125, 0, 0], "axis": [0.2, 0.4, 0.894], "length": 2.4},
            {"center": [0.125, 0, 0], "axis": [0.2, 0.4, 0.894], "length": 2.4, "phase_deg": 30}
        ],
        "grid": {"n_theta": 37, "n_phi": 72},
        "mapping": "power"
    });
    let kind = virtlab::farfield::DipoleKind::Sinusoidal { length: 2.4 };
    let axis = Vec3::new(0.2, 0.4, 0.894);
    let pair = AntennaArray::new(vec![
        DipoleElement::new(Vec3::new(-0.125, 0.0, 0.0), axis, kind, 1.0, 0.0).map_err(err)?,
        DipoleElement::new(Vec3::new(0.125, 0.0, 0.0), axis, kind, 1.0, deg(30.0)).map_err(err)?,
    ])
    .map_err(err)?;
    let pg = pattern_grid(&pair, SphericalGrid::new(37, 72).map_err(err)?).map_err(err)?;
    let want_pattern = write_pattern_json(&pg, PatternMapping::Power);
    expect_body(&app, "/api/v1/pattern", Some(&pattern_req), &want_pattern).await?;

    let crossed = AntennaArray::new(vec![
        DipoleElement::short(Vec3::Z, 0.0).map_err(err)?,
        DipoleElement::short(Vec3::Y, deg(90.0)).map_err(err)?,
    ])
    .map_err(err)?;
    for (phi, conv, name) in [
        (0.0, HandednessConvention::TowardSource, "toward_source"),
        (240.0, HandednessConvention::TowardObserver, "toward_observer"),
        (270.0, HandednessConvention::TowardSource, "toward_source"),
    ] {
        let req = json!({
            "elements": [{"axis": [0, 0, 1], "kind": "short"}, {"axis": [0, 1, 0], "kind": "short", "phase_deg": 90}],
            "direction": {"theta_deg": 90, "phi_deg": phi},
            "convention": name
        });
        let r = direction(deg(90.0), deg(phi));
        let e = polarization(&array_farfield(&crossed, r), r, conv).map_err(err)?;
        let want = data_json(&PolarizationJson::from(&e)).map_err(err)?;
        expect_body(&app, "/api/v1/polarization", Some(&req), &want).await?;
    }

    for l in [0.5, 1.5] {
        let c = dipole_characteristics(l).map_err(err)?;
        let want = data_json(&characteristics_json(&c)).map_err(err)?;
        expect_body(&app, "/api/v1/characteristics", Some(&json!({"length": l})), &want).await?;
    }
    let (status, body) = post(&app, "/api/v1/characteristics", &json!({"length": 1.0})).await;
    ensure!(status == StatusCode::UNPROCESSABLE_ENTITY, "length 1.0 gave {status}: {body}");

    let tasks: Vec<_> = (0..32)
        .map(|_| {
            let app = app.clone();
            let req = pattern_req.clone();
            tokio::spawn(async move { post(&app, "/api/v1/pattern", &req).await })
        })
        .collect();
    for t in tasks {
        let (status, body) = t.await.map_err(|e| e.to_string())?;
        ensure!(status == StatusCode::OK, "concurrent /pattern: {status}");
        ensure!(body == want_pattern, "concurrent /pattern bodies differ");
    }
    Ok(())
}

// --- runner -----------------------------------------------------------------

fn run(name: &str, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(()) => {
            println!("PASS  {name}  ({secs:.1} s)");
            true
        }
        Err(why) => {
            println!("FAIL  {name}  ({secs:.1} s): {why}");
            false
        }
    }
}

fn main() -> ExitCode {
    let rt = tokio::runtime::Builder::new_multi_thread()
        .worker_threads(4)
        .enable_all()
        .build()
        .expect("tokio runtime");
    let results = [
        run("crossed-dipole polarization", crossed_polarization),
        run("dipole constants", dipole_constants),
        run("wave identities", wave_identities),
        run("coordinate suite", coordinate_suite),
        run("fig7 two-dipole array", fig7),
        run("catalog and frame counts", catalog_frames),
        run("export determinism", export_determinism),
        run("service conformance", || rt.block_on(service())),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
