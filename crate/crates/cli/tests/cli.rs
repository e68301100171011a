use contour_jets_cli::format;
use contour_jets_cli::plot::{parse_csv, FIT_WINDOW};
use contour_jets_cli::runner::{run_input, Options};
use contour_jets_cli::scenario::{Input, Output, RunReport};
use contour_jets::oracle::{numeric_curvature_oracle, PlaneSamples};
use proptest::prelude::*;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contour-jets"))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run_ok(args: &[&str]) -> Value {
    let out = bin().args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn strip_timing(text: &str) -> String {
    text.lines().filter(|l| !l.contains("elapsed_ms")).collect::<Vec<_>>().join("\n")
}

fn fitted_base_curvature(csv: &str) -> f64 {
    let mut rows = parse_csv(csv).unwrap();
    rows.sort_by(|a, b| a[0].abs().total_cmp(&b[0].abs()));
    rows.truncate(FIT_WINDOW);
    rows.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let samples = PlaneSamples::new(
        rows.iter().map(|r| r[0]).collect(),
        rows.iter().map(|r| r[1]).collect(),
        rows.iter().map(|r| r[2]).collect(),
    )
    .unwrap();
    numeric_curvature_oracle(&samples, 0).unwrap()
}

#[test]
fn recon_surface_2_example() {
    let r = run_ok(&["recon-surface-2", scenario("recon-surface-2.json").to_str().unwrap()]);
    let o = &r["outputs"];
    assert!((o["mean"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert!((o["gaussian"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn conjugate_example() {
    let r = run_ok(&["conjugate", scenario("conjugate.json").to_str().unwrap()]);
    let t = r["outputs"]["theta2"][0].as_f64().unwrap();
    assert!((1.0 / t.tan() - 2f64.sqrt()).abs() < 1e-12);
    for p in r["outputs"]["curvature_products"].as_array().unwrap() {
        assert!((p.as_f64().unwrap() - 2.0).abs() < 1e-10);
    }
}

#[test]
fn zero_torsion_curve_warns() {
    let r = run_ok(&["forward-curve", scenario("forward-curve-planar.json").to_str().unwrap()]);
    let values = r["outputs"]["osculating"]["values"].as_array().unwrap();
    assert_eq!(values.len(), 4);
    assert!(values.iter().all(|v| v.as_f64() == Some(0.0)));
    let warnings = r["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("b3 = 0")));
}

#[test]
fn plot_f1_csv_curvature() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("f1.csv");
    let svg = dir.path().join("f1.svg");
    run_ok(&[
        "plot-contour",
        scenario("plot-f1.json").to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("s,x,y,kappa\n"));
    assert!((fitted_base_curvature(&text) - 3.2).abs() < 1e-4);
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert!(svg.contains("width=\"800\"") && svg.contains("height=\"600\""));
}

#[test]
fn umbilic_contour_in_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("umbilic.json");
    let csv = dir.path().join("u.csv");
    std::fs::write(
        &input,
        r#"{"version":1,"kind":"plot-contour","payload":{"surface":{"a20":0.8,"a02":0.8},"theta":70}}"#,
    )
    .unwrap();
    let r = run_ok(&["plot-contour", input.to_str().unwrap(), "--degrees", "--csv", csv.to_str().unwrap()]);
    assert_eq!(r["outputs"]["theta"].as_f64(), Some(70.0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!((fitted_base_curvature(&text) - 0.8).abs() < 1e-6);
}

#[test]
fn ambiguity_pair_svgs_agree_at_base() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("pair.svg");
    let csv = dir.path().join("pair.csv");
    run_ok(&[
        "ambiguity",
        scenario("ambiguity.json").to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(dir.path().join("pair-1.svg").exists() && dir.path().join("pair-2.svg").exists());
    let base = |name: &str| {
        let rows = parse_csv(&std::fs::read_to_string(dir.path().join(name)).unwrap()).unwrap();
        rows.iter().find(|r| r[0] == 0.0).unwrap()[3]
    };
    let (k1, k2) = (base("pair-1.csv"), base("pair-2.csv"));
    assert!((k1 - k2).abs() < 1e-6, "{k1} vs {k2}");
}

#[test]
fn deterministic_given_seed() {
    let path = scenario("oracle-suite.json");
    let once = bin().args(["run", path.to_str().unwrap(), "--jobs", "4"]).output().unwrap();
    let twice = bin().args(["run", path.to_str().unwrap(), "--jobs", "1"]).output().unwrap();
    assert!(once.status.success() && twice.status.success());
    assert_eq!(
        strip_timing(&String::from_utf8(once.stdout).unwrap()),
        strip_timing(&String::from_utf8(twice.stdout).unwrap())
    );
    let reseeded = bin().args(["run", path.to_str().unwrap(), "--seed", "8"]).output().unwrap();
    let a: Value = serde_json::from_slice(&reseeded.stdout).unwrap();
    assert_eq!(a["seed"].as_u64(), Some(8));
}

#[test]
fn batch_reports_in_input_order() {
    let r = run_ok(&["run", scenario("batch.json").to_str().unwrap(), "--jobs", "3"]);
    let reports = r["reports"].as_array().unwrap();
    let kinds: Vec<&str> = reports.iter().map(|r| r["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["conjugate", "conjugate", "normal-recon", "recon-surface-3"]);
    assert_eq!(reports[0]["outputs"]["result"], "no-solution");
    assert_eq!(reports[1]["outputs"]["result"], "all-directions");
}

#[test]
fn schema_errors_exit_one_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    for (i, text) in [
        r#"{"version":1,"kind":"conjugate","payload":{"a20":1,"a02":2}}"#,
        r#"{"version":1,"kind":"conjugate","payload":{"a20":1,"a02":2,"theta1":0.5,"extra":1}}"#,
        r#"{"version":2,"kind":"conjugate","payload":{"a20":1,"a02":2,"theta1":0.5}}"#,
        r#"{"version":1,"kind":"no-such-kind","payload":{}}"#,
        r#"{"version":1,"kind":"conjugate","payload""#,
        r#"{"version":1,"scenarios":[{"version":1,"kind":"conjugate","payload":{}}]}"#,
    ]
    .iter()
    .enumerate()
    {
        let input = dir.path().join(format!("bad{i}.json"));
        std::fs::write(&input, text).unwrap();
        let out = bin().args(["run", input.to_str().unwrap(), "--out", out_path.to_str().unwrap()]).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{text}");
        assert!(out.stdout.is_empty());
        assert!(!out_path.exists());
        let record: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(record["error"]["exit_status"], 1);
    }
}

#[test]
fn math_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("umbilic.json");
    std::fs::write(
        &input,
        r#"{"version":1,"kind":"recon-surface-2","payload":{"k":[1.3,1.3,1.3],"deltas":[-0.3,-0.5,0.8]}}"#,
    )
    .unwrap();
    let out = bin().args(["run", input.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let record: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(record["error"]["class"], "math");
}

#[test]
fn reports_round_trip_for_every_kind() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut kinds = std::collections::BTreeSet::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let input = Input::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let run = run_input(&input, None, &Options::default()).unwrap();
        let text = format::to_string(&run.output);
        let back: Output = serde_json::from_str(&text).unwrap();
        assert_eq!(back, run.output, "{}", path.display());
        match &run.output {
            Output::Single(r) => kinds.insert(r.kind.name()),
            Output::Batch(b) => {
                b.reports.iter().for_each(|r| {
                    kinds.insert(r.kind.name());
                });
                true
            }
        };
    }
    assert_eq!(kinds.len(), 11, "{kinds:?}");
}

proptest! {
    #[test]
    fn arbitrary_report_round_trip(
        values in prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 1..8),
        ms in 0.0f64..1e6,
    ) {
        let text = format!(
            r#"{{"version":1,"kind":"forward-curve","inputs":{{}},"outputs":{{"x":[{}]}},"residuals":{{"r":{}}},"warnings":["w"],"timing":{{"elapsed_ms":{}}}}}"#,
            values.iter().map(|v| format::float(*v)).collect::<Vec<_>>().join(","),
            format::float(values[0]),
            format::float(ms),
        );
        let report: RunReport = serde_json::from_str(&text).unwrap();
        let again: RunReport = serde_json::from_str(&format::to_string(&report)).unwrap();
        prop_assert_eq!(again, report);
    }
}
