use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn stratlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stratlab")).args(args).output().expect("run stratlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn tangent_text_and_json() {
    let sp = data("threelines.sl");
    let o = stratlab(&["tangent", "--space", &sp, "--point", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dim 2"));
    let o = stratlab(&["--format", "json", "tangent", "--space", &sp, "--point", "2,2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["results"]["dim"], 1);
    assert_eq!(v["metadata"]["tool"], "stratlab");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(stratlab(&["tangent"]).status.code(), Some(2));
    assert_eq!(stratlab(&["nonsense"]).status.code(), Some(2));
    let o = stratlab(&["tangent", "--space", "missing.sl", "--point", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.sl"));
    // point with the wrong number of coordinates
    let o = stratlab(&["tangent", "--space", &data("circle.sl"), "--point", "1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_carry_positions() {
    let dir = std::env::temp_dir().join(format!("stratlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.sl");
    std::fs::write(&bad, "[space]\ndim = 2\nvars = [\"x\", \"y\"]\nequations = [\"x^2 + z\"]\n").unwrap();
    let o = stratlab(&["tangent", "--space", bad.to_str().unwrap(), "--point", "0,0"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.sl:4:"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn classify_verdicts() {
    let o = stratlab(&["--format", "json", "classify", "--space", &data("halfline.sl"), "--field", "d_x"]);
    assert_eq!(json(&o)["results"]["verdict"], "DerivationOnly");
    let o = stratlab(&["--format", "json", "classify", "--space", &data("line.sl"), "--field", "d_x"]);
    assert_eq!(json(&o)["results"]["verdict"], "VectorField");
}

#[test]
fn failed_checks_exit_1() {
    // dx changes sign under x -> -x
    let o = stratlab(&["check-basic", "--space", &data("cone.sl"), "--form", "dx"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = stratlab(&["check-basic", "--space", &data("cone.sl"), "--form", "radial"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn rotation_flow_csv() {
    let o = stratlab(&[
        "--format", "csv", "flow", "--space", &data("circle.sl"), "--field", "-y*d_x + x*d_y", "--from", "1,0", "--t",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x1,x2"));
    let rows: Vec<Vec<f64>> =
        lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert!(rows.len() > 2);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    for r in &rows {
        assert!((r[1] * r[1] + r[2] * r[2] - 1.0).abs() < 1e-8);
    }
    let last = rows.last().unwrap();
    assert!((last[0] - 3.0).abs() < 1e-12 && (last[1] - 3f64.cos()).abs() < 1e-6);
}

#[test]
fn completeness_witness() {
    let o = stratlab(&[
        "--format", "json", "completeness", "--space", &data("shear.sl"), "--family", "X,Y", "--point", "0,0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["results"]["verdict"], "Violated");
    let ws = v["results"]["witnesses"].as_array().unwrap();
    assert!(ws.iter().any(|w| w["symbolic"] == "d_x + t*d_y"));
}

#[test]
fn descend_and_sjamaar() {
    let o = stratlab(&["descend", "--space", &data("cone.sl"), "--form", "area"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = stratlab(&["check-sjamaar", "--space", &data("cone.sl"), "--sigma", "sigma", "--alpha", "area"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn momentum_json() {
    let o = stratlab(&["--format", "json", "momentum", "--space", &data("circleaction.sl")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(json(&o)["results"].is_object());
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = std::env::temp_dir().join(format!("stratlab-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("strata.json");
    let args = ["--format", "json", "--out", out.to_str().unwrap(), "stratify", "--space", &data("signflips.sl")];
    assert_eq!(stratlab(&args).status.code(), Some(0));
    let first = std::fs::read_to_string(&out).unwrap();
    assert_eq!(stratlab(&args).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn gallery_passes() {
    let o = stratlab(&["gallery"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
