mod support;

use multideg_cli::files::{InstanceFile, SolutionsFile};
use support::{data, golden, run};

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

#[test]
fn degree_examples() {
    assert_eq!(ok(&["degree", "--blocks", "4", "--obj", "2", "--con", "4", "--con", "4"]), "544\n");
    assert_eq!(ok(&["degree", "--blocks", "2", "--obj", "2"]), "1\n");
    assert_eq!(
        ok(&["degree", "--blocks", "2,2", "--obj", "1,1", "--con", "2,2", "--con", "2,2", "--verbose"]),
        golden("degree_bilinear_verbose.txt")
    );
    let json = ok(&["degree", "--blocks", "2,2", "--obj", "1,1", "--con", "2,2", "--con", "2,2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["report"]["count"], "208");
    assert_eq!(v["report"]["signed"], "208");
}

#[test]
fn degree_errors_exit_2() {
    let (code, _, err) = run(&["degree", "--blocks", "1", "--obj", "2", "--con", "2", "--con", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("error"), "{err}");
    let (code, _, _) = run(&["degree", "--blocks", "2", "--obj", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["degree", "--blocks", "2", "--obj", "1,1"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["degree", "--blocks", "2"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn table_examples() {
    let table = ok(&["table", "--blocks", "2,2", "--obj", "1,1", "--total", "4", "--total", "4"]);
    assert_eq!(table, golden("table_bilinear.txt"));
    assert_eq!(ok(&["table", "--blocks", "1,1", "--obj", "1,1", "--total", "2"]), "constraints\tdegree\n(1,1)\t2\n");
    assert_eq!(ok(&["table", "--blocks", "2", "--obj", "3"]), "constraints\tdegree\nnone\t4\n");
    let (code, _, _) = run(&["table", "--blocks", "2,2", "--obj", "1,1", "--total", "1"]);
    assert_eq!(code, 2);
    let single = ok(&["table", "--blocks", "2,2", "--obj", "1,1", "--total", "4", "--total", "4", "--threads", "1"]);
    assert_eq!(single, table);
}

#[test]
fn emit_examples() {
    let hyperbola = data("hyperbola.json");
    let lagrangian = ok(&["emit", "--instance", &hyperbola]);
    assert_eq!(lagrangian, golden("emit_hyperbola_lagrangian.txt"));
    assert_eq!(lagrangian.lines().count(), 3);
    let minors = ok(&["emit", "--instance", &hyperbola, "--variant", "minors"]);
    assert_eq!(minors, golden("emit_hyperbola_minors.txt"));
    assert_eq!(minors.lines().count(), 2);
    assert_eq!(
        ok(&["emit", "--instance", &hyperbola, "--variant", "homogenized"]),
        golden("emit_hyperbola_homogenized.txt")
    );
    let bilinear = ok(&["emit", "--instance", &data("bilinear_biquadratic.json")]);
    assert_eq!(bilinear, golden("emit_bilinear_lagrangian.txt"));
    assert_eq!(bilinear.lines().count(), 6);
    let json = ok(&["emit", "--instance", &data("bilinear_biquadratic.json"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["unknowns"].as_array().unwrap().len(), 6);
    assert_eq!(v["unknowns"][5], "l_2");
}

#[test]
fn emit_to_file() {
    let dir = std::env::temp_dir().join(format!("multideg-emit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("system.txt");
    let out = ok(&["emit", "--instance", &data("hyperbola.json"), "--out", path.to_str().unwrap()]);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden("emit_hyperbola_lagrangian.txt"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn emit_errors() {
    let dir = std::env::temp_dir().join(format!("multideg-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let broken = dir.join("broken.json");
    std::fs::write(&broken, "{\n  \"blocks\": [2],\n  \"objective\": [\n    {\"coef\": \"1\" \"exp\": [2, 0]}\n  ]\n}\n").unwrap();
    let (code, _, err) = run(&["emit", "--instance", broken.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 4") && err.contains("column"), "{err}");

    let unconstrained = dir.join("free.json");
    std::fs::write(&unconstrained, r#"{"blocks": [1], "objective": [{"coef": "1", "exp": [2]}]}"#).unwrap();
    let (code, _, err) = run(&["emit", "--instance", unconstrained.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("constraint"), "{err}");

    let (code, _, _) = run(&["emit", "--instance", "/nonexistent/instance.json"]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_examples() {
    assert_eq!(ok(&["verify", "--blocks", "1,1", "--obj", "1,1", "--con", "1,1"]), golden("verify_bilinear_pair.txt"));
    let out = ok(&["verify", "--blocks", "2", "--obj", "2", "--con", "2", "--seeds", "3"]);
    assert_eq!(out.matches("formula=4 oracle=4 MATCH").count(), 3);
    let (code, out, _) = run(&["verify", "--blocks", "1,1", "--obj", "1,1", "--con", "1,1", "--formula-override", "3"]);
    assert_eq!(code, 1);
    assert_eq!(out.matches("formula=3 oracle=2 MISMATCH").count(), 3);
    let (code, _, _) = run(&["verify", "--blocks", "1,1", "--obj", "1,1", "--con", "1,1", "--prime", "91"]);
    assert_eq!(code, 2);
    let json = ok(&["verify", "--blocks", "2,1", "--obj", "1,1", "--con", "2,1", "--json", "--seeds", "1"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["results"][0]["oracle"], 10);
    assert_eq!(v["all_match"], true);
}

fn hyperbola_solutions(dir: &std::path::Path) -> String {
    let path = dir.join("hyperbola_solutions.json");
    std::fs::write(
        &path,
        r#"{"points": [
  [{"re": 1, "im": 0}, {"re": 0, "im": 0}, {"re": -1, "im": 0}],
  [{"re": -1, "im": 0}, {"re": 0, "im": 0}, {"re": -1, "im": 0}],
  [{"re": 0, "im": 0}, {"re": 0, "im": 1}, {"re": 1, "im": 0}],
  [{"re": 0, "im": 0}, {"re": 0, "im": -1}, {"re": 1, "im": 0}]
]}"#,
    )
    .unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn certify_hyperbola() {
    let dir = std::env::temp_dir().join(format!("multideg-cert-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let sols = hyperbola_solutions(&dir);
    let out = ok(&["certify", "--instance", &data("hyperbola.json"), "--solutions", &sols]);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "4 distinct / 4 expected - COMPLETE; 2 real");
    let min = lines.next().unwrap();
    assert!(min.starts_with("min f_0 in [0.99999") && min.ends_with("at point 0 ~ (1.000000, 0.000000)"), "{min}");

    let json = ok(&["certify", "--instance", &data("hyperbola.json"), "--solutions", &sols, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["distinct_certified"], 4);
    assert_eq!(v["real_certified"], 2);
    assert_eq!(v["complete"], true);
    let lo = v["minimum"]["value"]["lo"].as_f64().unwrap();
    let hi = v["minimum"]["value"]["hi"].as_f64().unwrap();
    assert!(lo <= 1.0 && 1.0 <= hi);

    let verbose = ok(&["certify", "--instance", &data("hyperbola.json"), "--solutions", &sols, "-v"]);
    assert!(verbose.starts_with("point 0: certified real"), "{verbose}");
    assert!(verbose.contains("point 2: certified non-real"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn certify_bilinear_complete_and_truncated() {
    let inst = data("bilinear_biquadratic.json");
    let sols = data("bilinear_biquadratic_solutions.json");
    assert_eq!(ok(&["certify", "--instance", &inst, "--solutions", &sols]), golden("certify_bilinear.txt"));

    let dir = std::env::temp_dir().join(format!("multideg-trunc-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut file = SolutionsFile::read(&sols).unwrap();
    file.points.truncate(200);
    let truncated = dir.join("truncated.json");
    std::fs::write(&truncated, serde_json::to_string(&file).unwrap()).unwrap();
    let out = ok(&["certify", "--instance", &inst, "--solutions", truncated.to_str().unwrap()]);
    assert!(out.starts_with("200 distinct / 208 expected - INCOMPLETE;"), "{out}");

    let mut dup = SolutionsFile::read(&sols).unwrap();
    dup.points.truncate(3);
    dup.points.push(dup.points[0].clone());
    let with_dup = dir.join("dup.json");
    std::fs::write(&with_dup, serde_json::to_string(&dup).unwrap()).unwrap();
    let (code, out, err) = run(&["certify", "--instance", &inst, "--solutions", with_dup.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("3 distinct / 208 expected - INCOMPLETE;"), "{out}");
    assert!(err.contains("warning: point 3 overlaps"), "{err}");

    let short = dir.join("short.json");
    std::fs::write(&short, r#"{"points": [[{"re": 1, "im": 0}]]}"#).unwrap();
    let (code, _, err) = run(&["certify", "--instance", &inst, "--solutions", short.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("coordinates"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn certify_without_real_points() {
    let dir = std::env::temp_dir().join(format!("multideg-noreal-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("complex_only.json");
    std::fs::write(
        &path,
        r#"{"points": [[{"re": 0, "im": 0}, {"re": 0, "im": 1}, {"re": 1, "im": 0}]]}"#,
    )
    .unwrap();
    let out = ok(&["certify", "--instance", &data("hyperbola.json"), "--solutions", path.to_str().unwrap()]);
    assert_eq!(out, "1 distinct / 4 expected - INCOMPLETE; 0 real\nmin f_0: none (no certified real point)\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn data_files_are_canonical() {
    for name in ["hyperbola.json", "bilinear_biquadratic.json"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let parsed = InstanceFile::parse(&text).unwrap();
        assert_eq!(parsed.to_canonical_string(), text, "{name}");
        let canonical = parsed.canonicalize().unwrap();
        assert_eq!(canonical, parsed, "{name}");
        assert_eq!(InstanceFile::parse(&canonical.to_canonical_string()).unwrap(), canonical);
    }
    let bilinear = InstanceFile::read(&data("bilinear_biquadratic.json")).unwrap();
    let notes: Vec<_> = bilinear.constraints.iter().flatten().filter(|t| t.note.is_some()).collect();
    assert_eq!(notes.len(), 2);
}

#[test]
fn outputs_are_deterministic() {
    let args = ["table", "--blocks", "2,1", "--obj", "1,1", "--total", "3", "--total", "3", "--json"];
    assert_eq!(ok(&args), ok(&args));
    let sols = data("bilinear_biquadratic_solutions.json");
    let cert = ["certify", "--instance", &data("bilinear_biquadratic.json"), "--solutions", &sols, "--json"];
    let a = ok(&cert);
    let b = ok(&[&cert[..], &["--threads", "2"]].concat());
    assert_eq!(a, b);
}
