use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const FRAME: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/frame.poly");
const S_TETROMINO: &str = "cell 0 0\ncell 1 0\ncell 1 1\ncell 2 1\n";

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polyideal"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn frame(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--input", FRAME, "--json"]);
    let o = run(&all, None);
    (
        o.status.code().unwrap(),
        serde_json::from_slice(&o.stdout).unwrap_or(Value::Null),
    )
}

fn stdin_json(args: &[&str], doc: &str) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = run(&all, Some(doc));
    (
        o.status.code().unwrap(),
        serde_json::from_slice(&o.stdout).unwrap_or(Value::Null),
    )
}

#[test]
fn frame_properties_and_exit_codes() {
    let (code, v) = frame(&["check-simple"]);
    assert_eq!((code, &v["simple"]), (1, &Value::Bool(false)));
    assert_eq!(v["hole_cells"].as_array().unwrap().len(), 1);
    let (code, v) = frame(&["check-convex"]);
    assert_eq!((code, &v["convex"]), (1, &Value::Bool(false)));
    let (code, v) = frame(&["gens"]);
    assert_eq!((code, v["count"].as_u64()), (0, Some(20)));
    let (code, v) = frame(&["prime"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("prime")));
    let (code, v) = frame(&["graph-rep"]);
    assert_eq!((code, v["status"].as_str()), (1, Some("not_representable")));
    assert!(!v["trace"].as_array().unwrap().is_empty());
}

#[test]
fn complement_of_frame_is_the_center() {
    let (code, v) = frame(&["complement"]);
    assert_eq!(code, 0);
    assert_eq!(
        v["cells"],
        serde_json::json!([{"lower_left": {"i": 1, "j": 1}}])
    );
}

#[test]
fn localize_frame_passes() {
    let (code, v) = frame(&["localize"]);
    assert_eq!(code, 0);
    assert!(v["hypothesis_violation"].is_null());
    let checks = v["checks"].as_object().unwrap();
    assert!(
        checks.values().all(|c| c == &Value::Bool(true)),
        "{checks:?}"
    );
}

#[test]
fn s_tetromino_fails_the_quadratic_condition() {
    let (code, v) = stdin_json(&["quadratic-gb"], S_TETROMINO);
    assert_eq!(code, 1);
    assert_eq!(v["condition"], Value::Bool(false));
    assert_eq!(v["reduced_gb_equals_generators"], Value::Bool(false));
    assert_eq!(v["violation"].as_array().unwrap().len(), 2);
}

#[test]
fn degree_cap_and_budget_exit_three() {
    let o = run(&["groebner", "--degree-cap", "2"], Some(S_TETROMINO));
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degree"));
    let o = run(&["prime", "--input", FRAME, "--budget-seconds", "0"], None);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn input_errors_exit_two() {
    for doc in [
        "cell 0 0\ncell 0 0\n",
        "cell 0 0\nbogus\n",
        "cell -1 0\n",
        "# nothing\n",
    ] {
        let o = run(&["gens"], Some(doc));
        assert_eq!(o.status.code(), Some(2), "{doc:?}");
        assert!(o.stderr.starts_with(b"error:"), "{doc:?}");
    }
    let o = run(&["gens", "--input", "/nonexistent/shape.poly"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = run(
        &["graph-rep", "--input", FRAME, "--max-vertices", "1"],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn disconnected_collections_are_accepted() {
    let (code, v) = stdin_json(&["gens"], "cell 0 0\ncell 2 0\n");
    assert_eq!((code, v["count"].as_u64()), (0, Some(2)));
}

#[test]
fn parse_error_reports_the_line() {
    let o = run(&["gens"], Some("cell 0 0\n\ncell 1 x\n"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn enumerate_lists_canonical_ids() {
    let o = run(&["enumerate", "3", "--json"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"].as_u64(), Some(6));
    assert!(v["ids"]
        .as_array()
        .unwrap()
        .contains(&Value::from("3:0.0-1.0-2.0")));
}

#[test]
fn survey_emits_one_row_per_shape() {
    let o = run(&["survey", "3", "--json"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 9);
    assert!(rows
        .iter()
        .all(|r| r["prime"] == Value::Bool(true) && r["graph_rep"] == "representable"));
    let again = run(&["survey", "3", "--json"], None);
    assert_eq!(text.as_bytes(), &again.stdout[..]);
}

#[test]
fn render_marks_the_hole() {
    let o = run(&["render", "--input", FRAME], None);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().nth(3), Some("|#|o|#|"));
}

#[test]
fn text_output_for_gens() {
    let o = run(&["gens"], Some("cell 0 0\n"));
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("x(1,1)*x(0,0) - x(1,0)*x(0,1)"));
}
