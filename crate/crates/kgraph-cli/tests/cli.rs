//! End-to-end tests that drive the compiled `kg` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn kg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Writes a demo to a temp file and returns its path.
fn demo_file(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(format!("{}.kg", name));
    let out = kg(&["demo", name, "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "demo export failed: {}", stdout(&out));
    path
}

#[test]
fn validate_accepts_exported_demo() {
    let dir = tempfile::tempdir().unwrap();
    let file = demo_file(dir.path(), "example42");
    let out = kg(&["validate", file.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("CHECK endpoint-validity PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn validate_flags_semantic_breakage_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.kg");
    std::fs::write(
        &path,
        "kgraph k=2\nvertex v\nedge a color=1 from=v to=v\nedge b color=2 from=v to=v\n",
    )
    .unwrap();
    let out = kg(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn unparseable_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("garbage.kg");
    std::fs::write(&path, "this is not a graph\n").unwrap();
    let out = kg(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_file_and_unknown_flag_exit_2() {
    let out = kg(&["validate", "/no/such/file.kg"]);
    assert_eq!(code(&out), 2);
    let out = kg(&["--frobnicate"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn window_rank_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = demo_file(dir.path(), "example42");
    let out = kg(&["verify", file.to_str().unwrap(), "--window", "1,2,3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn demo_square_reports_grid_window_and_dimension() {
    let out = kg(&["demo", "example42", "--window", "2,2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("window (2,2): 16 vertices"));
    assert!(text.contains("CHECK window-is-grid PASS"));
    assert!(text.contains("ck dimension 16 blocks [4]"));
}

#[test]
fn demo_two_sheets_reports_disjoint_sheets_and_blocks() {
    let out = kg(&["demo", "example43"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("window (2,2): 23 vertices"));
    assert!(text.contains("CHECK sheets-meet-only-at-origin PASS"));
    assert!(text.contains("ck dimension 8 blocks [2, 2]"));
}

#[test]
fn demo_output_is_byte_deterministic() {
    let a = kg(&["demo", "example43", "--window", "2,2"]);
    let b = kg(&["demo", "example43", "--window", "2,2"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&a), code(&b));
}

#[test]
fn verify_passes_on_grid_demo() {
    let dir = tempfile::tempdir().unwrap();
    let file = demo_file(dir.path(), "omega22");
    let out = kg(&[
        "verify",
        file.to_str().unwrap(),
        "--window",
        "2,2",
        "--samples",
        "50",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("CHECK associativity PASS"));
    assert!(text.contains("CHECK factorization PASS"));
    assert!(text.contains("CHECK lambda-min-preserved PASS"));
}

#[test]
fn ck_prefixes_relation_lines_and_dumps_csv() {
    let dir = tempfile::tempdir().unwrap();
    let file = demo_file(dir.path(), "example42");
    let csv = dir.path().join("dump.csv");
    let out = kg(&[
        "ck",
        file.to_str().unwrap(),
        "--bound",
        "1,1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("CK-CHECK vertex-projections PASS"));
    assert!(text.contains("CK-CHECK adjoint-product PASS"));
    assert!(text.contains("dimension: 16 blocks: [4]"));
    assert!(!text.contains("\nCHECK "), "plain CHECK lines leaked: {}", text);
    let dump = std::fs::read_to_string(&csv).unwrap();
    assert!(dump.contains("# basis (4 elements)"));
    assert!(dump.lines().any(|l| l == "0,0,0,0" || l.starts_with("1,")));
}

#[test]
fn ck_rejects_cyclic_input_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let file = demo_file(dir.path(), "loop");
    let out = kg(&["ck", file.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("CK-CHECK build FAIL"));
}

#[test]
fn isocheck_window_matches_full_grid() {
    let dir = tempfile::tempdir().unwrap();
    let square = demo_file(dir.path(), "example42");
    let grid = dir.path().join("grid.kg");
    let out = kg(&[
        "demo",
        "omega",
        "--shape",
        "3,3",
        "--out",
        grid.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = kg(&[
        "isocheck",
        square.to_str().unwrap(),
        grid.to_str().unwrap(),
        "--window",
        "2,2",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("CHECK isomorphic PASS"));
}

#[test]
fn isocheck_rejects_different_skeletons() {
    let dir = tempfile::tempdir().unwrap();
    let a = demo_file(dir.path(), "example42");
    let b = demo_file(dir.path(), "example43");
    let out = kg(&["isocheck", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("CHECK isomorphic FAIL"));
}

#[test]
fn addheads_writes_a_valid_chained_graph() {
    let dir = tempfile::tempdir().unwrap();
    let file = demo_file(dir.path(), "example41a");
    let chained = dir.path().join("chained.kg");
    let out = kg(&[
        "addheads",
        file.to_str().unwrap(),
        "--bound",
        "4",
        "--out",
        chained.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("CHECK head-vertex-bijection PASS"));
    let out = kg(&["validate", chained.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn addheads_rejects_higher_rank_input() {
    let dir = tempfile::tempdir().unwrap();
    let file = demo_file(dir.path(), "example42");
    let out = kg(&["addheads", file.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("CHECK head-chains FAIL"));
}

#[test]
fn export_dot_styles_first_two_colors() {
    let dir = tempfile::tempdir().unwrap();
    let file = demo_file(dir.path(), "example42");
    let out = kg(&["export-dot", file.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("digraph"));
    assert!(text.contains("style=solid"));
    assert!(text.contains("style=dashed"));
}

#[test]
fn export_dot_window_marks_original_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let file = demo_file(dir.path(), "example43");
    let out = kg(&[
        "export-dot",
        file.to_str().unwrap(),
        "--window",
        "1,1",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("peripheries=2"));
    assert!(text.contains("peripheries=1"));
}

#[test]
fn desingularize_export_declares_formal_vertices_and_revalidates() {
    let dir = tempfile::tempdir().unwrap();
    let file = demo_file(dir.path(), "example43");
    let window = dir.path().join("window.kg");
    let out = kg(&[
        "desingularize",
        file.to_str().unwrap(),
        "--window",
        "2,2",
        "--out",
        window.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = std::fs::read_to_string(&window).unwrap();
    assert!(text.contains("extvertex New v1 1 0"));
    assert!(text.contains("from=v1__1_0"));
    let out = kg(&["validate", window.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "window export fails validation: {}", stdout(&out));
}

#[test]
fn analyze_reports_sources_and_flat_sets() {
    let dir = tempfile::tempdir().unwrap();
    let file = demo_file(dir.path(), "example42");
    let out = kg(&["analyze", file.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("acyclic: true"));
    assert!(text.contains("sources: v0 v1 v2 v3"));
    assert!(text.contains("boundary-paths: 4"));
    assert!(text.contains("flat v3: {} {1} {2} {1,2}"));
}
