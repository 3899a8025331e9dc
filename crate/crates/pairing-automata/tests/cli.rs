//! Black-box tests of the command-line surface: exit codes, golden text
//! output, JSON shapes, environment overrides, and failure modes.

use std::path::PathBuf;
use std::sync::Mutex;

use pairing_automata::cli::run_from;
use serde_json::Value;
use tempfile::TempDir;

/// Guards tests that read or write `PAIRING_CELL_BUDGET` (the enumerate
/// commands read it, so they must not race the tests that set it).
static ENV_LOCK: Mutex<()> = Mutex::new(());

fn lock_env() -> std::sync::MutexGuard<'static, ()> {
    ENV_LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn run(args: &[&str]) -> (u8, String, String) {
    let mut argv = vec!["pairing-automata".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_from(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write_file(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn figure_file(dir: &TempDir) -> PathBuf {
    write_file(dir, "figure.txt", "3 4\n1 2 3 4\n5 6 2 1\n3 4 5 6\n")
}

fn square_file(dir: &TempDir) -> PathBuf {
    write_file(dir, "square.txt", "2 2\n1 2\n2 1\n")
}

#[test]
fn validate_reports_the_figure_matrix() {
    let dir = TempDir::new().unwrap();
    let input = figure_file(&dir);
    let (code, out, err) = run(&["validate", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(
        out,
        "rows: 3\ncols: 4\nvalues: 6\nvalid: true\ninvertible: true\nbireversible: true\n"
    );

    let (code, out, _) = run(&[
        "validate",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "{\"schema_version\":1,\"rows\":3,\"cols\":4,\"values\":6,\"valid\":true,\
         \"invertible\":true,\"bireversible\":true}\n"
    );
}

#[test]
fn validate_accepts_the_json_matrix_encoding() {
    let dir = TempDir::new().unwrap();
    let input = write_file(
        &dir,
        "figure.json",
        "{\"rows\":3,\"cols\":4,\"entries\":[[1,2,3,4],[5,6,2,1],[3,4,5,6]]}",
    );
    let (code, out, _) = run(&["validate", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("valid: true"));
}

#[test]
fn validate_flags_row_repeats_with_exit_one() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "bad.txt", "2 2\n1 1\n2 2\n");
    let (code, out, _) = run(&["validate", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(out, "valid: false\nerror: RowRepeat(1,1)\n");

    let (code, out, _) = run(&[
        "validate",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code, 1);
    assert_eq!(
        out,
        "{\"schema_version\":1,\"valid\":false,\"error\":\"RowRepeat(1,1)\"}\n"
    );
}

#[test]
fn missing_input_files_exit_two() {
    let (code, out, err) = run(&["validate", "--input", "/nonexistent/matrix.txt"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("cannot read"), "{err}");
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let garbled = write_file(&dir, "garbled.txt", "not a matrix\n");
    let (code, _, err) = run(&["validate", "--input", garbled.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: "), "{err}");

    // Commands other than validate treat an invalid matrix as unusable input.
    let repeat = write_file(&dir, "repeat.txt", "2 2\n1 1\n2 2\n");
    let (code, _, err) = run(&["canon", "--input", repeat.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("invalid matrix: RowRepeat(1,1)"), "{err}");
}

#[test]
fn usage_errors_exit_two_and_help_exits_zero() {
    let (code, _, err) = run(&["validate"]);
    assert_eq!(code, 2);
    assert!(err.contains("--input"), "{err}");

    let (code, _, _) = run(&["no-such-command"]);
    assert_eq!(code, 2);

    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for name in [
        "validate",
        "enumerate",
        "torsion",
        "automaton",
        "helix",
        "canon",
        "certify",
        "export",
    ] {
        assert!(out.contains(name), "help is missing {name}");
    }
}

#[test]
fn torsion_reproduces_the_figure_witness_in_json() {
    let dir = TempDir::new().unwrap();
    let input = figure_file(&dir);
    let (code, out, err) = run(&[
        "torsion",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(
        out.contains("\"word\":[\"b1\",\"B2\"],\"exponent\":2,\"provenance\":\"Theorem4\""),
        "{out}"
    );
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert!(!report["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn torsion_finds_the_exponent_three_cycle() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "tall.txt", "3 2\n1 2\n3 1\n2 3\n");
    let (code, out, _) = run(&["torsion", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(
        out.contains("witness: b2*B1 exponent=3 provenance=LetterCycle nontrivial=guaranteed"),
        "{out}"
    );
    assert!(out.contains("(distinct generators b1, b2)"), "{out}");
}

#[test]
fn torsion_exits_three_when_nothing_is_found() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "silent.txt", "4 4\n1 2 3 4\n2 3 4 5\n5 6 7 8\n6 8 1 7\n");
    let (code, out, _) = run(&["torsion", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(
        out,
        "note: word-cycle search skipped: NotBireversible\nwitnesses: 0\n"
    );

    let (code, out, _) = run(&[
        "torsion",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code, 3);
    assert_eq!(
        out,
        "{\"schema_version\":1,\"witnesses\":[],\
         \"notes\":[\"word-cycle search skipped: NotBireversible\"]}\n"
    );
}

#[test]
fn torsion_rejects_zero_budgets() {
    let dir = TempDir::new().unwrap();
    let input = figure_file(&dir);
    let (code, _, err) = run(&[
        "torsion",
        "--input",
        input.to_str().unwrap(),
        "--max-input-len",
        "0",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("budgets must be positive"), "{err}");
}

#[test]
fn enumerate_prints_the_single_two_by_two_class() {
    let _guard = lock_env();
    let (code, out, _) = run(&["enumerate", "--rows", "2", "--cols", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1 2 / 2 1\n");
}

#[test]
fn enumerate_of_single_rows_is_empty_but_successful() {
    let _guard = lock_env();
    let (code, out, _) = run(&["enumerate", "--rows", "1", "--cols", "2"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
}

#[test]
fn enumerate_rejects_impossible_shapes() {
    let _guard = lock_env();
    let (code, _, err) = run(&["enumerate", "--rows", "0", "--cols", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("EmptyMatrix"), "{err}");

    let (code, _, err) = run(&["enumerate", "--rows", "3", "--cols", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("OddCellCount"), "{err}");
}

#[test]
fn enumerate_lists_the_figure_class_among_invertible_three_by_fours() {
    let _guard = lock_env();
    let (code, out, _) = run(&[
        "enumerate",
        "--rows",
        "3",
        "--cols",
        "4",
        "--invertible-only",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.contains(&"1 2 3 4 / 2 5 4 6 / 5 3 6 1"), "{out}");
}

#[test]
fn enumerate_with_torsion_annotates_every_class() {
    let _guard = lock_env();
    let (code, out, _) = run(&[
        "enumerate",
        "--rows",
        "2",
        "--cols",
        "2",
        "--with-torsion",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "1 2 / 2 1 | torsion: b2*B1^2 LetterCycle\n");

    let (code, out, _) = run(&[
        "enumerate",
        "--rows",
        "2",
        "--cols",
        "2",
        "--with-torsion",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["schema_version"], 1);
    let entry = &report["matrices"][0];
    assert_eq!(entry["matrix"]["entries"][0][0], 1);
    assert_eq!(entry["torsion"]["word"][0], "b2");
    assert_eq!(entry["torsion"]["exponent"], 2);
}

#[test]
fn enumerate_honors_the_cell_budget_override() {
    let _guard = lock_env();
    std::env::set_var("PAIRING_CELL_BUDGET", "spam");
    let (code, _, err) = run(&["enumerate", "--rows", "2", "--cols", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("PAIRING_CELL_BUDGET"), "{err}");

    std::env::set_var("PAIRING_CELL_BUDGET", "0");
    let (code, _, _) = run(&["enumerate", "--rows", "2", "--cols", "2"]);
    assert_eq!(code, 2);

    std::env::set_var("PAIRING_CELL_BUDGET", "8");
    let (code, _, err) = run(&["enumerate", "--rows", "3", "--cols", "4"]);
    assert_eq!(code, 2);
    assert!(err.contains("BudgetExceeded(12,8)"), "{err}");
    let (code, out, _) = run(&["enumerate", "--rows", "2", "--cols", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1 2 / 2 1\n");

    std::env::remove_var("PAIRING_CELL_BUDGET");
    let (code, _, _) = run(&["enumerate", "--rows", "3", "--cols", "4"]);
    assert_eq!(code, 0);
}

#[test]
fn automaton_exports_dot_and_json() {
    let dir = TempDir::new().unwrap();
    let input = figure_file(&dir);
    let (code, out, _) = run(&["automaton", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"), "{out}");
    assert!(out.contains("a1") && out.contains("b1"), "{out}");
    assert!(out.ends_with("}\n"));

    let (code, out, _) = run(&[
        "automaton",
        "--input",
        input.to_str().unwrap(),
        "--kind",
        "A",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["automaton"]["states"][2], "a3");
}

#[test]
fn automaton_b_kind_requires_square_matrices() {
    let dir = TempDir::new().unwrap();
    let figure = figure_file(&dir);
    let (code, _, err) = run(&[
        "automaton",
        "--input",
        figure.to_str().unwrap(),
        "--kind",
        "B",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("NotSquare"), "{err}");

    let square = square_file(&dir);
    let (code, out, _) = run(&[
        "automaton",
        "--input",
        square.to_str().unwrap(),
        "--kind",
        "B",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"), "{out}");
}

#[test]
fn helix_exports_dot() {
    let dir = TempDir::new().unwrap();
    let input = figure_file(&dir);
    let (code, out, _) = run(&["helix", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"), "{out}");
}

#[test]
fn canon_prints_the_canonical_form() {
    let dir = TempDir::new().unwrap();
    let input = figure_file(&dir);
    let (code, out, _) = run(&["canon", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "3 4\n1 2 3 4\n2 5 4 6\n5 3 6 1\n");

    let (code, out, _) = run(&[
        "canon",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["matrix"]["entries"][1][1], 5);
}

#[test]
fn certify_round_trips_torsion_output_and_rejects_corruption() {
    let dir = TempDir::new().unwrap();
    let input = figure_file(&dir);
    let (code, torsion_json, _) = run(&[
        "torsion",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let witness_file = write_file(&dir, "witnesses.json", &torsion_json);

    let (code, out, err) = run(&[
        "certify",
        "--input",
        input.to_str().unwrap(),
        "--witness",
        witness_file.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let total = out.lines().count() - 1;
    assert!(out.contains(&format!("verified: {total}/{total}")), "{out}");
    assert!(out.contains("witness b1*B2^2: verified"), "{out}");

    // Corrupt one certificate step and expect a verification failure.
    let mut report: Value = serde_json::from_str(&torsion_json).unwrap();
    let pos = &mut report["witnesses"][0]["certificate"]["steps"][0]["pos"];
    *pos = Value::from(pos.as_u64().unwrap() + 1);
    let corrupted = write_file(&dir, "corrupted.json", &report.to_string());
    let (code, out, _) = run(&[
        "certify",
        "--input",
        input.to_str().unwrap(),
        "--witness",
        corrupted.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("FAILED"), "{out}");

    // A single bare witness object is also accepted.
    let bare = report["witnesses"][1].to_string();
    let bare_file = write_file(&dir, "bare.json", &bare);
    let (code, out, _) = run(&[
        "certify",
        "--input",
        input.to_str().unwrap(),
        "--witness",
        bare_file.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("verified: 1/1"), "{out}");

    let garbage = write_file(&dir, "garbage.json", "[1, 2, 3]");
    let (code, _, err) = run(&[
        "certify",
        "--input",
        input.to_str().unwrap(),
        "--witness",
        garbage.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot parse witness file"), "{err}");
}

#[test]
fn export_writes_both_presentations() {
    let dir = TempDir::new().unwrap();
    let square = square_file(&dir);
    let (code, out, _) = run(&["export", "--input", square.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "gamma_c 2 2\ngen a1\ngen a2\ngen b1\ngen b2\nrel a1*b1*B2*A2\nrel a1*b2*B1*A2\n"
    );

    let (code, out, _) = run(&[
        "export",
        "--input",
        square.to_str().unwrap(),
        "--group",
        "g",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "g_c 2\ngen a1\ngen a2\nrel a1*a1*A2*A2\nrel a1*a2*A1*A2\n");

    let (code, out, _) = run(&[
        "export",
        "--input",
        square.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["presentation"]["group"], "gamma_c");
    assert_eq!(report["presentation"]["distinct_generators"], true);
    assert_eq!(report["presentation"]["relators"][0], "a1*b1*B2*A2");

    let figure = figure_file(&dir);
    let (code, _, err) = run(&[
        "export",
        "--input",
        figure.to_str().unwrap(),
        "--group",
        "g",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("NotSquare"), "{err}");
}
