//! End-to-end tests of the command-line surface, driving `run_with`
//! in-process with captured output streams.

use std::path::{Path, PathBuf};
use std::sync::Mutex;

use scadkit_cli::{run_with, EXIT_INVALID, EXIT_IO, EXIT_OK, EXIT_USAGE, M13_PATH_ENV};

const GOLDEN_SC: &str = include_str!("../../scadkit/tests/data/two_helix_example.sc");

/// Guards tests that read or write the scaffold-path environment variable.
static ENV_LOCK: Mutex<()> = Mutex::new(());

struct CliRun {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> CliRun {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let argv = std::iter::once("scadkit".to_string()).chain(args.iter().map(|s| s.to_string()));
    let code = run_with(argv, &mut stdout, &mut stderr);
    CliRun {
        code,
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn write_golden(dir: &Path) -> PathBuf {
    let path = dir.join("example.sc");
    std::fs::write(&path, GOLDEN_SC).unwrap();
    path
}

/// Parity-respecting design that exports to cadnano cleanly.
fn write_exportable(dir: &Path) -> PathBuf {
    use scadkit::{codec, edit, Design, Grid, Helix, Strand};
    let design = Design::new(Grid::Square).with_helices(vec![
        Helix::new(0, 48).with_grid_position(0, 0),
        Helix::new(1, 48).with_grid_position(0, 1),
    ]);
    let design = edit::add_strand(&design, Strand::from_bound(0, true, 0, 48).scaffold()).unwrap();
    let design = edit::add_strand(&design, Strand::from_bound(0, false, 0, 48)).unwrap();
    let design = edit::add_strand(&design, Strand::from_bound(1, false, 0, 48).scaffold()).unwrap();
    let design = edit::add_strand(&design, Strand::from_bound(1, true, 0, 48)).unwrap();
    let path = dir.join("parity.sc");
    std::fs::write(&path, codec::serialize_design(&design).unwrap()).unwrap();
    path
}

#[test]
fn validate_clean_design_is_silent() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_golden(dir.path());
    let result = run(&["validate", input.to_str().unwrap()]);
    assert_eq!(result.code, EXIT_OK);
    assert!(result.stdout.is_empty());
    assert!(result.stderr.is_empty());
}

#[test]
fn validate_reports_findings_with_paths() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.sc");
    std::fs::write(
        &path,
        r#"{"grid":"square","helices":[{"max_offset":8,"grid_position":[0,0]}],
           "strands":[{"domains":[{"helix":0,"forward":true,"start":0,"end":9}]}]}"#,
    )
    .unwrap();
    let result = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(result.code, EXIT_INVALID);
    assert!(result.stderr.contains("strands[0].domains[0]: "));
}

#[test]
fn validate_strict_fails_on_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("warn.sc");
    std::fs::write(
        &path,
        r#"{"grid":"square","helices":[{"max_offset":16,"grid_position":[0,0]}],
           "strands":[{"sequence":"ACGT????",
                       "domains":[{"helix":0,"forward":true,"start":0,"end":8}]}]}"#,
    )
    .unwrap();
    assert_eq!(run(&["validate", path.to_str().unwrap()]).code, EXIT_OK);
    let strict = run(&["validate", path.to_str().unwrap(), "--strict"]);
    assert_eq!(strict.code, EXIT_INVALID);
    assert!(strict.stderr.contains("warning"));
}

#[test]
fn stats_reports_counts_and_lengths() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_golden(dir.path());
    let result = run(&["stats", input.to_str().unwrap()]);
    assert_eq!(result.code, EXIT_OK);
    assert_eq!(
        result.stdout,
        "helices: 2\nstrands: 3\nscaffold length: 69\nstaples: 2\ntotal bases: 135\n"
    );
}

#[test]
fn convert_golden_to_cadnano_names_blockers() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_golden(dir.path());
    let out = dir.path().join("out.json");
    let result = run(&[
        "convert",
        "--to",
        "cadnano",
        input.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.code, EXIT_INVALID);
    assert!(result.stderr.contains("loopout"), "{}", result.stderr);
    assert!(result.stderr.contains("modification"), "{}", result.stderr);
    assert!(!out.exists(), "no output written on failure");
}

#[test]
fn convert_roundtrip_through_cadnano_validates() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_exportable(dir.path());
    let cadnano = dir.path().join("design.json");
    let back = dir.path().join("back.sc");

    let to_cadnano = run(&[
        "convert",
        "--to",
        "cadnano",
        input.to_str().unwrap(),
        "-o",
        cadnano.to_str().unwrap(),
    ]);
    assert_eq!(to_cadnano.code, EXIT_OK, "{}", to_cadnano.stderr);
    let text = std::fs::read_to_string(&cadnano).unwrap();
    assert!(
        text.contains("\"name\":\"design\""),
        "name from output file stem"
    );

    let to_scadnano = run(&[
        "convert",
        "--to",
        "scadnano",
        cadnano.to_str().unwrap(),
        "-o",
        back.to_str().unwrap(),
    ]);
    assert_eq!(to_scadnano.code, EXIT_OK, "{}", to_scadnano.stderr);
    assert_eq!(run(&["validate", back.to_str().unwrap()]).code, EXIT_OK);
}

#[test]
fn convert_to_stdout_uses_default_name() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_exportable(dir.path());
    let result = run(&["convert", "--to", "cadnano", input.to_str().unwrap()]);
    assert_eq!(result.code, EXIT_OK, "{}", result.stderr);
    assert!(result.stdout.contains("\"name\":\"exported-design\""));
}

#[test]
fn export_seqs_formats() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_golden(dir.path());

    let csv = run(&["export-seqs", input.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(csv.code, EXIT_OK);
    assert_eq!(csv.stdout.lines().count(), 4); // header + 3 strands

    let bulk = run(&[
        "export-seqs",
        input.to_str().unwrap(),
        "--format",
        "idt-bulk",
        "--scale",
        "100nm",
    ]);
    assert_eq!(bulk.code, EXIT_OK);
    assert!(bulk.stdout.contains("/5Biosg/ACGTT"));
    assert!(bulk.stdout.contains(",100nm,STD"));

    let plate = run(&[
        "export-seqs",
        input.to_str().unwrap(),
        "--format",
        "idt-plate",
    ]);
    assert_eq!(plate.code, EXIT_OK);
    assert!(plate.stdout.starts_with("plate,well,name,sequence\n"));
    assert!(plate.stdout.contains("plate_1,A1,"));
    assert!(plate.stdout.contains("plate_1,B1,"));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_golden(dir.path());
    let out = dir.path().join("main.svg");
    let result = run(&[
        "render",
        input.to_str().unwrap(),
        "--view",
        "main",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.code, EXIT_OK);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("class=\"arrowhead\"").count(), 3);

    let side = run(&["render", input.to_str().unwrap(), "--view", "side"]);
    assert_eq!(side.code, EXIT_OK);
    assert_eq!(side.stdout.matches("helix-circle").count(), 2);
}

#[test]
fn assign_seq_explicit_strand() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.sc");
    std::fs::write(
        &path,
        r#"{"grid":"square","helices":[{"max_offset":16,"grid_position":[0,0]}],
           "strands":[{"domains":[{"helix":0,"forward":true,"start":0,"end":8}]},
                      {"domains":[{"helix":0,"forward":false,"start":0,"end":8}]}]}"#,
    )
    .unwrap();
    let result = run(&[
        "assign-seq",
        path.to_str().unwrap(),
        "--strand",
        "0",
        "--seq",
        "AAAACCCC",
    ]);
    assert_eq!(result.code, EXIT_OK, "{}", result.stderr);
    assert!(result.stdout.contains("AAAACCCC"));
    assert!(result.stdout.contains("GGGGTTTT")); // propagated complement
}

#[test]
fn assign_seq_m13_and_path_override() {
    let _guard = ENV_LOCK.lock().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scaffolded.sc");
    std::fs::write(
        &path,
        r#"{"grid":"square","helices":[{"max_offset":32,"grid_position":[0,0]}],
           "strands":[{"is_scaffold":true,
                       "domains":[{"helix":0,"forward":true,"start":0,"end":32}]}]}"#,
    )
    .unwrap();

    std::env::remove_var(M13_PATH_ENV);
    let builtin = run(&["assign-seq", path.to_str().unwrap(), "--m13"]);
    assert_eq!(builtin.code, EXIT_OK, "{}", builtin.stderr);

    let custom = dir.path().join("custom_scaffold.txt");
    std::fs::write(&custom, "ACGT".repeat(16)).unwrap();
    std::env::set_var(M13_PATH_ENV, &custom);
    let overridden = run(&[
        "assign-seq",
        path.to_str().unwrap(),
        "--m13",
        "--rotation",
        "1",
    ]);
    std::env::remove_var(M13_PATH_ENV);
    assert_eq!(overridden.code, EXIT_OK, "{}", overridden.stderr);
    assert!(overridden.stdout.contains(&"CGTA".repeat(8)));
}

#[test]
fn assign_seq_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_golden(dir.path());
    // Neither --m13 nor --strand/--seq.
    let neither = run(&["assign-seq", input.to_str().unwrap()]);
    assert_eq!(neither.code, EXIT_USAGE);
    // --strand without --seq is a clap-level usage error.
    let partial = run(&["assign-seq", input.to_str().unwrap(), "--strand", "0"]);
    assert_eq!(partial.code, EXIT_USAGE);
    // --m13 conflicts with --seq.
    let both = run(&[
        "assign-seq",
        input.to_str().unwrap(),
        "--m13",
        "--strand",
        "0",
        "--seq",
        "ACGT",
    ]);
    assert_eq!(both.code, EXIT_USAGE);
}

#[test]
fn io_and_format_errors_exit_3() {
    let missing = run(&["validate", "/nonexistent/nowhere.sc"]);
    assert_eq!(missing.code, EXIT_IO);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.sc");
    std::fs::write(&path, "{ not json").unwrap();
    let malformed = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(malformed.code, EXIT_IO);
    assert!(malformed.stderr.contains("line"));
}

#[test]
fn unknown_subcommand_exits_2() {
    let result = run(&["frobnicate"]);
    assert_eq!(result.code, EXIT_USAGE);
    assert!(!result.stderr.is_empty());
}

#[test]
fn help_prints_to_stdout_and_exits_0() {
    let result = run(&["--help"]);
    assert_eq!(result.code, EXIT_OK);
    assert!(result.stdout.contains("validate"));
    assert!(result.stderr.is_empty());
}

#[test]
fn inputs_are_never_modified() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_golden(dir.path());
    let before = std::fs::read_to_string(&input).unwrap();
    for args in [
        vec!["validate", input.to_str().unwrap()],
        vec!["stats", input.to_str().unwrap()],
        vec!["export-seqs", input.to_str().unwrap(), "--format", "csv"],
        vec!["render", input.to_str().unwrap(), "--view", "main"],
    ] {
        run(&args);
        assert_eq!(std::fs::read_to_string(&input).unwrap(), before);
    }
}
