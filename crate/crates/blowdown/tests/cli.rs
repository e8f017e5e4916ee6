//! End-to-end tests of the command-line binary: pinned outputs, exit
//! codes, JSON determinism, and file-based manifest loading.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blowdown"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn gram_of_named_vectors() {
    let out = run(&["lattice", "gram", "--manifest", "r11-c3", "u1", "u2"]);
    assert_eq!(Some(0), out.status.code(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("[-2, 1]"), "{text}");
    assert!(text.contains("[1, -5]"), "{text}");
    assert!(text.contains("determinant 9"), "{text}");
    assert!(text.contains("inertia (0, 2)"), "{text}");
}

#[test]
fn enumerate_builtin_is_pinned() {
    let out = run(&["enumerate", "--manifest", "r11-c3"]);
    assert_eq!(Some(0), out.status.code(), "stderr: {}", stderr_of(&out));
    let want = "\
manifold r11-c3  chamber 7h - 2e1 - 2e2 - 2e3 - 2e4 - 2e5 - 2e6 - 2e7 - 2e8 - 2e9 - 2e10 - 2e11  (derived)
class -3h + e1 + e2 + e3 + e4 + e5 + e6 + e7 + e8 + e9 + e10 + e11  d 0  value -1
class 3h - e1 - e2 - e3 - e4 - e5 - e6 - e7 - e8 - e9 - e10 - e11  d 0  value 1
candidates examined 2048  on-wall skipped 0
";
    assert_eq!(want, stdout_of(&out));
}

#[test]
fn enumerate_empty_track() {
    let out = run(&["enumerate", "--manifest", "r9-any"]);
    assert_eq!(Some(0), out.status.code(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(!text.contains("class "), "nine blow-ups admit no basic classes: {text}");
    assert!(text.contains("candidates examined 0"), "{text}");
}

#[test]
fn replay_pass_shows_fiber() {
    let out = run(&["replay", "lemma-3.1"]);
    assert_eq!(Some(0), out.status.code(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(
        text.contains("19 moves applied, 9 expectations checked"),
        "{text}"
    );
    assert!(text.contains("handle counts [1, 0, 12, 2, 1]"), "{text}");
    assert!(text.contains("euler 12"), "{text}");
    assert!(
        text.contains("6h - 2e1 - 2e2 - 2e3 - 2e4 - 2e5 - 2e6 - 2e7 - 2e8 - 2e9"),
        "{text}"
    );
}

#[test]
fn replay_failed_expectation_exits_one() {
    let mut file = tempfile::Builder::new()
        .suffix(".kms")
        .tempfile()
        .expect("temp script");
    writeln!(file, "name failing-fixture\ninit cp2\nexpect euler 99").expect("write");
    let path = file.path().to_str().expect("utf-8 path");
    let out = run(&["replay", path]);
    assert_eq!(Some(1), out.status.code(), "stdout: {}", stdout_of(&out));
    let combined = format!("{}{}", stdout_of(&out), stderr_of(&out));
    assert!(combined.contains("FAIL"), "{combined}");
    assert!(combined.contains("Euler characteristic 3, expected 99"), "{combined}");
}

#[test]
fn reduce_normalizes_the_canonical_class() {
    let out = run(&["reduce", "--manifest", "r11-c3", "--class", "K"]);
    assert_eq!(Some(0), out.status.code(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(
        text.contains("result 3h + e1 + e2 + e3 + e4 + e5 + e6 + e7 + e8 + e9 + e10 + e11"),
        "{text}"
    );
}

#[test]
fn verify_section_filter_accepts_prefixes() {
    let out = run(&["verify-paper", "--section", "sw"]);
    assert_eq!(Some(0), out.status.code(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("section sw-chambers"), "{text}");
    assert!(text.contains("1/1 sections passed"), "{text}");

    let out = run(&["verify-paper", "--section", "no-such-section"]);
    assert_eq!(Some(2), out.status.code(), "stdout: {}", stdout_of(&out));
    assert!(stderr_of(&out).contains("no-such-section"), "{}", stderr_of(&out));
}

#[test]
fn verify_paper_runs_every_section() {
    let out = run(&["verify-paper"]);
    assert_eq!(Some(0), out.status.code(), "stdout: {}", stdout_of(&out));
    let text = stdout_of(&out);
    assert!(
        text.contains("summary: 17/17 sections passed, 129 checks, 0 failed"),
        "{text}"
    );
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        vec!["enumerate", "--manifest", "r11-c3", "--json"],
        vec!["enumerate", "--manifest", "r11-c3", "--json", "--workers", "3"],
        vec!["verify-paper", "--json", "--section", "chain-shapes"],
        vec!["replay", "lemma-3.1", "--json"],
        vec!["dump-dataset", "--json"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(Some(0), a.status.code(), "{args:?}: {}", stderr_of(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?} output varies across runs");
        serde_json::from_slice::<serde_json::Value>(&a.stdout)
            .unwrap_or_else(|e| panic!("{args:?} output is not valid JSON: {e}"));
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let one = run(&["enumerate", "--manifest", "r13-h5prime", "--workers", "1"]);
    let four = run(&["enumerate", "--manifest", "r13-h5prime", "--workers", "4"]);
    assert_eq!(Some(0), one.status.code(), "stderr: {}", stderr_of(&one));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn manifest_loads_from_file_path() {
    let builtin = run(&["enumerate", "--manifest", "r11-c3"]);
    let text = {
        let dump = run(&["dump-dataset"]);
        let all = stdout_of(&dump);
        let start = all.find("=== manifest r11-c3 ===").expect("dump lists r11-c3");
        let rest = &all[start..];
        let body_start = rest.find('\n').expect("header line") + 1;
        let body = &rest[body_start..];
        match body.find("=== ") {
            Some(end) => body[..end].to_owned(),
            None => body.to_owned(),
        }
    };
    let mut file = tempfile::Builder::new()
        .suffix(".mf")
        .tempfile()
        .expect("temp manifest");
    file.write_all(text.as_bytes()).expect("write");
    let path = file.path().to_str().expect("utf-8 path");
    let from_file = run(&["enumerate", "--manifest", path]);
    assert_eq!(
        Some(0),
        from_file.status.code(),
        "stderr: {}",
        stderr_of(&from_file)
    );
    // The manifold label differs (path vs builtin name); the table must not.
    let class_lines = |s: &str| -> Vec<String> {
        s.lines()
            .filter(|l| l.starts_with("class ") || l.starts_with("candidates "))
            .map(str::to_owned)
            .collect()
    };
    assert_eq!(
        class_lines(&stdout_of(&builtin)),
        class_lines(&stdout_of(&from_file))
    );
}

#[test]
fn malformed_inputs_exit_two() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["enumerate", "--manifest", "no-such-manifest"],
        vec!["replay", "no-such-script"],
        vec!["reduce", "--manifest", "r11-c3", "--class", "no-such-vector"],
        vec!["lattice", "gram", "--manifest", "r11-c3", "no-such-vector"],
        vec!["enumerate", "--manifest", "r11-c3", "--config", "no-such-config"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(
            Some(2),
            out.status.code(),
            "{args:?} stdout: {} stderr: {}",
            stdout_of(&out),
            stderr_of(&out)
        );
        assert!(!stderr_of(&out).is_empty(), "{args:?} printed no error");
    }
    // Argument parse errors also exit 2 (clap's convention matches ours).
    let out = run(&["enumerate", "--no-such-flag"]);
    assert_eq!(Some(2), out.status.code());
}

#[test]
fn closed_pipe_exits_quietly() {
    let mut child = bin()
        .args(["dump-dataset"])
        .stdout(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    drop(child.stdout.take());
    let status = child.wait().expect("child exits");
    assert_eq!(Some(0), status.code(), "closed pipe must not panic the tool");
}

#[test]
fn dump_dataset_lists_everything() {
    let out = run(&["dump-dataset"]);
    assert_eq!(Some(0), out.status.code());
    let text = stdout_of(&out);
    for name in ["r11-c3", "r13-c5", "r13-h5prime", "r9-any"] {
        assert!(text.contains(&format!("=== manifest {name} ===")), "missing {name}");
    }
    for name in [
        "lemma-3.1",
        "prop-3.2-q3",
        "prop-3.2-q5",
        "prop-3.3",
        "remark-6.1",
    ] {
        assert!(text.contains(&format!("=== script {name} ===")), "missing {name}");
    }
}
