use std::path::{Path, PathBuf};

use tempfile::TempDir;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("dagcat").chain(args.iter().copied());
    let code = dagcat_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn snake_files() -> (TempDir, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "snake.dg", "type Q\n(id[Q] * cup[Q]) . (cap[Q] * id[Q])\n");
    let b = write(dir.path(), "id_q.dg", "type Q\nid[Q]\n");
    (dir, a, b)
}

#[test]
fn snake_check_passes() {
    let (_dir, a, b) = snake_files();
    let (code, out, _) = run(&["check-eq", &a, &b]);
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = run(&["check-eq", &a, &b, "--model", "qubit"]);
    assert_eq!(code, 0);
}

#[test]
fn unequal_diagrams_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.dg", "type Q\nswap[Q,Q]\n");
    let b = write(dir.path(), "b.dg", "type Q\nid[Q,Q]\n");
    let (code, _, _) = run(&["check-eq", &a, &b, "--model", "qubit"]);
    assert_eq!(code, 1);
}

#[test]
fn ungrammatical_strings_exit_one() {
    let (code, out, _) = run(&["grammar", "check", "n n"]);
    assert_eq!(code, 1);
    assert!(out.contains("does not reduce to s"), "{out}");
    let (code, _, _) = run(&["grammar", "check", "n n^r s n^l n", "--convention", "mirrored"]);
    assert_eq!(code, 0);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.dg", "type Q\n(id[Q] * \n");
    let (code, _, err) = run(&["parse", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains("2:"), "{err}");
    let mistyped = write(dir.path(), "t.dg", "type Q R\nid[Q] . id[R]\n");
    let (code, _, err) = run(&["parse", &mistyped]);
    assert_eq!(code, 2);
    assert!(err.contains("type error"), "{err}");
    assert_eq!(run(&["parse", "/nonexistent/file.dg"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["grammar", "check", "n^q"]).0, 2);
}

#[test]
fn demos_pass_and_the_control_fails() {
    assert_eq!(run(&["demo", "teleportation"]).0, 0);
    assert_eq!(run(&["demo", "teleportation", "--model", "qutrit"]).0, 0);
    assert_eq!(run(&["demo", "swap", "--unitary", "H"]).0, 0);
    assert_eq!(run(&["demo", "swap", "--misrouted"]).0, 1);
    assert_eq!(run(&["demo", "teleportation", "--unitary", "P"]).0, 2);
    assert_eq!(run(&["demo", "bayes"]).0, 0);
}

#[test]
fn negated_sentence_prints_the_swapped_vector() {
    let (code, plain, _) = run(&["sentence", "alice likes bob", "--json"]);
    assert_eq!(code, 0);
    let (code, neg, _) = run(&["sentence", "alice does not like bob", "--json"]);
    assert_eq!(code, 0);
    let v = |s: &str| -> Vec<f64> {
        let j: serde_json::Value = serde_json::from_str(s).unwrap();
        serde_json::from_value(j["meaning"].clone()).unwrap()
    };
    let (p, n) = (v(&plain), v(&neg));
    assert_eq!(n, vec![p[1], p[0]]);
}

#[test]
fn corpus_build_then_similarity() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write(dir.path(), "c.txt", "the cat sat on the mat\nthe dog sat on the log\n");
    let ctx = write(dir.path(), "ctx.txt", "cat\ndog\nsat\nwindow = 2\n");
    let store = dir.path().join("v.json");
    let store = store.to_str().unwrap();
    let (code, _, err) = run(&["corpus", "build", &corpus, "--context", &ctx, "-o", store]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = run(&["similarity", "--vectors", store, "cat", "dog"]);
    assert_eq!(code, 0);
    let s: f64 = out.trim().rsplit(' ').next().unwrap().parse().unwrap();
    assert!((0.0..=1.0).contains(&s), "{out}");
}

#[test]
fn render_emits_dot_and_svg() {
    let (_dir, a, _) = snake_files();
    let (code, dot, _) = run(&["render", &a]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("graph ") && dot.trim_end().ends_with('}'), "{dot}");
    let (code, svg, _) = run(&["render", &a, "-f", "svg"]);
    assert_eq!(code, 0);
    assert!(svg.contains("<svg"));
}

#[test]
fn json_output_is_stable_across_runs() {
    let (_dir, a, b) = snake_files();
    let commands: Vec<Vec<&str>> = vec![
        vec!["parse", &a, "--json"],
        vec!["normalize", &a, "--json"],
        vec!["eval", &a, "--model", "qutrit", "--json"],
        vec!["check-eq", &a, &b, "--model", "qubit", "--json"],
        vec!["grammar", "check", "n n^l s n^r n", "--json"],
        vec!["sentence", "alice does not like bob", "--json"],
        vec!["demo", "teleportation", "--json"],
        vec!["demo", "swap", "--json"],
        vec!["demo", "bayes", "--json"],
    ];
    for args in commands {
        let first = run(&args);
        assert!(serde_json::from_str::<serde_json::Value>(&first.1).is_ok(), "{args:?}");
        for _ in 0..3 {
            assert_eq!(run(&args), first, "{args:?}");
        }
    }
}
