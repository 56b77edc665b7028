use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_ngramfix");

fn ngramfix(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn worked_index(dir: &Path) -> PathBuf {
    let mut corpus = "Watch episodes of your favorite shows, and more.\n".repeat(7);
    corpus.push_str("shawls shays shank sham haws hawk saws sawn maws hews\n");
    let path = dir.join("corpus.txt");
    fs::write(&path, corpus).unwrap();
    let idx = dir.join("idx");
    let out = ngramfix(&["build-index", "--corpus", s(&path), "--out", s(&idx)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    idx
}

#[test]
fn corrects_keeping_case_and_punctuation() {
    let dir = tempfile::tempdir().unwrap();
    let idx = worked_index(dir.path());
    let input = dir.path().join("in.txt");
    let decisions = dir.path().join("decisions.tsv");
    fs::write(
        &input,
        "Watch episodes of your favorite Shaws, and more.\nwatch\n",
    )
    .unwrap();
    let out = ngramfix(&[
        "correct",
        "--index",
        s(&idx),
        "--in",
        s(&input),
        "--decisions",
        s(&decisions),
    ]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "Watch episodes of your favorite Shows, and more.\nwatch\n"
    );
    let log = fs::read_to_string(&decisions).unwrap();
    let row: Vec<&str> = log.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(&row[..5], ["5", "shaws", "nonword", "shows", "5"]);
}

#[test]
fn clean_text_is_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let idx = worked_index(dir.path());
    let input = dir.path().join("in.txt");
    let output = dir.path().join("out.txt");
    let text = "  Your favorite shows,\n\nand   more!\n";
    fs::write(&input, text).unwrap();
    let out = ngramfix(&[
        "correct",
        "--index",
        s(&idx),
        "--in",
        s(&input),
        "--out",
        s(&output),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&output).unwrap(), text);
}

#[test]
fn inject_then_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let idx = worked_index(dir.path());
    let reference = dir.path().join("ref.txt");
    fs::write(
        &reference,
        "watch episodes of your favorite shows and more\n".repeat(20),
    )
    .unwrap();
    let p = |n: &str| dir.path().join(n);

    let mut runs = Vec::new();
    for name in ["a", "b"] {
        let out = ngramfix(&[
            "inject",
            "--index",
            s(&idx),
            "--in",
            s(&reference),
            "--out",
            s(&p(&format!("{name}.txt"))),
            "--ground-truth",
            s(&p(&format!("{name}.tsv"))),
            "--nonword-rate",
            "0.1",
            "--seed",
            "3",
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        runs.push(fs::read_to_string(p(&format!("{name}.tsv"))).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
    assert!(runs[0].lines().count() > 1);

    let out = ngramfix(&[
        "correct",
        "--index",
        s(&idx),
        "--in",
        s(&p("a.txt")),
        "--out",
        s(&p("fixed.txt")),
    ]);
    assert!(out.status.success());
    let out = ngramfix(&[
        "evaluate",
        "--reference",
        s(&reference),
        "--corrupted",
        s(&p("a.txt")),
        "--corrected",
        s(&p("fixed.txt")),
        "--ground-truth",
        s(&p("a.tsv")),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let tsv = String::from_utf8(out.stdout).unwrap();
    assert!(tsv.starts_with("total_words\t160\n"), "{tsv}");
    assert!(tsv.contains("residual_error_rate\t"));
}

#[test]
fn exit_codes() {
    assert_eq!(ngramfix(&["--help"]).status.code(), Some(0));
    assert_eq!(ngramfix(&["--version"]).status.code(), Some(0));
    assert_eq!(ngramfix(&[]).status.code(), Some(1));
    assert_eq!(
        ngramfix(&["correct", "--in", "x.txt"]).status.code(),
        Some(1)
    );
    assert_eq!(
        ngramfix(&[
            "build-index",
            "--corpus",
            "c",
            "--out",
            "o",
            "--max-order",
            "x"
        ])
        .status
        .code(),
        Some(1)
    );

    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing");
    let out = ngramfix(&["correct", "--index", s(&missing), "--in", "-"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("manifest.tsv"));

    let idx = worked_index(dir.path());
    let out = ngramfix(&["correct", "--index", s(&idx), "--in", "-", "--context", "9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ngramfix(&[
        "build-index",
        "--corpus",
        s(&missing),
        "--out",
        s(&dir.path().join("o")),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unreachable_backend_fails_instead_of_passing_text_through() {
    let out = ngramfix(&["correct", "--backend", "http://127.0.0.1:9", "--in", "-"]);
    assert_eq!(out.status.code(), Some(2));
}
