#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Run {
    pub fn text(&self) -> String {
        String::from_utf8_lossy(&self.stdout).into_owned()
    }
}

pub fn qline<S: AsRef<str>>(args: &[S]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_qline"))
        .args(args.iter().map(|a| a.as_ref()))
        .output()
        .expect("run qline");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// One invocation per command; `{out}` is replaced by an output path.
pub fn invocations() -> Vec<Vec<String>> {
    let twoparty = "{dir}/relay.2p";
    let cases: Vec<Vec<String>> = vec![
        vec![
            "simulate-line".into(),
            "--in".into(),
            data("relay.line"),
            "--x".into(),
            "0".into(),
            "--y".into(),
            "1".into(),
        ],
        vec![
            "simulate-line".into(),
            "--n".into(),
            "2".into(),
            "--d".into(),
            "3".into(),
            "--r".into(),
            "5".into(),
            "--s".into(),
            "1".into(),
            "--seed".into(),
            "7".into(),
            "--x".into(),
            "10".into(),
            "--y".into(),
            "11".into(),
        ],
        vec!["compile".into(), "--in".into(), data("pad.line")],
        vec![
            "compile".into(),
            "--n".into(),
            "1".into(),
            "--d".into(),
            "2".into(),
            "--r".into(),
            "4".into(),
            "--seed".into(),
            "3".into(),
        ],
        vec![
            "compile".into(),
            "--in".into(),
            data("relay.line"),
            "--out".into(),
            twoparty.into(),
        ],
        vec![
            "simulate-2p".into(),
            "--in".into(),
            twoparty.into(),
            "--x".into(),
            "1".into(),
            "--y".into(),
            "0".into(),
        ],
        vec![
            "audit".into(),
            "--in".into(),
            data("copy_x.line"),
            "--mu".into(),
            "planted".into(),
        ],
        vec![
            "audit".into(),
            "--n".into(),
            "1".into(),
            "--d".into(),
            "2".into(),
            "--r".into(),
            "4".into(),
            "--s".into(),
            "1".into(),
            "--seed".into(),
            "9".into(),
            "--mu".into(),
            "mixture".into(),
        ],
        vec![
            "disjointness".into(),
            "--x".into(),
            "000100".into(),
            "--y".into(),
            "001100".into(),
            "--d".into(),
            "2".into(),
        ],
        vec![
            "query-run".into(),
            "--in".into(),
            data("read_xy.query"),
            "--x".into(),
            "10".into(),
            "--y".into(),
            "11".into(),
            "--d".into(),
            "2".into(),
        ],
        vec!["bounds".into(), "--config".into(), data("bounds.cfg")],
        vec![
            "sweep".into(),
            "--kind".into(),
            "disjointness".into(),
            "--grid".into(),
            "n=4,5 d=1,2".into(),
        ],
        vec![
            "sweep".into(),
            "--kind".into(),
            "pipeline".into(),
            "--grid".into(),
            "n=2^4..2^10 d=1,2,4".into(),
        ],
    ];
    cases
}

/// Run every invocation twice in fresh directories; returns the cases whose
/// stdout, exit code or written files differ.
pub fn nondeterministic_cases() -> Vec<String> {
    let mut bad = Vec::new();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for case in invocations() {
        let mut runs = Vec::new();
        for dir in &dirs {
            let d = dir.path().to_string_lossy().into_owned();
            let mut args: Vec<String> = case.iter().map(|a| a.replace("{dir}", &d)).collect();
            let out: PathBuf = dir.path().join("out.csv");
            let has_out = args.iter().any(|a| a == "--out");
            if !has_out && case[0] != "compile" {
                args.push("--out".into());
                args.push(out.to_string_lossy().into_owned());
            }
            let run = qline(&args);
            let file = std::fs::read(&out).unwrap_or_default();
            let _ = std::fs::remove_file(&out);
            runs.push((run.code, run.stdout, file, run.stderr));
        }
        let (a, b) = (&runs[0], &runs[1]);
        if a.0 != 0 || a.0 != b.0 || a.1 != b.1 || a.2 != b.2 {
            bad.push(format!("{} (exit {}: {})", case.join(" "), a.0, a.3.trim()));
        }
    }
    bad
}
