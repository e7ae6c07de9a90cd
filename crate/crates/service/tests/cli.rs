use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use clarisql_service::cli::{parse_args, run, Cli};

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn exec(args: &[&str]) -> String {
    let cli = Cli::try_parse_from(std::iter::once("clarisql").chain(args.iter().copied())).unwrap();
    let mut out = Vec::new();
    run(cli, &mut out).unwrap();
    String::from_utf8(out).unwrap()
}

#[test]
fn synth_reproduces_the_bundled_data() {
    let dir = tempfile::tempdir().unwrap();
    exec(&["synth", "--out", dir.path().to_str().unwrap()]);
    for name in ["tables.jsonl", "wikisql.jsonl", "spider.jsonl"] {
        let want = fs::read(data_dir().join(name)).unwrap();
        let got = fs::read(dir.path().join(name)).unwrap();
        assert!(got == want, "{name} differs");
    }
}

#[test]
fn simulate_writes_reports_that_report_renders() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let tables = data_dir().join("tables.jsonl");
    let tables = tables.to_str().unwrap();
    exec(&["simulate", "--tables", tables, "--detector", "off", "--out", out]);
    exec(&["simulate", "--tables", tables, "--detector", "prob", "--p-star", "0.9", "--out", out]);

    let mut files: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    files.sort();
    assert_eq!(
        files,
        [
            "no-interaction.report.json",
            "no-interaction.rows.csv",
            "no-interaction.transcripts.jsonl",
            "prob-p-0.9.report.json",
            "prob-p-0.9.rows.csv",
            "prob-p-0.9.transcripts.jsonl",
        ]
    );
    let lines = fs::read_to_string(dir.path().join("prob-p-0.9.transcripts.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 240);

    let rendered = exec(&["report", "--in", out]);
    assert!(rendered.contains("prob p*=0.9"), "{rendered}");
    assert!(rendered.contains("no interaction"), "{rendered}");
}

#[test]
fn config_file_fills_unset_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("misp.conf");
    fs::write(&path, "detector.kind = unlimit\nk = 7\ncolour = red\n").unwrap();
    std::env::set_var("MISP_CONFIG", &path);
    let err = parse_args(vec!["clarisql".into(), "simulate".into()]).unwrap_err();
    assert!(err.to_string().contains("colour"), "{err}");

    fs::write(&path, "detector.kind = unlimit\nk = 7\n").unwrap();
    let cli = parse_args(vec!["clarisql".into(), "simulate".into(), "--k".into(), "2".into()]).unwrap();
    std::env::remove_var("MISP_CONFIG");
    let rendered = format!("{cli:?}");
    assert!(rendered.contains("Unlimit"), "{rendered}");
    assert!(rendered.contains("k: 2"), "{rendered}");
}
