use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.display().to_string()
}

fn banlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_banlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = banlab(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn attractors_of_example_network() {
    let e1 = data("e1.ban");
    let text = stdout(&["attractors", "--net", &e1, "--graph", "eff-gtg"]);
    assert!(text.contains("stable: {(1,1,0), (1,0,1)}"), "{text}");
    assert!(text.contains("oscillations: none"));
}

#[test]
fn count_bs_line() {
    assert_eq!(stdout(&["count-bs", "4"]), "bs_4 = 75, classes = 2*bs_3 = 26\n");
    assert_eq!(stdout(&["count-bs", "1"]), "bs_1 = 1, classes = 1\n");
}

#[test]
fn infer_from_observation_file() {
    let text = stdout(&["infer", "--obs", &data("ex10.obs"), "--mode", "elementary"]);
    assert!(text.contains("f0' = x0\nf1' = 1\n"), "{text}");
}

#[test]
fn exit_codes() {
    let conflict = banlab(&["infer", "--obs", &data("conflict.obs")]);
    assert_eq!(conflict.status.code(), Some(1));

    let missing = banlab(&["gtg", "--net", &data("does-not-exist.ban")]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("cannot read"));

    let bad_flag = banlab(&["gtg", "--frobnicate"]);
    assert_eq!(bad_flag.status.code(), Some(2));

    let bad_schedule = banlab(&["tdelta", "--net", &data("e1.ban"), "--schedule", "{0} {7}"]);
    assert_eq!(bad_schedule.status.code(), Some(2));

    let not_elementary = banlab(&[
        "infer",
        "--obs",
        &data("impossible.obs"),
        "--net",
        &data("e1.ban"),
    ]);
    assert_eq!(not_elementary.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&not_elementary.stdout).contains("not elementary"));
}

#[test]
fn every_subcommand_has_json() {
    let e1 = data("e1.ban");
    let ex9 = data("ex9.ban");
    let obs = data("ex10.obs");
    let cases: Vec<Vec<&str>> = vec![
        vec!["validate", "--net", &e1],
        vec!["igraph", "--net", &e1],
        vec!["gtg", "--net", &e1],
        vec!["atg", "--net", &e1, "--effective"],
        vec!["tdelta", "--net", &e1, "--schedule", "{1} {0,2}"],
        vec!["attractors", "--net", &e1],
        vec!["markov", "--net", &e1, "--alpha", "0.5"],
        vec!["infer", "--obs", &obs],
        vec!["schedule", "--schedule", "{1} {0,2}", "--net", &e1],
        vec!["delays", "--net", &ex9],
        vec!["delays", "--net", &ex9, "--simulate", "00", "--genes", "11"],
        vec!["count-bs", "5"],
    ];
    for mut args in cases {
        args.extend(["--format", "json"]);
        let text = stdout(&args);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert_eq!(v["schema"], 1, "{args:?}");
    }
}

#[test]
fn dot_marks_stable_configurations() {
    let dot = stdout(&["gtg", "--net", &data("e1.ban"), "--effective", "--format", "dot"]);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("doublecircle"));
    assert!(dot.contains("dashed"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let e1 = data("e1.ban");
    for args in [
        vec!["gtg", "--net", e1.as_str(), "--format", "json"],
        vec!["markov", "--net", e1.as_str(), "--alpha", "0.3"],
        vec!["delays", "--net", &data("ex9.ban"), "--extended"],
    ] {
        assert_eq!(stdout(&args), stdout(&args));
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("banlab-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("atg.dot");
    let p = path.display().to_string();
    let printed = stdout(&["atg", "--net", &data("e1.ban"), "--format", "dot", "--out", &p]);
    assert!(printed.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("digraph"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn delay_run_follows_fastest_transition() {
    let text = stdout(&["delays", "--net", &data("ex9.ban"), "--run", "00"]);
    assert_eq!(text, "00 -d↑0-> 10 (stable)\n");
}
