use std::fs;
use std::path::Path;

use tamedyn::cli::run;

/// Runs the command line and returns (exit code, stdout, stderr).
fn tamedyn(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("tamedyn").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn space_round_trip_through_ranks() {
    let dir = tempfile::tempdir().unwrap();
    let s = path(dir.path(), "s.txt");
    assert_eq!(tamedyn(&["space", "build", "--rank", "w+1", "--out", &s]).0, 0);
    assert_eq!(tamedyn(&["cb-rank", &s]), (0, "w+1\n".into(), String::new()));
    let (code, beta, _) = tamedyn(&["beta-rank", &s, "--fn", "parity-flip", "--eps", "1/2"]);
    assert_eq!((code, beta.as_str()), (0, "w+1\n"));
    assert_eq!(tamedyn(&["beta-rank", &s]).1, "w+1\n");
}

#[test]
fn larger_ranks_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let s = path(dir.path(), "s.txt");
    for rank in ["3", "w*2+1", "w^2+1"] {
        assert_eq!(tamedyn(&["space", "build", "--rank", rank, "--out", &s]).0, 0);
        assert_eq!(tamedyn(&["cb-rank", &s]).1, format!("{rank}\n"));
        assert_eq!(tamedyn(&["beta-rank", &s]).1, format!("{rank}\n"));
    }
}

#[test]
fn bad_inputs_exit_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(tamedyn(&["space", "build", "--rank", "w"]).0, 2);
    assert_eq!(tamedyn(&["space", "build", "--rank", "x+1"]).0, 2);
    assert_eq!(tamedyn(&["space", "build"]).0, 2);
    assert_eq!(tamedyn(&["cb-rank", &path(dir.path(), "missing.txt")]).0, 2);
    assert_eq!(tamedyn(&["verify", "--suite", "nonsense"]).0, 2);
    assert_eq!(tamedyn(&["frobnicate"]).0, 2);
    assert_eq!(tamedyn(&["beta-rank", "x", "--eps", "0.5"]).0, 2);

    let s = path(dir.path(), "s.txt");
    tamedyn(&["space", "build", "--rank", "5", "--out", &s]);
    let text = fs::read_to_string(&s).unwrap();
    fs::write(&s, text.replace("tamedyn 1", "tamedyn 9")).unwrap();
    let (code, _, err) = tamedyn(&["cb-rank", &s]);
    assert_eq!(code, 2);
    assert!(err.contains("header"), "{err}");
}

#[test]
fn help_is_not_an_error() {
    let (code, out, _) = tamedyn(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn ellis_swap_matches_parity_flip() {
    let dir = tempfile::tempdir().unwrap();
    let s = path(dir.path(), "s.txt");
    tamedyn(&["space", "build", "--rank", "w+1", "--out", &s]);
    let (code, out, err) = tamedyn(&["ellis", &s, "--point", "@0", "--point", "3@1", "--point", "3,0@0"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.ends_with("agree 3/3\n"), "{out}");
    assert!(out.starts_with("cone apex=3 k=1\n"), "{out}");
    assert_eq!(tamedyn(&["ellis", &s]).0, 2);
    assert_eq!(tamedyn(&["ellis", &s, "--point", "3@2"]).0, 2);
}

#[test]
fn export_first_twocolor_stage() {
    let dir = tempfile::tempdir().unwrap();
    let st = path(dir.path(), "x0.txt");
    let (code, _, err) = tamedyn(&["dendrite", "build", "--mode", "twocolor", "--depth", "0", "--out", &st]);
    assert_eq!(code, 0, "{err}");
    let (code, dot, _) = tamedyn(&["export", "--stage", &st]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("graph stage0 {"));
    assert_eq!(dot.lines().filter(|l| l.trim_start().starts_with("v0 -- ")).count(), 4);
    assert!(dot.contains("v0 [label=\"0\" shape=doublecircle color=red]"));
    assert_eq!(dot.matches("doublecircle").count(), 1);

    let d1 = path(dir.path(), "a.dot");
    let d2 = path(dir.path(), "b.dot");
    tamedyn(&["export", "--stage", &st, "--out", &d1]);
    tamedyn(&["export", "--stage", &st, "--out", &d2]);
    assert_eq!(fs::read(&d1).unwrap(), fs::read(&d2).unwrap());
    assert_eq!(fs::read_to_string(&d1).unwrap(), dot);

    assert_eq!(tamedyn(&["export"]).0, 2);
}

#[test]
fn wazewski_stage_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let st = path(dir.path(), "w.txt");
    let args = ["dendrite", "build", "--mode", "wazewski", "--orders", "3,4", "--depth", "2", "--out", &st];
    assert_eq!(tamedyn(&args).0, 0);
    let (_, dot, _) = tamedyn(&["export", "--stage", &st]);
    assert!(dot.contains("doublecircle"));
    assert_eq!(tamedyn(&["dendrite", "build", "--mode", "wazewski", "--orders", "2", "--depth", "1"]).0, 2);
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "witness-bounds", "--seed", "7", "--trials", "6"];
    let (c1, r1, _) = tamedyn(&args);
    let (c2, r2, _) = tamedyn(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(r1, r2);
    assert!(r1.starts_with("tamedyn 1\nsuite witness-bounds\ncheck witness-bounds pass "), "{r1}");
    assert!(r1.ends_with("result pass\n"));
    let (_, other, _) = tamedyn(&["verify", "--suite", "witness-bounds", "--seed", "8", "--trials", "6"]);
    assert_ne!(r1, other);
}

#[test]
fn verify_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let r = path(dir.path(), "r.txt");
    let (code, out, _) = tamedyn(&["verify", "--suite", "ordinal-arithmetic", "--trials", "50", "--out", &r]);
    assert_eq!((code, out.as_str()), (0, ""));
    let text = fs::read_to_string(&r).unwrap();
    assert!(text.contains("check ordinal-arithmetic pass"));
    assert!(!text.contains('.'), "evidence must be exact: {text}");
}
