use std::process::{Command, Output};

fn flagpar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagpar")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bundled_scenarios_pass() {
    for name in ["example_2_4", "example_2_7.scn", "hermitian_flag"] {
        let o = flagpar(&["run", name]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}

#[test]
fn every_record_line_has_an_anchor() {
    let o = flagpar(&["--emit=record", "stabilizer", "--scenario", "example_2_4", "--level", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().count() > 3);
    for line in out.lines() {
        let fields: Vec<&str> = line.split('\t').collect();
        assert_eq!(fields.len(), 6, "{line}");
        assert!(fields[1].starts_with("anchor=") && fields[1].len() > 7, "{line}");
    }
}

#[test]
fn text_lines_have_anchors() {
    let o = flagpar(&["man", "--form", "su(1,inf)", "--scenario", "hermitian_flag", "--levels", "2..4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let body: Vec<&str> = out.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert!(body.len() > 10);
    assert!(body.iter().all(|l| l.contains("[construct-ma]")));
}

#[test]
fn failing_check_exits_one() {
    let o = flagpar(&["voiculescu", "--coeffs", "0:1,1:1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(flagpar(&["voiculescu", "--coeffs", "0:1"]).status.code(), Some(0));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(flagpar(&["check", "--scenario", "example_2_4"]).status.code(), Some(2));
    assert_eq!(flagpar(&["man", "--levels", "4..2"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("flagpar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.scn");
    std::fs::write(&bad, "(flagpar-scenario 1\n  (name x)\n  (bogus 1))\n").unwrap();
    let o = flagpar(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("3:3"));
}

#[test]
fn subcommands_from_the_manual() {
    let o = flagpar(&["induce", "--form", "sl", "--window", "3", "--degree", "4", "--sigma", "1,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[1, 3, 6, 10, 15]"));
    let o = flagpar(&["psi-b", "--b", "1/2,0;0,1", "--x", "2,1;0,3"]);
    assert!(stdout(&o).contains(": 9/2"), "{}", stdout(&o));
    for args in [&["check", "--taut"][..], &["check", "--solvable", "--scenario", "example_2_7"], &["levi"], &["chevalley", "--level", "2"]] {
        let o = flagpar(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn suite_runs() {
    let o = flagpar(&["suite", "realforms"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(flagpar(&["suite", "nope"]).status.code(), Some(2));
}
