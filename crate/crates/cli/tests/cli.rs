use std::process::Command;

fn backbone() -> Command {
    Command::new(env!("CARGO_BIN_EXE_backbone"))
}

#[test]
fn run_writes_artifacts_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = backbone()
        .args(["run", "--n", "25", "--seed", "2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.starts_with("PASS ")));
    for f in [
        "instance.json",
        "trace.jsonl",
        "backbone.json",
        "report.json",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn generated_instance_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let gen = backbone()
        .args(["generate", "--n", "20", "--seed", "5", "--out"])
        .arg(&inst)
        .output()
        .unwrap();
    assert!(gen.status.success());
    let a = backbone()
        .args(["run", "--json", "--instance"])
        .arg(&inst)
        .output()
        .unwrap();
    let b = backbone()
        .args(["run", "--json", "--n", "20", "--seed", "5"])
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn disconnected_instance_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let json = r#"{"alpha":4.0,"beta":1.0,"noise":1.0,"epsilon":0.5,"power":1.5,"n_labels":8,
        "stations":[{"label":1,"x":0.0,"y":0.0},{"label":2,"x":9.0,"y":0.0}]}"#;
    std::fs::write(&inst, json).unwrap();
    let out = backbone()
        .args(["run", "--instance"])
        .arg(&inst)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("disconnected-instance"));
}

#[test]
fn failing_bound_exits_one() {
    let out = backbone()
        .args(["run", "--n", "25", "--seed", "2", "--degree-bound", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn family_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sel.txt");
    let out = backbone()
        .args([
            "family", "--kind", "selector", "--labels", "16", "--k", "3", "--m", "2", "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(
        text.starts_with("selection-family v1\nkind selector\nk 3 m 2\nlabel_space 16\n"),
        "{text}"
    );
}

#[test]
fn bad_params_exit_two() {
    let out = backbone().args(["run", "--alpha", "1.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
