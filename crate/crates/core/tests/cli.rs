use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fpspectra"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .env_remove("SPECTRA_WORKERS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn spectrum_counts_and_json() {
    let o = run(&[
        "spectrum", "--p", "5", "--set", "0,1", "--d", "2", "--counts", "--json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["values"], serde_json::json!([0, 1, 4]));
    assert_eq!(v["counts"], serde_json::json!([[0, 10], [1, 3], [4, 3]]));
    assert_eq!(v["exact"], true);
}

#[test]
fn eval_prints_cardinality() {
    let o = run(&[
        "eval", "--p", "7", "--expr", "A+B", "--bind", "A=1,2", "--bind", "B=0,3",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("card: 4"), "{out}");
    assert!(out.contains("values: 1,2,4,5"), "{out}");
}

#[test]
fn certify_and_incidence_emit_json() {
    let o = run(&[
        "certify", "--p", "13", "--set", "0,1,3", "--d", "3", "--target", "per",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["target"], "per");
    assert_eq!(v["formula"], "F*A^2*(2#A + A)");

    let o = run(&[
        "incidence",
        "--p",
        "7",
        "--xs",
        "0,1,2",
        "--ys",
        "0,1,2",
        "--slopes",
        "1,2",
        "--offsets",
        "0,1",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["incidences"].as_u64().unwrap() > 0);
}

#[test]
fn errors_exit_one() {
    for args in [
        &["spectrum", "--p", "9", "--set", "0,1", "--d", "2"][..],
        &["spectrum", "--p", "7", "--set", "0,1", "--d", "9"],
        &["eval", "--p", "7", "--expr", "A+", "--bind", "A=1"],
        &["eval", "--p", "7", "--expr", "A+B", "--bind", "A=1"],
        &["scan", "--preset", "thm1i", "--p", "101", "--sizes", "200"],
    ] {
        let o = run(args);
        assert_eq!(
            o.status.code(),
            Some(1),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn scan_files_identical_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for w in ["1", "2", "8"] {
        let path = dir.path().join(format!("scan{w}.csv"));
        let o = bin()
            .args([
                "scan", "--preset", "thm2i", "--p", "1009", "--family", "random", "--sizes",
                "4,11", "--trials", "3",
            ])
            .args(["--seed", "5", "--out", path.to_str().unwrap()])
            .env("SPECTRA_WORKERS", w)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    assert_eq!(text.lines().count(), 1 + 6);

    let json = dir.path().join("scan.json");
    let o = run(&[
        "scan",
        "--preset",
        "lemma9",
        "--p",
        "101",
        "--sizes",
        "3,5",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(json).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn verify_quick_exits_zero() {
    let o = run(&["verify", "--level", "quick", "--workers", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| !l.starts_with("FAIL")));
}
