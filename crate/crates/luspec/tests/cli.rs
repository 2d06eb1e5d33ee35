use std::fs;
use std::process::{Command, Output};

fn luspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_luspec"))
        .args(args)
        .env_remove("LUSPEC_MAX_DENSE_N")
        .output()
        .expect("spawn luspec")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn build_gamma_q3_writes_81_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.txt");
    let o = luspec(&[
        "build",
        "--q",
        "3",
        "--graph",
        "gamma",
        "--out",
        out.to_str().unwrap(),
        "--no-timestamp",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert!(
        text.starts_with("# graph=GAMMA4 q=3 vertices=81 edges=243"),
        "{text}"
    );
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 243);
    let coords = fs::read_to_string(dir.path().join("g.txt.coords")).unwrap();
    assert_eq!(coords.lines().filter(|l| !l.starts_with('#')).count(), 81);
}

#[test]
fn build_d4_q4_has_512_vertices() {
    let o = luspec(&["build", "--q", "4", "--graph", "d4", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("vertices=512 edges=1024"));
}

#[test]
fn outputs_are_byte_identical_without_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.json"), dir.path().join("b.json")];
    for p in &paths {
        let o = luspec(&[
            "spectrum",
            "--q",
            "7",
            "--out",
            p.to_str().unwrap(),
            "--no-timestamp",
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read(&paths[0]).unwrap(), fs::read(&paths[1]).unwrap());

    let o = luspec(&["spectrum", "--q", "7"]);
    assert!(stdout(&o).contains("\"generated\""));
}

#[test]
fn non_prime_powers_exit_2() {
    for args in [
        &["build", "--q", "1"][..],
        &["spectrum", "--source", "closed", "--q", "6"],
        &["verify", "--q", ""],
        &["verify"],
    ] {
        let o = luspec(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    assert!(stderr(&luspec(&["build", "--q", "6"])).contains("not a prime power"));
}

#[test]
fn spectrum_closed_q5_json() {
    let o = luspec(&[
        "spectrum",
        "--q",
        "5",
        "--source",
        "closed",
        "--no-timestamp",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["graph"], "GAMMA4");
    assert_eq!(v["total"], 625);
    let mult = |value: i64| {
        v["entries"]
            .as_array()
            .unwrap()
            .iter()
            .find(|e| e["value_exact"] == value)
            .map(|e| e["multiplicity"].as_u64().unwrap())
    };
    assert_eq!(mult(20), Some(1));
    assert_eq!(mult(0), Some(220));
    assert_eq!(mult(-5), Some(164));
}

#[test]
fn spectrum_numeric_q3_has_81_values() {
    let o = luspec(&[
        "spectrum", "--q", "3", "--source", "numeric", "--format", "table",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 81);
}

#[test]
fn dense_budget_env_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_luspec"))
        .args(["spectrum", "--q", "3", "--source", "numeric"])
        .env("LUSPEC_MAX_DENSE_N", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("closed"), "{}", stderr(&o));
}

#[test]
fn verify_passes_and_fails_cleanly() {
    let o = luspec(&["verify", "--q", "2,3,4,5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));

    // A tolerance this tight cannot be met by any floating-point solver.
    let o = luspec(&["verify", "--q", "3", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn epsilons_tables() {
    let o = luspec(&["epsilons", "--q", "13", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.starts_with("family,a,c,eps_exact,eps_float,eps_sq_minus_q,weil_margin,fiber_profile")
    );
    let row = text
        .lines()
        .find(|l| l.starts_with("at^3+ct,4,0,"))
        .unwrap();
    let eps: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
    assert!((eps + 6.9533).abs() < 1e-4, "{row}");

    let o = luspec(&["epsilons", "--q", "5", "--no-timestamp"]);
    assert!(stdout(&o).contains("merged under squaring"));

    let o = luspec(&["epsilons", "--q", "8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ramanujan_verdicts() {
    let o = luspec(&["ramanujan", "--q", "13"]);
    assert!(stdout(&o).contains("NOT Ramanujan (margin -0.0251)"));
    let o = luspec(&["ramanujan", "--q", "5"]);
    assert!(stdout(&o).contains(" Ramanujan (margin +0.3820)"));
    let o = luspec(&["ramanujan", "--q", "19,37", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["ramanujan"] == false));
}
