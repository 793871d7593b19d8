use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn moorecat(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_moorecat"))
        .args(args)
        .env_remove("MOORECAT_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child
            .stdin
            .take()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn json_out(o: &Output) -> Value {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("moorecat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const F: &str = r#"{"dom":"2","cod":"2","breaks":[["0","0"],["1","3/2"],["2","2"]]}"#;

#[test]
fn decompose_prints_two_maps() {
    let path = scratch("f.json", F);
    let out = json_out(&moorecat(
        &[
            "decompose",
            "--map",
            path.to_str().unwrap(),
            "--split",
            "3/2,1/2",
        ],
        None,
    ));
    let want: Value = serde_json::from_str(
        r#"[{"dom":"1","cod":"3/2","breaks":[["0","0"],["1","3/2"]]},
            {"dom":"1","cod":"1/2","breaks":[["0","0"],["1","1/2"]]}]"#,
    )
    .unwrap();
    assert_eq!(out, want);
}

#[test]
fn eval_and_inverse() {
    let m = r#"{"dom":"3","cod":"3","breaks":[["0","0"],["1","2"],["3","3"]]}"#;
    assert_eq!(
        json_out(&moorecat(&["eval", "--map", "-", "--at", "2"], Some(m))),
        Value::from("5/2")
    );
    assert_eq!(
        json_out(&moorecat(
            &["eval", "--map", "-", "--at", "2", "--inverse"],
            Some(m)
        )),
        Value::from("1")
    );
}

#[test]
fn compose_in_diagram_order() {
    let f = scratch(
        "mu2.json",
        r#"{"dom":"2","cod":"1","breaks":[["0","0"],["2","1"]]}"#,
    );
    let g = scratch(
        "g.json",
        r#"{"dom":"1","cod":"2","breaks":[["0","0"],["1/2","3/2"],["1","2"]]}"#,
    );
    let out = json_out(&moorecat(
        &[
            "--json",
            "compose",
            f.to_str().unwrap(),
            g.to_str().unwrap(),
        ],
        None,
    ));
    assert_eq!(out, serde_json::from_str::<Value>(F).unwrap());
}

#[test]
fn tensor_and_braid() {
    let a = scratch(
        "a.json",
        r#"{"dom":"1","cod":"2","breaks":[["0","0"],["1","2"]]}"#,
    );
    let b = scratch(
        "b.json",
        r#"{"dom":"1","cod":"1","breaks":[["0","0"],["1","1"]]}"#,
    );
    let t = json_out(&moorecat(
        &["tensor", a.to_str().unwrap(), b.to_str().unwrap()],
        None,
    ));
    assert_eq!(
        t["breaks"],
        serde_json::json!([["0", "0"], ["1", "2"], ["2", "3"]])
    );
    let tp = scratch("t.json", &t.to_string());
    let b2 = json_out(&moorecat(&["braid", "--map", tp.to_str().unwrap()], None));
    assert_eq!(
        b2["breaks"],
        serde_json::json!([["0", "0"], ["1", "1"], ["2", "3"]])
    );
    let split = json_out(&moorecat(
        &[
            "braid",
            "--map",
            tp.to_str().unwrap(),
            "--split",
            "2,1",
            "--via-mu",
        ],
        None,
    ));
    assert_eq!(split, b2);
}

#[test]
fn canon_restrict_and_braid_class() {
    let triple = r#"{"psi":{"dom":"2","cod":"2","breaks":[["0","0"],["2","2"]]},
        "parts":[{"cell":"d","length":"1","map":{"dom":"1","cod":"1","breaks":[["0","0"],["1","1"]]},"label":"u"},
                 {"cell":"k","length":"1","label":"v"}]}"#;
    let c = json_out(&moorecat(&["canon", "--triple", "-"], Some(triple)));
    assert_eq!(c["slots"][0]["kind"], "free");
    assert_eq!(
        c["slots"][1],
        serde_json::json!({"kind":"const","cell":"k","label":"v"})
    );
    let cp = scratch("c.json", &c.to_string());
    let b = json_out(&moorecat(
        &["braid-class", "--class", cp.to_str().unwrap()],
        None,
    ));
    assert_eq!(b["slots"][0]["kind"], "const");
    assert_eq!(b["slots"][1]["start"], "1");
    let omega = scratch(
        "omega.json",
        r#"{"dom":"4","cod":"2","breaks":[["0","0"],["4","2"]]}"#,
    );
    let r = json_out(&moorecat(
        &[
            "restrict",
            "--class",
            cp.to_str().unwrap(),
            "--along",
            omega.to_str().unwrap(),
        ],
        None,
    ));
    assert_eq!(r["length"], "4");
    assert_eq!(r["slots"][0]["end"], "2");
    let x = scratch(
        "x.json",
        r#"{"cell":"d","length":"1","map":{"dom":"1","cod":"1","breaks":[["0","0"],["1","1"]]},"label":"u"}"#,
    );
    let mu2 = scratch(
        "mu2b.json",
        r#"{"dom":"2","cod":"1","breaks":[["0","0"],["2","1"]]}"#,
    );
    let y = json_out(&moorecat(
        &[
            "restrict",
            "--element",
            x.to_str().unwrap(),
            "--along",
            mu2.to_str().unwrap(),
        ],
        None,
    ));
    assert_eq!(y["length"], "2");
}

#[test]
fn colim_lists_and_compares() {
    let d = scratch(
        "d.json",
        r#"{"cells":[{"id":"c","kind":"free","arity":"1","labels":["a","b"]}]}"#,
    );
    let e = scratch(
        "e.json",
        r#"{"cells":[{"id":"k","kind":"const","labels":["x"]}]}"#,
    );
    let list = json_out(&moorecat(&["colim", "--space", d.to_str().unwrap()], None));
    assert_eq!(list.as_array().unwrap().len(), 2);
    let w = json_out(&moorecat(
        &[
            "colim",
            "--space",
            d.to_str().unwrap(),
            "--with",
            e.to_str().unwrap(),
        ],
        None,
    ));
    assert_eq!(w["bijective"], true);
    assert_eq!(w["bijection"].as_array().unwrap().len(), 2);
}

#[test]
fn witness_reports_inequality() {
    let w = json_out(&moorecat(&["witness"], None));
    assert_eq!(w["equal"], false);
    assert_eq!(
        w["omega"]["breaks"],
        serde_json::json!([["0", "0"], ["1/2", "1"], ["2", "2"]])
    );
    assert_ne!(w["lhs"], w["rhs"]);
}

#[test]
fn check_is_deterministic_and_seeded_from_env() {
    let run = |seed_env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_moorecat"));
        cmd.args(args);
        match seed_env {
            Some(s) => cmd.env("MOORECAT_SEED", s),
            None => cmd.env_remove("MOORECAT_SEED"),
        };
        cmd.output().unwrap()
    };
    let args = [
        "check",
        "--suite",
        "gmaps-laws,braiding-laws",
        "--cases",
        "4",
        "--json",
    ];
    let a = run(Some("7"), &args);
    let b = run(None, &[&args[..], &["--seed", "7"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["seed"], 7);
    assert_eq!(report["suites"].as_array().unwrap().len(), 2);
    assert_eq!(report["totals"]["failed_checks"], 0);
    assert!(a.stderr.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    let bad_suite = moorecat(&["check", "--suite", "nope"], None);
    assert_eq!(bad_suite.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_suite.stderr).contains("nope"));

    let malformed = moorecat(
        &["eval", "--map", "-", "--at", "1"],
        Some("{\"dom\": \"1\",\n \"cod\": }"),
    );
    assert_eq!(malformed.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&malformed.stderr);
    assert!(msg.contains("line 2") && msg.contains("column"), "{msg}");

    let non_monotone =
        r#"{"dom":"2","cod":"2","breaks":[["0","0"],["1","3/2"],["3/2","1"],["2","2"]]}"#;
    let o = moorecat(&["eval", "--map", "-", "--at", "1"], Some(non_monotone));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("increasing"));

    let o = moorecat(&["decompose", "--map", "-", "--split", "0,2"], Some(F));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("positive"));

    let o = moorecat(&["eval", "--map", "-", "--at", "5"], Some(F));
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(moorecat(&["frobnicate"], None).status.code(), Some(2));
}
