use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_magicrep"))
}

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs").join(format!("{name}.json"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("magicrep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(name: &str, tag: &str) -> (i32, PathBuf, PathBuf) {
    let out = tmp(&format!("{tag}-report.json"));
    let cert = tmp(&format!("{tag}-cert.json"));
    let st = bin()
        .args(["run", "--spec"])
        .arg(spec(name))
        .arg("--out")
        .arg(&out)
        .arg("--emit-certificate")
        .arg(&cert)
        .output()
        .unwrap()
        .status;
    (st.code().unwrap(), out, cert)
}

#[test]
fn every_spec_round_trips() {
    for name in ["s3_trivial", "s3_semi_invariant", "s3_glauberman", "a4_trivial", "s4_d8", "sl23_invariant", "sl23_glauberman"] {
        let (code, _, cert) = run(name, name);
        assert_eq!(code, 0, "{name}");
        let st = bin().arg("verify").arg(&cert).output().unwrap().status;
        assert_eq!(st.code(), Some(0), "{name}");
    }
}

#[test]
fn reports_are_byte_identical() {
    let (_, a, _) = run("sl23_glauberman", "det-a");
    let (_, b, _) = run("sl23_glauberman", "det-b");
    let a = std::fs::read(a).unwrap();
    assert_eq!(a, std::fs::read(b).unwrap());
    let report: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["lift"]["precision"], 4);
    let top = report["correspondence"]["tables"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(top["entries"].as_array().unwrap().len(), 3);
    assert!(report["blocks"].is_array());
    assert!(report["brauer_pairs"].is_object());
}

#[test]
fn non_normal_k_exits_three() {
    let out = bin().args(["run", "--spec"]).arg(spec("non_normal_k")).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("K not normal"));
}

#[test]
fn tampered_and_truncated_certificates() {
    let (_, _, cert) = run("sl23_invariant", "tamper");
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let mut flipped = v.clone();
    let entry = &mut flipped["reps"][0]["sigma"][1][0][1];
    *entry = serde_json::Value::String(format!("{} + 1", entry.as_str().unwrap()));
    let p = tmp("flipped.json");
    std::fs::write(&p, flipped.to_string()).unwrap();
    assert_eq!(bin().arg("verify").arg(&p).output().unwrap().status.code(), Some(1));
    v["reps"][0]["raw_cocycle"].as_array_mut().unwrap().pop();
    let p = tmp("truncated.json");
    std::fs::write(&p, v.to_string()).unwrap();
    assert_eq!(bin().arg("verify").arg(&p).output().unwrap().status.code(), Some(2));
}

#[test]
fn precision_flag_and_bad_spec() {
    let out = bin().args(["run", "--precision", "2", "--spec"]).arg(spec("sl23_glauberman")).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["lift"]["precision"], 2);
    let p = tmp("bad.json");
    std::fs::write(&p, "{\"gens\": 3}").unwrap();
    assert_eq!(bin().args(["run", "--spec"]).arg(&p).output().unwrap().status.code(), Some(2));
}
