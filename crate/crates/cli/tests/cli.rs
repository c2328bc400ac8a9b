use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn modan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modan")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const SEQ: &[&str] = &["sequence", "--p", "3", "--l", "5", "--theta", "3"];

#[test]
fn identical_configs_give_identical_bytes() {
    let a = modan(SEQ);
    let b = modan(SEQ);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut seeded = SEQ.to_vec();
    seeded.extend(["--seed", "12345"]);
    assert_eq!(modan(&seeded).stdout, a.stdout);
}

#[test]
fn config_file_matches_flags() {
    let path = scratch("seq_config.json");
    fs::write(&path, r#"{"family": "gl2", "p": 3, "l": 5, "theta": 3}"#).unwrap();
    let from_file = modan(&["sequence", "--config", path.to_str().unwrap()]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, modan(SEQ).stdout);
}

#[test]
fn invalid_inputs_exit_two() {
    for args in [
        &["blocks", "--p", "5", "--l", "5", "--theta", "3"][..],
        &["obstructions", "--l", "7"],
        &["blocks", "--p", "3", "--l", "5", "--theta", "6"],
        &["sequence", "--family", "heisenberg", "--p", "3", "--l", "5", "--theta", "0"],
        &["blocks", "--p", "4", "--l", "5", "--theta", "3"],
    ] {
        let out = modan(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn hypothesis_failure_is_a_successful_run() {
    let out = modan(&["sequence", "--p", "3", "--l", "5", "--theta", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"status\": \"HYPOTHESIS_FAILED\""));
    // |ZU| = 20 is even, so the middle term is not projective at p = 2
    let out = modan(&["sequence", "--p", "2", "--l", "5", "--theta", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "HYPOTHESIS_FAILED");
    assert_eq!(v["hypotheses"]["middle_subgroup_prime_to_p"], false);
}

#[test]
fn verify_accepts_fresh_and_rejects_tampered_certificates() {
    let path = scratch("seq.json");
    let mut args = SEQ.to_vec();
    args.extend(["--out", path.to_str().unwrap()]);
    let out = modan(&args);
    assert!(out.status.success());
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("ranks        kernel 4  middle 12  right 8"), "{table}");
    let ok = modan(&["verify", path.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));

    let text = fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["sequence"]["ranks"]["kernel"] = serde_json::json!("5");
    let bad = scratch("seq_bad.json");
    fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let out = modan(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(report.lines().any(|l| l.starts_with("rank_additivity") && l.ends_with("FAIL")), "{report}");

    let garbage = scratch("garbage.json");
    fs::write(&garbage, "{not json").unwrap();
    assert_eq!(modan(&["verify", garbage.to_str().unwrap()]).status.code(), Some(2));
    fs::write(&garbage, r#"{"certificate": "blocks"}"#).unwrap();
    assert_eq!(modan(&["verify", garbage.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn block_and_obstruction_certificates_verify() {
    for (name, args) in [
        ("blocks.json", &["blocks", "--p", "3", "--l", "5", "--theta", "3"][..]),
        ("heis.json", &["sequence", "--family", "heisenberg", "--p", "3", "--l", "5", "--theta", "1"]),
        ("obs.json", &["obstructions", "--l", "11"]),
    ] {
        let path = scratch(name);
        let mut a = args.to_vec();
        a.extend(["--out", path.to_str().unwrap()]);
        let out = modan(&a);
        assert!(out.status.success(), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("status       PASS"), "{args:?}");
        let v = modan(&["verify", path.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&v.stdout));
    }
}
