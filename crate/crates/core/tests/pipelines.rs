use modular_analog::report::{run_blocks, run_sequence, verify_certificate, Family, RunConfig, PASS};

fn gl2(l: u64, theta: i64) -> RunConfig {
    RunConfig {
        family: Family::Gl2,
        p: 3,
        l,
        theta: Some(theta),
        precision: None,
        seed: 0,
        out: None,
    }
}

#[test]
fn order_four_block_at_eleven_has_three_members() {
    let v = run_blocks(&gl2(11, 30)).unwrap();
    assert_eq!(v["block"]["size"], "3");
    assert_eq!(v["status"], PASS);
    assert!(verify_certificate(&v).unwrap().passed());
}

#[test]
fn order_twelve_sequence_at_eleven() {
    // ℓ − 1 = 10, three twists, and the difference
    let v = run_sequence(&gl2(11, 10)).unwrap();
    let r = &v["sequence"]["ranks"];
    assert_eq!((r["kernel"].as_str(), r["middle"].as_str(), r["right"].as_str()), (Some("10"), Some("30"), Some("20")));
    assert_eq!(v["status"], PASS);
    assert!(verify_certificate(&v).unwrap().passed());
}

#[test]
fn explicit_precision_is_recorded_and_stable() {
    let v6 = run_sequence(&gl2(5, 3)).unwrap();
    let v8 = run_sequence(&RunConfig { precision: Some(8), ..gl2(5, 3) }).unwrap();
    assert_eq!(v8["config"]["precision"], "8");
    assert_eq!(v6["cohomology"]["shift"], v8["cohomology"]["shift"]);
    assert_eq!(v6["sequence"]["ranks"], v8["sequence"]["ranks"]);
}
