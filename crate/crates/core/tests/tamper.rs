mod common;

use common::tamper::cases;

#[test]
fn at_least_ten_cases() {
    assert!(cases().len() >= 10);
}

#[test]
fn every_corruption_is_detected() {
    let failures: Vec<String> =
        cases().into_iter().filter_map(|c| (c.run)().err().map(|e| format!("{}: {e}", c.name))).collect();
    assert!(failures.is_empty(), "{failures:#?}");
}
