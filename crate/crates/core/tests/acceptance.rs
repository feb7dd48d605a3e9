use std::io::Write;

use randlab_core::acceptance::{run_criteria, AcceptanceOptions};

// Criteria whose stated expectation contradicts the mathematics; they run in full and must report FAIL.
const KNOWN_UNATTAINABLE: [u8; 2] = [9, 11];

#[test]
fn acceptance_criteria() {
    let results = run_criteria(&AcceptanceOptions::default(), None);
    assert_eq!(results.len(), 16);
    // written to the handle so the lines survive libtest capture
    let mut err = std::io::stderr().lock();
    for r in &results {
        writeln!(err, "{r}").unwrap();
    }
    drop(err);
    for r in &results {
        if KNOWN_UNATTAINABLE.contains(&r.id) {
            assert!(!r.passed, "criterion {} unexpectedly passed", r.id);
            let timing = r.checks.iter().find(|c| c.name == "within time budget").unwrap();
            assert!(timing.passed, "criterion {} over budget", r.id);
        } else {
            assert!(r.passed, "criterion {} failed:\n{r}", r.id);
        }
    }
}

#[test]
fn bloch_tolerance_negative_control() {
    let opts = AcceptanceOptions { bloch_tolerance: 1e-20, seed: 0 };
    let r = run_criteria(&opts, Some("quantum")).into_iter().find(|r| r.id == 9).unwrap();
    let law = r.checks.iter().find(|c| c.name == "Bloch law max error").unwrap();
    assert!(!law.passed, "{law:?}");
}
