use lieconf_core::suite::{self, CriterionResult, DEFAULT_SEED};

fn report(r: &CriterionResult) {
    println!("{r}");
    for line in &r.details {
        println!("    {line}");
    }
}

#[test]
fn acceptance() {
    let results = suite::run_all(DEFAULT_SEED);
    println!();
    for r in &results {
        report(r);
    }
    println!();
    for r in &results {
        println!("{} {}", if r.passed { "PASS" } else { "FAIL" }, r.id);
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
