use streamzeros::verify::run_all;

#[test]
fn acceptance() {
    let reports = run_all();
    let mut all = true;
    for r in &reports {
        println!(
            "[{}] criterion {}: {} — {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.details
        );
        all &= r.pass;
    }
    assert!(all, "one or more acceptance criteria failed");
}
