//! Acceptance gate: runs the embedded criteria suite with its documented
//! default configuration and prints one pass/fail line per criterion.

use freeharm::selftest::{run, SelftestConfig};

#[test]
fn acceptance() {
    let report = run(&SelftestConfig::default()).expect("criteria evaluation succeeds");
    print!("{}", report.render());
    assert!(
        report.passed,
        "acceptance criteria failed:\n{}",
        report.render()
    );
}
