//! Acceptance suite: runs every numbered criterion at its pinned tolerance
//! and prints one PASS/FAIL line per criterion.

use radonlet::selftest;

fn assert_reports(reports: &[selftest::CriterionReport]) {
    for r in reports {
        println!("{}", r.line());
    }
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{}: {}", r.id, r.detail))
        .collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}

#[test]
fn criteria_a1_to_a11() {
    let reports = vec![
        selftest::criterion_a1(),
        selftest::criterion_a2(),
        selftest::criterion_a3(),
        selftest::criterion_a4(),
        selftest::criterion_a5(),
        selftest::criterion_a6(),
        selftest::criterion_a7(),
        selftest::criterion_a9(),
        selftest::criterion_a10(),
        selftest::criterion_a11(),
    ];
    assert_reports(&reports);
}

#[test]
fn criterion_a8_localization() {
    // kept separate: the stated tolerance is not reachable by any smooth
    // window at these levels, so this criterion documents its measured
    // values when it fails
    assert_reports(&[selftest::criterion_a8()]);
}

#[test]
fn criteria_a12_a13_benchmark() {
    let outcome = selftest::bench_criteria(false);
    println!("white-noise benchmark rows:");
    print!("{}", radonlet::io::bench_csv_string(&outcome.white));
    println!("regression benchmark rows:");
    print!("{}", radonlet::io::bench_csv_string(&outcome.regression));
    assert_reports(&[outcome.a12, outcome.a13]);
}
