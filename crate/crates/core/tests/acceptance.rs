//! Runs every acceptance criterion at full ensemble size and prints one line per criterion.
//! Built without the test harness so the lines appear in plain `cargo test` output.

use isofield::cli::{verify_all, Budget};

fn main() {
    let report = verify_all(Budget::Full);
    for c in &report.criteria {
        println!(
            "criterion {:>2} {:<24} {} measured={:.3e} tolerance={:.1e} time={:.2}s  {}",
            c.id,
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.measured,
            c.tolerance,
            c.seconds,
            c.detail
        );
    }
    let failed: Vec<_> = report.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", report.criteria.len());
    } else {
        eprintln!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
