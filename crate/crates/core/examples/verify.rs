//! The invariant battery, plus the negative control that corrupts a cofactor sign.

use fpspectra::harness::{run_verify, VerifyLevel, VerifyOptions};

fn main() {
    let report = run_verify(VerifyLevel::Quick, VerifyOptions::default());
    for c in &report.checks {
        println!(
            "{:<20} {:>5} cases  {}",
            c.name,
            c.cases,
            if c.passed { "ok" } else { "FAILED" }
        );
    }

    let broken = run_verify(
        VerifyLevel::Quick,
        VerifyOptions {
            cofactor_sign_fault: true,
            ..Default::default()
        },
    );
    println!("\nwith a flipped cofactor sign:");
    for c in broken.failures() {
        println!(
            "{} fails, e.g. {}",
            c.name,
            c.counterexample.as_ref().unwrap()
        );
    }
}
