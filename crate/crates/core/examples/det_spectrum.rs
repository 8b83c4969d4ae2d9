//! Determinant spectrum with the value distribution.
//!
//!     cargo run --release --example det_spectrum -- 13 0,1,2 3

use fpspectra::harness::distribution_report;
use fpspectra::{det_spectrum, make_field, parse_set_spec, SpectrumOptions};

fn main() -> fpspectra::Result<()> {
    let mut args = std::env::args().skip(1);
    let p = args.next().and_then(|s| s.parse().ok()).unwrap_or(13);
    let a = args.next().unwrap_or_else(|| "0,1,2".into());
    let d = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);

    let ctx = make_field(p)?;
    let a = parse_set_spec(ctx, &a)?;
    let r = det_spectrum(&a, d, &SpectrumOptions::counted())?;
    println!(
        "|X_{d}| = {} over {} matrices ({:.3}s)",
        r.card(),
        r.matrices_enumerated,
        r.elapsed
    );
    println!("{:>6} {:>12} {:>12} {:>9}", "t", "count", "expected", "dev");
    for row in distribution_report(&r) {
        let tag = if row.is_zero { "  (t=0)" } else { "" };
        println!(
            "{:>6} {:>12} {:>12.1} {:>9.3}{tag}",
            row.t, row.count, row.expected, row.deviation
        );
    }

    // Values only: pruned by cofactor vectors, stops once F_p is covered.
    let fast = det_spectrum(&a, d, &SpectrumOptions::default())?;
    assert_eq!(fast.values, r.values);
    Ok(())
}
