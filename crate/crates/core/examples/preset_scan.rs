//! A single preset scan with an exponent fit.
//!
//!     cargo run --release --example preset_scan -- thm2i 10007

use fpspectra::harness::{estimate_exponent, run_scan, to_csv_string, ExperimentConfig, Preset};
use fpspectra::SetFamilySpec;

fn main() -> fpspectra::Result<()> {
    let mut args = std::env::args().skip(1);
    let preset: Preset = args.next().as_deref().unwrap_or("thm1i").parse()?;
    let p = args.next().and_then(|s| s.parse().ok()).unwrap_or(10007);

    let mut cfg = ExperimentConfig::new(
        preset,
        p,
        SetFamilySpec::random(1, 0),
        vec![4, 6, 9, 14, 22],
    );
    cfg.trials = 3;
    let records = run_scan(&cfg)?;
    print!("{}", to_csv_string(&records)?);

    let fit = estimate_exponent(&records)?;
    let kind = if fit.lower_bound_points > 0 {
        "lower-bound slope"
    } else {
        "slope"
    };
    println!("# {kind} {:.3}, residual {:.3}", fit.slope, fit.residual);
    Ok(())
}
