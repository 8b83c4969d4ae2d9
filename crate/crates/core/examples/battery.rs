//! Runs the default experiment battery and summarizes ratios per preset.
//!
//!     cargo run --release --example battery -- [seed] [out.csv]

use std::collections::BTreeMap;
use std::time::Instant;

use fpspectra::harness::{default_battery, run_battery, write_records};

fn main() -> fpspectra::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let out = args.next();

    let start = Instant::now();
    let configs = default_battery(seed);
    let records = run_battery(&configs, fpspectra::parallel::default_workers())?;
    println!(
        "{} records from {} configs in {:.1?}",
        records.len(),
        configs.len(),
        start.elapsed()
    );

    // (preset, p) -> (min ratio, max ratio, records outside the window)
    let mut summary: BTreeMap<(String, u64), (f64, f64, usize)> = BTreeMap::new();
    for r in &records {
        let e = summary
            .entry((r.preset.clone(), r.p))
            .or_insert((f64::INFINITY, 0.0, 0));
        e.0 = e.0.min(r.ratio);
        e.1 = e.1.max(r.ratio);
        e.2 += usize::from(!r.hypothesis_ok);
    }
    println!(
        "{:<8} {:>6} {:>10} {:>10} {:>8}",
        "preset", "p", "min", "max", "outside"
    );
    for ((preset, p), (lo, hi, bad)) in summary {
        println!("{preset:<8} {p:>6} {lo:>10.4} {hi:>10.4} {bad:>8}");
    }
    if let Some(path) = out {
        write_records(path.as_ref(), &records)?;
    }
    Ok(())
}
