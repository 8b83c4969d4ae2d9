//! Experiment harness: scan presets, scans, exponent fits, output writers
//! and the invariant battery behind `verify`.
//!
//! Ratios are reported raw. Several of the underlying bounds hide
//! logarithmic factors with unspecified powers, so no log correction is
//! applied.

mod fit;
mod output;
mod presets;
mod scan;
mod verify;

pub use fit::{estimate_exponent, ExponentFit};
pub use output::{fmt_sig, to_csv_string, write_csv, write_json, write_records, CSV_HEADER};
pub use presets::{
    ceil_power, clamp_to_window, window_holds, BoundRule, Exponent, Preset, Window, ALL_PRESETS,
};
pub use scan::{
    battery_sizes, cell_seed, cell_sets, default_battery, distribution_report, run_battery,
    run_cell, run_scan, spectrum_lower_bound, DistributionRow, ExperimentConfig, ExperimentRecord,
    BATTERY_PRESETS, BATTERY_PRIMES,
};
pub use verify::{run_verify, CheckResult, VerifyLevel, VerifyOptions, VerifyReport};
