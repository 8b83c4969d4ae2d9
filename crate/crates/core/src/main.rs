use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use fpspectra::harness::{
    estimate_exponent, run_scan, run_verify, write_records, ExperimentConfig, Preset, VerifyLevel,
    VerifyOptions,
};
use fpspectra::incidence::{check_incidence_bound, GridPoints, LineFamily};
use fpspectra::parallel::default_workers;
use fpspectra::setexpr::{eval_expr, parse_expr, Env};
use fpspectra::spectra::spectrum;
use fpspectra::{
    chain_certificate, make_field, parse_set_spec, Error, FieldCtx, Result, SetFamilySpec,
    SpectrumKind, SpectrumOptions,
};

#[derive(Parser)]
#[command(
    name = "fpspectra",
    version,
    about = "Determinant and permanent spectra over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Det,
    Per,
}

impl From<Target> for SpectrumKind {
    fn from(t: Target) -> Self {
        match t {
            Target::Det => SpectrumKind::Det,
            Target::Per => SpectrumKind::Per,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Values (and optionally counts) of Det or Per over M_d(A)
    Spectrum {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        set: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        per: bool,
        #[arg(long)]
        counts: bool,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Evaluate a set expression
    Eval {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        expr: String,
        /// NAME=SPEC, repeatable
        #[arg(long = "bind", value_name = "NAME=SPEC")]
        binds: Vec<String>,
    },
    /// Chain certificate (lower bound) for a spectrum
    Certify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        set: String,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "det")]
        target: Target,
    },
    /// Grid incidences with the lines y = s(x - b)
    Incidence {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        xs: String,
        #[arg(long)]
        ys: String,
        #[arg(long)]
        slopes: String,
        #[arg(long)]
        offsets: String,
    },
    /// Run a preset over generated sets and write CSV or JSON
    Scan {
        #[arg(long)]
        preset: Preset,
        #[arg(long)]
        p: u64,
        /// random, interval, centered, geometric, or explicit:LITERAL
        #[arg(long, default_value = "random")]
        family: String,
        /// Comma-separated sizes
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        /// Fill elapsed_s (output is then no longer byte-reproducible)
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant battery
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        level: Level,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Quick,
    Full,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn workers(flag: Option<usize>) -> Option<usize> {
    flag.or_else(default_workers)
}

fn field(p: u64) -> Result<FieldCtx> {
    make_field(p)
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    println!(
        "{}",
        serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?
    );
    Ok(())
}

fn run(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Spectrum {
            p,
            set,
            d,
            per,
            counts,
            budget,
            seed,
            json,
            workers: w,
        } => {
            let ctx = field(p)?;
            let a = parse_set_spec(ctx, &set)?;
            let kind = if per {
                SpectrumKind::Per
            } else {
                SpectrumKind::Det
            };
            let opts = SpectrumOptions {
                want_counts: counts,
                budget: budget.unwrap_or(fpspectra::spectra::DEFAULT_BUDGET),
                seed,
                workers: workers(w),
                ..Default::default()
            };
            let r = spectrum(&a, d, kind, &opts)?;
            let nonzero: Option<Vec<(u64, u64)>> = r.counts.as_ref().map(|c| {
                c.iter()
                    .enumerate()
                    .filter(|(_, &n)| n > 0)
                    .map(|(t, &n)| (t as u64, n))
                    .collect()
            });
            if json {
                print_json(&json!({
                    "p": p,
                    "kind": r.kind,
                    "d": r.d,
                    "card_a": a.len(),
                    "card": r.card(),
                    "values": r.values.to_vec(),
                    "counts": nonzero,
                    "exact": r.exact,
                    "matrices_enumerated": r.matrices_enumerated,
                    "saturated": r.saturated,
                }))?;
            } else {
                let name = if per { "per" } else { "det" };
                println!("{name} spectrum, p={p} |A|={} d={d}", a.len());
                println!(
                    "card: {}{}",
                    r.card(),
                    if r.exact {
                        ""
                    } else {
                        " (sampled lower bound)"
                    }
                );
                println!("values: {}", r.values);
                println!("matrices: {}", r.matrices_enumerated);
                if let Some(rows) = nonzero {
                    for (t, n) in rows {
                        println!("  {t}\t{n}");
                    }
                }
            }
        }
        Cmd::Eval { p, expr, binds } => {
            let ctx = field(p)?;
            let ast = parse_expr(&expr)?;
            let mut env = Env::new();
            for b in &binds {
                let (name, spec) = b.split_once('=').ok_or_else(|| {
                    Error::ConfigInvalid(format!("binding `{b}` is not NAME=SPEC"))
                })?;
                env.insert(name.trim().to_string(), parse_set_spec(ctx, spec)?);
            }
            let s = eval_expr(&ast, &env, ctx)?;
            println!("{ast}");
            println!("card: {}", s.len());
            println!("values: {s}");
        }
        Cmd::Certify { p, set, d, target } => {
            let ctx = field(p)?;
            let a = parse_set_spec(ctx, &set)?;
            let cert = chain_certificate(&a, d, target.into())?;
            print_json(&fpspectra::constructions::CertificateReport::from(&cert))?;
        }
        Cmd::Incidence {
            p,
            xs,
            ys,
            slopes,
            offsets,
        } => {
            let ctx = field(p)?;
            let grid = GridPoints::new(parse_set_spec(ctx, &xs)?, parse_set_spec(ctx, &ys)?)?;
            let lines = LineFamily::new(
                &parse_set_spec(ctx, &slopes)?,
                &parse_set_spec(ctx, &offsets)?,
            )?;
            print_json(&check_incidence_bound(&grid, &lines)?)?;
        }
        Cmd::Scan {
            preset,
            p,
            family,
            sizes,
            trials,
            seed,
            d,
            budget,
            workers: w,
            timing,
            out,
        } => {
            let ctx = field(p)?;
            let family = parse_family(ctx, &family)?;
            let mut cfg = ExperimentConfig::new(preset, p, family, sizes);
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.d = d;
            cfg.workers = workers(w);
            cfg.record_timing = timing;
            if let Some(b) = budget {
                cfg.budget = b;
            }
            let records = run_scan(&cfg)?;
            match out {
                Some(path) => {
                    write_records(&path, &records)?;
                    eprintln!("wrote {} records to {}", records.len(), path.display());
                }
                None => print!("{}", fpspectra::harness::to_csv_string(&records)?),
            }
            if let Ok(fit) = estimate_exponent(&records) {
                eprintln!(
                    "fitted slope {:.4} (residual {:.4}, {} points, {} lower-bound)",
                    fit.slope, fit.residual, fit.points, fit.lower_bound_points
                );
            }
        }
        Cmd::Verify { level, workers: w } => {
            let level = match level {
                Level::Quick => VerifyLevel::Quick,
                Level::Full => VerifyLevel::Full,
            };
            let report = run_verify(
                level,
                VerifyOptions {
                    workers: workers(w),
                    ..Default::default()
                },
            );
            for c in &report.checks {
                println!(
                    "{} {} ({} cases)",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.cases
                );
                if let Some(ce) = &c.counterexample {
                    println!("  counterexample: {ce}");
                }
            }
            if !report.passed() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Family for a scan; `size` is filled per cell, so `random` or `interval:start=5` are enough.
fn parse_family(ctx: FieldCtx, src: &str) -> Result<SetFamilySpec> {
    let src = src.trim();
    let (kind, params) = src.split_once(':').unwrap_or((src, ""));
    let spec = match kind {
        "explicit" | "centered" => src.to_string(),
        _ if params.contains("size=") => src.to_string(),
        _ if params.is_empty() => format!("{kind}:size=1"),
        _ => format!("{kind}:{params},size=1"),
    };
    fpspectra::fset::parse_family_spec(ctx, &spec)
}
