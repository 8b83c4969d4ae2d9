use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::presets::{ceil_power, clamp_to_window, power, window_holds, BoundRule, Preset};
use crate::constructions::chain_certificate;
use crate::error::{Error, Result};
use crate::field::{make_field, FieldCtx};
use crate::fset::{gen_set, FpSet, SetFamily, SetFamilySpec};
use crate::incidence::{check_incidence_bound, GridPoints, LineFamily};
use crate::parallel::with_workers;
use crate::rng::derive_seed;
use crate::setexpr::{eval_str, Env};
use crate::spectra::{
    diff_det_spectrum_f2, diff_per_spectrum_g2, spectrum, SpectrumKind, SpectrumOptions,
    SpectrumResult, DEFAULT_BUDGET,
};

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub p: u64,
    /// Set family; its `size` and `seed` are replaced per cell.
    pub family: SetFamilySpec,
    pub sizes: Vec<usize>,
    /// Dimension; `None` uses the preset default.
    pub d: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub budget: u64,
    pub workers: Option<usize>,
    /// Write wall-clock seconds into `elapsed_s`. Off by default so output is byte-reproducible.
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn new(preset: Preset, p: u64, family: SetFamilySpec, sizes: Vec<usize>) -> Self {
        ExperimentConfig {
            preset,
            p,
            family,
            sizes,
            d: None,
            trials: 1,
            seed: 0,
            budget: DEFAULT_BUDGET,
            workers: None,
            record_timing: false,
        }
    }

    pub fn dim(&self) -> usize {
        if self.preset.uses_dim() {
            self.d.unwrap_or_else(|| self.preset.default_dim())
        } else {
            self.preset.default_dim()
        }
    }

    fn validate(&self) -> Result<FieldCtx> {
        let ctx = make_field(self.p).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        self.preset.check_dim(self.dim())?;
        if self.trials == 0 {
            return Err(Error::ConfigInvalid("trials must be at least 1".into()));
        }
        if self.sizes.is_empty() && !matches!(self.family.family, SetFamily::Explicit(_)) {
            return Err(Error::ConfigInvalid("no sizes given".into()));
        }
        if let Some(&bad) = self.sizes.iter().find(|&&s| s == 0 || s as u64 > self.p) {
            return Err(Error::ConfigInvalid(format!("size {bad} is outside 1..=p")));
        }
        Ok(ctx)
    }
}

/// One output row of a scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub preset: String,
    pub p: u64,
    pub card_a: usize,
    pub d: usize,
    pub trial: usize,
    pub seed: u64,
    pub measured: f64,
    pub bound: f64,
    pub ratio: f64,
    /// False when `measured` comes from a certificate or a sample (a lower bound).
    pub exact: bool,
    pub hypothesis_ok: bool,
    pub elapsed_s: f64,
    /// The `min(·, p)` clamp was active (conjecture presets).
    #[serde(skip)]
    pub clamped: bool,
}

impl ExperimentRecord {
    pub fn hypothesis_violated(&self) -> bool {
        !self.hypothesis_ok
    }
}

/// Seed of the set drawn for `(size index, trial)`.
pub fn cell_seed(root: u64, size_index: usize, trial: usize) -> u64 {
    derive_seed(root, ((size_index as u64) << 32) | trial as u64)
}

/// Sets drawn by a scan, as `(trial, seed, A)` in output order.
pub fn cell_sets(cfg: &ExperimentConfig) -> Result<Vec<(usize, u64, FpSet)>> {
    let ctx = cfg.validate()?;
    cells(cfg)
        .into_iter()
        .map(|(i, size, trial)| {
            let seed = cell_seed(cfg.seed, i, trial);
            Ok((
                trial,
                seed,
                gen_set(ctx, &cfg.family.with_size_seed(size, seed))?,
            ))
        })
        .collect()
}

fn cells(cfg: &ExperimentConfig) -> Vec<(usize, usize, usize)> {
    let sizes: Vec<usize> = match &cfg.family.family {
        SetFamily::Explicit(e) => vec![e.len()],
        _ => cfg.sizes.clone(),
    };
    sizes
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| (0..cfg.trials).map(move |t| (i, s, t)))
        .collect()
}

pub fn run_scan(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    let ctx = cfg.validate()?;
    let cells = cells(cfg);
    with_workers(cfg.workers, || {
        cells
            .par_iter()
            .map(|&(i, size, trial)| {
                let seed = cell_seed(cfg.seed, i, trial);
                let a = gen_set(ctx, &cfg.family.with_size_seed(size, seed))?;
                run_cell(cfg, &a, trial, seed)
            })
            .collect::<Result<Vec<_>>>()
    })
}

/// The preset's measured quantity for one set `A`.
struct Measurement {
    value: f64,
    exact: bool,
    /// Overrides the preset's bound rule (incidence RHS).
    bound: Option<f64>,
    /// Overrides the size window (incidence hypotheses).
    hypothesis: Option<bool>,
}

impl Measurement {
    fn exact(value: f64) -> Self {
        Measurement {
            value,
            exact: true,
            bound: None,
            hypothesis: None,
        }
    }
}

pub fn run_cell(
    cfg: &ExperimentConfig,
    a: &FpSet,
    trial: usize,
    seed: u64,
) -> Result<ExperimentRecord> {
    let start = Instant::now();
    let d = cfg.dim();
    let n = a.len();
    let p = a.ctx().p();
    let m = measure(cfg.preset, a, d, cfg.budget)?;
    let (bound, clamped) = match cfg.preset.bound_rule(d) {
        BoundRule::Power(theta) => (power(n, theta), false),
        BoundRule::PowerClamped(theta) => {
            let raw = power(n, theta);
            (raw.min(p as f64), raw > p as f64)
        }
        BoundRule::Equidistributed => ((n as f64).powi((d * d) as i32) / p as f64, false),
        BoundRule::IncidenceRhs => (m.bound.unwrap_or(0.0), false),
    };
    let hypothesis_ok = m
        .hypothesis
        .unwrap_or_else(|| window_holds(cfg.preset.window(d), n as u64, p));
    Ok(ExperimentRecord {
        preset: cfg.preset.name().to_string(),
        p,
        card_a: n,
        d,
        trial,
        seed,
        measured: m.value,
        bound,
        ratio: if bound > 0.0 { m.value / bound } else { 0.0 },
        exact: m.exact,
        hypothesis_ok,
        elapsed_s: if cfg.record_timing {
            start.elapsed().as_secs_f64()
        } else {
            0.0
        },
        clamped,
    })
}

fn matrices(n: usize, d: usize) -> Option<u128> {
    (0..d * d).try_fold(1u128, |acc, _| acc.checked_mul(n as u128))
}

/// Exact spectrum size when `|A|^{d²}` fits the budget, otherwise the chain certificate size.
pub fn spectrum_lower_bound(
    a: &FpSet,
    d: usize,
    kind: SpectrumKind,
    budget: u64,
) -> Result<(usize, bool)> {
    let fits = matrices(a.len(), d).is_some_and(|m| m <= budget as u128);
    if d == 2 || fits {
        let r = spectrum(a, d, kind, &SpectrumOptions::unlimited())?;
        Ok((r.card(), true))
    } else {
        Ok((chain_certificate(a, d, kind)?.card(), false))
    }
}

fn measure(preset: Preset, a: &FpSet, d: usize, budget: u64) -> Result<Measurement> {
    let ctx = a.ctx();
    let env: Env = [("A".to_string(), a.clone())].into();
    let card = |src: &str| -> Result<f64> { Ok(eval_str(src, &env, ctx)?.len() as f64) };
    Ok(match preset {
        Preset::Thm1i | Preset::Thm1ii | Preset::Thm2i | Preset::Thm2ii | Preset::Conj1 => {
            let (v, exact) = spectrum_lower_bound(a, d, SpectrumKind::Det, budget)?;
            Measurement {
                value: v as f64,
                exact,
                bound: None,
                hypothesis: None,
            }
        }
        Preset::Thm3 | Preset::Thm4 | Preset::Conj2 => {
            let (v, exact) = spectrum_lower_bound(a, d, SpectrumKind::Per, budget)?;
            Measurement {
                value: v as f64,
                exact,
                bound: None,
                hypothesis: None,
            }
        }
        Preset::Thm5 => {
            // both |F_2| and |G_2| are bounded below; the smaller one is reported
            let f2 = diff_det_spectrum_f2(a)?.len();
            let g2 = diff_per_spectrum_g2(a)?.len();
            Measurement::exact(f2.min(g2) as f64)
        }
        Preset::Lemma7 => {
            let grid = GridPoints::new(a.sumset(a)?, a.product_set(a)?)?;
            let report = check_incidence_bound(&grid, &LineFamily::new(a, a)?)?;
            Measurement {
                value: report.incidences as f64,
                exact: true,
                bound: Some(report.rhs),
                hypothesis: Some(report.hypothesis_ok),
            }
        }
        Preset::Lemma8 => Measurement::exact(card("A + A")? * card("A*A")?),
        Preset::Lemma9 => Measurement::exact(card(&format!("A^{d}"))? * card(&format!("{d}#A"))?),
        Preset::Lemma11 => {
            let diff = card("A - A")?;
            let prod = card("A*A")?;
            Measurement::exact(((18.0 * diff.ln() + 9.0 * prod.ln()) / 27.0).exp())
        }
        Preset::Dist2 => {
            let fits = matrices(a.len(), d).is_some_and(|m| m <= budget as u128);
            if !fits {
                return Err(Error::BudgetExceededWithoutCertificate(
                    preset.name().into(),
                ));
            }
            let r = spectrum(
                a,
                d,
                SpectrumKind::Det,
                &SpectrumOptions {
                    want_counts: true,
                    budget,
                    ..Default::default()
                },
            )?;
            let worst = distribution_report(&r)
                .iter()
                .filter(|row| !row.is_zero)
                .map(|row| row.count)
                .max()
                .unwrap_or(0);
            Measurement::exact(worst as f64)
        }
    })
}

/// One value `t` of a counted spectrum against the equidistributed expectation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionRow {
    pub t: u64,
    pub count: u64,
    pub expected: f64,
    /// `count / expected - 1`
    pub deviation: f64,
    /// `t = 0` is reported but kept apart from the nonzero values.
    pub is_zero: bool,
}

/// `D_d(A, t)` for every `t` against `|A|^{d²} / p`. Empty when counts were not requested.
pub fn distribution_report(r: &SpectrumResult) -> Vec<DistributionRow> {
    let Some(counts) = &r.counts else {
        return Vec::new();
    };
    let expected = r.matrices_enumerated as f64 / counts.len() as f64;
    counts
        .iter()
        .enumerate()
        .map(|(t, &count)| DistributionRow {
            t: t as u64,
            count,
            expected,
            deviation: count as f64 / expected - 1.0,
            is_zero: t == 0,
        })
        .collect()
}

/// Presets in the default battery, each with its dimension.
pub const BATTERY_PRESETS: [(Preset, usize); 9] = [
    (Preset::Thm1i, 2),
    (Preset::Thm2i, 3),
    (Preset::Thm3, 2),
    (Preset::Thm4, 3),
    (Preset::Thm5, 2),
    (Preset::Lemma7, 2),
    (Preset::Lemma8, 2),
    (Preset::Lemma9, 3),
    (Preset::Lemma11, 2),
];

pub const BATTERY_PRIMES: [u64; 3] = [101, 1009, 10007];

/// Sizes `⌈p^{1/3}⌉` and `⌈p^{1/2}⌉`, each clamped into the preset's window.
pub fn battery_sizes(preset: Preset, d: usize, p: u64) -> Vec<usize> {
    let window = preset.window(d);
    let mut sizes: Vec<usize> = [
        num_rational::Ratio::new(1, 3),
        num_rational::Ratio::new(1, 2),
    ]
    .iter()
    .map(|&theta| clamp_to_window(ceil_power(p, theta), p, window) as usize)
    .collect();
    sizes.dedup();
    sizes
}

/// Default experiment battery: primes 101, 1009, 10007; random and interval
/// families; five trials per size; root seed `seed`.
pub fn default_battery(seed: u64) -> Vec<ExperimentConfig> {
    let mut out = Vec::new();
    for p in BATTERY_PRIMES {
        for family in [SetFamilySpec::random(0, 0), SetFamilySpec::interval(1, 0)] {
            for (preset, d) in BATTERY_PRESETS {
                let mut cfg =
                    ExperimentConfig::new(preset, p, family.clone(), battery_sizes(preset, d, p));
                cfg.d = Some(d);
                cfg.trials = 5;
                cfg.seed = seed;
                out.push(cfg);
            }
        }
    }
    out
}

/// Runs every config and concatenates the records in config order.
pub fn run_battery(
    configs: &[ExperimentConfig],
    workers: Option<usize>,
) -> Result<Vec<ExperimentRecord>> {
    let mut out = Vec::new();
    for cfg in configs {
        let mut cfg = cfg.clone();
        cfg.workers = workers;
        out.extend(run_scan(&cfg)?);
    }
    Ok(out)
}
