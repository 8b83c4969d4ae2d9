//! Prefix enumeration.
//!
//! Both determinant and permanent are linear in the last row:
//! `F(M) = Σ_j x_j c_j` where `c_j` are the last-row (signed or signless)
//! cofactors, which depend only on the first `d-1` rows. For each prefix the
//! attained values are the sumset of dilates `c_1·A + … + c_d·A`, so the
//! `|A|^d` choices of last row collapse into `d` bit-vector sumsets.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use super::matrix::{check_dim, det_in_place, per_ryser};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::fset::FpSet;
use crate::parallel::with_workers;
use crate::rng::{derive_seed, rng_from_seed};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Prefix ranges are cut into this many chunks regardless of worker count.
const EXACT_CHUNKS: u128 = 4096;
/// Sampled prefixes per RNG stream.
const SAMPLE_CHUNK: u64 = 4096;
/// Per-worker cofactor memo is dropped when it grows past this.
const MEMO_CAP: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Det,
    Per,
}

#[derive(Debug, Clone)]
pub struct SpectrumOptions {
    pub want_counts: bool,
    /// Maximum number of matrices (prefixes × |A|^d) to cover before switching to sampling.
    pub budget: u64,
    /// Root seed for sampling mode.
    pub seed: u64,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub workers: Option<usize>,
    /// Negative control for the verifier: negates the first last-row cofactor.
    #[doc(hidden)]
    pub cofactor_sign_fault: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            want_counts: false,
            budget: DEFAULT_BUDGET,
            seed: 0,
            workers: None,
            cofactor_sign_fault: false,
        }
    }
}

impl SpectrumOptions {
    pub fn counted() -> Self {
        SpectrumOptions {
            want_counts: true,
            ..Self::default()
        }
    }

    pub fn unlimited() -> Self {
        SpectrumOptions {
            budget: u64::MAX,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub kind: SpectrumKind,
    pub d: usize,
    /// Attained values `X_d` (or the sampled subset when not exact).
    pub values: FpSet,
    /// `counts[t]` is the number of enumerated matrices with value `t`.
    pub counts: Option<Vec<u64>>,
    pub exact: bool,
    pub matrices_enumerated: u64,
    /// Some counter hit `u64::MAX`.
    pub saturated: bool,
    pub elapsed: f64,
}

impl SpectrumResult {
    pub fn card(&self) -> usize {
        self.values.len()
    }

    pub fn count(&self, t: u64) -> Option<u64> {
        self.counts.as_ref().map(|c| c[t as usize])
    }
}

pub fn det_spectrum(a: &FpSet, d: usize, opts: &SpectrumOptions) -> Result<SpectrumResult> {
    spectrum(a, d, SpectrumKind::Det, opts)
}

pub fn per_spectrum(a: &FpSet, d: usize, opts: &SpectrumOptions) -> Result<SpectrumResult> {
    spectrum(a, d, SpectrumKind::Per, opts)
}

/// `F_2(A) = {Det(X - Y) : X, Y ∈ M_2(A)}`. Entries of `X - Y` range
/// independently over `A - A`, so this is the 2x2 spectrum of `A - A`.
pub fn diff_det_spectrum_f2(a: &FpSet) -> Result<FpSet> {
    diff_spectrum(a, SpectrumKind::Det)
}

/// `G_2(A) = {Per(X - Y) : X, Y ∈ M_2(A)}`.
pub fn diff_per_spectrum_g2(a: &FpSet) -> Result<FpSet> {
    diff_spectrum(a, SpectrumKind::Per)
}

fn diff_spectrum(a: &FpSet, kind: SpectrumKind) -> Result<FpSet> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let diffs = a.difference_set(a)?;
    Ok(spectrum(&diffs, 2, kind, &SpectrumOptions::unlimited())?.values)
}

fn pow_u128(base: u128, exp: usize) -> Option<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base))
}

pub fn spectrum(
    a: &FpSet,
    d: usize,
    kind: SpectrumKind,
    opts: &SpectrumOptions,
) -> Result<SpectrumResult> {
    check_dim(d)?;
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let start = Instant::now();
    let n = a.len() as u128;
    let per_prefix = pow_u128(n, d);
    let prefixes = pow_u128(n, d * (d - 1));
    let total = per_prefix.zip(prefixes).and_then(|(x, y)| x.checked_mul(y));
    let job = Job::new(a, d, kind, opts);

    let (acc, exact, covered) = with_workers(opts.workers, || match total {
        Some(total) if total <= opts.budget as u128 => {
            let acc = job.run_exact(prefixes.expect("bounded by total"));
            (acc, true, total as u64)
        }
        _ => {
            let per_prefix = per_prefix.unwrap_or(u128::MAX);
            let samples = (opts.budget as u128 / per_prefix).max(1) as u64;
            let acc = job.run_sampled(samples);
            let covered = (samples as u128)
                .saturating_mul(per_prefix)
                .min(u64::MAX as u128) as u64;
            (acc, false, covered)
        }
    });
    Ok(SpectrumResult {
        kind,
        d,
        values: acc.values,
        counts: acc.counts,
        exact,
        matrices_enumerated: covered,
        saturated: acc.saturated,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

struct Job<'a> {
    a: &'a FpSet,
    elems: Vec<u64>,
    d: usize,
    kind: SpectrumKind,
    want_counts: bool,
    seed: u64,
    fault: bool,
    full: AtomicBool,
}

/// Per-worker accumulator; merged by OR / elementwise add.
struct Acc {
    values: FpSet,
    counts: Option<Vec<u64>>,
    saturated: bool,
}

impl Acc {
    fn merge(mut self, other: Acc) -> Acc {
        self.values.or_assign(&other.values);
        if let (Some(mine), Some(theirs)) = (self.counts.as_mut(), other.counts.as_ref()) {
            for (x, y) in mine.iter_mut().zip(theirs) {
                let (s, o) = x.overflowing_add(*y);
                *x = if o { u64::MAX } else { s };
                self.saturated |= o;
            }
        }
        self.saturated |= other.saturated;
        self
    }
}

/// Scratch space owned by one worker.
struct Worker {
    acc: Acc,
    cof: Vec<u64>,
    minor: Vec<u64>,
    memo: HashSet<Vec<u64>>,
    dist: Vec<u64>,
    next: Vec<u64>,
    support: Vec<u32>,
    next_support: Vec<u32>,
}

impl<'a> Job<'a> {
    fn new(a: &'a FpSet, d: usize, kind: SpectrumKind, opts: &SpectrumOptions) -> Self {
        Job {
            a,
            elems: a.to_vec(),
            d,
            kind,
            want_counts: opts.want_counts,
            seed: opts.seed,
            fault: opts.cofactor_sign_fault,
            full: AtomicBool::new(false),
        }
    }

    fn ctx(&self) -> FieldCtx {
        self.a.ctx()
    }

    fn worker(&self) -> Worker {
        let p = self.ctx().p() as usize;
        let (dist, next) = if self.want_counts {
            (vec![0; p], vec![0; p])
        } else {
            (Vec::new(), Vec::new())
        };
        Worker {
            acc: Acc {
                values: FpSet::empty(self.ctx()),
                counts: self.want_counts.then(|| vec![0; p]),
                saturated: false,
            },
            cof: Vec::with_capacity(self.d),
            minor: Vec::with_capacity(self.d * self.d),
            memo: HashSet::new(),
            dist,
            next,
            support: Vec::new(),
            next_support: Vec::new(),
        }
    }

    fn run_exact(&self, prefixes: u128) -> Acc {
        let chunk = prefixes.div_ceil(EXACT_CHUNKS).max(1);
        let n_chunks = prefixes.div_ceil(chunk) as u64;
        (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c as u128 * chunk;
                let hi = (lo + chunk).min(prefixes);
                let mut w = self.worker();
                self.run_range(&mut w, lo, hi);
                w.acc
            })
            .reduce_with(Acc::merge)
            .unwrap_or_else(|| self.worker().acc)
    }

    fn run_range(&self, w: &mut Worker, lo: u128, hi: u128) {
        let k = self.elems.len() as u128;
        let cells = self.d * (self.d - 1);
        // little-endian odometer over entry indices of the first d-1 rows
        let mut digits = vec![0usize; cells];
        let mut rest = lo;
        for dgt in digits.iter_mut() {
            *dgt = (rest % k) as usize;
            rest /= k;
        }
        let mut prefix: Vec<u64> = digits.iter().map(|&i| self.elems[i]).collect();
        for _ in lo..hi {
            if !self.want_counts && self.full.load(Ordering::Relaxed) {
                return;
            }
            self.visit(w, &prefix);
            for (pos, dgt) in digits.iter_mut().enumerate() {
                *dgt += 1;
                if *dgt < self.elems.len() {
                    prefix[pos] = self.elems[*dgt];
                    break;
                }
                *dgt = 0;
                prefix[pos] = self.elems[0];
            }
        }
    }

    fn run_sampled(&self, samples: u64) -> Acc {
        let n_chunks = samples.div_ceil(SAMPLE_CHUNK);
        let cells = self.d * (self.d - 1);
        (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let mut w = self.worker();
                let mut rng = rng_from_seed(derive_seed(self.seed, c));
                let count = SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK);
                let mut prefix = vec![0u64; cells];
                for _ in 0..count {
                    for x in prefix.iter_mut() {
                        *x = self.elems[rng.gen_range(0..self.elems.len())];
                    }
                    self.visit(&mut w, &prefix);
                }
                w.acc
            })
            .reduce_with(Acc::merge)
            .unwrap_or_else(|| self.worker().acc)
    }

    /// Handles one prefix (rows `0..d-1`, row-major).
    fn visit(&self, w: &mut Worker, prefix: &[u64]) {
        self.cofactors(w, prefix);
        if self.want_counts {
            self.count_last_rows(w);
        } else {
            let mut key = w.cof.clone();
            key.sort_unstable();
            if w.memo.contains(&key) {
                return;
            }
            if w.memo.len() >= MEMO_CAP {
                w.memo.clear();
            }
            w.memo.insert(key);
            let contribution = self.dilate_sum(&w.cof);
            w.acc.values.or_assign(&contribution);
            if w.acc.values.is_full() {
                self.full.store(true, Ordering::Relaxed);
            }
        }
    }

    /// Last-row cofactors `c_j` with `F(M) = Σ_j x_j c_j`.
    fn cofactors(&self, w: &mut Worker, prefix: &[u64]) {
        let f = self.ctx();
        let d = self.d;
        let m = d - 1;
        w.cof.clear();
        // The prefix is (d-1) x d; deleting column j leaves an (d-1) x (d-1) block.
        for j in 0..d {
            w.minor.clear();
            for r in 0..m {
                for c in (0..d).filter(|&c| c != j) {
                    w.minor.push(prefix[r * d + c]);
                }
            }
            let c = match self.kind {
                SpectrumKind::Det => {
                    let v = det_in_place(f, m, &mut w.minor);
                    // sign of the (d-1, j) cofactor: (-1)^(d-1+j)
                    if (m + j) % 2 == 1 {
                        f.neg(v)
                    } else {
                        v
                    }
                }
                SpectrumKind::Per => per_ryser(f, m, &w.minor),
            };
            w.cof.push(c);
        }
        if self.fault {
            w.cof[0] = f.neg(w.cof[0]);
        }
    }

    /// `c_1·A + … + c_d·A`.
    fn dilate_sum(&self, cof: &[u64]) -> FpSet {
        let mut acc = self.a.dilate(cof[0]);
        for &c in &cof[1..] {
            if acc.is_full() {
                break;
            }
            acc = if c == 0 {
                acc
            } else {
                acc.sumset(&self.a.dilate(c)).expect("same field")
            };
        }
        acc
    }

    /// Adds the distribution of `Σ_j c_j x_j` over all last rows into the counts.
    fn count_last_rows(&self, w: &mut Worker) {
        let f = self.ctx();
        w.dist[0] = 1;
        w.support.clear();
        w.support.push(0);
        for j in 0..self.d {
            let c = w.cof[j];
            w.next_support.clear();
            for &v in &w.support {
                let mass = w.dist[v as usize];
                for &x in &self.elems {
                    let t = f.add(v as u64, f.mul(c, x)) as usize;
                    if w.next[t] == 0 {
                        w.next_support.push(t as u32);
                    }
                    w.next[t] += mass;
                }
            }
            for &v in &w.support {
                w.dist[v as usize] = 0;
            }
            std::mem::swap(&mut w.dist, &mut w.next);
            std::mem::swap(&mut w.support, &mut w.next_support);
        }
        let counts = w.acc.counts.as_mut().expect("counting mode");
        for &v in &w.support {
            let t = v as usize;
            let (s, o) = counts[t].overflowing_add(w.dist[t]);
            counts[t] = if o { u64::MAX } else { s };
            w.acc.saturated |= o;
            w.acc.values.insert(t as u64);
            w.dist[t] = 0;
        }
    }
}
