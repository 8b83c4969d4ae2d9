//! Cross-module invariant battery.
//!
//! Every check is seeded and independent of the worker count, so two runs at
//! the same level produce equal reports.

use rand::Rng as _;
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{block_lift, lastrow_lift, per_rank_structured};
use crate::field::FieldCtx;
use crate::fset::{gen_set, FpSet, SetFamilySpec};
use crate::incidence::{count_incidences, GridPoints, LineFamily};
use crate::parallel::with_workers;
use crate::rng::{derive_seed, rng_from_seed, Rng};
use crate::setexpr::{eval_str, Env};
use crate::spectra::{
    det_value, diff_det_spectrum_f2, diff_per_spectrum_g2, per_value, spectrum, MatrixView,
    SpectrumKind, SpectrumOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyLevel {
    Quick,
    Full,
}

impl std::str::FromStr for VerifyLevel {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "quick" => Ok(VerifyLevel::Quick),
            "full" => Ok(VerifyLevel::Full),
            _ => Err(crate::error::Error::ConfigInvalid(format!(
                "unknown verify level '{s}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    /// First failing case, if any.
    pub counterexample: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub level: VerifyLevel,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub workers: Option<usize>,
    /// Negative control: negate one cofactor inside the spectrum enumerator.
    pub cofactor_sign_fault: bool,
}

/// Accumulates cases and keeps the first counterexample.
struct Check {
    name: &'static str,
    cases: u64,
    counterexample: Option<Value>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            cases: 0,
            counterexample: None,
        }
    }

    fn expect(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(witness());
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name.to_string(),
            passed: self.counterexample.is_none(),
            cases: self.cases,
            counterexample: self.counterexample,
        }
    }
}

pub fn run_verify(level: VerifyLevel, opts: VerifyOptions) -> VerifyReport {
    let checks = with_workers(opts.workers, || {
        let v = Verifier {
            level,
            fault: opts.cofactor_sign_fault,
        };
        vec![
            v.matrix_oracle(),
            v.spectrum_oracle(),
            v.conservation(),
            v.prefix_consistency(),
            v.product_identities(),
            v.difference_spectra(),
            v.dilation(),
            v.containment(),
            v.incidence(),
            v.setexpr(),
        ]
    });
    VerifyReport { level, checks }
}

struct Verifier {
    level: VerifyLevel,
    fault: bool,
}

const QUICK_PRIMES: [u64; 5] = [5, 7, 11, 13, 31];

fn field(p: u64) -> FieldCtx {
    FieldCtx::new(p).expect("battery primes are prime")
}

fn small_sets(ctx: FieldCtx, max_card: usize) -> Vec<FpSet> {
    let p = ctx.p();
    let mut out = Vec::new();
    let mut stack: Vec<u64> = Vec::new();
    fn rec(ctx: FieldCtx, next: u64, max_card: usize, stack: &mut Vec<u64>, out: &mut Vec<FpSet>) {
        if !stack.is_empty() {
            out.push(FpSet::from_reduced(ctx, stack.iter().copied()));
        }
        if stack.len() == max_card {
            return;
        }
        for x in next..ctx.p() {
            stack.push(x);
            rec(ctx, x + 1, max_card, stack, out);
            stack.pop();
        }
    }
    if p > 0 {
        rec(ctx, 0, max_card, &mut stack, &mut out);
    }
    out
}

fn random_set(ctx: FieldCtx, size: usize, seed: u64) -> FpSet {
    gen_set(ctx, &SetFamilySpec::random(size, seed)).expect("size within field")
}

fn random_matrix(rng: &mut Rng, ctx: FieldCtx, d: usize) -> MatrixView {
    let entries = (0..d * d).map(|_| rng.gen_range(0..ctx.p())).collect();
    MatrixView::new(ctx, d, entries).expect("valid shape")
}

/// Permutation-sum evaluation; `signed` selects determinant over permanent.
fn leibniz(m: &MatrixView, signed: bool) -> u64 {
    let f = m.ctx();
    let d = m.dim();
    let mut perm: Vec<usize> = (0..d).collect();
    let mut acc = 0;
    fn rec(
        m: &MatrixView,
        f: FieldCtx,
        k: usize,
        perm: &mut Vec<usize>,
        odd: bool,
        signed: bool,
        acc: &mut u64,
    ) {
        let d = perm.len();
        if k == d {
            let term = (0..d).fold(1, |t, i| f.mul(t, m.get(i, perm[i])));
            *acc = if signed && odd {
                f.sub(*acc, term)
            } else {
                f.add(*acc, term)
            };
            return;
        }
        for i in k..d {
            perm.swap(k, i);
            rec(m, f, k + 1, perm, odd ^ (i != k), signed, acc);
            perm.swap(k, i);
        }
    }
    rec(m, f, 0, &mut perm, false, signed, &mut acc);
    acc
}

/// Counts of `Det` or `Per` over every matrix with entries in `a`, by direct enumeration.
fn brute_counts(a: &FpSet, d: usize, kind: SpectrumKind) -> Vec<u64> {
    let ctx = a.ctx();
    let elems = a.to_vec();
    let n = elems.len();
    let mut counts = vec![0u64; ctx.p() as usize];
    let mut idx = vec![0usize; d * d];
    loop {
        let m =
            MatrixView::new(ctx, d, idx.iter().map(|&i| elems[i]).collect()).expect("valid shape");
        let v = match kind {
            SpectrumKind::Det => det_value(&m),
            SpectrumKind::Per => per_value(&m),
        };
        counts[v as usize] += 1;
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            return counts;
        }
    }
}

fn support(ctx: FieldCtx, counts: &[u64]) -> FpSet {
    FpSet::from_reduced(
        ctx,
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(t, _)| t as u64),
    )
}

fn kind_name(kind: SpectrumKind) -> &'static str {
    match kind {
        SpectrumKind::Det => "det",
        SpectrumKind::Per => "per",
    }
}

impl Verifier {
    fn opts(&self, counts: bool) -> SpectrumOptions {
        SpectrumOptions {
            want_counts: counts,
            cofactor_sign_fault: self.fault,
            ..SpectrumOptions::unlimited()
        }
    }

    fn full(&self) -> bool {
        self.level == VerifyLevel::Full
    }

    fn matrix_oracle(&self) -> CheckResult {
        let mut c = Check::new("matrix_oracle");
        let per_case = if self.full() { 2000 } else { 200 };
        for (pi, p) in [7u64, 31, 101].into_iter().enumerate() {
            let ctx = field(p);
            for d in 2..=4 {
                let mut rng = rng_from_seed(derive_seed(0xA11CE, (pi * 8 + d) as u64));
                for _ in 0..per_case {
                    let m = random_matrix(&mut rng, ctx, d);
                    let (det, per) = (det_value(&m), per_value(&m));
                    let (ld, lp) = (leibniz(&m, true), leibniz(&m, false));
                    c.expect(det == ld && per == lp, || {
                        json!({"p": p, "d": d, "entries": m.entries(), "det": det, "leibniz_det": ld, "per": per, "leibniz_per": lp})
                    });
                }
            }
        }
        c.finish()
    }

    fn spectrum_oracle(&self) -> CheckResult {
        let mut c = Check::new("spectrum_oracle");
        for p in QUICK_PRIMES {
            let ctx = field(p);
            let sets: Vec<FpSet> = if p <= 7 {
                small_sets(ctx, 3)
            } else {
                (0..6)
                    .map(|i| random_set(ctx, 2 + i % 2, derive_seed(p, i as u64)))
                    .collect()
            };
            for a in &sets {
                for d in 2..=3 {
                    for kind in [SpectrumKind::Det, SpectrumKind::Per] {
                        let want = brute_counts(a, d, kind);
                        let got = spectrum(a, d, kind, &self.opts(true)).expect("valid input");
                        let ok = got.counts.as_deref() == Some(&want[..])
                            && got.values == support(ctx, &want);
                        c.expect(ok, || {
                            json!({"p": p, "set": a.to_vec(), "d": d, "kind": kind_name(kind),
                                   "values": got.values.to_vec(), "oracle_values": support(ctx, &want).to_vec()})
                        });
                    }
                }
            }
        }
        c.finish()
    }

    fn conservation(&self) -> CheckResult {
        let mut c = Check::new("conservation");
        let mut cases: Vec<(u64, usize, usize)> =
            vec![(5, 2, 2), (7, 3, 2), (31, 3, 3), (13, 2, 4)];
        if self.full() {
            // Around a million matrices each.
            cases.extend([(101, 5, 3), (1009, 4, 3), (31, 2, 4)]);
        }
        for (i, (p, size, d)) in cases.into_iter().enumerate() {
            let ctx = field(p);
            let a = random_set(ctx, size, derive_seed(0xC0, i as u64));
            for kind in [SpectrumKind::Det, SpectrumKind::Per] {
                let r = spectrum(&a, d, kind, &self.opts(true)).expect("valid input");
                let total: u64 = r.counts.as_ref().map_or(0, |v| v.iter().sum());
                let want = (size as u64).pow((d * d) as u32);
                c.expect(total == want && r.exact && r.matrices_enumerated == want, || {
                    json!({"p": p, "set": a.to_vec(), "d": d, "kind": kind_name(kind), "sum": total, "expected": want})
                });
            }
        }
        c.finish()
    }

    /// The pruned values-only enumeration agrees with the support of the counted one.
    fn prefix_consistency(&self) -> CheckResult {
        let mut c = Check::new("prefix_consistency");
        let dims: &[usize] = if self.full() { &[2, 3, 4] } else { &[2, 3] };
        for (i, p) in QUICK_PRIMES.into_iter().enumerate() {
            let ctx = field(p);
            let a = random_set(ctx, 3, derive_seed(0x9F, i as u64));
            for &d in dims {
                for kind in [SpectrumKind::Det, SpectrumKind::Per] {
                    let vals = spectrum(&a, d, kind, &self.opts(false))
                        .expect("valid input")
                        .values;
                    let counted = spectrum(&a, d, kind, &self.opts(true)).expect("valid input");
                    let sup = support(ctx, counted.counts.as_deref().unwrap_or(&[]));
                    c.expect(vals == sup && counted.values == sup, || {
                        json!({"p": p, "set": a.to_vec(), "d": d, "kind": kind_name(kind),
                               "values_mode": vals.to_vec(), "counts_support": sup.to_vec()})
                    });
                }
            }
        }
        c.finish()
    }

    /// `X_2 = AA - AA` and the 2x2 permanent spectrum is `AA + AA`.
    fn product_identities(&self) -> CheckResult {
        let mut c = Check::new("product_identities");
        for p in QUICK_PRIMES {
            let ctx = field(p);
            let sets = if p <= 7 {
                small_sets(ctx, 3)
            } else {
                (0..10)
                    .map(|i| random_set(ctx, 1 + i % 3, derive_seed(p, 100 + i as u64)))
                    .collect()
            };
            for a in sets {
                let env = Env::from([("A".to_string(), a.clone())]);
                for (kind, formula) in [
                    (SpectrumKind::Det, "A*A - A*A"),
                    (SpectrumKind::Per, "A*A + A*A"),
                ] {
                    let want = eval_str(formula, &env, ctx).expect("bound");
                    let got = spectrum(&a, 2, kind, &self.opts(false))
                        .expect("valid input")
                        .values;
                    c.expect(got == want, || {
                        json!({"p": p, "set": a.to_vec(), "kind": kind_name(kind), "spectrum": got.to_vec(), "formula": formula, "formula_value": want.to_vec()})
                    });
                }
            }
        }
        c.finish()
    }

    /// `F_2`, `G_2` against determinants and permanents of `X - Y` over all pairs.
    fn difference_spectra(&self) -> CheckResult {
        let mut c = Check::new("difference_spectra");
        for p in [7u64, 11, 31] {
            let ctx = field(p);
            let sets = if p == 7 {
                small_sets(ctx, 3)
            } else {
                (0..8)
                    .map(|i| random_set(ctx, 2 + i % 2, derive_seed(p, 200 + i as u64)))
                    .collect()
            };
            for a in sets {
                let elems = a.to_vec();
                let n = elems.len();
                let mut dets = FpSet::empty(ctx);
                let mut pers = FpSet::empty(ctx);
                for code in 0..n.pow(8) {
                    let mut k = code;
                    let mut digit = || {
                        let v = elems[k % n];
                        k /= n;
                        v
                    };
                    let entries: Vec<u64> = (0..4)
                        .map(|_| {
                            let (x, y) = (digit(), digit());
                            ctx.sub(x, y)
                        })
                        .collect();
                    let m = MatrixView::new(ctx, 2, entries).expect("valid shape");
                    dets.insert(det_value(&m));
                    pers.insert(per_value(&m));
                }
                let f2 = diff_det_spectrum_f2(&a).expect("non-empty");
                let g2 = diff_per_spectrum_g2(&a).expect("non-empty");
                c.expect(f2 == dets && g2 == pers, || {
                    json!({"p": p, "set": elems, "f2": f2.to_vec(), "oracle_f2": dets.to_vec(), "g2": g2.to_vec(), "oracle_g2": pers.to_vec()})
                });
            }
        }
        c.finish()
    }

    /// `X_d(λA) = λ^d X_d(A)`.
    fn dilation(&self) -> CheckResult {
        let mut c = Check::new("dilation");
        let trials = if self.full() { 60 } else { 20 };
        let mut rng = rng_from_seed(0xD11A);
        for _ in 0..trials {
            let p = QUICK_PRIMES[rng.gen_range(0..QUICK_PRIMES.len())];
            let ctx = field(p);
            let size = rng.gen_range(1..=3);
            let a = random_set(ctx, size, rng.gen());
            let lambda = rng.gen_range(1..p);
            let d = rng.gen_range(2..=3);
            let base = spectrum(&a, d, SpectrumKind::Det, &self.opts(false))
                .expect("valid input")
                .values;
            let scaled = spectrum(&a.dilate(lambda), d, SpectrumKind::Det, &self.opts(false))
                .expect("valid input")
                .values;
            let want = base.dilate(ctx.pow(lambda, d as u64));
            c.expect(scaled == want, || {
                json!({"p": p, "set": a.to_vec(), "lambda": lambda, "d": d, "scaled": scaled.to_vec(), "expected": want.to_vec()})
            });
        }
        c.finish()
    }

    /// Certificates built from oracle spectra must sit inside the enumerated ones.
    fn containment(&self) -> CheckResult {
        let mut c = Check::new("containment");
        let witness =
            |c: &mut Check, name: &str, a: &FpSet, d: usize, cert: &FpSet, spec: &FpSet| {
                let ok = cert.is_subset(spec);
                c.expect(ok, || {
                    let missing: Vec<u64> = cert.iter().filter(|&x| !spec.contains(x)).collect();
                    json!({"construction": name, "p": a.ctx().p(), "set": a.to_vec(), "d": d,
                       "certificate": cert.to_vec(), "spectrum": spec.to_vec(), "missing": missing})
                });
            };
        for p in QUICK_PRIMES {
            let ctx = field(p);
            let sets = if p <= 7 {
                small_sets(ctx, 3)
            } else {
                (0..6)
                    .map(|i| random_set(ctx, 2 + i % 2, derive_seed(p, 300 + i as u64)))
                    .collect()
            };
            for a in &sets {
                let x2 = support(ctx, &brute_counts(a, 2, SpectrumKind::Det));
                let x3 = spectrum(a, 3, SpectrumKind::Det, &self.opts(false))
                    .expect("valid input")
                    .values;
                let lift = lastrow_lift(a, &x2, 3).expect("valid input");
                witness(&mut c, "lastrow_lift", a, 3, &lift.subset, &x3);

                let p3 = spectrum(a, 3, SpectrumKind::Per, &self.opts(false))
                    .expect("valid input")
                    .values;
                let rank = per_rank_structured(a, 3).expect("valid input");
                witness(&mut c, "per_rank_structured", a, 3, &rank.subset, &p3);
            }
        }
        if self.full() {
            for p in [5u64, 7, 11, 13] {
                let ctx = field(p);
                for a in small_sets(ctx, 2).into_iter().filter(|a| a.len() == 2) {
                    let x2 = support(ctx, &brute_counts(&a, 2, SpectrumKind::Det));
                    let x4 = spectrum(&a, 4, SpectrumKind::Det, &self.opts(false))
                        .expect("valid input")
                        .values;
                    let lift = block_lift(&a, &x2, 4).expect("valid input");
                    witness(&mut c, "block_lift", &a, 4, &lift.subset, &x4);
                }
            }
        }
        c.finish()
    }

    fn incidence(&self) -> CheckResult {
        let mut c = Check::new("incidence");
        let trials = if self.full() { 200 } else { 50 };
        let mut rng = rng_from_seed(0x1C1D);
        for _ in 0..trials {
            let p = QUICK_PRIMES[rng.gen_range(0..QUICK_PRIMES.len())];
            let ctx = field(p);
            let pick = |rng: &mut Rng| {
                let size = rng.gen_range(1..=p as usize);
                random_set(ctx, size, rng.gen())
            };
            let (xs, ys, slopes, offsets) = (
                pick(&mut rng),
                pick(&mut rng),
                pick(&mut rng),
                pick(&mut rng),
            );
            let lines = LineFamily::new(&slopes, &offsets).expect("same field");
            let grid = GridPoints::new(xs.clone(), ys.clone()).expect("non-empty");
            let got = count_incidences(&grid, &lines).expect("same field");
            let mut want = 0u64;
            for x in xs.iter() {
                for y in ys.iter() {
                    for s in slopes.iter().filter(|&s| s != 0) {
                        for b in offsets.iter() {
                            want += u64::from(y == ctx.mul(s, ctx.sub(x, b)));
                        }
                    }
                }
            }
            c.expect(got == want, || {
                json!({"p": p, "xs": xs.to_vec(), "ys": ys.to_vec(), "slopes": slopes.to_vec(),
                       "offsets": offsets.to_vec(), "count": got, "naive": want})
            });
        }
        c.finish()
    }

    /// Evaluator against nested loops for the shapes the constructions use.
    fn setexpr(&self) -> CheckResult {
        let mut c = Check::new("setexpr");
        let mut rng = rng_from_seed(0x5E7);
        for _ in 0..40 {
            let p = QUICK_PRIMES[rng.gen_range(0..QUICK_PRIMES.len())];
            let ctx = field(p);
            let a = random_set(ctx, rng.gen_range(1..=3), rng.gen());
            let b = random_set(ctx, rng.gen_range(1..=3), rng.gen());
            let env = Env::from([("A".to_string(), a.clone()), ("B".to_string(), b.clone())]);
            let got = eval_str("(A-B)*(A-B) - A*B + 2#A + B^2", &env, ctx).expect("bound");
            let mut want = FpSet::empty(ctx);
            let (av, bv) = (a.to_vec(), b.to_vec());
            let mut diffs = Vec::new();
            for &x in &av {
                for &y in &bv {
                    diffs.push(ctx.sub(x, y));
                }
            }
            let mut left = FpSet::empty(ctx);
            for &u in &diffs {
                for &v in &diffs {
                    for &x in &av {
                        for &y in &bv {
                            left.insert(ctx.sub(ctx.mul(u, v), ctx.mul(x, y)));
                        }
                    }
                }
            }
            let mut right = FpSet::empty(ctx);
            for &x in &av {
                for &y in &av {
                    for &u in &bv {
                        for &v in &bv {
                            right.insert(ctx.add(ctx.add(x, y), ctx.mul(u, v)));
                        }
                    }
                }
            }
            for l in left.iter() {
                for r in right.iter() {
                    want.insert(ctx.add(l, r));
                }
            }
            c.expect(
                got == want,
                || json!({"p": p, "A": av, "B": bv, "value": got.to_vec(), "naive": want.to_vec()}),
            );
        }
        c.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_passes() {
        let r = run_verify(VerifyLevel::Quick, VerifyOptions::default());
        let bad: Vec<_> = r.failures().collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(r.checks.iter().all(|c| c.cases > 0));
    }

    #[test]
    fn sign_fault_breaks_containment() {
        let r = run_verify(
            VerifyLevel::Quick,
            VerifyOptions {
                workers: Some(2),
                cofactor_sign_fault: true,
            },
        );
        let cont = r.checks.iter().find(|c| c.name == "containment").unwrap();
        assert!(!cont.passed);
        let ce = cont.counterexample.as_ref().unwrap();
        assert!(!ce["missing"].as_array().unwrap().is_empty());
    }

    #[test]
    fn worker_count_does_not_matter() {
        let one = run_verify(
            VerifyLevel::Quick,
            VerifyOptions {
                workers: Some(1),
                ..Default::default()
            },
        );
        let four = run_verify(
            VerifyLevel::Quick,
            VerifyOptions {
                workers: Some(4),
                ..Default::default()
            },
        );
        assert_eq!(one, four);
    }

    #[test]
    fn leibniz_small() {
        let ctx = field(7);
        let m = MatrixView::new(ctx, 2, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(leibniz(&m, true), 5);
        assert_eq!(leibniz(&m, false), 3);
    }
}
