//! Certified subsets of determinant and permanent spectra.
//!
//! Each construction fixes part of a matrix so that its determinant or
//! permanent factors into a set expression in `A`; the expression's value set
//! is then contained in the spectrum. All of them are lower-bound certificates
//! on `f_d(A)` or `g_d(A)` that cost a handful of set operations instead of an
//! `|A|^{d²}` enumeration.
//!
//! * last-row lift: copying the first column into the last one in the top
//!   `d-1` rows makes `Det(M) = (x_d - x_1) · Det(top-left block)`, so
//!   `(A - A) · X_{d-1} ⊆ X_d`.
//! * block lift (even `d`): subtracting rows 3, 4 from rows 1, 2 isolates a
//!   2x2 block with entries in `A - A`, giving
//!   `X_{d-2} · ((A-A)(A-A) - (A-A)(A-A)) ⊆ X_d`.
//! * rank-structured permanent: constant top rows `x_1, …, x_{d-1}` give
//!   `Per(M) = (d-1)! · x_1⋯x_{d-1} · (x_{d1} + … + x_{dd})`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fset::FpSet;
use crate::setexpr::{eval_expr_with_stats, parse_expr, Env};
use crate::spectra::{det_spectrum, per_spectrum, SpectrumKind, SpectrumOptions, MAX_DIM};

/// `(A-A)(A-A) - (A-A)(A-A)`: the 2x2 determinants with entries in `A - A`.
const BLOCK: &str = "(A-A)*(A-A) - (A-A)*(A-A)";

#[derive(Debug, Clone)]
pub struct Certificate {
    pub target: SpectrumKind,
    pub d: usize,
    /// Values certified to lie in the spectrum.
    pub subset: FpSet,
    /// Set expression whose value is `subset` under `bindings`.
    pub formula: String,
    pub bindings: Env,
    /// Work spent: matrices enumerated for exact bases plus `|S|·|T|` per set operation.
    pub cost: u64,
    /// The construction collapsed to `{0}` because `(d-1)! ≡ 0 mod p`.
    pub degenerate: bool,
}

impl Certificate {
    /// Re-evaluates `formula` under `bindings` from scratch.
    pub fn reevaluate(&self) -> Result<FpSet> {
        let ctx = self.subset.ctx();
        Ok(eval_expr_with_stats(&parse_expr(&self.formula)?, &self.bindings, ctx)?.0)
    }

    pub fn card(&self) -> usize {
        self.subset.len()
    }
}

/// Summary row for printing and JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub target: SpectrumKind,
    pub d: usize,
    pub p: u64,
    pub card: usize,
    pub formula: String,
    pub cost: u64,
    pub degenerate: bool,
    pub subset: Vec<u64>,
}

impl From<&Certificate> for CertificateReport {
    fn from(c: &Certificate) -> Self {
        CertificateReport {
            target: c.target,
            d: c.d,
            p: c.subset.ctx().p(),
            card: c.card(),
            formula: c.formula.clone(),
            cost: c.cost,
            degenerate: c.degenerate,
            subset: c.subset.to_vec(),
        }
    }
}

fn build(
    target: SpectrumKind,
    d: usize,
    formula: String,
    bindings: Env,
    base_cost: u64,
) -> Result<Certificate> {
    let ctx = bindings.values().next().ok_or(Error::EmptySet)?.ctx();
    let (subset, stats) = eval_expr_with_stats(&parse_expr(&formula)?, &bindings, ctx)?;
    Ok(Certificate {
        target,
        d,
        subset,
        formula,
        bindings,
        cost: base_cost.saturating_add(stats.pair_ops),
        degenerate: false,
    })
}

fn env(pairs: &[(&str, &FpSet)]) -> Result<Env> {
    let mut out = Env::new();
    for (name, set) in pairs {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        out.insert(name.to_string(), (*set).clone());
    }
    Ok(out)
}

fn check_range(d: usize, min: usize) -> Result<()> {
    if d < min || d > MAX_DIM {
        return Err(Error::DimensionOutOfRange(d));
    }
    Ok(())
}

/// `(A - A) · S` where `S ⊆ X_{d-1}`; certifies a subset of `X_d`.
pub fn lastrow_lift(a: &FpSet, s_prev: &FpSet, d: usize) -> Result<Certificate> {
    check_range(d, 2)?;
    a.check_ctx(s_prev)?;
    build(
        SpectrumKind::Det,
        d,
        "(A-A)*S".into(),
        env(&[("A", a), ("S", s_prev)])?,
        0,
    )
}

/// `S · ((A-A)(A-A) - (A-A)(A-A))` where `S ⊆ X_{d-2}`; certifies a subset of `X_d` for even `d ≥ 4`.
pub fn block_lift(a: &FpSet, s_prev2: &FpSet, d: usize) -> Result<Certificate> {
    if d % 2 == 1 {
        return Err(Error::OddDimension(d));
    }
    check_range(d, 4)?;
    a.check_ctx(s_prev2)?;
    build(
        SpectrumKind::Det,
        d,
        format!("S*({BLOCK})"),
        env(&[("A", a), ("S", s_prev2)])?,
        0,
    )
}

/// `(d-1)! · A^{d-1} · ((d-1)A + A)`: permanents of matrices whose first `d-1`
/// rows are constant.
pub fn per_rank_structured(a: &FpSet, d: usize) -> Result<Certificate> {
    check_range(d, 2)?;
    let ctx = a.ctx();
    let fact = ctx.factorial(d as u64 - 1);
    let scalar = FpSet::singleton(ctx, fact);
    let formula = format!("F*A^{k}*({k}#A + A)", k = d - 1);
    let mut cert = build(
        SpectrumKind::Per,
        d,
        formula,
        env(&[("A", a), ("F", &scalar)])?,
        0,
    )?;
    cert.degenerate = fact == 0;
    Ok(cert)
}

/// Source string of the even-dimension determinant chain `X_2 · D^{(d-2)/2}`.
fn even_chain_formula(d: usize) -> String {
    match d {
        2 => "A*A - A*A".to_string(),
        _ => format!("(A*A - A*A)*({BLOCK})^{}", (d - 2) / 2),
    }
}

/// Lower-bound certificate for the `d`-dimensional spectrum.
///
/// Determinants start from the exact 2x2 spectrum, apply block lifts up to the
/// largest even dimension `≤ d`, and finish odd `d` with one last-row lift.
/// Permanents use the exact 2x2 spectrum for `d = 2` and the rank-structured
/// construction above that. The recorded formula references only `A` (and the
/// factorial scalar `F` for permanents), so the certificate can be
/// re-evaluated without the intermediate sets.
pub fn chain_certificate(a: &FpSet, d: usize, target: SpectrumKind) -> Result<Certificate> {
    check_range(d, 2)?;
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let exact2 = SpectrumOptions::unlimited();
    let base_cost = (a.len() as u64).saturating_pow(4);
    match target {
        SpectrumKind::Per if d == 2 => {
            let g2 = per_spectrum(a, 2, &exact2)?.values;
            Ok(Certificate {
                target,
                d,
                subset: g2,
                formula: "A*A + A*A".into(),
                bindings: env(&[("A", a)])?,
                cost: base_cost,
                degenerate: false,
            })
        }
        SpectrumKind::Per => per_rank_structured(a, d),
        SpectrumKind::Det => {
            let mut current = det_spectrum(a, 2, &exact2)?.values;
            let mut cost = base_cost;
            let even_top = d - d % 2;
            for step in (4..=even_top).step_by(2) {
                let lifted = block_lift(a, &current, step)?;
                cost = cost.saturating_add(lifted.cost);
                current = lifted.subset;
            }
            let mut formula = even_chain_formula(even_top);
            if d % 2 == 1 {
                let lifted = lastrow_lift(a, &current, d)?;
                cost = cost.saturating_add(lifted.cost);
                current = lifted.subset;
                formula = format!("(A-A)*({formula})");
            }
            Ok(Certificate {
                target,
                d,
                subset: current,
                formula,
                bindings: env(&[("A", a)])?,
                cost,
                degenerate: false,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use proptest::prelude::*;

    fn set(p: u64, xs: &[u64]) -> FpSet {
        FpSet::from_elements(make_field(p).unwrap(), xs).unwrap()
    }

    fn exact(a: &FpSet, d: usize, kind: SpectrumKind) -> FpSet {
        crate::spectra::spectrum(a, d, kind, &SpectrumOptions::unlimited())
            .unwrap()
            .values
    }

    #[test]
    fn lastrow_examples() {
        let a = set(5, &[0, 1]);
        let x2 = exact(&a, 2, SpectrumKind::Det);
        let cert = lastrow_lift(&a, &x2, 3).unwrap();
        assert_eq!(cert.subset.to_vec(), [0, 1, 4]);
        assert!(cert.subset.is_subset(&exact(&a, 3, SpectrumKind::Det)));

        assert_eq!(
            lastrow_lift(&set(7, &[3]), &set(7, &[0]), 3)
                .unwrap()
                .subset
                .to_vec(),
            [0]
        );

        let b = set(7, &[1, 2]);
        let cert = lastrow_lift(&b, &exact(&b, 2, SpectrumKind::Det), 3).unwrap();
        assert!(cert.subset.is_full());
    }

    #[test]
    fn block_examples() {
        let a = set(5, &[0, 1]);
        let cert = block_lift(&a, &exact(&a, 2, SpectrumKind::Det), 4).unwrap();
        assert!(cert.subset.is_full());
        assert_eq!(
            block_lift(&set(5, &[2]), &set(5, &[0]), 4)
                .unwrap()
                .subset
                .to_vec(),
            [0]
        );
        assert_eq!(block_lift(&a, &a, 5).unwrap_err(), Error::OddDimension(5));
        assert_eq!(
            block_lift(&a, &a, 2).unwrap_err(),
            Error::DimensionOutOfRange(2)
        );
        assert_eq!(
            lastrow_lift(&a, &FpSet::empty(a.ctx()), 3).unwrap_err(),
            Error::EmptySet
        );
    }

    #[test]
    fn rank_structured_examples() {
        let cert = per_rank_structured(&set(7, &[0, 1]), 3).unwrap();
        assert_eq!(cert.subset.to_vec(), [0, 2, 4, 6]);
        assert!(cert
            .subset
            .is_subset(&exact(&set(7, &[0, 1]), 3, SpectrumKind::Per)));
        assert_eq!(
            per_rank_structured(&set(7, &[1]), 3)
                .unwrap()
                .subset
                .to_vec(),
            [6]
        );
        let degenerate = per_rank_structured(&set(3, &[1, 2]), 4).unwrap();
        assert!(degenerate.degenerate);
        assert_eq!(degenerate.subset.to_vec(), [0]);
        assert!(!cert.degenerate);
    }

    #[test]
    fn chain_shapes() {
        let a = set(13, &[1, 4, 6]);
        let c2 = chain_certificate(&a, 2, SpectrumKind::Det).unwrap();
        assert_eq!(c2.formula, "A*A - A*A");
        assert_eq!(c2.subset, exact(&a, 2, SpectrumKind::Det));
        for d in 2..=7 {
            for kind in [SpectrumKind::Det, SpectrumKind::Per] {
                let c = chain_certificate(&a, d, kind).unwrap();
                assert_eq!(
                    c.reevaluate().unwrap(),
                    c.subset,
                    "d={d} {kind:?} {}",
                    c.formula
                );
            }
        }
        assert_eq!(
            chain_certificate(&a, 5, SpectrumKind::Det).unwrap().formula,
            "(A-A)*((A*A - A*A)*((A-A)*(A-A) - (A-A)*(A-A))^1)"
        );
        assert_eq!(
            chain_certificate(&a, 9, SpectrumKind::Det).unwrap_err(),
            Error::DimensionOutOfRange(9)
        );
    }

    #[test]
    fn chain_contained_in_exact_spectra() {
        for p in [3u64, 5, 7, 11, 13] {
            let f = make_field(p).unwrap();
            for x in 0..p {
                for y in x + 1..p {
                    let a = FpSet::from_reduced(f, [x, y]);
                    for d in 2..=3 {
                        for kind in [SpectrumKind::Det, SpectrumKind::Per] {
                            let cert = chain_certificate(&a, d, kind).unwrap();
                            assert!(
                                cert.subset.is_subset(&exact(&a, d, kind)),
                                "p={p} A={a} d={d} {kind:?}"
                            );
                        }
                    }
                }
            }
        }
        let a = set(5, &[1, 3]);
        let c4 = chain_certificate(&a, 4, SpectrumKind::Det).unwrap();
        assert!(c4.subset.is_subset(&exact(&a, 4, SpectrumKind::Det)));
    }

    proptest! {
        #[test]
        fn chain_is_monotone_in_a(
            p in prop::sample::select(vec![7u64, 11, 31, 101]),
            xs in prop::collection::vec(0u64..101, 1..5),
            extra in prop::collection::vec(0u64..101, 1..3),
            d in 2usize..=6,
        ) {
            let f = make_field(p).unwrap();
            let small = FpSet::from_reduced(f, xs.clone());
            let big = FpSet::from_reduced(f, xs.into_iter().chain(extra));
            for kind in [SpectrumKind::Det, SpectrumKind::Per] {
                let c_small = chain_certificate(&small, d, kind).unwrap();
                let c_big = chain_certificate(&big, d, kind).unwrap();
                prop_assert!(c_small.subset.is_subset(&c_big.subset));
            }
        }
    }
}
