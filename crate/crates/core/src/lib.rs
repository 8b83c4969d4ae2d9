//! Distinct determinants and permanents of matrices whose entries come from a
//! subset `A` of a prime field `F_p`.
//!
//! The crate computes the spectra `X_d = {Det(M) : M ∈ M_d(A)}` and their
//! permanent analogues exactly when the enumeration fits a budget, builds
//! cheap certified subsets of them from explicit matrix constructions, and
//! checks the sum-product and incidence inequalities those constructions rest
//! on against measured set sizes.
//!
//! ```
//! use fpspectra::{det_spectrum, make_field, FpSet, SpectrumOptions};
//!
//! let f = make_field(5).unwrap();
//! let a = FpSet::from_elements(f, &[0, 1]).unwrap();
//! let x2 = det_spectrum(&a, 2, &SpectrumOptions::counted()).unwrap();
//! assert_eq!(x2.values.to_vec(), [0, 1, 4]);
//! assert_eq!(x2.count(0), Some(10));
//! ```

pub mod constructions;
pub mod error;
pub mod field;
pub mod fset;
pub mod harness;
pub mod incidence;
pub mod parallel;
pub mod rng;
pub mod setexpr;
pub mod spectra;

pub use constructions::{
    block_lift, chain_certificate, lastrow_lift, per_rank_structured, Certificate,
};
pub use error::{Error, Result};
pub use field::{make_field, FieldCtx};
pub use fset::{gen_set, parse_set_spec, FpSet, SetFamily, SetFamilySpec};
pub use setexpr::{eval_expr, parse_expr, Env, Expr};
pub use spectra::{
    det_spectrum, det_value, diff_det_spectrum_f2, diff_per_spectrum_g2, per_spectrum, per_value,
    MatrixView, SpectrumKind, SpectrumOptions, SpectrumResult,
};
