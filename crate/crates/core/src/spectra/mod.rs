//! Determinant and permanent spectra of matrices with entries in a set `A ⊆ F_p`.
//!
//! `det_spectrum(A, d)` is the set `X_d` of all determinants of `d x d`
//! matrices over `A` (its size is `f_d(A)`), optionally with the counts
//! `D_d(A, t)`. `per_spectrum` is the permanent analogue (`g_d(A)`,
//! `P_d(A, t)`).

mod enumerate;
mod matrix;

pub use enumerate::{
    det_spectrum, diff_det_spectrum_f2, diff_per_spectrum_g2, per_spectrum, spectrum, SpectrumKind,
    SpectrumOptions, SpectrumResult, DEFAULT_BUDGET,
};
pub use matrix::{det_value, per_value, MatrixView, MAX_DIM, MIN_DIM};
