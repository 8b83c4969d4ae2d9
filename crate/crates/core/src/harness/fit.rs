use serde::Serialize;

use super::scan::ExperimentRecord;
use crate::error::{Error, Result};

/// Least-squares fit of `log(measured) = slope · log|A| + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    pub points: usize,
    /// Points whose measurement is a certificate or sample; if nonzero, read
    /// the slope as a lower-bound slope.
    pub lower_bound_points: usize,
}

pub fn estimate_exponent(records: &[ExperimentRecord]) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.measured > 0.0 && r.card_a > 0)
        .map(|r| ((r.card_a as f64).ln(), r.measured.ln()))
        .collect();
    let mut distinct: Vec<usize> = records
        .iter()
        .filter(|r| r.measured > 0.0)
        .map(|r| r.card_a)
        .collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::InsufficientData);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    Ok(ExponentFit {
        slope,
        intercept,
        residual: (sse / n).sqrt(),
        points: pts.len(),
        lower_bound_points: records.iter().filter(|r| !r.exact).count(),
    })
}
