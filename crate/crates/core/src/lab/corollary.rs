//! Decay of the block means with `φ(u) = u` and dyadic blocks as `m` grows.

use rayon::prelude::*;

use super::{loglog_slope, SweepSpec};
use crate::corpus::{by_name, PointClass};
use crate::error::Result;
use crate::strong_means::{deviations, h_lambda_phi_from_deviations, theorem3_scheme, Blocks, GrowthFunction};

/// `H(m_last)` must fall below this fraction of `H(m_first)`.
pub const COROLLARY_DECAY_FACTOR: f64 = 0.1;

/// Block index at which the decay is measured from.
pub const COROLLARY_M_FIRST: usize = 4;

/// Last block index of the decay run.
pub const COROLLARY_M_LAST: usize = 9;

/// Means at or below this are treated as zero.
const ZERO_MEAN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorollaryStatus {
    Converged,
    /// All means are numerically zero.
    DegenerateConverged,
    NotConverged,
    /// Not a point where decay is claimed; reported only.
    Diagnostic,
}

impl CorollaryStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CorollaryStatus::Converged => "converged",
            CorollaryStatus::DegenerateConverged => "degenerate-converged",
            CorollaryStatus::NotConverged => "not-converged",
            CorollaryStatus::Diagnostic => "diagnostic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryRow {
    pub function: String,
    pub x: f64,
    pub class: PointClass,
    /// `(m, H)` for `m = 1..=COROLLARY_M_LAST`.
    pub means: Vec<(usize, f64)>,
    /// `H(m_last) / H(m_first)`.
    pub decay_ratio: f64,
    /// Slope of `ln H` against `ln N_m` over `m_first..=m_last`.
    pub decay_slope: Option<f64>,
    pub status: CorollaryStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryReport {
    pub rows: Vec<CorollaryRow>,
    pub converged: bool,
}

impl CorollaryReport {
    pub fn failures(&self) -> impl Iterator<Item = &CorollaryRow> {
        self.rows.iter().filter(|r| r.status == CorollaryStatus::NotConverged)
    }
}

/// Runs the decay check over the functions and points of a sweep.
pub fn verify_corollary(sweep: &SweepSpec) -> Result<CorollaryReport> {
    let blocks = Blocks::dyadic(COROLLARY_M_LAST + 1);
    let kmax = blocks.block(COROLLARY_M_LAST)?.1;
    let phi = GrowthFunction::identity();
    let schemes = (1..=COROLLARY_M_LAST)
        .map(|m| theorem3_scheme(m, blocks.clone()))
        .collect::<Result<Vec<_>>>()?;

    let mut cases = Vec::new();
    for name in &sweep.functions {
        let f = by_name(name)?;
        for &x in &sweep.points {
            cases.push((f, x));
        }
    }
    let mut rows = cases
        .par_iter()
        .map(|&(f, x)| {
            let series = f.analytic_coefficients(kmax).expect("closed-form coefficients");
            let dev = deviations(f, &series, x, kmax)?;
            let means = schemes
                .iter()
                .enumerate()
                .map(|(i, s)| Ok((i + 1, h_lambda_phi_from_deviations(&dev, s, &phi, (i + 1) as f64)?.value)))
                .collect::<Result<Vec<_>>>()?;
            let h = |m: usize| means[m - 1].1;
            let decay_ratio = h(COROLLARY_M_LAST) / h(COROLLARY_M_FIRST);
            let pts: Vec<(f64, f64)> = (COROLLARY_M_FIRST..=COROLLARY_M_LAST)
                .map(|m| Ok((blocks.n(m as i64)? as f64, h(m))))
                .collect::<Result<_>>()?;
            let decay_slope = loglog_slope(&pts);
            let class = f.classify(x);
            let status = if !matches!(class, PointClass::SmoothPoint | PointClass::HolderCusp(_) | PointClass::TrigPolynomialEverywhere) {
                CorollaryStatus::Diagnostic
            } else if h(COROLLARY_M_FIRST) <= ZERO_MEAN && h(COROLLARY_M_LAST) <= ZERO_MEAN {
                CorollaryStatus::DegenerateConverged
            } else if decay_ratio < COROLLARY_DECAY_FACTOR && decay_slope.is_some_and(|s| s < 0.0) {
                CorollaryStatus::Converged
            } else {
                CorollaryStatus::NotConverged
            };
            Ok(CorollaryRow {
                function: f.name().to_string(),
                x,
                class,
                means,
                decay_ratio,
                decay_slope,
                status,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.function.cmp(&b.function).then(a.x.total_cmp(&b.x)));
    let converged = rows.iter().all(|r| r.status != CorollaryStatus::NotConverged);
    Ok(CorollaryReport { rows, converged })
}
