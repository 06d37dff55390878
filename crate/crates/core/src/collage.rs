//! Closed-form fitting of the vertical scalings by minimising the discrete
//! collage distance `Σ_m (w_m − (Φg)(z_m))²`, where `g` is the
//! nearest-neighbour extension of the data.
//!
//! On segment `i` the collage residual is `w − α_i + d_i B_i` with
//! `B_i = β_i − g∘γ_i`, a quadratic in `d_i` alone, so each segment has the
//! independent minimiser
//!
//! ```text
//! d_i = Σ (α_i(z_m) − w_m) B_i(z_m) / Σ B_i(z_m)²
//! ```
//!
//! summed over the samples of the segment. Samples are assigned to segments
//! half-open, `[x_{i-1}, x_i)`, with the last segment closed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{build_model, FifModel, Knots};
use crate::series::Series;

pub const DEFAULT_D_MAX: f64 = 0.99;

/// Relative threshold below which a segment's denominator counts as zero.
pub const DENOMINATOR_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    /// Largest admissible `|d_i|`; larger solutions are clamped.
    pub d_max: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            d_max: DEFAULT_D_MAX,
        }
    }
}

impl FitOptions {
    pub fn with_d_max(d_max: f64) -> Result<Self> {
        if !(d_max > 0.0 && d_max < 1.0) {
            return Err(Error::InvalidDMax(d_max));
        }
        Ok(Self { d_max })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub d: Vec<f64>,
    pub clamped: Vec<bool>,
    pub degenerate: Vec<bool>,
    /// `Σ_m (w_m − (Φg)(z_m))²` at the reported `d`.
    pub collage_rss: f64,
    pub samples: usize,
    pub contraction_factor: f64,
    /// `sqrt(collage_rss / M) / (1 − contraction_factor)`.
    pub collage_bound: f64,
}

impl FitReport {
    pub fn collage_rms(&self) -> f64 {
        (self.collage_rss / self.samples as f64).sqrt()
    }

    pub fn any_clamped(&self) -> bool {
        self.clamped.iter().any(|&c| c)
    }

    pub fn any_flagged(&self) -> bool {
        self.any_clamped() || self.degenerate.iter().any(|&c| c)
    }

    pub fn model(&self, knots: Knots) -> Result<FifModel> {
        build_model(knots, &self.d)
    }
}

/// Per-sample pieces of the collage residual on one segment:
/// `(α_i(z) − w, B_i(z))`.
fn segment_terms<'a>(
    series: &'a Series,
    knots: &'a Knots,
    segment: usize,
    range: std::ops::Range<usize>,
) -> impl Iterator<Item = (f64, f64)> + 'a {
    let z = &series.abscissae()[range.clone()];
    let w = &series.values()[range];
    z.iter().zip(w).map(move |(&z, &w)| {
        let (alpha, beta, gamma) = knots.alpha_beta_gamma_at(segment, z);
        (alpha - w, beta - series.nearest(gamma))
    })
}

fn check_knots(series: &Series, knots: &Knots) -> Result<Vec<std::ops::Range<usize>>> {
    let positions = series.knot_positions(knots)?;
    Ok(Series::segment_ranges(&positions))
}

/// Fit every `d_i` in closed form.
pub fn fit_d_discrete(series: &Series, knots: &Knots, options: &FitOptions) -> Result<FitReport> {
    let ranges = check_knots(series, knots)?;
    let m = series.len();
    let max_w = series.values().iter().fold(0.0f64, |acc, w| acc.max(w.abs()));
    let max_y = knots.points().iter().fold(0.0f64, |acc, p| acc.max(p.y.abs()));
    let eps = DENOMINATOR_EPS * m as f64 * (max_w + max_y).powi(2);

    let n = knots.segments();
    let mut d = Vec::with_capacity(n);
    let mut clamped = Vec::with_capacity(n);
    let mut degenerate = Vec::with_capacity(n);
    for (i, range) in ranges.iter().enumerate() {
        let (num, den) = segment_terms(series, knots, i + 1, range.clone())
            .fold((0.0, 0.0), |(num, den), (r, b)| (num + r * b, den + b * b));
        if den <= eps {
            d.push(0.0);
            clamped.push(false);
            degenerate.push(true);
            continue;
        }
        let raw = num / den;
        degenerate.push(false);
        if raw.abs() > options.d_max {
            d.push(options.d_max.copysign(raw));
            clamped.push(true);
        } else {
            d.push(raw);
            clamped.push(false);
        }
    }

    let collage_rss = residuals_over(series, knots, &ranges, &d).iter().sum::<f64>();
    let contraction_factor = d.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let collage_bound = (collage_rss / m as f64).sqrt() / (1.0 - contraction_factor);
    Ok(FitReport {
        d,
        clamped,
        degenerate,
        collage_rss,
        samples: m,
        contraction_factor,
        collage_bound,
    })
}

/// Fit and build the resulting model in one step.
pub fn fit_model(series: &Series, knots: &Knots, options: &FitOptions) -> Result<(FifModel, FitReport)> {
    let report = fit_d_discrete(series, knots, options)?;
    let model = report.model(knots.clone())?;
    Ok((model, report))
}

fn residuals_over(
    series: &Series,
    knots: &Knots,
    ranges: &[std::ops::Range<usize>],
    d: &[f64],
) -> Vec<f64> {
    ranges
        .iter()
        .zip(d)
        .enumerate()
        .map(|(i, (range, &di))| {
            segment_terms(series, knots, i + 1, range.clone())
                .map(|(r, b)| {
                    // w − Φg = −(α − w) + d·B
                    let e = di * b - r;
                    e * e
                })
                .sum()
        })
        .collect()
}

/// Collage residual of each segment for arbitrary `d`.
pub fn segment_collage_residuals(series: &Series, knots: &Knots, d: &[f64]) -> Result<Vec<f64>> {
    if d.len() != knots.segments() {
        return Err(Error::LengthMismatch {
            expected: knots.segments(),
            got: d.len(),
        });
    }
    let ranges = check_knots(series, knots)?;
    Ok(residuals_over(series, knots, &ranges, d))
}

/// `Σ_m (w_m − (Φg)(z_m))²` for arbitrary `d`.
pub fn collage_residual(series: &Series, knots: &Knots, d: &[f64]) -> Result<f64> {
    Ok(segment_collage_residuals(series, knots, d)?.iter().sum())
}
