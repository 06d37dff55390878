//! Approximation errors and the fractal-versus-quadratic comparison.

use serde::{Deserialize, Serialize};

use crate::collage::{fit_d_discrete, FitOptions, FitReport};
use crate::error::Result;
use crate::ifs::{FifModel, Knots};
use crate::quadratic::{fit_quadratic, QuadModel, QuadReport};
use crate::series::Series;

/// Anything that can be evaluated on the abscissae of a series.
pub trait Approximant {
    fn approximate(&self, x: f64) -> Result<f64>;
}

/// Fractal model evaluated at a fixed recursion depth.
#[derive(Clone, Copy, Debug)]
pub struct AtDepth<'a> {
    pub model: &'a FifModel,
    pub depth: usize,
}

impl Approximant for AtDepth<'_> {
    fn approximate(&self, x: f64) -> Result<f64> {
        self.model.evaluate(x, self.depth)
    }
}

impl Approximant for FifModel {
    fn approximate(&self, x: f64) -> Result<f64> {
        self.value(x)
    }
}

impl Approximant for QuadModel {
    fn approximate(&self, x: f64) -> Result<f64> {
        self.evaluate(x)
    }
}

/// A series approximates itself through its nearest-neighbour extension.
impl Approximant for Series {
    fn approximate(&self, x: f64) -> Result<f64> {
        Ok(self.nearest(x))
    }
}

/// `sqrt(Σ_m (h(z_m) − w_m)² / M)`.
pub fn rms_error<H: Approximant + ?Sized>(h: &H, series: &Series) -> Result<f64> {
    let mut sum = 0.0;
    for (z, w) in series.iter() {
        let e = h.approximate(z)? - w;
        sum += e * e;
    }
    Ok((sum / series.len() as f64).sqrt())
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CompareOptions {
    pub fit: FitOptions,
    /// Recursion depth for the fractal model; `None` uses the model default.
    pub depth: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub dataset: String,
    pub fractal_rms: f64,
    pub quadratic_rms: f64,
    pub collage_rms: f64,
    pub collage_bound: f64,
    pub contraction_factor: f64,
    pub eval_depth: usize,
    pub clamped: bool,
}

impl ComparisonRow {
    /// Whether the fractal error respects the collage bound. Only meaningful
    /// when nothing was clamped.
    pub fn within_collage_bound(&self) -> bool {
        self.fractal_rms <= self.collage_bound
    }
}

/// Full result of [`compare`], including both fitted models.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub row: ComparisonRow,
    pub fractal: FifModel,
    pub fit: FitReport,
    pub quadratic: QuadModel,
    pub quadratic_fit: QuadReport,
}

/// Fit both models on the same knots and measure their RMS errors.
pub fn compare(
    name: &str,
    series: &Series,
    knots: &Knots,
    options: &CompareOptions,
) -> Result<Comparison> {
    let fit = fit_d_discrete(series, knots, &options.fit)?;
    let fractal = fit.model(knots.clone())?;
    let depth = options.depth.unwrap_or_else(|| fractal.default_depth());
    let fractal_rms = rms_error(
        &AtDepth {
            model: &fractal,
            depth,
        },
        series,
    )?;
    let (quadratic, quadratic_fit) = fit_quadratic(series, knots)?;
    let quadratic_rms = rms_error(&quadratic, series)?;
    Ok(Comparison {
        row: ComparisonRow {
            dataset: name.to_owned(),
            fractal_rms,
            quadratic_rms,
            collage_rms: fit.collage_rms(),
            collage_bound: fit.collage_bound,
            contraction_factor: fit.contraction_factor,
            eval_depth: depth,
            clamped: fit.any_clamped(),
        },
        fractal,
        fit,
        quadratic,
        quadratic_fit,
    })
}
