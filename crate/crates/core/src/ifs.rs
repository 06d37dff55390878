//! Affine iterated function systems whose attractor is the graph of a
//! continuous function through a set of interpolation points.
//!
//! Every segment `[x_{i-1}, x_i]` owns one affine map of the plane
//!
//! ```text
//! A_i(x, y) = (a_i x + e_i, c_i x + d_i y + f_i)
//! ```
//!
//! pinned so that the chord endpoints `(x_0, y_0)` and `(x_N, y_N)` land on
//! `(x_{i-1}, y_{i-1})` and `(x_i, y_i)`. The vertical scalings `d_i` are the
//! only free parameters. Acting on functions, the maps induce the operator
//!
//! ```text
//! (Φg)(x) = α_i(x) − d_i (β_i(x) − g(γ_i(x)))     for x in segment i
//! ```
//!
//! which is a contraction with factor `max |d_i|` whenever every `|d_i| < 1`.
//! Its fixed point is the fractal interpolation function `g*`.
//!
//! Internally all segment-local quantities are computed through the local
//! coordinate `t = (x − x_{i-1}) / (x_i − x_{i-1})` and convex combinations,
//! which makes knot values come out bit-exact at every recursion depth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Depth cap for [`default_depth`].
pub const MAX_DEFAULT_DEPTH: usize = 48;

/// Target accuracy factor used to choose the default recursion depth.
pub const DEFAULT_DEPTH_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

#[inline]
pub(crate) fn lerp(p: f64, q: f64, t: f64) -> f64 {
    p * (1.0 - t) + q * t
}

/// Ordered interpolation points `(x_0, y_0), …, (x_N, y_N)` with `N ≥ 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Knots {
    points: Vec<Point>,
}

impl Knots {
    /// Minimum number of points (two segments).
    pub const MIN_POINTS: usize = 3;

    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < Self::MIN_POINTS {
            return Err(Error::TooFewKnots {
                min: Self::MIN_POINTS,
                got: points.len(),
            });
        }
        for (index, p) in points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::NonFinite { index });
            }
        }
        for (index, w) in points.windows(2).enumerate() {
            if w[1].x <= w[0].x {
                return Err(Error::NonIncreasingKnots {
                    index: index + 1,
                    value: w[1].x,
                });
            }
        }
        Ok(Self { points })
    }

    pub fn from_xy(xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                expected: xs.len(),
                got: ys.len(),
            });
        }
        Self::new(xs.iter().zip(ys).map(|(&x, &y)| Point::new(x, y)).collect())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Number of segments `N`.
    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    /// Left end of the domain, `x_0`.
    pub fn a(&self) -> f64 {
        self.points[0].x
    }

    /// Right end of the domain, `x_N`.
    pub fn b(&self) -> f64 {
        self.points[self.points.len() - 1].x
    }

    pub fn first(&self) -> Point {
        self.points[0]
    }

    pub fn last(&self) -> Point {
        self.points[self.points.len() - 1]
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a() && x <= self.b()
    }

    /// 1-based index of the segment containing `x`, using half-open
    /// segments `[x_{i-1}, x_i)` with the last one closed at `b`.
    ///
    /// `x` must lie in `[a, b]`.
    pub fn segment_of(&self, x: f64) -> usize {
        let n = self.segments();
        // number of interior knots <= x
        let interior = &self.points[1..n];
        let k = interior.partition_point(|p| p.x <= x);
        k + 1
    }

    /// Local coordinate of `x` in segment `i` (1-based).
    #[inline]
    pub(crate) fn local(&self, i: usize, x: f64) -> f64 {
        let lo = self.points[i - 1].x;
        let hi = self.points[i].x;
        (x - lo) / (hi - lo)
    }

    /// The chord through the two endpoint knots, the base function of the
    /// recursion.
    pub fn chord(&self, x: f64) -> f64 {
        let s = (x - self.a()) / (self.b() - self.a());
        lerp(self.first().y, self.last().y, s)
    }

    /// Piecewise-linear interpolant of the knots.
    pub fn linear_interpolant(&self, x: f64) -> f64 {
        let i = self.segment_of(x);
        let t = self.local(i, x);
        lerp(self.points[i - 1].y, self.points[i].y, t)
    }

    fn check_segment(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.segments() {
            return Err(Error::SegmentOutOfRange {
                index: i,
                segments: self.segments(),
            });
        }
        Ok(())
    }

    /// `(α_i, β_i, γ_i)` at `x`, evaluated through the local coordinate.
    #[inline]
    pub(crate) fn alpha_beta_gamma_at(&self, i: usize, x: f64) -> (f64, f64, f64) {
        let t = self.local(i, x);
        let first = self.first();
        let last = self.last();
        (
            lerp(self.points[i - 1].y, self.points[i].y, t),
            lerp(first.y, last.y, t),
            lerp(first.x, last.x, t),
        )
    }
}

/// An affine function `x ↦ slope·x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineFn {
    pub slope: f64,
    pub intercept: f64,
}

impl AffineFn {
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// The three affine pieces of the segment-wise form of `Φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentAffines {
    /// Line through `(x_{i-1}, y_{i-1})` and `(x_i, y_i)`.
    pub alpha: AffineFn,
    /// Line taking `x_{i-1} ↦ y_0` and `x_i ↦ y_N`.
    pub beta: AffineFn,
    /// Inverse of `u_i`, mapping `[x_{i-1}, x_i]` onto `[a, b]`.
    pub gamma: AffineFn,
}

/// Slope/intercept form of `α_i`, `β_i`, `γ_i` for segment `i` (1-based).
pub fn alpha_beta_gamma(knots: &Knots, i: usize) -> Result<SegmentAffines> {
    knots.check_segment(i)?;
    let p = knots.points();
    let (x0, y0) = (p[i - 1].x, p[i - 1].y);
    let (x1, y1) = (p[i].x, p[i].y);
    let first = knots.first();
    let last = knots.last();
    let (a, b) = (first.x, last.x);
    let h = x1 - x0;
    Ok(SegmentAffines {
        alpha: AffineFn {
            slope: (y1 - y0) / h,
            intercept: (x1 * y0 - x0 * y1) / h,
        },
        beta: AffineFn {
            slope: (last.y - first.y) / h,
            intercept: (x1 * first.y - x0 * last.y) / h,
        },
        gamma: AffineFn {
            slope: (b - a) / h,
            intercept: (x1 * a - x0 * b) / h,
        },
    })
}

/// Coefficients of one affine map `A_i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentMap {
    pub a: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl SegmentMap {
    pub fn apply(&self, p: Point) -> Point {
        Point::new(self.a * p.x + self.e, self.c * p.x + self.d * p.y + self.f)
    }

    /// `u_i(x) = a_i x + e_i`.
    pub fn u(&self, x: f64) -> f64 {
        self.a * x + self.e
    }

    /// `p_i(x) = c_i x + f_i`.
    pub fn p(&self, x: f64) -> f64 {
        self.c * x + self.f
    }
}

/// Knots plus one contractive affine map per segment.
#[derive(Clone, Debug, PartialEq)]
pub struct FifModel {
    knots: Knots,
    segments: Vec<SegmentMap>,
}

/// Build the IFS for `knots` with vertical scalings `d` (one per segment).
pub fn build_model(knots: Knots, d: &[f64]) -> Result<FifModel> {
    let n = knots.segments();
    if d.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: d.len(),
        });
    }
    for (index, &di) in d.iter().enumerate() {
        if !di.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if di.abs() >= 1.0 {
            return Err(Error::NonContractive { index, value: di });
        }
    }

    let first = knots.first();
    let last = knots.last();
    let (a, b) = (first.x, last.x);
    let width = b - a;
    let segments = knots
        .points()
        .windows(2)
        .zip(d)
        .map(|(w, &di)| {
            let (prev, next) = (w[0], w[1]);
            SegmentMap {
                a: (next.x - prev.x) / width,
                c: (next.y - prev.y - di * (last.y - first.y)) / width,
                d: di,
                e: (b * prev.x - a * next.x) / width,
                f: (b * prev.y - a * next.y - di * (b * first.y - a * last.y)) / width,
            }
        })
        .collect();
    Ok(FifModel { knots, segments })
}

/// Smallest `D` with `factor^D < 1e-9`, capped at [`MAX_DEFAULT_DEPTH`].
pub fn default_depth(factor: f64) -> usize {
    let factor = factor.abs();
    (0..=MAX_DEFAULT_DEPTH)
        .find(|&depth| factor.powi(depth as i32) < DEFAULT_DEPTH_TOLERANCE)
        .unwrap_or(MAX_DEFAULT_DEPTH)
}

impl FifModel {
    pub fn knots(&self) -> &Knots {
        &self.knots
    }

    pub fn segments(&self) -> &[SegmentMap] {
        &self.segments
    }

    pub fn scalings(&self) -> Vec<f64> {
        self.segments.iter().map(|s| s.d).collect()
    }

    /// `max_i |d_i|`.
    pub fn contraction_factor(&self) -> f64 {
        self.segments.iter().fold(0.0, |m, s| m.max(s.d.abs()))
    }

    pub fn default_depth(&self) -> usize {
        default_depth(self.contraction_factor())
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if !self.knots.contains(x) {
            return Err(Error::OutOfDomain {
                x,
                a: self.knots.a(),
                b: self.knots.b(),
            });
        }
        Ok(())
    }

    /// Pre-fractal `Φ^depth(b₀)` at `x`, where `b₀` is the endpoint chord.
    ///
    /// The error against `g*` is at most `max|d_i|^depth · ‖b₀ − g*‖_∞`.
    pub fn evaluate(&self, x: f64, depth: usize) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.evaluate_unchecked(x, depth))
    }

    /// [`evaluate`](Self::evaluate) at [`default_depth`](Self::default_depth).
    pub fn value(&self, x: f64) -> Result<f64> {
        self.evaluate(x, self.default_depth())
    }

    fn evaluate_unchecked(&self, x: f64, depth: usize) -> f64 {
        // Descend to the base function, then unwind from the innermost level
        // so that knots evaluate exactly.
        let mut path = Vec::with_capacity(depth);
        let mut x = x;
        for _ in 0..depth {
            let i = self.knots.segment_of(x);
            let (alpha, beta, gamma) = self.knots.alpha_beta_gamma_at(i, x);
            path.push((alpha, beta, self.segments[i - 1].d));
            x = gamma;
        }
        path.iter()
            .rev()
            .fold(self.knots.chord(x), |g, &(alpha, beta, d)| {
                alpha - d * (beta - g)
            })
    }

    /// One application of the Hutchinson operator to a sampled function.
    ///
    /// `g ∘ γ_i` is resampled by linear interpolation between grid samples.
    pub fn hutchinson_apply(&self, g: &SampledFunction) -> Result<SampledFunction> {
        if g.a() != self.knots.a() || g.b() != self.knots.b() {
            return Err(Error::GridMismatch {
                a: self.knots.a(),
                b: self.knots.b(),
            });
        }
        let values = g
            .grid
            .iter()
            .map(|&x| {
                let i = self.knots.segment_of(x);
                let (alpha, beta, gamma) = self.knots.alpha_beta_gamma_at(i, x);
                alpha - self.segments[i - 1].d * (beta - g.interpolate(gamma))
            })
            .collect();
        Ok(SampledFunction {
            grid: g.grid.clone(),
            values,
        })
    }

    /// Sample `g*` on a uniform grid, apply `Φ` once and return the sup-norm
    /// change. Zero (up to grid resampling error) at the fixed point.
    pub fn fixed_point_residual(&self, resolution: usize, depth: usize) -> Result<f64> {
        let sampled = SampledFunction::uniform(self.knots.a(), self.knots.b(), resolution, |x| {
            self.evaluate_unchecked(x, depth)
        })?;
        let image = self.hutchinson_apply(&sampled)?;
        Ok(sampled.sup_distance(&image))
    }
}

/// A function on `[a, b]` represented by samples on a strictly increasing
/// grid that includes both endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if grid.len() < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::GridMismatch {
                a: grid.first().copied().unwrap_or(f64::NAN),
                b: grid.last().copied().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { grid, values })
    }

    /// `resolution` equally spaced samples of `f`, endpoints exact.
    pub fn uniform(
        a: f64,
        b: f64,
        resolution: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if resolution < 2 || b <= a {
            return Err(Error::GridMismatch { a, b });
        }
        let last = (resolution - 1) as f64;
        let grid: Vec<f64> = (0..resolution)
            .map(|k| lerp(a, b, k as f64 / last))
            .collect();
        let values = grid.iter().map(|&x| f(x)).collect();
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn a(&self) -> f64 {
        self.grid[0]
    }

    pub fn b(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    /// Linear interpolation between samples, clamped to the end values.
    pub fn interpolate(&self, x: f64) -> f64 {
        let n = self.grid.len();
        if x <= self.grid[0] {
            return self.values[0];
        }
        if x >= self.grid[n - 1] {
            return self.values[n - 1];
        }
        let j = self.grid.partition_point(|&g| g <= x);
        let (x0, x1) = (self.grid[j - 1], self.grid[j]);
        lerp(self.values[j - 1], self.values[j], (x - x0) / (x1 - x0))
    }

    /// Max absolute difference of values; both functions must share a grid.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.grid.len(), other.grid.len());
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (p, q)| m.max((p - q).abs()))
    }

    /// Trapezoid-rule L² distance; both functions must share a grid.
    pub fn l2_distance(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.grid.len(), other.grid.len());
        let sq: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(p, q)| (p - q) * (p - q))
            .collect();
        self.grid
            .windows(2)
            .zip(sq.windows(2))
            .map(|(x, s)| 0.5 * (x[1] - x[0]) * (s[0] + s[1]))
            .sum::<f64>()
            .sqrt()
    }
}
