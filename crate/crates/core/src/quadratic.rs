//! Piecewise-quadratic baseline with one fitted scalar per segment.
//!
//! Each segment carries `q_i(x) = k_i x² + r_i x + l_i` constrained to hit
//! both knot values. The constrained family is written as
//! `q_i = L_i + s_i B_i`, with `L_i` the chord through the segment's knots
//! and `B_i(x) = (x − x_{i-1})(x − x_i)`, so `s_i` is a plain 1-D linear
//! least-squares coefficient. `k_i = s_i`; `r_i` and `l_i` follow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{lerp, Knots};
use crate::series::Series;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadCoeffs {
    pub k: f64,
    pub r: f64,
    pub l: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadModel {
    knots: Knots,
    bubble: Vec<f64>,
    coeffs: Vec<QuadCoeffs>,
}

impl QuadModel {
    /// Model from knots and per-segment bubble coefficients `s_i`.
    pub fn new(knots: Knots, bubble: Vec<f64>) -> Result<Self> {
        if bubble.len() != knots.segments() {
            return Err(Error::LengthMismatch {
                expected: knots.segments(),
                got: bubble.len(),
            });
        }
        if let Some(index) = bubble.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let coeffs = knots
            .points()
            .windows(2)
            .zip(&bubble)
            .map(|(w, &s)| {
                let (p, q) = (w[0], w[1]);
                let slope = (q.y - p.y) / (q.x - p.x);
                let intercept = p.y - slope * p.x;
                QuadCoeffs {
                    k: s,
                    r: slope - s * (p.x + q.x),
                    l: intercept + s * p.x * q.x,
                }
            })
            .collect();
        Ok(Self {
            knots,
            bubble,
            coeffs,
        })
    }

    pub fn knots(&self) -> &Knots {
        &self.knots
    }

    pub fn coeffs(&self) -> &[QuadCoeffs] {
        &self.coeffs
    }

    /// Bubble coefficients `s_i` (equal to `k_i`).
    pub fn bubble(&self) -> &[f64] {
        &self.bubble
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !self.knots.contains(x) {
            return Err(Error::OutOfDomain {
                x,
                a: self.knots.a(),
                b: self.knots.b(),
            });
        }
        let i = self.knots.segment_of(x);
        let p = self.knots.points();
        let (lo, hi) = (p[i - 1], p[i]);
        let t = self.knots.local(i, x);
        Ok(lerp(lo.y, hi.y, t) + self.bubble[i - 1] * (x - lo.x) * (x - hi.x))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadReport {
    pub s: Vec<f64>,
    /// Segments without interior samples, left at the chord.
    pub chord_only: Vec<bool>,
    /// Per-segment `Σ (w_m − q_i(z_m))²`.
    pub segment_rss: Vec<f64>,
}

impl QuadReport {
    pub fn any_flagged(&self) -> bool {
        self.chord_only.iter().any(|&c| c)
    }
}

/// Residual sum of one segment for bubble coefficient `s`.
pub fn segment_residual(series: &Series, knots: &Knots, segment: usize, s: f64) -> Result<f64> {
    if segment == 0 || segment > knots.segments() {
        return Err(Error::SegmentOutOfRange {
            index: segment,
            segments: knots.segments(),
        });
    }
    let positions = series.knot_positions(knots)?;
    let range = positions[segment - 1]..positions[segment] + 1;
    Ok(segment_sums(series, knots, segment, range, s).2)
}

/// `(Σ e·B, Σ B², Σ (e − sB)²)` over the segment, `e = w − L`.
fn segment_sums(
    series: &Series,
    knots: &Knots,
    segment: usize,
    range: std::ops::Range<usize>,
    s: f64,
) -> (f64, f64, f64) {
    let p = knots.points();
    let (lo, hi) = (p[segment - 1], p[segment]);
    let z = &series.abscissae()[range.clone()];
    let w = &series.values()[range];
    z.iter()
        .zip(w)
        .fold((0.0, 0.0, 0.0), |(eb, bb, rss), (&z, &w)| {
            let e = w - lerp(lo.y, hi.y, knots.local(segment, z));
            let b = (z - lo.x) * (z - hi.x);
            let r = e - s * b;
            (eb + e * b, bb + b * b, rss + r * r)
        })
}

/// Fit one bubble coefficient per segment by least squares.
pub fn fit_quadratic(series: &Series, knots: &Knots) -> Result<(QuadModel, QuadReport)> {
    let positions = series.knot_positions(knots)?;
    let n = knots.segments();
    let mut s = Vec::with_capacity(n);
    let mut chord_only = Vec::with_capacity(n);
    let mut segment_rss = Vec::with_capacity(n);
    for i in 1..=n {
        // both knot samples have zero residual, so the closed range is fine
        let range = positions[i - 1]..positions[i] + 1;
        let interior = positions[i] - positions[i - 1] - 1;
        let (eb, bb, _) = segment_sums(series, knots, i, range.clone(), 0.0);
        let si = if interior == 0 || bb == 0.0 { 0.0 } else { eb / bb };
        chord_only.push(interior == 0);
        segment_rss.push(segment_sums(series, knots, i, range, si).2);
        s.push(si);
    }
    let model = QuadModel::new(knots.clone(), s.clone())?;
    Ok((
        model,
        QuadReport {
            s,
            chord_only,
            segment_rss,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_parabola_is_recovered() {
        let w: Vec<f64> = (1..=60).map(|m| (m as f64).powi(2)).collect();
        let s = Series::indexed(w).unwrap();
        let knots = s.knots_at(&[1, 17, 42, 60]).unwrap();
        let (model, report) = fit_quadratic(&s, &knots).unwrap();
        for (z, w) in s.iter() {
            assert!((model.evaluate(z).unwrap() - w).abs() <= 1e-9 * w.abs().max(1.0));
        }
        for c in model.coeffs() {
            assert!((c.k - 1.0).abs() < 1e-9);
            assert!(c.r.abs() < 1e-6);
            assert!(c.l.abs() < 1e-6);
        }
        assert!(report.segment_rss.iter().all(|&r| r < 1e-12));
    }

    #[test]
    fn chord_data_has_zero_bubble() {
        let w: Vec<f64> = (0..30).map(|k| 1.5 * k as f64 - 4.0).collect();
        let s = Series::indexed(w).unwrap();
        let knots = s.knots_at(&[1, 11, 30]).unwrap();
        let (model, _) = fit_quadratic(&s, &knots).unwrap();
        assert!(model.bubble().iter().all(|b| b.abs() < 1e-14));
    }

    #[test]
    fn knots_are_interpolated_and_midpoints_average() {
        let knots = Knots::from_xy(&[0.0, 2.0, 4.0], &[1.0, 3.0, -1.0]).unwrap();
        let model = QuadModel::new(knots.clone(), vec![0.0, 0.0]).unwrap();
        assert_eq!(model.evaluate(1.0).unwrap(), 2.0);
        assert_eq!(model.evaluate(3.0).unwrap(), 1.0);
        let curved = QuadModel::new(knots.clone(), vec![0.7, -2.0]).unwrap();
        for p in knots.points() {
            assert_eq!(curved.evaluate(p.x).unwrap(), p.y);
        }
        // monomial form agrees with the bubble form
        for (i, c) in curved.coeffs().iter().enumerate() {
            for x in [0.5 + 2.0 * i as f64, 1.5 + 2.0 * i as f64] {
                let mono = c.k * x * x + c.r * x + c.l;
                assert!((mono - curved.evaluate(x).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn segment_without_interior_samples_stays_chord() {
        let s = Series::indexed(vec![0.0, 1.0, 5.0, 2.0, 3.0]).unwrap();
        let knots = s.knots_at(&[1, 2, 5]).unwrap();
        let (model, report) = fit_quadratic(&s, &knots).unwrap();
        assert_eq!(report.chord_only, vec![true, false]);
        assert_eq!(model.bubble()[0], 0.0);
    }

    #[test]
    fn evaluate_rejects_outside_domain() {
        let knots = Knots::from_xy(&[0.0, 2.0, 4.0], &[1.0, 3.0, -1.0]).unwrap();
        let model = QuadModel::new(knots, vec![0.0, 0.0]).unwrap();
        assert!(model.evaluate(4.5).is_err());
    }
}
