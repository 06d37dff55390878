//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the fitting code paths it is used to check.
#![allow(dead_code)]

use fif_core::series::Series;

/// Nearest sample by linear scan, ties to the left.
pub fn nearest_scan(z: &[f64], w: &[f64], x: f64) -> f64 {
    w[nearest_index_scan(z, x)]
}

pub fn nearest_index_scan(z: &[f64], x: f64) -> usize {
    let mut best = 0;
    for k in 1..z.len() {
        if (z[k] - x).abs() < (z[best] - x).abs() {
            best = k;
        }
    }
    best
}

/// Per-sample `(residual at d = 0, slope in d)` of the collage residual on
/// each segment, from the slope/intercept form of α, β, γ.
/// Knot positions are 0-based sample indices.
pub fn collage_terms(series: &Series, knots: &[usize]) -> Vec<Vec<(f64, f64)>> {
    let z = series.abscissae();
    let w = series.values();
    let n = knots.len() - 1;
    let (a, b) = (z[knots[0]], z[knots[n]]);
    let (y0, yn) = (w[knots[0]], w[knots[n]]);
    (0..n)
        .map(|i| {
            let (lo, hi) = (knots[i], knots[i + 1]);
            let (x0, x1) = (z[lo], z[hi]);
            let (v0, v1) = (w[lo], w[hi]);
            let h = x1 - x0;
            let end = if i + 1 == n { hi + 1 } else { hi };
            (lo..end)
                .map(|m| {
                    let x = z[m];
                    let alpha = ((v1 - v0) * x + (x1 * v0 - x0 * v1)) / h;
                    let beta = ((yn - y0) * x + (x1 * y0 - x0 * yn)) / h;
                    let gamma = ((b - a) * x + (x1 * a - x0 * b)) / h;
                    // w − Φg = (w − α) + d (β − g∘γ)
                    (w[m] - alpha, beta - nearest_scan(z, w, gamma))
                })
                .collect()
        })
        .collect()
}

pub fn quadratic_form(terms: &[(f64, f64)], d: f64) -> f64 {
    terms.iter().map(|(r, s)| (r + d * s).powi(2)).sum()
}

/// Minimise a unimodal function on `[lo, hi]` by a coarse scan followed by
/// a fine scan around the coarse minimum.
pub fn scan_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, coarse: f64, fine: f64) -> f64 {
    let scan = |lo: f64, hi: f64, step: f64| {
        let steps = ((hi - lo) / step).round() as usize;
        let mut best = (f64::INFINITY, lo);
        for k in 0..=steps {
            let x = (lo + k as f64 * step).min(hi);
            let v = f(x);
            if v < best.0 {
                best = (v, x);
            }
        }
        best.1
    };
    let c = scan(lo, hi, coarse);
    scan((c - 2.0 * coarse).max(lo), (c + 2.0 * coarse).min(hi), fine)
}

/// Segment residual of the constrained quadratic with bubble coefficient
/// `s`, written in monomial form.
pub fn quad_segment_residual(series: &Series, lo: usize, hi: usize, s: f64) -> f64 {
    let z = series.abscissae();
    let w = series.values();
    let (x0, x1, v0, v1) = (z[lo], z[hi], w[lo], w[hi]);
    let slope = (v1 - v0) / (x1 - x0);
    (lo..=hi)
        .map(|m| {
            let x = z[m];
            let q = v0 + slope * (x - x0) + s * (x * x - (x0 + x1) * x + x0 * x1);
            (w[m] - q).powi(2)
        })
        .sum()
}

/// Normalized Gaussian random walk on `z ∈ [0, span]` from a small LCG +
/// Box–Muller, independent of the library generators.
pub fn lcg_walk(m: usize, seed: u64, span: f64) -> Series {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut uniform = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    };
    let mut v = vec![0.0];
    for _ in 1..m {
        let (u1, u2) = (uniform(), uniform());
        let step = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        v.push(v.last().unwrap() + step);
    }
    let mean = v.iter().sum::<f64>() / m as f64;
    let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m as f64).sqrt();
    let z = (0..m).map(|k| span * k as f64 / (m - 1) as f64).collect();
    Series::new(z, v.iter().map(|x| (x - mean) / sd).collect()).unwrap()
}
