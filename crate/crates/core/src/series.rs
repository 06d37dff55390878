use crate::error::{Error, Result};
use crate::ifs::{Knots, Point};

/// Discrete data `(z_m, w_m)` with strictly increasing abscissae.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    z: Vec<f64>,
    w: Vec<f64>,
}

impl Series {
    pub fn new(z: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if z.len() != w.len() {
            return Err(Error::LengthMismatch {
                expected: z.len(),
                got: w.len(),
            });
        }
        if z.len() < 2 {
            return Err(Error::SeriesTooShort { min: 2, got: z.len() });
        }
        for (index, (zi, wi)) in z.iter().zip(&w).enumerate() {
            if !zi.is_finite() || !wi.is_finite() {
                return Err(Error::NonFinite { index });
            }
        }
        for (index, pair) in z.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(Error::NonIncreasingSeries {
                    index: index + 1,
                    value: pair[1],
                });
            }
        }
        Ok(Self { z, w })
    }

    /// Series on the integer abscissae `1, 2, …, M`.
    pub fn indexed(w: Vec<f64>) -> Result<Self> {
        let z = (1..=w.len()).map(|m| m as f64).collect();
        Self::new(z, w)
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.z
    }

    pub fn values(&self) -> &[f64] {
        &self.w
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.z.iter().copied().zip(self.w.iter().copied())
    }

    pub fn a(&self) -> f64 {
        self.z[0]
    }

    pub fn b(&self) -> f64 {
        self.z[self.z.len() - 1]
    }

    /// Same abscissae, new ordinates.
    pub fn with_values(&self, w: Vec<f64>) -> Result<Self> {
        Self::new(self.z.clone(), w)
    }

    /// Nearest-neighbour (piecewise-constant) extension of the data to the
    /// real line. Exact midpoints resolve to the left sample.
    pub fn nearest(&self, x: f64) -> f64 {
        self.w[self.nearest_index(x)]
    }

    /// 0-based index of the sample nearest to `x` (left on ties).
    pub fn nearest_index(&self, x: f64) -> usize {
        let j = self.z.partition_point(|&z| z < x);
        if j == 0 {
            return 0;
        }
        if j == self.z.len() {
            return j - 1;
        }
        if x - self.z[j - 1] <= self.z[j] - x {
            j - 1
        } else {
            j
        }
    }

    /// 0-based position of the sample with abscissa exactly `x`.
    pub fn position_of(&self, x: f64) -> Option<usize> {
        self.z.binary_search_by(|z| z.total_cmp(&x)).ok()
    }

    /// Knots taken from the samples at the given 1-based indices, which must
    /// be strictly increasing.
    pub fn knots_at(&self, indices: &[usize]) -> Result<Knots> {
        let points = indices
            .iter()
            .map(|&m| {
                if m == 0 || m > self.len() {
                    Err(Error::InvalidKnotIndex {
                        index: m,
                        reason: "out of range",
                    })
                } else {
                    Ok(Point::new(self.z[m - 1], self.w[m - 1]))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Knots::new(points)
    }

    /// Check that every knot is a sample of this series and that the knot
    /// endpoints are the first and last samples. Returns 0-based sample
    /// positions of the knots.
    pub fn knot_positions(&self, knots: &Knots) -> Result<Vec<usize>> {
        let first = knots.first();
        let last = knots.last();
        if first.x != self.a() || last.x != self.b() {
            return Err(Error::EndpointMismatch);
        }
        if first.y != self.w[0] || last.y != self.w[self.len() - 1] {
            return Err(Error::EndpointMismatch);
        }
        knots
            .points()
            .iter()
            .map(|p| match self.position_of(p.x) {
                Some(j) if self.w[j] == p.y => Ok(j),
                _ => Err(Error::KnotNotInSeries { x: p.x, y: p.y }),
            })
            .collect()
    }

    /// Half-open sample ranges `[x_{i-1}, x_i)` per segment, the last one
    /// closed, as 0-based index ranges into the series.
    pub(crate) fn segment_ranges(positions: &[usize]) -> Vec<std::ops::Range<usize>> {
        let n = positions.len() - 1;
        (0..n)
            .map(|i| {
                let end = if i + 1 == n {
                    positions[i + 1] + 1
                } else {
                    positions[i + 1]
                };
                positions[i]..end
            })
            .collect()
    }
}
