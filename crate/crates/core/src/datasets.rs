//! Test-data generators, series I/O, normalization and knot selection.

use std::io::{Read, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::Knots;
use crate::series::Series;

/// `-6x + 5x² + 5x³ - 5x⁴ + x⁵` in Horner form.
pub fn polynomial(x: f64) -> f64 {
    x * (-6.0 + x * (5.0 + x * (5.0 + x * (-5.0 + x))))
}

/// Samples of [`polynomial`] on `[-1, 2.5]` mapped onto `z_m = m`, `m = 1..=M`.
pub fn gen_polynomial(m: usize) -> Result<Series> {
    if m < 2 {
        return Err(Error::SeriesTooShort { min: 2, got: m });
    }
    let span = 2.0 * (m - 1) as f64;
    let w = (1..=m)
        .map(|k| polynomial(7.0 * (k - 1) as f64 / span - 1.0))
        .collect();
    Series::indexed(w)
}

/// Extract the nucleotide sequence from plain text or FASTA. Header lines
/// (starting with '>') and whitespace are skipped; letters are upper-cased.
pub fn parse_nucleotides(text: &str) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(text.len());
    let mut position = 0;
    for line in text.lines() {
        if line.trim_start().starts_with('>') {
            continue;
        }
        for ch in line.chars().filter(|c| !c.is_whitespace()) {
            position += 1;
            match ch.to_ascii_uppercase() {
                c @ ('A' | 'C' | 'G' | 'T') => out.push(c as u8),
                _ => return Err(Error::InvalidNucleotide { ch, position }),
            }
        }
    }
    if out.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok(out)
}

/// Purine/pyrimidine walk: `v_1 = 0`, then `+1` for A/G and `-1` for C/T
/// from the second nucleotide on. One value per nucleotide.
pub fn dna_walk(nucleotides: &[u8]) -> Result<Vec<f64>> {
    if nucleotides.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut v = Vec::with_capacity(nucleotides.len());
    let mut level = 0.0;
    v.push(level);
    for (k, &n) in nucleotides.iter().enumerate().skip(1) {
        level += match n.to_ascii_uppercase() {
            b'A' | b'G' => 1.0,
            b'C' | b'T' => -1.0,
            other => {
                return Err(Error::InvalidNucleotide {
                    ch: other as char,
                    position: k + 1,
                })
            }
        };
        v.push(level);
    }
    Ok(v)
}

/// DNA walk of a plain-text or FASTA sequence as a series on `z_m = m`.
/// A single nucleotide yields a one-sample walk, which is rejected.
pub fn gen_dna_walk(text: &str) -> Result<Series> {
    let nucleotides = parse_nucleotides(text)?;
    Series::indexed(dna_walk(&nucleotides)?)
}

/// Gaussian random walk with `v_1 = 0` and standard-normal increments from
/// a ChaCha8 generator seeded with `seed`.
pub fn gen_random_walk(m: usize, seed: u64) -> Result<Series> {
    if m < 2 {
        return Err(Error::SeriesTooShort { min: 2, got: m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = 0.0;
    let mut w = Vec::with_capacity(m);
    w.push(level);
    for _ in 1..m {
        let step: f64 = StandardNormal.sample(&mut rng);
        level += step;
        w.push(level);
    }
    Series::indexed(w)
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Parse a one- or two-column numeric CSV. A first row whose first field is
/// not numeric is treated as a header. One column means `z_m = m`.
pub fn read_series_csv<R: Read>(reader: R, source: &Path) -> Result<Series> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut columns = None;
    let mut z = Vec::new();
    let mut w = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(source, line, e.to_string())
        })?;
        let line = record.position().map_or(row as u64 + 1, |p| p.line());
        if row == 0 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        let width = record.len();
        if width != 1 && width != 2 {
            return Err(parse_error(source, line, format!("expected 1 or 2 columns, found {width}")));
        }
        match columns {
            None => columns = Some(width),
            Some(c) if c != width => {
                return Err(parse_error(source, line, format!("expected {c} columns, found {width}")))
            }
            _ => {}
        }
        let mut fields = record.iter().map(|f| {
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_error(source, line, format!("not a number: {f:?}")))
        });
        let first = fields.next().unwrap()?;
        match fields.next() {
            Some(second) => {
                z.push(first);
                w.push(second?);
            }
            None => {
                z.push((w.len() + 1) as f64);
                w.push(first);
            }
        }
    }
    Series::new(z, w)
}

pub fn load_series_csv(path: impl AsRef<Path>) -> Result<Series> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    read_series_csv(std::io::BufReader::new(file), path)
}

/// Write a two-column `z,w` CSV.
pub fn write_series_csv<W: Write>(series: &Series, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["z", "w"])?;
    for (z, w) in series.iter() {
        wtr.write_record([z.to_string(), w.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizationParams {
    /// Mean of the raw values.
    pub s1: f64,
    /// Population standard deviation of the raw values.
    pub s2: f64,
}

impl NormalizationParams {
    pub fn apply(&self, v: f64) -> f64 {
        (v - self.s1) / self.s2
    }

    pub fn invert(&self, w: f64) -> f64 {
        w * self.s2 + self.s1
    }
}

/// Shift and scale to zero mean and unit mean square.
pub fn normalize(series: &Series) -> Result<(Series, NormalizationParams)> {
    let v = series.values();
    let m = v.len() as f64;
    let s1 = v.iter().sum::<f64>() / m;
    let s2 = (v.iter().map(|x| (x - s1).powi(2)).sum::<f64>() / m).sqrt();
    if s2.is_nan() || s2 <= 0.0 {
        return Err(Error::ConstantSeries);
    }
    let params = NormalizationParams { s1, s2 };
    let w = v.iter().map(|&x| params.apply(x)).collect();
    Ok((series.with_values(w)?, params))
}

pub const DEFAULT_WINDOW: usize = 101;
pub const DEFAULT_PROMINENCE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremaParams {
    /// Number of interior knots wanted (`N - 1`).
    pub interior: usize,
    /// Centered moving-average window.
    pub window: usize,
    /// Minimum prominence of a kept extremum.
    pub prominence: f64,
}

impl ExtremaParams {
    pub fn for_segments(segments: usize) -> Self {
        Self {
            interior: segments.saturating_sub(1),
            window: DEFAULT_WINDOW,
            prominence: DEFAULT_PROMINENCE,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum KnotSelection {
    /// 1-based interior sample indices; the endpoints are added.
    Manual(Vec<usize>),
    /// Most prominent local extrema of the smoothed series.
    Extrema(ExtremaParams),
}

pub fn select_knots(series: &Series, selection: &KnotSelection) -> Result<Knots> {
    let m = series.len();
    let interior = match selection {
        KnotSelection::Manual(indices) => {
            let mut sorted = indices.clone();
            sorted.sort_unstable();
            for pair in sorted.windows(2) {
                if pair[0] == pair[1] {
                    return Err(Error::InvalidKnotIndex {
                        index: pair[0],
                        reason: "duplicate",
                    });
                }
            }
            for &index in &sorted {
                if index == 1 || index == m {
                    return Err(Error::InvalidKnotIndex {
                        index,
                        reason: "endpoints are always knots",
                    });
                }
                if index == 0 || index > m {
                    return Err(Error::InvalidKnotIndex {
                        index,
                        reason: "out of range",
                    });
                }
            }
            sorted
        }
        KnotSelection::Extrema(params) => {
            if params.window == 0 {
                return Err(Error::InvalidArgument("window must be at least 1".into()));
            }
            let smoothed = moving_average(series.values(), params.window);
            let mut candidates = prominent_extrema(&smoothed, params.prominence);
            if candidates.len() < params.interior.min(2) {
                return Err(Error::TooFewExtrema {
                    found: candidates.len(),
                    requested: params.interior,
                });
            }
            candidates.sort_by(|p, q| q.1.total_cmp(&p.1).then(p.0.cmp(&q.0)));
            let mut chosen: Vec<usize> = candidates
                .into_iter()
                .take(params.interior)
                .map(|(index, _)| index + 1)
                .collect();
            chosen.sort_unstable();
            chosen
        }
    };
    let mut indices = Vec::with_capacity(interior.len() + 2);
    indices.push(1);
    indices.extend(interior);
    indices.push(m);
    series.knots_at(&indices)
}

/// Centered moving average, truncated at the ends.
pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    let n = values.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            if window == 1 {
                values[i]
            } else {
                (prefix[hi] - prefix[lo]) / (hi - lo) as f64
            }
        })
        .collect()
}

/// Interior local maxima and minima with their topographic prominence,
/// as `(0-based index, prominence)`, filtered by `min_prominence`.
pub fn prominent_extrema(values: &[f64], min_prominence: f64) -> Vec<(usize, f64)> {
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    let mut out: Vec<(usize, f64)> = local_maxima(values)
        .into_iter()
        .map(|p| (p, prominence(values, p)))
        .chain(local_maxima(&negated).into_iter().map(|p| (p, prominence(&negated, p))))
        .filter(|&(_, prom)| prom >= min_prominence)
        .collect();
    out.sort_by_key(|&(i, _)| i);
    out
}

/// Interior strict local maxima; a flat top reports its middle sample.
fn local_maxima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i - 1] < values[i] {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] {
                peaks.push((i + j) / 2);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

fn prominence(values: &[f64], peak: usize) -> f64 {
    let height = values[peak];
    let mut left_min = height;
    for &v in values[..peak].iter().rev() {
        if v > height {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = height;
    for &v in &values[peak + 1..] {
        if v > height {
            break;
        }
        right_min = right_min.min(v);
    }
    height - left_min.max(right_min)
}
