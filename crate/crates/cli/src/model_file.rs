//! Versioned JSON representation of fitted models.

use std::path::Path;

use fif_core::collage::FitReport;
use fif_core::datasets::NormalizationParams;
use fif_core::ifs::{build_model, FifModel, Knots, Point};
use fif_core::quadratic::{QuadCoeffs, QuadModel};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Fractal,
    Quadratic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractalSegment {
    pub d: f64,
    pub clamped: bool,
    pub degenerate: bool,
    pub a: f64,
    pub c: f64,
    pub e: f64,
    pub f: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Parameters {
    Fractal(Vec<FractalSegment>),
    Quadratic(Vec<QuadCoeffs>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// SHA-256 of the input series file, or a `builtin:` label.
    pub input: String,
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl Provenance {
    pub fn new(input: String, seed: Option<u64>) -> Self {
        Self {
            input,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: String,
    pub kind: ModelKind,
    pub domain: [f64; 2],
    pub knots: Vec<[f64; 2]>,
    pub parameters: Parameters,
    pub normalization: Option<NormalizationParams>,
    pub provenance: Provenance,
}

/// A model loaded from disk, ready to evaluate.
#[derive(Clone, Debug)]
pub enum LoadedModel {
    Fractal(FifModel),
    Quadratic(QuadModel),
}

impl LoadedModel {
    pub fn domain(&self) -> (f64, f64) {
        let knots = match self {
            LoadedModel::Fractal(m) => m.knots(),
            LoadedModel::Quadratic(m) => m.knots(),
        };
        (knots.a(), knots.b())
    }

    pub fn evaluate(&self, x: f64, depth: Option<usize>) -> fif_core::Result<f64> {
        match self {
            LoadedModel::Fractal(m) => m.evaluate(x, depth.unwrap_or_else(|| m.default_depth())),
            LoadedModel::Quadratic(m) => m.evaluate(x),
        }
    }
}

fn knot_pairs(knots: &Knots) -> Vec<[f64; 2]> {
    knots.points().iter().map(|p| [p.x, p.y]).collect()
}

impl ModelFile {
    pub fn fractal(
        model: &FifModel,
        report: &FitReport,
        normalization: Option<NormalizationParams>,
        provenance: Provenance,
    ) -> Self {
        let segments = model
            .segments()
            .iter()
            .zip(report.clamped.iter().zip(&report.degenerate))
            .map(|(s, (&clamped, &degenerate))| FractalSegment {
                d: s.d,
                clamped,
                degenerate,
                a: s.a,
                c: s.c,
                e: s.e,
                f: s.f,
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION.to_owned(),
            kind: ModelKind::Fractal,
            domain: [model.knots().a(), model.knots().b()],
            knots: knot_pairs(model.knots()),
            parameters: Parameters::Fractal(segments),
            normalization,
            provenance,
        }
    }

    pub fn quadratic(
        model: &QuadModel,
        normalization: Option<NormalizationParams>,
        provenance: Provenance,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_owned(),
            kind: ModelKind::Quadratic,
            domain: [model.knots().a(), model.knots().b()],
            knots: knot_pairs(model.knots()),
            parameters: Parameters::Quadratic(model.coeffs().to_vec()),
            normalization,
            provenance,
        }
    }

    /// Rebuild the model; coefficients are recomputed from knots and the
    /// free parameters.
    pub fn to_model(&self) -> Result<LoadedModel> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema(self.schema_version.clone()));
        }
        let knots = Knots::new(self.knots.iter().map(|&[x, y]| Point::new(x, y)).collect())?;
        if [knots.a(), knots.b()] != self.domain {
            return Err(CliError::Model("domain does not match the knot endpoints".into()));
        }
        match (self.kind, &self.parameters) {
            (ModelKind::Fractal, Parameters::Fractal(segments)) => {
                let d: Vec<f64> = segments.iter().map(|s| s.d).collect();
                Ok(LoadedModel::Fractal(build_model(knots, &d)?))
            }
            (ModelKind::Quadratic, Parameters::Quadratic(coeffs)) => {
                let bubble = coeffs.iter().map(|c| c.k).collect();
                Ok(LoadedModel::Quadratic(QuadModel::new(knots, bubble)?))
            }
            _ => Err(CliError::Model("parameters do not match the model kind".into())),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model file serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str, source: &Path) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|source_err| CliError::Json {
            path: source.display().to_string(),
            source: source_err,
        })?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema(file.schema_version));
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text, path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| CliError::io(path, e))
    }
}
