//! Approximation of 1-D series by fractal interpolation functions.
//!
//! The pieces:
//!
//! * [`ifs`]: affine IFS through a set of knots, the Hutchinson operator on
//!   sampled functions, and recursive evaluation of the attractor `g*`.
//! * [`collage`]: closed-form fit of the vertical scalings by minimising the
//!   collage distance between the data and its image under `Φ`.
//! * [`quadratic`]: a piecewise-quadratic baseline with the same number of
//!   fitted parameters.
//! * [`datasets`]: generators, CSV/FASTA input, normalization and knot
//!   selection.
//! * [`analysis`]: RMS errors and the side-by-side comparison.
//!
//! ```
//! use fif_core::prelude::*;
//!
//! let raw = gen_polynomial(10_000).unwrap();
//! let (series, _) = normalize(&raw).unwrap();
//! let knots = select_knots(&series, &KnotSelection::Manual(vec![500, 4000, 7500])).unwrap();
//! let report = fit_d_discrete(&series, &knots, &FitOptions::default()).unwrap();
//! assert!((report.d[1] - 0.155).abs() < 0.005);
//! ```

pub mod analysis;
pub mod collage;
pub mod datasets;
pub mod error;
pub mod ifs;
pub mod quadratic;
pub mod series;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::analysis::{compare, rms_error, Approximant, AtDepth, CompareOptions, ComparisonRow};
    pub use crate::collage::{collage_residual, fit_d_discrete, fit_model, FitOptions, FitReport};
    pub use crate::datasets::{
        gen_dna_walk, gen_polynomial, gen_random_walk, load_series_csv, normalize, select_knots,
        ExtremaParams, KnotSelection, NormalizationParams,
    };
    pub use crate::ifs::{alpha_beta_gamma, build_model, FifModel, Knots, Point, SampledFunction};
    pub use crate::quadratic::{fit_quadratic, QuadModel};
    pub use crate::series::Series;
    pub use crate::{Error, Result};
}
