//! Command-line pipelines: generate series, fit models, evaluate curves and
//! compare the fractal fit against the quadratic baseline.

pub mod args;
pub mod commands;
pub mod error;
pub mod model_file;

pub use args::Cli;
pub use commands::run;
pub use error::CliError;
