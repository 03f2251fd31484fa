//! File formats, CSV output and the `tnw` command line over [`tnorm_core`].

pub mod cli;
pub mod formats;
pub mod heatmap;

pub use cli::run;
