//! Command-line front end for `dessin-core`.

pub mod app;
pub mod datasets;
pub mod dot;
pub mod format;

pub use app::{dispatch, Outcome};
