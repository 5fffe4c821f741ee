//! Command-line front end for `ksharp-core`: run manifests, snapshot and
//! diagnostics files, traveling-wave profiles and scaling reports.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod formats;
pub mod manifest;

pub use error::{exit, CliError, CliResult};
pub use manifest::RunManifest;
