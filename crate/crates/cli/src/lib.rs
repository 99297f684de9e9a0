//! Experiment runner for entanglement decay under dissipative Landau-Zener
//! noise. See [`app::Cli`] for the command-line surface.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod config;
pub mod experiments;
pub mod output;

pub use lzd_core;
