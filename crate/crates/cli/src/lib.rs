//! Library half of the `radcom` experiment CLI.
//!
//! The binary in `main.rs` is a thin argument-parsing shell; everything it
//! does lives here so tests can drive the same code paths directly:
//!
//! * [`experiments`] — the sweep, trade-off, plan, and spectrum-report
//!   runners, each mapping a resolved scenario to rows plus metadata;
//! * [`verification`] — the aggregated verification suite behind `verify`;
//! * [`output`] — deterministic CSV/number formatting shared by all of it.

pub mod experiments;
pub mod output;
pub mod verification;
