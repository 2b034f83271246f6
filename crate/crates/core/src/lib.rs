//! Power allocation for a joint radar/communications OFDM waveform.
//!
//! One OFDM pulse carries both a radar measurement and a data stream. How
//! the transmit power is split across subcarriers controls both the radar
//! information gained about the target response and the rate delivered to
//! the comm receiver. This crate computes those allocations and verifies
//! their optimality numerically:
//!
//! * [`ofdm`] — grid parameters, noise models, channel-to-noise ratios, and
//!   interval uncertainty classes for imperfectly known responses;
//! * [`metrics`] — the radar mutual information, the comm data information
//!   rate, and the normalized weighted-sum criterion combining them;
//! * [`waterfill`] — exact single-objective water-filling;
//! * [`robust`] — the closed-form minimax allocation against the worst
//!   response in a class, plus saddle-point and optimality verifiers;
//! * [`spectrum`] — waveform synthesis, transmit spectra, and the
//!   per-subcarrier spectral shaping approximation check;
//! * [`simplex`] — brute-force grid search over the budget simplex, used as
//!   an independent oracle by the tests;
//! * [`scenario`] — the JSON experiment configuration format.
//!
//! ```
//! use radcom_core::metrics::ObjectiveConfig;
//! use radcom_core::ofdm::{gaussian_bounds, BoundFamily, NoiseModel, OfdmParams};
//! use radcom_core::robust::solve_robust;
//!
//! // 128 subcarriers at 250 kHz spacing, 16 symbols, 1 us guard interval.
//! let params = OfdmParams::new(128, 2.5e5, 1e-6, 16, 0.0)?;
//! let noise = NoiseModel::from_snr_db(&params, 5.0)?;
//! let class = gaussian_bounds(&params, &BoundFamily::Baseline)?;
//!
//! // Equal weights, each task normalized by its own optimum at unit budget.
//! let cfg = ObjectiveConfig::from_class(&params, &noise, &class, 1.0, 0.5)?;
//! let solution = solve_robust(&params, &noise, &class, &cfg, 1.0)?;
//!
//! assert!((solution.allocation.total() - 1.0).abs() <= 1e-10);
//! assert!(solution.kkt_residual <= 1e-7);
//! assert!(solution.allocation.powers().iter().all(|&p| p >= 0.0));
//! # Ok::<(), radcom_core::Error>(())
//! ```

pub mod error;
pub mod metrics;
pub mod ofdm;
pub mod robust;
pub mod scenario;
pub mod simplex;
pub mod spectrum;
pub mod tol;
pub mod waterfill;

pub use error::{Error, Result};
