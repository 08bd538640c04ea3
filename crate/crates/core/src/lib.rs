//! Correct nonresponse bias in voluntarily submitted data by using
//! accumulated data requests as instruments.
//!
//! When subjects are asked repeatedly for the same piece of information
//! (survey reminders, follow-up requests), the request count at which each
//! subject responds orders the population by response aversion. This crate
//! builds request-indexed panels from raw contact logs, estimates local
//! average responses for request compliers, fits parametric selection
//! models by maximum likelihood, decomposes group gaps, and validates the
//! identifying assumptions with overidentification tests and Monte Carlo
//! simulation.
//!
//! The typical pipeline is:
//!
//! 1. [`panel`] — turn contact logs into a subject-term-period panel
//!    carrying accumulated requests `R`, retained response choice `S_hat`,
//!    and retained response `Y_hat`;
//! 2. [`lar`] — estimate willing response propensities and complier means;
//! 3. [`selectmod`] — fit probit-with-selection or Heckman-type models;
//! 4. [`msr`] — evaluate the implied marginal survey response curve;
//! 5. [`decomp`] / [`overid`] — decompose group gaps and test the model.
//!
//! [`synthgen`] provides deterministic synthetic data generators for
//! benchmarking against published moments and for Monte Carlo checks.

pub mod decomp;
mod error;
pub mod lar;
pub mod msr;
pub mod numkit;
pub mod overid;
pub mod panel;
pub mod selectmod;
pub mod synthgen;

pub use error::{Error, Result};
