// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Spectral-phase-only optimal control of few-level quantum systems.
//!
//! A pulse is described by a fixed Gaussian spectral amplitude and a free
//! spectral phase. The phase is evolved along a gradient flow that increases
//! a state-to-state transfer probability while holding the field at both ends
//! of the time window fixed; an optional Gaussian frequency filter smooths
//! the flow.
//!
//! Internally everything is in atomic units (ħ = 1). See [`units`] for the
//! conversions used at the edges.

// `!(x > 0.0)` is how parameter checks reject NaN along with non-positives.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod export;
pub mod gradients;
pub mod optimizer;
pub mod pulse;
pub mod transform;
pub mod units;

pub use error::{Result, SpooError};
