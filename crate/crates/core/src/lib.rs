//! Computational toolkit for flat 2+1 dimensional spacetimes carrying
//! conical singular lines.
//!
//! Two kinds of singular lines are modelled:
//!
//! * massive particles, the timelike cone lines of `E^{1,2}_α` with `α > 0`;
//! * extreme BTZ lines, the lightlike line of `E^{1,2}_0`.
//!
//! The crate is organised bottom-up:
//!
//! - [`lorentz`]: Minkowski space `E^{1,2}`, its quadratic form and the
//!   identity component of its isometry group.
//! - [`model`]: the model spaces, their metrics, the ω-family of coordinates
//!   and tube regions.
//! - [`causality`]: causal classification of tangents and sampled curves,
//!   causal futures in the BTZ model space and the volume time function.
//! - [`developing`]: developing maps and holonomies of the regular loci.
//! - [`surfaces`]: graph surfaces in tubes, the spacelike criterion,
//!   completeness certificates and the surgery constructions that add or
//!   avoid a BTZ line.
//! - [`extensions`]: tube charts with BTZ adjoin/remove and the mixed
//!   extension chain.
//! - [`modular`]: the spacetime built from the modular group, with its
//!   polyhedral Cauchy surface.
//! - [`verify`]: named verification suites producing [`report::ReportRecord`]s.
//!
//! Data-parallel loops (Monte Carlo sampling, grid scans, ray batches) run on
//! rayon when the `parallel` feature is enabled, and sequentially otherwise.
//! Results never depend on which path ran; see [`exec`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod causality;
pub mod developing;
pub mod error;
pub mod exec;
pub mod extensions;
pub mod lorentz;
pub mod model;
pub mod modular;
pub mod report;
pub mod surfaces;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use lorentz::{LorentzIsometry, LorentzVector};
pub use model::{ConeAngle, ModelPoint};
