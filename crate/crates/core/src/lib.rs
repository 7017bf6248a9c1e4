//! Rigorous enumeration of planar central configurations.
//!
//! Two problem families share one branch-and-bound engine:
//!
//! * the anisotropic-plane problem for `k` light bodies ([`aniso`]), the
//!   limit of a cluster of vanishing masses near a relative equilibrium;
//! * the reduced central-configuration system of the full `n`-body problem
//!   ([`nbody`]), with one coordinate gauge-fixed and the last body
//!   eliminated through the center of mass.
//!
//! Every reported solution carries a Krawczyk certificate computed in
//! outward-rounded interval arithmetic ([`interval`], [`krawczyk`]).
//! Closed-form families ([`analytic`]) and the vanishing-mass scaling
//! ([`bridge`]) give independent cross-checks.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod aniso;
pub mod bounds;
pub mod bridge;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod hexfloat;
pub mod interval;
pub mod krawczyk;
pub mod masses;
pub mod nbody;
mod pairs;
pub mod report;
pub mod search;

pub use error::{Error, Result};
pub use interval::{Interval, IntervalBox, IntervalMatrix};
