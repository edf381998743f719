//! Holonomy, curvature integrals and Regge calculus.
//!
//! This crate has four layers:
//!
//! * [`gauge`] — matrix groups, connection one-forms, parallel transport,
//!   holonomy and curvature;
//! * [`identity`] — the exact identity expressing the holonomy around a
//!   rectangle as a transport-dressed curvature integral, the radial gauge,
//!   and the naive-defect order scan;
//! * [`regge`] — simplicial complexes with squared edge lengths, dihedral
//!   and deficit angles, hinge areas, the Regge action, its curvature
//!   measure, gradients and critical-point search;
//! * [`cone`] — piecewise-constant sector metrics around a point (2D) or a
//!   codimension-2 hinge (3D), mollified metrics, Levi-Civita curvature,
//!   and the convergence experiments tying the smooth and discrete pictures
//!   together.
//!
//! The [`experiment`] module drives the whole suite from JSON configs and is
//! what the `reggekit` binary wraps. Each major capability also has a
//! runnable example under `examples/`.

pub mod cone;
pub mod error;
pub mod experiment;
pub mod gauge;
pub mod identity;
pub mod io;
pub mod quad;
pub mod regge;

pub use error::{Error, Result};
