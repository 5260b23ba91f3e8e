//! Elliptic `SL2(R)` representation paths of odd classical pretzel knots
//! `P(a1, a2, a3)`.
//!
//! The crate solves the real trace locus of the knot group over the
//! parameter `r1 in (2, inf)`, materializes explicit matrix representations
//! on it, tracks the boundary holonomy along the elliptic stretch
//! `(2, r1*)`, and emits certificates that a given surgery slope `m/l < 1`
//! or branched-cover order `n` is realized.

// `!(x <= tol)` is used on purpose so that NaN fails checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary_path;
pub mod chebyshev;
pub mod config;
pub mod error;
pub mod knot;
pub mod matrix;
pub mod report;
pub mod representation;
pub mod roots;
pub mod trace_locus;

pub use boundary_path::{
    boundary_holonomy, realize_cover, realize_slope, BoundaryHolonomy, Certificate,
    CertificateTarget, SurgerySlope,
};
pub use chebyshev::{cheb_eval, cheb_ratio, ChebRatio};
pub use config::ToleranceConfig;
pub use error::{Error, Result};
pub use knot::PretzelKnot;
pub use matrix::Matrix2;
pub use representation::{
    build_representation, meridian_power_residual, relation_residual, Representation, Sign,
};
pub use trace_locus::{
    cover_threshold, find_r1_star, limit_t, residual_f, solve_locus, theta0, LocusPoint,
};
