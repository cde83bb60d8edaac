//! Exact-arithmetic engine for multigraded systems of monomial ideals.
//!
//! The crate is organized bottom-up:
//!
//! * [`rational`] – exact rational scalars and their canonical printing.
//! * [`monomial_ideal`] – monomial ideals in canonical minimal-generator form.
//! * [`newton_geometry`] – Newton polyhedra and orthant-absorbing polyhedra (k ≤ 3).
//! * [`regions`] – absorbing regions, kinked boundary functions, lattice
//!   generator extraction and the symmetric gauge body.
//! * [`graded_system`] – expression trees for ℤ^ρ-graded systems.
//! * [`invariants`] – asymptotic ord₀ / Arn / multiplicity by schedules and by
//!   limit-body geometry, plus exact one-sided slope scans.
//! * [`cones`] – cones in index space, nef/effective lattice estimation and ray hulls.
//! * [`formats`] – line-oriented text formats for ideals, regions, cones and systems.

pub mod cones;
pub mod error;
pub mod formats;
pub mod graded_system;
pub mod invariants;
mod linalg;
pub mod monomial_ideal;
pub mod newton_geometry;
pub mod rational;
pub mod regions;

pub use error::{Error, Result};
pub use monomial_ideal::{ExponentVector, MonomialIdeal};
pub use newton_geometry::{Halfspace, NewtonPolyhedron};
pub use rational::Rational;
