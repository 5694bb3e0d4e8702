//! Rank-one convexity and Cauchy-stress injectivity for hyperelastic energies.
//!
//! - [`tensor`], [`eigen`], [`sampling`]: exact 3×3 tensor calculus and seeded
//!   sampling of GL⁺(3).
//! - [`materials`]: stored energies with analytic first Piola-Kirchhoff stress
//!   and derived Cauchy stress.
//! - [`convexity`]: segment convexity, Piola monotonicity, directional second
//!   derivatives, acoustic tensor, Baker-Ericksen.
//! - [`injectivity`]: collision searches for the Cauchy stress along rank-one
//!   lines and the companion checks on `B`, the Blatz-Ko spherical response and
//!   the pressure-compression inequality.

// `!(x > 0.0)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convexity;
pub mod eigen;
pub mod error;
pub mod injectivity;
pub mod materials;
pub mod optimize;
pub mod sampling;
pub mod scan;
pub mod tensor;

pub use error::{Error, Result};
pub use materials::{Material, MaterialModel};
pub use sampling::{Sampler, Seed};
pub use scan::ScanConfig;
pub use tensor::{Mat3, RankOnePerturbation, Vec3};
