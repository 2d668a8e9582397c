//! Symmetrisation toolkit for anisotropic elliptic problems.
//!
//! The crate covers Young-function calculus and Klimov symmetrisation
//! ([`young`]), rearrangements of grid fields ([`rearrange`]),
//! rearrangement-invariant norms ([`norms`]), the radial comparison barrier
//! ([`barrier`]), an energy-minimising solver for the anisotropic
//! prototype ([`pde`]), end-to-end checks of the comparison and gradient
//! estimates ([`verify`]) and a config-driven experiment runner
//! ([`harness`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod barrier;
pub mod error;
pub mod harness;
pub mod quadrature;
pub mod radial;
pub mod norms;
pub mod pde;
pub mod verify;
pub mod rearrange;
pub mod young;

pub use error::{Error, Result};
