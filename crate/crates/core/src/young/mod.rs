//! Young-function calculus: evaluation, conjugation, Klimov symmetrisation,
//! `Psi` and the Sobolev regime classifier.

pub mod grid2d;
pub mod klimov;
pub mod psi;
pub mod sobolev;
pub mod spec;
pub mod table;

pub use grid2d::Gridded2d;
pub use klimov::{klimov_numeric, klimov_symmetrize, power_sum_klimov, AsymptoticModel, KlimovResult, KlimovRoute};
pub use psi::Diamond;
pub use sobolev::{sobolev_classifier, SobolevRegime, SobolevReport};
pub use spec::{YoungSpec, YoungVariant};
pub use table::{OneDimYoung, TailModel};
