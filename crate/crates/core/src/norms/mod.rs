//! Rearrangement-invariant norms of step profiles and grid fields.

mod hardy;
mod lorentz;
mod orlicz;

pub use hardy::{hardy_check, HardyReport, HardySides};
pub use lorentz::{lorentz_norm, lorentz_zygmund_norm, LorentzZygmund};
pub use orlicz::{
    int_a_converges, luxemburg_by_bisection, luxemburg_norm, orlicz_lorentz_norm, OrliczLorentz, OL_LEVELS,
};

use crate::error::Result;
use crate::rearrange::{decreasing_rearrangement, GridFunction, StepProfile};
use crate::young::OneDimYoung;

#[derive(Debug, Clone)]
pub enum NormSpec {
    Lorentz { p: f64, q: f64 },
    LorentzZygmund(LorentzZygmund),
    Orlicz(OneDimYoung),
    OrliczLorentz { a: OneDimYoung, dim: usize },
}

impl NormSpec {
    pub fn lorentz(p: f64, q: f64) -> Self {
        NormSpec::Lorentz { p, q }
    }

    /// Norm of a profile living on `(0, measure)`.
    pub fn eval(&self, f: &StepProfile, measure: f64) -> Result<f64> {
        match self {
            NormSpec::Lorentz { p, q } => lorentz_norm(f, *p, *q),
            NormSpec::LorentzZygmund(lz) => lorentz_zygmund_norm(f, lz, measure),
            NormSpec::Orlicz(a) => luxemburg_norm(&f.as_rearrangement(), a),
            NormSpec::OrliczLorentz { a, dim } => orlicz_lorentz_norm(f, a, *dim, measure),
        }
    }

    /// Norm of a grid field through its decreasing rearrangement.
    pub fn eval_grid(&self, u: &GridFunction) -> Result<f64> {
        self.eval(&decreasing_rearrangement(u), u.measure())
    }
}

/// `L^p` norm of a profile.
pub fn lp_norm(f: &StepProfile, p: f64) -> f64 {
    if p.is_infinite() {
        return f.sup_abs();
    }
    f.pieces().map(|(a, b, v)| (b - a) * v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}
