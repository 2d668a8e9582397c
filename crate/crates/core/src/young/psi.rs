use super::table::OneDimYoung;
use crate::error::{Error, Result};

/// A symmetrised Young function together with its conjugate, which the
/// barrier construction needs through `Psi^{-1}` and `(Phi_conj)^{-1}`.
#[derive(Debug, Clone)]
pub struct Diamond {
    pub phi: OneDimYoung,
    pub conj: OneDimYoung,
}

impl Diamond {
    pub fn new(phi: OneDimYoung) -> Result<Self> {
        if !phi.psi_vanishes_at_zero() {
            return Err(Error::HypothesisViolation(
                "Phi_diamond(s)/s does not vanish as s -> 0+".into(),
            ));
        }
        let conj = phi.conjugate()?;
        Ok(Self { phi, conj })
    }

    pub fn power(coef: f64, exponent: f64) -> Result<Self> {
        Self::new(OneDimYoung::power(coef, exponent)?)
    }

    pub fn psi(&self, s: f64) -> f64 {
        self.phi.psi(s)
    }

    pub fn psi_sup(&self) -> f64 {
        self.phi.psi_sup()
    }

    /// Inverse of `Psi` restricted to `[s0, inf)`.
    pub fn psi_inverse(&self, r: f64) -> Result<f64> {
        psi_inverse(&self.phi, r)
    }

    /// Left inverse of the conjugate on `[0, inf)`.
    pub fn conj_inverse(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        self.conj.inverse(r)
    }
}

/// Inverse of `s -> phi(s)/s` on `[s0, inf)` by geometric bisection.
pub fn psi_inverse(phi: &OneDimYoung, r: f64) -> Result<f64> {
    let s0 = phi.plateau();
    if r <= 0.0 {
        return Ok(s0);
    }
    if r >= phi.psi_sup() {
        return Err(Error::BarrierUndefined(format!(
            "argument {r:e} exceeds sup Psi = {:e}",
            phi.psi_sup()
        )));
    }
    let mut hi = if s0 > 0.0 { 2.0 * s0 } else { 1.0 };
    let mut n = 0;
    while phi.psi(hi) < r {
        hi *= 2.0;
        n += 1;
        if n > 2100 || !hi.is_finite() {
            return Err(Error::BarrierUndefined(format!("Psi never reaches {r:e}")));
        }
    }
    let mut lo = hi * 0.5;
    n = 0;
    while lo > s0 && phi.psi(lo) >= r {
        lo *= 0.5;
        n += 1;
        if lo < 1e-300 || n > 2100 {
            return Ok(lo.max(s0));
        }
    }
    let lo_bound = lo.max(s0);
    let (mut lo, mut hi) = (lo_bound, hi);
    for _ in 0..300 {
        let mid = if lo > 0.0 { (lo * hi).sqrt() } else { 0.5 * hi };
        if phi.psi(mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::young::table::standard_grid;

    #[test]
    fn power_psi_inverse() {
        let d = Diamond::power(0.9, 2.5).unwrap();
        for &r in &[1e-4, 0.3, 2.0, 1e3] {
            let exact = (r / 0.9f64).powf(1.0 / 1.5);
            let got = d.psi_inverse(r).unwrap();
            assert!((got - exact).abs() / exact < 1e-12, "{r}");
        }
    }

    #[test]
    fn square_examples() {
        let d = Diamond::power(1.0, 2.0).unwrap();
        assert!((d.psi_inverse(3.0).unwrap() - 3.0).abs() < 1e-12);
        assert!((d.conj_inverse(1.0) - 2.0).abs() < 1e-12);
        assert_eq!(d.conj_inverse(0.0), 0.0);
    }

    #[test]
    fn round_trip_and_plateau() {
        let phi = OneDimYoung::from_fn(|x| (x - 1.0).max(0.0).powi(2), &standard_grid(), None).unwrap();
        let d = Diamond::new(phi).unwrap();
        assert_eq!(d.psi_inverse(0.0).unwrap(), d.phi.plateau());
        for &s in &[1.5, 3.0, 40.0] {
            let back = d.psi_inverse(d.psi(s)).unwrap();
            assert!((back - s).abs() / s < 1e-9);
        }
    }

    #[test]
    fn conjugate_round_trip_power() {
        let d = Diamond::power(0.7, 1.8).unwrap();
        let x = d.conj_inverse(5.0);
        assert!((d.conj.eval(x) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn plateau_inequality() {
        // conj(r) <= phi(psi^{-1}(r))
        let d = Diamond::power(1.3, 2.7).unwrap();
        for r in crate::young::table::log_grid(1e-3, 1e3, 40) {
            let lhs = d.conj.eval(r);
            let rhs = d.phi.eval(d.psi_inverse(r).unwrap());
            assert!(lhs <= rhs * (1.0 + 1e-10), "{r}");
        }
    }

    #[test]
    fn bounded_slope_is_rejected_above_sup() {
        // s^2 up to 1 then linear with slope 2: psi_sup = 2 - small
        let grid = standard_grid();
        let phi = OneDimYoung::from_fn(
            |x| if x < 1.0 { x * x } else { 2.0 * x - 1.0 },
            &grid,
            Some(crate::young::table::TailModel::power(1.0)),
        )
        .unwrap();
        assert!(matches!(psi_inverse(&phi, 5.0), Err(Error::BarrierUndefined(_))));
    }
}
