//! Both sides of the weighted Hardy inequalities
//!
//! ```text
//! (int (t^{-r} int_0^t psi)^q dt/t)^{1/q}  <=  c (int (t^{1-r} psi)^q dt/t)^{1/q}
//! (int (t^{r} int_t^inf psi)^q dt/t)^{1/q} <=  c (int (t^{1+r} psi)^q dt/t)^{1/q}
//! ```
//!
//! for non-negative step functions with bounded support.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate_power_head, integrate_with, QuadOptions};
use crate::rearrange::StepProfile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardySides {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`, present when both sides are finite (0 when both vanish)
    pub ratio: Option<f64>,
}

impl HardySides {
    fn new(lhs: f64, rhs: f64) -> Self {
        let ratio = if !lhs.is_finite() || !rhs.is_finite() {
            None
        } else if rhs == 0.0 {
            (lhs == 0.0).then_some(0.0)
        } else {
            Some(lhs / rhs)
        };
        Self { lhs, rhs, ratio }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyReport {
    pub r: f64,
    pub q: f64,
    /// primitive from 0
    pub inner: HardySides,
    /// primitive to infinity
    pub outer: HardySides,
}

impl HardyReport {
    /// Largest finite ratio of the two inequalities.
    pub fn ratio(&self) -> Option<f64> {
        match (self.inner.ratio, self.outer.ratio) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }
}

fn opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-12,
        max_depth: 50,
    }
}

/// `int_a^b t^{e-1} dt`, infinite when divergent.
fn power_piece(e: f64, a: f64, b: f64) -> f64 {
    if e == 0.0 {
        if a == 0.0 {
            f64::INFINITY
        } else {
            (b / a).ln()
        }
    } else if e < 0.0 && a == 0.0 {
        f64::INFINITY
    } else {
        (b.powf(e) - a.powf(e)) / e
    }
}

/// Evaluates both inequalities. For `q < 1` the proposition needs `psi`
/// monotone; such calls without `monotone` are refused.
pub fn hardy_check(psi: &StepProfile, r: f64, q: f64, monotone: bool) -> Result<HardyReport> {
    if !(r > 0.0) || !(q > 0.0) || !r.is_finite() || !q.is_finite() {
        return invalid("Hardy check needs finite r > 0 and q > 0");
    }
    if psi.values.iter().any(|&v| v < 0.0) {
        return invalid("Hardy check needs a non-negative psi");
    }
    if q < 1.0 && !monotone {
        return Err(Error::HypothesisViolation(
            "q < 1 requires psi in the cone of monotone functions".into(),
        ));
    }
    if monotone {
        let inc = psi.values.windows(2).all(|w| w[1] >= w[0]);
        let dec = psi.values.windows(2).all(|w| w[1] <= w[0]);
        if !inc && !dec {
            return invalid("psi was declared monotone but is not");
        }
    }
    let inner = HardySides::new(inner_lhs(psi, r, q)?, rhs(psi, 1.0 - r, q));
    let outer = HardySides::new(outer_lhs(psi, r, q)?, rhs(psi, 1.0 + r, q));
    Ok(HardyReport { r, q, inner, outer })
}

/// `(int (t^{w} psi)^q dt/t)^{1/q}`, exact on steps.
fn rhs(psi: &StepProfile, w: f64, q: f64) -> f64 {
    let mut acc = 0.0;
    for (a, b, v) in psi.pieces() {
        if v != 0.0 {
            acc += v.powf(q) * power_piece(w * q, a, b);
        }
    }
    acc.powf(1.0 / q)
}

fn inner_lhs(psi: &StepProfile, r: f64, q: f64) -> Result<f64> {
    let mut acc = 0.0;
    let mut prim = 0.0;
    for (a, b, v) in psi.pieces() {
        if a == 0.0 {
            // primitive v t: integrand v^q t^{(1-r)q-1}
            if v != 0.0 {
                acc += v.powf(q) * power_piece((1.0 - r) * q, 0.0, b);
            }
        } else if prim != 0.0 || v != 0.0 {
            let p0 = prim;
            let piece = integrate_with(|t| ((p0 + v * (t - a)) * t.powf(-r)).powf(q) / t, a, b, opts())
                .ok_or_else(|| Error::Quadrature("Hardy piece did not converge".into()))?;
            acc += piece;
        }
        prim += v * (b - a);
    }
    // beyond the support the primitive is constant
    if prim != 0.0 {
        acc += prim.powf(q) * psi.measure().powf(-r * q) / (r * q);
    }
    Ok(acc.powf(1.0 / q))
}

fn outer_lhs(psi: &StepProfile, r: f64, q: f64) -> Result<f64> {
    let mut acc = 0.0;
    let mut tail = 0.0;
    let pieces: Vec<(f64, f64, f64)> = psi.pieces().collect();
    for &(a, b, v) in pieces.iter().rev() {
        if tail == 0.0 && v == 0.0 {
            continue;
        }
        let t0 = tail;
        let rem = |t: f64| t0 + v * (b - t);
        let piece = if a == 0.0 {
            integrate_power_head(|t| rem(t).powf(q), r * q - 1.0, b, opts())
        } else {
            integrate_with(|t| (t.powf(r) * rem(t)).powf(q) / t, a, b, opts())
        }
        .ok_or_else(|| Error::Quadrature("Hardy piece did not converge".into()))?;
        acc += piece;
        tail += v * (b - a);
    }
    Ok(acc.powf(1.0 / q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_values() {
        let psi = StepProfile::constant(1.0, 1.0).unwrap();
        let rep = hardy_check(&psi, 0.5, 1.0, true).unwrap();
        assert!((rep.inner.lhs - 4.0).abs() < 1e-10);
        assert!((rep.inner.rhs - 2.0).abs() < 1e-10);
        assert!((rep.inner.ratio.unwrap() - 2.0).abs() < 1e-10);
        // int_0^1 t^{-1/2} (1 - t) dt = 4/3 against int_0^1 t^{1/2} dt = 2/3
        assert!((rep.outer.lhs - 4.0 / 3.0).abs() < 1e-10);
        assert!((rep.outer.rhs - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn zero_and_refusals() {
        let z = StepProfile::constant(0.0, 1.0).unwrap();
        let rep = hardy_check(&z, 1.0, 2.0, false).unwrap();
        assert_eq!(rep.inner.ratio, Some(0.0));
        assert_eq!(rep.outer.ratio, Some(0.0));
        let psi = StepProfile::uniform(vec![1.0, 3.0, 2.0], 1.0).unwrap();
        assert!(matches!(hardy_check(&psi, 0.5, 0.5, false), Err(Error::HypothesisViolation(_))));
        assert!(hardy_check(&psi, 0.5, 0.5, true).is_err());
    }

    #[test]
    fn r_one_only_outer_is_finite() {
        let psi = StepProfile::uniform(vec![3.0, 2.0, 0.5], 0.4).unwrap();
        let rep = hardy_check(&psi, 1.0, 2.0, true).unwrap();
        assert!(rep.inner.ratio.is_none());
        assert!(rep.outer.ratio.unwrap().is_finite());
    }

    #[test]
    fn quadrature_oracle_for_a_two_step_profile() {
        // psi = 2 on [0,1), 1 on [1,2), r = 1/2, q = 2
        let psi = StepProfile::uniform(vec![2.0, 1.0], 1.0).unwrap();
        let rep = hardy_check(&psi, 0.5, 2.0, true).unwrap();
        let prim = |t: f64| if t < 1.0 { 2.0 * t } else if t < 2.0 { 2.0 + (t - 1.0) } else { 3.0 };
        let f = |t: f64| (prim(t) * t.powf(-0.5)).powi(2) / t;
        let o = QuadOptions::default();
        let num = integrate_with(f, 1e-300, 1.0, o).unwrap()
            + integrate_with(f, 1.0, 2.0, o).unwrap()
            + 9.0 / 2.0;
        assert!((rep.inner.lhs - num.sqrt()).abs() < 1e-9, "{} vs {}", rep.inner.lhs, num.sqrt());
    }
}
