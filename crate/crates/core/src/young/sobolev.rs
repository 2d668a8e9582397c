use serde::Serialize;

use super::table::OneDimYoung;
use crate::error::{Error, Result};
use crate::quadrature::integrate;

#[derive(Debug, Clone, Serialize)]
pub enum SobolevRegime {
    /// `int^inf (s/Phi)^{1/(N-1)} < inf`: embedding into bounded functions.
    Bounded,
    /// Divergent tail integral: exponential-type integrability through `Phi_N`.
    Orlicz,
}

#[derive(Debug, Clone)]
pub struct SobolevReport {
    pub regime: SobolevRegime,
    /// Knots `r` and values `H(r)`; present in the divergent regime.
    pub h_samples: Option<(Vec<f64>, Vec<f64>)>,
    pub phi_n: Option<OneDimYoung>,
}

impl SobolevReport {
    /// `H(r)` by interpolation of the cumulative samples.
    pub fn h(&self, r: f64) -> Option<f64> {
        let (rs, hs) = self.h_samples.as_ref()?;
        let j = rs.partition_point(|&x| x <= r).clamp(1, rs.len() - 1) - 1;
        if rs[j] > 0.0 && hs[j] > 0.0 && r > 0.0 {
            let t = (r / rs[j]).ln() / (rs[j + 1] / rs[j]).ln();
            return Some(hs[j] * (hs[j + 1] / hs[j]).powf(t));
        }
        let t = (r - rs[j]) / (rs[j + 1] - rs[j]);
        Some(hs[j] + t * (hs[j + 1] - hs[j]))
    }
}

fn head_integrable(phi: &OneDimYoung, n: usize) -> bool {
    phi.plateau() == 0.0 && phi.head_exponent() < n as f64 - 1e-9
}

fn tail_integrable(phi: &OneDimYoung, n: usize) -> bool {
    let t = phi.tail();
    let d = (n - 1) as f64;
    let e = (1.0 - t.exponent) / d;
    let g = -t.log_exponent / d;
    e < -1.0 - 1e-9 || ((e + 1.0).abs() <= 1e-9 && g < -1.0)
}

/// Classifies the embedding regime and, when the tail integral diverges,
/// tabulates `H` and `Phi_N = Phi o H^{-1}`.
pub fn sobolev_classifier(phi: &OneDimYoung, n: usize) -> Result<SobolevReport> {
    if n < 2 {
        return Err(Error::InvalidInput("dimension must be at least 2".into()));
    }
    if !head_integrable(phi, n) {
        return Err(Error::RenormalizationRequired(format!(
            "int_0 (s/Phi(s))^(1/(N-1)) ds diverges (head exponent {:.4}, N = {n})",
            phi.head_exponent()
        )));
    }
    if tail_integrable(phi, n) {
        return Ok(SobolevReport {
            regime: SobolevRegime::Bounded,
            h_samples: None,
            phi_n: None,
        });
    }
    let d = (n - 1) as f64;
    let integrand = |s: f64| {
        let v = phi.eval(s);
        if v <= 0.0 {
            0.0
        } else {
            (s / v).powf(1.0 / d)
        }
    };
    let knots = phi.knots();
    // head piece a s^h on [0, s1]: exact
    let s1 = knots[1];
    let a = phi.eval(s1) / s1.powf(phi.head_exponent());
    let e = (1.0 - phi.head_exponent()) / d;
    let mut cum = a.powf(-1.0 / d) * s1.powf(e + 1.0) / (e + 1.0);
    let mut rs = vec![0.0, s1];
    let mut ks = vec![0.0, cum];
    for w in knots[1..].windows(2) {
        let piece = integrate(integrand, w[0], w[1])
            .ok_or_else(|| Error::Quadrature(format!("H integral on [{:e}, {:e}]", w[0], w[1])))?;
        cum += piece;
        rs.push(w[1]);
        ks.push(cum);
    }
    let np = n as f64 / d; // N'
    let hs: Vec<f64> = ks.iter().map(|k| k.powf(1.0 / np)).collect();
    // Phi_N(H(r)) = Phi(r) sampled at the knots
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (r, h) in rs.iter().zip(&hs).skip(1) {
        if ts.last().is_none_or(|&l: &f64| *h > l * (1.0 + 1e-12)) {
            ts.push(*h);
            vs.push(phi.eval(*r));
        }
    }
    let phi_n = OneDimYoung::from_samples(ts, vs, None)?;
    Ok(SobolevReport {
        regime: SobolevRegime::Orlicz,
        h_samples: Some((rs, hs)),
        phi_n: Some(phi_n),
    })
}
