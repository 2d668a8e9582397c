//! Radial functions on the ball with the measure of the original domain,
//! represented through the measure coordinate `s = omega_N |x|^N`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Measure of the unit ball in `R^n`.
pub fn omega(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    std::f64::consts::PI.powf(h) / libm::tgamma(1.0 + h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interp {
    /// right-continuous steps, value `v_k` on `[s_k, s_{k+1})`
    Step,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub s: Vec<f64>,
    pub v: Vec<f64>,
    pub dim: usize,
    pub interp: Interp,
}

impl RadialProfile {
    pub fn new(s: Vec<f64>, v: Vec<f64>, dim: usize, interp: Interp) -> Result<Self> {
        if s.len() != v.len() || s.len() < 2 {
            return invalid("radial profile needs matching grids of length >= 2");
        }
        if s[0] != 0.0 || s.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("measure grid must start at 0 and increase strictly");
        }
        Ok(Self { s, v, dim, interp })
    }

    pub fn measure(&self) -> f64 {
        *self.s.last().unwrap()
    }

    pub fn radius_of(&self, s: f64) -> f64 {
        (s / omega(self.dim)).powf(1.0 / self.dim as f64)
    }

    pub fn measure_of(&self, r: f64) -> f64 {
        omega(self.dim) * r.powi(self.dim as i32)
    }

    /// Value at measure coordinate `s` (0 beyond the measure).
    pub fn at_measure(&self, s: f64) -> f64 {
        if s >= self.measure() {
            return match self.interp {
                Interp::Linear if s == self.measure() => *self.v.last().unwrap(),
                _ => 0.0,
            };
        }
        let j = self.s.partition_point(|&x| x <= s).clamp(1, self.s.len()) - 1;
        match self.interp {
            Interp::Step => self.v[j],
            Interp::Linear => {
                let t = (s - self.s[j]) / (self.s[j + 1] - self.s[j]);
                self.v[j] + t * (self.v[j + 1] - self.v[j])
            }
        }
    }

    pub fn at_point(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|c| c * c).sum();
        self.at_measure(self.measure_of(r2.sqrt()))
    }

    pub fn is_non_increasing(&self) -> bool {
        self.v.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-300)
    }

    /// CSV with columns `s,radius,v`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,radius,v\n");
        for (s, v) in self.s.iter().zip(&self.v) {
            out.push_str(&format!("{s:.12e},{:.12e},{v:.12e}\n", self.radius_of(*s)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_measures() {
        assert!((omega(2) - std::f64::consts::PI).abs() < 1e-14);
        assert!((omega(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-13);
        assert!((omega(1) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn linear_profile_lookup() {
        let p = RadialProfile::new(vec![0.0, 1.0, 2.0], vec![2.0, 1.0, 0.0], 2, Interp::Linear).unwrap();
        assert!((p.at_measure(0.5) - 1.5).abs() < 1e-15);
        assert_eq!(p.at_measure(3.0), 0.0);
        assert!(p.is_non_increasing());
        let r = p.radius_of(1.0);
        assert!((p.measure_of(r) - 1.0).abs() < 1e-14);
    }
}
