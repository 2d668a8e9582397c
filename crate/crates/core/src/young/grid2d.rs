//! Non-separable two-dimensional Young functions sampled on a square grid.

use serde::{Deserialize, Serialize};

use super::table::OneDimYoung;
use crate::error::{Error, Result};

/// Samples on the nodes `-half + 2 half i / (n-1)`, row index along the first axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gridded2d {
    pub half: f64,
    pub n: usize,
    pub values: Vec<f64>,
}

impl Gridded2d {
    pub fn from_fn<F: Fn(f64, f64) -> f64>(f: F, half: f64, n: usize) -> Result<Self> {
        if n < 5 || n.is_multiple_of(2) {
            return Err(Error::InvalidInput("grid needs an odd node count >= 5".into()));
        }
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(node(half, n, i), node(half, n, j)));
            }
        }
        Ok(Self { half, n, values })
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    fn spacing(&self) -> f64 {
        2.0 * self.half / (self.n - 1) as f64
    }

    /// Bilinear interpolation; outside the box the value is continued
    /// linearly along rays, the convexity lower bound.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let m = x.abs().max(y.abs());
        if m > self.half {
            let t = m / self.half;
            return t * self.eval(x / t, y / t);
        }
        let h = self.spacing();
        let fx = ((x + self.half) / h).clamp(0.0, (self.n - 1) as f64);
        let fy = ((y + self.half) / h).clamp(0.0, (self.n - 1) as f64);
        let i = (fx.floor() as usize).min(self.n - 2);
        let j = (fy.floor() as usize).min(self.n - 2);
        let (a, b) = (fx - i as f64, fy - j as f64);
        (1.0 - a) * (1.0 - b) * self.at(i, j)
            + a * (1.0 - b) * self.at(i + 1, j)
            + (1.0 - a) * b * self.at(i, j + 1)
            + a * b * self.at(i + 1, j + 1)
    }

    fn boundary_min(&self) -> f64 {
        let n = self.n;
        let mut m = f64::INFINITY;
        for k in 0..n {
            m = m
                .min(self.at(0, k))
                .min(self.at(n - 1, k))
                .min(self.at(k, 0))
                .min(self.at(k, n - 1));
        }
        m
    }

    /// Discrete Legendre–Fenchel transform, computed as two nested
    /// one-dimensional maximisations. The dual box is chosen so that every
    /// maximiser lies inside the primal box.
    pub fn conjugate(&self) -> Gridded2d {
        let n = self.n;
        let dual_half = self.boundary_min() / (2.0 * self.half);
        let xs: Vec<f64> = (0..n).map(|i| node(self.half, n, i)).collect();
        let ds: Vec<f64> = (0..n).map(|i| node(dual_half, n, i)).collect();
        // inner[i][l] = max_j (y_j * d_l - phi(x_i, y_j))
        let mut inner = vec![0.0; n * n];
        for i in 0..n {
            for (l, &dl) in ds.iter().enumerate() {
                let mut best = f64::NEG_INFINITY;
                for (j, &yj) in xs.iter().enumerate() {
                    best = best.max(yj * dl - self.at(i, j));
                }
                inner[i * n + l] = best;
            }
        }
        let mut values = vec![0.0; n * n];
        for (k, &dk) in ds.iter().enumerate() {
            for l in 0..n {
                let mut best = f64::NEG_INFINITY;
                for (i, &xi) in xs.iter().enumerate() {
                    best = best.max(xi * dk + inner[i * n + l]);
                }
                values[k * n + l] = best.max(0.0);
            }
        }
        Gridded2d {
            half: dual_half,
            n,
            values,
        }
    }

    /// Measure of `{value < tau}` by node counting (each node owns one cell).
    pub fn sublevel_measure(&self, tau: f64) -> f64 {
        let h = self.spacing();
        self.values.iter().filter(|&&v| v < tau).count() as f64 * h * h
    }

    /// Klimov symmetrisation through the grid: conjugate, sublevel measures,
    /// radial profile, conjugate again. Valid on the range of slopes the
    /// truncated dual box can resolve.
    pub fn klimov(&self) -> Result<OneDimYoung> {
        let conj = self.conjugate();
        let tau_max = conj.boundary_min();
        let mut sorted: Vec<f64> = conj.values.iter().copied().filter(|v| *v < tau_max).collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // nodes whose discrete maximiser is the origin read exactly zero;
        // start the levels well above that resolution floor
        let zeros = sorted.iter().take_while(|v| **v <= 0.0).count();
        let min_count = 30usize.max(4 * zeros);
        if sorted.len() <= min_count + 10 {
            return Err(Error::Unsupported("grid too coarse for sublevel counting".into()));
        }
        let tau_lo = sorted[min_count];
        if !(tau_lo > 0.0) {
            return Err(Error::Unsupported(
                "conjugate grid vanishes on a large set; refine the grid".into(),
            ));
        }
        let levels = super::table::log_grid(tau_lo, 0.95 * tau_max, 160);
        let mut rho = Vec::new();
        let mut tau = Vec::new();
        for &t in &levels {
            let r = (conj.sublevel_measure(t) / std::f64::consts::PI).sqrt();
            if rho.last().is_none_or(|&last: &f64| r > last * (1.0 + 1e-12)) {
                rho.push(r);
                tau.push(t);
            }
        }
        let b = OneDimYoung::from_samples_convexified(rho, tau, None)?;
        b.conjugate()
    }
}

fn node(half: f64, n: usize, i: usize) -> f64 {
    -half + 2.0 * half * i as f64 / (n - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_grid_conjugate() {
        let g = Gridded2d::from_fn(|x, y| x * x + y * y, 4.0, 161).unwrap();
        let c = g.conjugate();
        // (x^2)_conj = t^2 / 4
        for &(a, b) in &[(0.5, 0.3), (-1.0, 0.7), (1.5, -1.5)] {
            let exact = (a * a + b * b) / 4.0;
            assert!((c.eval(a, b) - exact).abs() < 5e-3, "{a},{b}");
        }
    }

    #[test]
    fn quadratic_grid_klimov_is_square() {
        let g = Gridded2d::from_fn(|x, y| x * x + y * y, 4.0, 161).unwrap();
        let k = g.klimov().unwrap();
        for &s in &[0.2, 0.4, 0.7] {
            let rel = (k.eval(s) - s * s).abs() / (s * s);
            assert!(rel < 0.05, "s={s}: {} vs {}", k.eval(s), s * s);
        }
    }
}
