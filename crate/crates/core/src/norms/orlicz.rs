//! Luxemburg norms and the Orlicz–Lorentz space `X_{A,N}`.

use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate_power_head, integrate_to_infinity, integrate_with, QuadOptions};
use crate::rearrange::StepProfile;
use crate::young::table::log_grid;
use crate::young::{OneDimYoung, TailModel};

/// Smallest `k > 0` with `modular(k) <= 1`, for a modular non-increasing in `k`.
/// Geometric bisection to relative width `1e-10`.
pub fn luxemburg_by_bisection<M: Fn(f64) -> f64>(modular: M, scale: f64) -> Result<f64> {
    if !(scale > 0.0) {
        return Ok(0.0);
    }
    let mut hi = scale;
    let mut guard = 0;
    while !(modular(hi) <= 1.0) {
        hi *= 2.0;
        guard += 1;
        if guard > 2000 {
            return Err(Error::Quadrature("Luxemburg modular stays above 1".into()));
        }
    }
    let mut lo = hi;
    guard = 0;
    while modular(lo) <= 1.0 {
        lo *= 0.5;
        guard += 1;
        if guard > 2000 {
            // modular vanishes at every scale probed: the norm is zero
            return Ok(0.0);
        }
    }
    while hi / lo - 1.0 > 1e-10 {
        let mid = (lo * hi).sqrt();
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `inf{k > 0 : int A(f*/k) <= 1}` for a step profile.
pub fn luxemburg_norm(f: &StepProfile, a: &OneDimYoung) -> Result<f64> {
    let pieces: Vec<(f64, f64)> = f.pieces().filter(|p| p.2 != 0.0).map(|(l, r, v)| (r - l, v.abs())).collect();
    let top = pieces.iter().fold(0.0f64, |m, p| m.max(p.1));
    luxemburg_by_bisection(|k| pieces.iter().map(|&(w, v)| w * a.eval(v / k)).sum(), top)
}

/// The Young function `B` of `X_{A,N}` together with the primitive
/// `I(u) = int_u^inf B(w) w^{-N-1} dw` used to evaluate the norm.
#[derive(Debug, Clone)]
pub struct OrliczLorentz {
    pub a: OneDimYoung,
    pub b: OneDimYoung,
    pub dim: usize,
    /// set when `A` was replaced near zero to make the defining integral converge
    pub renormalized: bool,
    u_grid: Vec<f64>,
    i_grid: Vec<f64>,
}

/// Number of levels of the inversion grid.
pub const OL_LEVELS: usize = 512;

impl OrliczLorentz {
    /// Builds `B` from `A`. When `int_0 (s/A(s))^{1/(N-1)} ds` diverges, `A` is
    /// first replaced by its chord on `[0, 1]`, an equivalent Young function near 0.
    pub fn new(a: &OneDimYoung, dim: usize) -> Result<Self> {
        if dim < 2 {
            return invalid("the Orlicz-Lorentz construction needs N >= 2");
        }
        let nf = dim as f64;
        let (a, renormalized) = if int_a_converges(a, dim) {
            (a.clone(), false)
        } else {
            (a.renormalize_near_zero(1.0)?, true)
        };
        if !int_a_converges(&a, dim) {
            return Err(Error::RenormalizationRequired(
                "int_0 (s/A(s))^(1/(N-1)) ds diverges".into(),
            ));
        }
        let opts = QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-10,
            max_depth: 40,
        };
        let deriv = |t: f64| a.deriv_left(t);
        let inv = 1.0 / (nf - 1.0);
        // x grid: the levels proper, continued upward for the tail of J
        let per_decade = (OL_LEVELS - 1) as f64 / 8.0;
        let top_decades = 12.0;
        let n_ext = (per_decade * (top_decades + 4.0)).round() as usize + 1;
        let xs = log_grid(1e-4, 10f64.powf(top_decades), n_ext);
        // P(x) = int_0^x a^{-1/(N-1)}
        let e0 = -(a.head_exponent() - 1.0) * inv;
        let x0 = xs[0];
        let head = if a.plateau() > 0.0 {
            return Err(Error::RenormalizationRequired("A vanishes near zero".into()));
        } else {
            integrate_power_head(|t| deriv(t).powf(-inv) / t.powf(e0), e0, x0, opts)
        }
        .ok_or_else(|| Error::Quadrature("head of int a^(-1/(N-1)) did not converge".into()))?;
        let mut p = Vec::with_capacity(xs.len());
        p.push(head);
        for w in xs.windows(2) {
            let step = integrate_with(|t| deriv(t).powf(-inv), w[0], w[1], opts)
                .ok_or_else(|| Error::Quadrature("int a^(-1/(N-1)) did not converge".into()))?;
            p.push(p.last().unwrap() + step);
        }
        // J(x) = int_x^inf P^{-N} a^{-N'} dr, with P interpolated in log-log
        let np = nf / (nf - 1.0);
        let p_at = |r: f64| loglog_interp(&xs, &p, r);
        let g = |r: f64| p_at(r).powf(-nf) * deriv(r).powf(-np);
        let m = xs.len() - 1;
        let (g1, g2) = (g(xs[m - 1]), g(xs[m]));
        let beta = -(g2 / g1).ln() / (xs[m] / xs[m - 1]).ln();
        if !(beta > 1.0) {
            return Err(Error::Quadrature("tail of the b-integral is not integrable".into()));
        }
        let mut j = vec![0.0; xs.len()];
        j[m] = g2 * xs[m] / (beta - 1.0);
        for k in (0..m).rev() {
            let step = integrate_with(g, xs[k], xs[k + 1], opts)
                .ok_or_else(|| Error::Quadrature("b-integral did not converge".into()))?;
            j[k] = j[k + 1] + step;
        }
        // b(y_k) = a(x_k) at y_k = J(x_k)^{1/(1-N)} on the level range
        let n_levels = OL_LEVELS.min(xs.len());
        let mut ys = Vec::with_capacity(n_levels);
        let mut bs = Vec::with_capacity(n_levels);
        for k in 0..n_levels {
            let y = j[k].powf(1.0 / (1.0 - nf));
            let bv = deriv(xs[k]);
            if ys.last().is_none_or(|&last| y > last) && bv > 0.0 {
                ys.push(y);
                bs.push(bv);
            }
        }
        if ys.len() < 8 {
            return Err(Error::Quadrature("degenerate b table".into()));
        }
        // B = int b: power head below y_0, exact integral of the piecewise-linear b after
        let mh = (bs[1] / bs[0]).ln() / (ys[1] / ys[0]).ln();
        let mut big_b = Vec::with_capacity(ys.len());
        big_b.push(bs[0] * ys[0] / (mh + 1.0));
        for k in 1..ys.len() {
            let last = *big_b.last().unwrap();
            big_b.push(last + 0.5 * (bs[k] + bs[k - 1]) * (ys[k] - ys[k - 1]));
        }
        let tail = fit_power_log_tail(&ys, &big_b);
        let b = OneDimYoung::from_samples(ys, big_b, Some(tail))?;
        let mut ol = Self {
            a,
            b,
            dim,
            renormalized,
            u_grid: Vec::new(),
            i_grid: Vec::new(),
        };
        ol.tabulate_primitive()?;
        Ok(ol)
    }

    fn weight(&self, w: f64) -> f64 {
        self.b.eval(w) * w.powf(-(self.dim as f64) - 1.0)
    }

    fn tabulate_primitive(&mut self) -> Result<()> {
        let opts = QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-10,
            max_depth: 40,
        };
        let us = log_grid(1e-8, 1e12, 1601);
        let top = *us.last().unwrap();
        let nf = self.dim as f64;
        // int_top^inf B(w) w^{-N-1} dw in w = top e^t
        let tail = integrate_to_infinity(|t| self.b.eval(top * t.exp()) * (top * t.exp()).powf(-nf), 0.0, opts)
            .ok_or_else(|| Error::Quadrature("B(w) w^(-N-1) is not integrable at infinity".into()))?;
        let mut is = vec![0.0; us.len()];
        *is.last_mut().unwrap() = tail;
        for k in (0..us.len() - 1).rev() {
            let step = integrate_with(|w| self.weight(w), us[k], us[k + 1], opts)
                .ok_or_else(|| Error::Quadrature("primitive of B(w) w^(-N-1) failed".into()))?;
            is[k] = is[k + 1] + step;
        }
        self.u_grid = us;
        self.i_grid = is;
        Ok(())
    }

    /// `I(u) = int_u^inf B(w) w^{-N-1} dw`.
    pub fn primitive(&self, u: f64) -> f64 {
        if u.is_infinite() {
            return 0.0;
        }
        let us = &self.u_grid;
        let k = us.partition_point(|&x| x <= u);
        let opts = QuadOptions::default();
        if k == 0 {
            let extra = integrate_with(|w| self.weight(w), u, us[0], opts).unwrap_or(f64::INFINITY);
            return self.i_grid[0] + extra;
        }
        if k == us.len() {
            let nf = self.dim as f64;
            return integrate_to_infinity(|t| self.b.eval(u * t.exp()) * (u * t.exp()).powf(-nf), 0.0, opts)
                .unwrap_or(0.0);
        }
        let part = integrate_with(|w| self.weight(w), u, us[k], opts).unwrap_or(0.0);
        self.i_grid[k] + part
    }

    /// `|| s^{-1/N} f*(s) ||_{L^B(0, measure)}`.
    pub fn norm(&self, f: &StepProfile, measure: f64) -> Result<f64> {
        let f = f.as_rearrangement();
        if f.measure() > measure * (1.0 + 1e-12) {
            return invalid("profile extends beyond the domain measure");
        }
        let nf = self.dim as f64;
        let pieces: Vec<(f64, f64, f64)> = f.pieces().filter(|p| p.2 != 0.0).collect();
        // int_a^b B(c s^{-1/N}) ds = N c^N (I(c b^{-1/N}) - I(c a^{-1/N}))
        let modular = |k: f64| -> f64 {
            pieces
                .iter()
                .map(|&(a, b, v)| {
                    let c = v / k;
                    let ub = c * b.powf(-1.0 / nf);
                    let ua = if a == 0.0 { f64::INFINITY } else { c * a.powf(-1.0 / nf) };
                    nf * c.powf(nf) * (self.primitive(ub) - self.primitive(ua)).max(0.0)
                })
                .sum()
        };
        let scale = pieces.first().map_or(0.0, |p| p.2 * measure.powf(-1.0 / nf));
        luxemburg_by_bisection(modular, scale)
    }
}

/// `X_{A,N}` norm of a step profile on `(0, measure)`.
pub fn orlicz_lorentz_norm(f: &StepProfile, a: &OneDimYoung, dim: usize, measure: f64) -> Result<f64> {
    OrliczLorentz::new(a, dim)?.norm(f, measure)
}

/// Whether `int_0 (1/a)^{1/(N-1)}` converges, read off the head of `A`.
pub fn int_a_converges(a: &OneDimYoung, dim: usize) -> bool {
    a.plateau() == 0.0 && a.head_exponent() < dim as f64 - 1e-9
}

fn loglog_interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let k = xs.partition_point(|&t| t <= x).clamp(1, xs.len() - 1) - 1;
    let t = (x / xs[k]).ln() / (xs[k + 1] / xs[k]).ln();
    ys[k] * (ys[k + 1] / ys[k]).powf(t)
}

/// Fits `B ~ y^q (log(e + y))^gamma` through three samples near the top.
fn fit_power_log_tail(ys: &[f64], vs: &[f64]) -> TailModel {
    let m = ys.len() - 1;
    let idx = [m - 40.min(m / 2), m - 20.min(m / 4), m];
    let l = |y: f64| (std::f64::consts::E + y).ln().ln();
    let (y0, y1, y2) = (ys[idx[0]], ys[idx[1]], ys[idx[2]]);
    let (v0, v1, v2) = (vs[idx[0]].ln(), vs[idx[1]].ln(), vs[idx[2]].ln());
    // log v = c + q log y + gamma log log(e+y): eliminate c with differences
    let (a1, b1, r1) = (y1.ln() - y0.ln(), l(y1) - l(y0), v1 - v0);
    let (a2, b2, r2) = (y2.ln() - y1.ln(), l(y2) - l(y1), v2 - v1);
    let det = a1 * b2 - a2 * b1;
    if det.abs() < 1e-14 {
        return TailModel::power(r2 / a2);
    }
    let q = (r1 * b2 - r2 * b1) / det;
    let gamma = (a1 * r2 - a2 * r1) / det;
    if q > 1.0 && q.is_finite() && gamma.is_finite() {
        TailModel::power_log(q, gamma, std::f64::consts::E)
    } else {
        TailModel::power(r2 / a2)
    }
}
