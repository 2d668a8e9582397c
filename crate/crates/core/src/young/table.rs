//! One-dimensional Young functions stored as sample tables.
//!
//! Between knots the function is interpolated by a power law in log-log
//! coordinates, so pure powers are represented exactly. The first positive
//! segment is a shifted power `a (s - s0)^k` starting at the plateau edge
//! `s0`, and beyond the last knot a power-log tail model takes over.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of points of the standard log grid.
pub const STANDARD_POINTS: usize = 2048;
pub const STANDARD_LO: f64 = 1e-6;
pub const STANDARD_HI: f64 = 1e6;

/// Log-spaced grid over `[lo, hi]` with `n` points.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

pub fn standard_grid() -> Vec<f64> {
    log_grid(STANDARD_LO, STANDARD_HI, STANDARD_POINTS)
}

/// Behaviour past the last knot: `v_M (s/s_M)^q (L(s)/L(s_M))^gamma`
/// with `L(s) = ln(shift + s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailModel {
    pub exponent: f64,
    pub log_exponent: f64,
    pub shift: f64,
}

impl TailModel {
    pub fn power(exponent: f64) -> Self {
        Self {
            exponent,
            log_exponent: 0.0,
            shift: std::f64::consts::E,
        }
    }

    pub fn power_log(exponent: f64, log_exponent: f64, shift: f64) -> Self {
        Self {
            exponent,
            log_exponent,
            shift: shift.max(std::f64::consts::E),
        }
    }

    fn l(&self, s: f64) -> f64 {
        (self.shift + s).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Piece {
    a: f64,
    k: f64,
    s0: f64,
}

impl Piece {
    const ZERO: Piece = Piece {
        a: 0.0,
        k: 1.0,
        s0: 0.0,
    };

    fn eval(&self, s: f64) -> f64 {
        if self.a == 0.0 {
            return 0.0;
        }
        let d = (s - self.s0).max(0.0);
        self.a * d.powf(self.k)
    }

    fn deriv(&self, s: f64) -> f64 {
        if self.a == 0.0 {
            return 0.0;
        }
        let d = (s - self.s0).max(0.0);
        if (self.k - 1.0).abs() < 1e-14 {
            self.a
        } else if d == 0.0 {
            if self.k < 1.0 {
                f64::INFINITY
            } else {
                0.0
            }
        } else {
            self.a * self.k * d.powf(self.k - 1.0)
        }
    }

    /// Point of `[lo, hi]` where `t s - piece(s)` is largest.
    fn argmax_dual(&self, t: f64, lo: f64, hi: f64) -> f64 {
        if self.a == 0.0 {
            return hi;
        }
        if (self.k - 1.0).abs() < 1e-12 {
            return if t >= self.a { hi } else { lo };
        }
        let s = self.s0 + (t / (self.a * self.k)).powf(1.0 / (self.k - 1.0));
        s.clamp(lo, hi)
    }
}

/// A one-dimensional Young function on `[0, inf)`, extended evenly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneDimYoung {
    s: Vec<f64>,
    v: Vec<f64>,
    pieces: Vec<Piece>,
    s0: f64,
    tail: TailModel,
}

/// Lower convex hull of the points, with `(0, 0)` prepended when absent.
pub fn lower_hull(s: &[f64], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(s.len() + 1);
    if s.first().is_none_or(|&x| x > 0.0) {
        pts.push((0.0, 0.0));
    }
    pts.extend(s.iter().copied().zip(v.iter().copied()));
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or above the chord from a to p
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.into_iter().unzip()
}

fn local_exponent(s1: f64, v1: f64, s2: f64, v2: f64) -> f64 {
    (v2 / v1).ln() / (s2 / s1).ln()
}

impl OneDimYoung {
    /// Builds a table from samples. A leading `(0, 0)` knot is added when
    /// missing. Without an explicit tail the power exponent of the last two
    /// samples is continued.
    pub fn from_samples(s: Vec<f64>, v: Vec<f64>, tail: Option<TailModel>) -> Result<Self> {
        if s.len() != v.len() || s.len() < 2 {
            return Err(Error::InvalidInput(
                "Young table needs at least two (s, value) samples of equal length".into(),
            ));
        }
        let (mut s, mut v) = (s, v);
        if s[0] != 0.0 {
            s.insert(0, 0.0);
            v.insert(0, 0.0);
        }
        if v[0].abs() > 0.0 {
            return Err(Error::InvalidInput("Young function must vanish at 0".into()));
        }
        for k in 1..s.len() {
            if !(s[k] > s[k - 1]) || !s[k].is_finite() {
                return Err(Error::InvalidInput(format!(
                    "abscissae must be strictly increasing and finite (index {k})"
                )));
            }
            if !(v[k] >= 0.0) || !v[k].is_finite() {
                return Err(Error::InvalidInput(format!(
                    "values must be finite and non-negative (index {k})"
                )));
            }
            if v[k] < v[k - 1] * (1.0 - 1e-9) {
                return Err(Error::InvalidInput(format!(
                    "values must be non-decreasing (index {k})"
                )));
            }
            if v[k] < v[k - 1] {
                v[k] = v[k - 1];
            }
        }
        let m = s.len();
        if v[m - 1] <= 0.0 {
            return Err(Error::InvalidInput(
                "Young function must be positive somewhere on its table".into(),
            ));
        }
        let zero_tol = 1e-300;
        let last_zero = (0..m).rev().find(|&k| v[k] <= zero_tol).unwrap_or(0);
        let s0 = s[last_zero];
        for vk in v.iter_mut().take(last_zero + 1) {
            *vk = 0.0;
        }
        let mut pieces = Vec::with_capacity(m - 1);
        for j in 0..m - 1 {
            let p = if v[j + 1] == 0.0 {
                Piece::ZERO
            } else if v[j] == 0.0 {
                // first positive segment, shifted power from the plateau edge
                let k = if j + 2 < m && v[j + 2] > v[j + 1] {
                    local_exponent(s[j + 1] - s0, v[j + 1], s[j + 2] - s0, v[j + 2])
                } else {
                    1.0
                };
                let k = if k.is_finite() { k.max(1.0) } else { 1.0 };
                Piece {
                    a: v[j + 1] / (s[j + 1] - s0).powf(k),
                    k,
                    s0,
                }
            } else {
                let k = local_exponent(s[j], v[j], s[j + 1], v[j + 1]);
                Piece {
                    a: v[j] / s[j].powf(k),
                    k,
                    s0: 0.0,
                }
            };
            pieces.push(p);
        }
        let tail = match tail {
            Some(t) => t,
            None => {
                let q = if v[m - 2] > 0.0 {
                    local_exponent(s[m - 2], v[m - 2], s[m - 1], v[m - 1])
                } else {
                    1.0
                };
                TailModel::power(q.max(1.0))
            }
        };
        if !(tail.exponent >= 1.0) {
            return Err(Error::InvalidInput(format!(
                "tail exponent {} below 1 is not convex",
                tail.exponent
            )));
        }
        Ok(Self {
            s,
            v,
            pieces,
            s0,
            tail,
        })
    }

    /// Like [`from_samples`](Self::from_samples) after replacing the samples
    /// by their lower convex hull (through the origin). Conjugation only sees
    /// the convex minorant, so this loses nothing for the dual.
    pub fn from_samples_convexified(s: Vec<f64>, v: Vec<f64>, tail: Option<TailModel>) -> Result<Self> {
        let (hs, hv) = lower_hull(&s, &v);
        Self::from_samples(hs, hv, tail)
    }

    /// Samples `f` on `grid` (positive, increasing) and attaches `tail`.
    pub fn from_fn<F: Fn(f64) -> f64>(f: F, grid: &[f64], tail: Option<TailModel>) -> Result<Self> {
        let v: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
        Self::from_samples(grid.to_vec(), v, tail)
    }

    /// `coef * s^exponent` on the standard grid (exact between knots).
    pub fn power(coef: f64, exponent: f64) -> Result<Self> {
        if !(coef > 0.0) || !(exponent >= 1.0) {
            return Err(Error::InvalidInput(format!(
                "power Young function needs coef > 0 and exponent >= 1 (got {coef}, {exponent})"
            )));
        }
        Self::from_fn(
            |x| coef * x.powf(exponent),
            &standard_grid(),
            Some(TailModel::power(exponent)),
        )
    }

    pub fn knots(&self) -> &[f64] {
        &self.s
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn tail(&self) -> TailModel {
        self.tail
    }

    pub fn last_knot(&self) -> f64 {
        *self.s.last().unwrap()
    }

    /// Largest `s` with value zero.
    pub fn plateau(&self) -> f64 {
        self.s0
    }

    /// Exponent of the first positive segment, relative to the plateau edge.
    pub fn head_exponent(&self) -> f64 {
        self.pieces
            .iter()
            .find(|p| p.a > 0.0)
            .map(|p| p.k)
            .unwrap_or(1.0)
    }

    fn segment(&self, s: f64) -> usize {
        // index j with s[j] <= s < s[j+1]
        let idx = self.s.partition_point(|&x| x <= s);
        idx.saturating_sub(1).min(self.pieces.len() - 1)
    }

    fn tail_eval(&self, s: f64) -> f64 {
        let m = self.s.len() - 1;
        let (sm, vm) = (self.s[m], self.v[m]);
        let mut r = vm * (s / sm).powf(self.tail.exponent);
        if self.tail.log_exponent != 0.0 {
            r *= (self.tail.l(s) / self.tail.l(sm)).powf(self.tail.log_exponent);
        }
        r
    }

    fn tail_deriv(&self, s: f64) -> f64 {
        let val = self.tail_eval(s);
        let t = &self.tail;
        val * (t.exponent / s + t.log_exponent / (t.l(s) * (t.shift + s)))
    }

    pub fn eval(&self, s: f64) -> f64 {
        let s = s.abs();
        if s >= self.last_knot() {
            return self.tail_eval(s);
        }
        let j = self.segment(s);
        self.pieces[j].eval(s)
    }

    /// Right derivative.
    pub fn deriv(&self, s: f64) -> f64 {
        let s = s.abs();
        if s >= self.last_knot() {
            return self.tail_deriv(s);
        }
        let j = self.segment(s);
        self.pieces[j].deriv(s)
    }

    /// Left derivative (equals the right one away from kinks).
    pub fn deriv_left(&self, s: f64) -> f64 {
        let s = s.abs();
        if s == 0.0 {
            return 0.0;
        }
        if s > self.last_knot() {
            return self.tail_deriv(s);
        }
        let idx = self.s.partition_point(|&x| x < s);
        let j = idx.saturating_sub(1).min(self.pieces.len() - 1);
        self.pieces[j].deriv(s)
    }

    /// `sup { s >= 0 : value(s) <= y }`, so the inverse of 0 is the plateau edge.
    pub fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return self.s0;
        }
        let m = self.s.len() - 1;
        if y >= self.v[m] {
            return self.tail_inverse(y);
        }
        let idx = self.v.partition_point(|&x| x <= y); // first knot with value > y
        let j = idx - 1;
        let p = &self.pieces[j];
        if p.a == 0.0 {
            return self.s[j + 1];
        }
        let s = p.s0 + (y / p.a).powf(1.0 / p.k);
        s.clamp(self.s[j], self.s[j + 1])
    }

    fn tail_inverse(&self, y: f64) -> f64 {
        let m = self.s.len() - 1;
        let (sm, vm) = (self.s[m], self.v[m]);
        let q = self.tail.exponent;
        let guess = sm * (y / vm).powf(1.0 / q);
        if self.tail.log_exponent == 0.0 {
            return guess;
        }
        // bisection on ln s
        let g = |x: f64| self.tail_eval(x.exp()).ln() - y.ln();
        let mut lo = sm.ln();
        let mut hi = guess.ln().max(lo) + 1.0;
        let mut iter = 0;
        while g(hi) < 0.0 && iter < 200 {
            hi += (hi - lo).max(1.0);
            iter += 1;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 * hi.abs().max(1.0) {
                break;
            }
        }
        (0.5 * (lo + hi)).exp()
    }

    /// `sup_s (t s - value(s))` evaluated exactly on the piecewise model.
    pub fn conjugate_at(&self, t: f64) -> Result<f64> {
        let t = t.abs();
        if t == 0.0 {
            return Ok(0.0);
        }
        let m = self.s.len() - 1;
        if self.tail_deriv(self.s[m]) <= t {
            let s = self.tail_argmax(t)?;
            return Ok(t * s - self.tail_eval(s));
        }
        // last knot whose right derivative is <= t
        let nseg = self.pieces.len();
        let (mut lo, mut hi) = (0usize, nseg);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.pieces[mid].deriv(self.s[mid]) <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut best = f64::NEG_INFINITY;
        for j in lo.saturating_sub(1)..=(lo + 1).min(nseg - 1) {
            let p = &self.pieces[j];
            let s = p.argmax_dual(t, self.s[j], self.s[j + 1]);
            best = best.max(t * s - p.eval(s));
        }
        Ok(best.max(0.0))
    }

    fn tail_argmax(&self, t: f64) -> Result<f64> {
        let m = self.s.len() - 1;
        let sm = self.s[m];
        let q = self.tail.exponent;
        let gam = self.tail.log_exponent;
        if (q - 1.0).abs() < 1e-12 && gam <= 0.0 {
            return Err(Error::ConjugateNotYoung(format!(
                "function grows linearly at infinity; conjugate is infinite beyond slope {}",
                self.tail_deriv(sm)
            )));
        }
        if gam == 0.0 {
            let vm = self.v[m];
            // q vm s^{q-1} / sm^q = t
            let s = (t * sm.powf(q) / (q * vm)).powf(1.0 / (q - 1.0));
            return Ok(s.max(sm));
        }
        let d = |x: f64| self.tail_deriv(x.exp()) - t;
        let mut lo = sm.ln();
        let mut hi = lo + 1.0;
        let mut iter = 0;
        while d(hi) < 0.0 {
            hi += (hi - lo).max(1.0);
            iter += 1;
            if iter > 60 || hi > 700.0 {
                return Err(Error::Unsupported(format!(
                    "conjugate at {t} needs abscissae beyond floating range"
                )));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if d(mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((0.5 * (lo + hi)).exp())
    }

    /// Tail model of the conjugate, or an error when it has no power-log form.
    pub fn conjugate_tail(&self) -> Result<TailModel> {
        let q = self.tail.exponent;
        let gam = self.tail.log_exponent;
        if (q - 1.0).abs() < 1e-12 {
            if gam <= 0.0 {
                return Err(Error::ConjugateNotYoung(
                    "linear growth at infinity: the superlinearity condition fails".into(),
                ));
            }
            return Err(Error::Unsupported(
                "conjugate of s log^a(s) grows exponentially; no power-log tail model".into(),
            ));
        }
        Ok(TailModel::power_log(
            q / (q - 1.0),
            -gam / (q - 1.0),
            self.tail.shift,
        ))
    }

    /// Young conjugate as a new table: exact values on the standard grid
    /// merged with the dual images of kinks and the conjugate plateau edge.
    pub fn conjugate(&self) -> Result<OneDimYoung> {
        let tail = self.conjugate_tail()?;
        let mut ts = standard_grid();
        let d0 = self.deriv(0.0);
        if d0 > 0.0 {
            ts.push(d0);
        }
        for &sk in &self.s[1..] {
            let (dl, dr) = (self.deriv_left(sk), self.deriv(sk));
            if (dr - dl).abs() > 1e-9 * dr.abs().max(1e-300) {
                ts.push(dl);
                ts.push(dr);
            }
        }
        let top = self.deriv(self.last_knot());
        if top > STANDARD_HI {
            ts.push(top);
        }
        ts.retain(|t| t.is_finite() && *t > 0.0);
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        let mut vals = Vec::with_capacity(ts.len());
        let mut prev = 0.0f64;
        for &t in &ts {
            // suppress rounding noise on flat stretches
            prev = prev.max(self.conjugate_at(t)?);
            vals.push(prev);
        }
        OneDimYoung::from_samples(ts, vals, Some(tail))
    }

    /// `value(s)/s` with the convention 0 at 0.
    pub fn psi(&self, s: f64) -> f64 {
        let s = s.abs();
        if s == 0.0 {
            0.0
        } else {
            self.eval(s) / s
        }
    }

    /// Supremum of `value(s)/s` (infinite for superlinear tails).
    pub fn psi_sup(&self) -> f64 {
        if self.tail.exponent > 1.0 + 1e-12 || self.tail.log_exponent > 0.0 {
            f64::INFINITY
        } else {
            let m = self.s.len() - 1;
            self.v[m] / self.s[m]
        }
    }

    /// Checks `value(s)/s -> 0` as `s -> 0+` through the head model.
    pub fn psi_vanishes_at_zero(&self) -> bool {
        self.s0 > 0.0 || self.head_exponent() > 1.0 + 1e-9
    }

    /// Replaces the function on `[0, knot]` by its chord `value(knot) s / knot`.
    pub fn renormalize_near_zero(&self, knot: f64) -> Result<OneDimYoung> {
        if !(knot > 0.0) {
            return Err(Error::InvalidInput("renormalization knot must be positive".into()));
        }
        let vk = self.eval(knot);
        if vk <= 0.0 {
            return Err(Error::InvalidInput(
                "renormalization knot lies in the zero plateau".into(),
            ));
        }
        let mut s = vec![0.0];
        let mut v = vec![0.0];
        for x in log_grid(knot * 1e-6, knot, 64) {
            s.push(x);
            v.push(vk * x / knot);
        }
        for (&x, &y) in self.s.iter().zip(&self.v) {
            if x > knot * (1.0 + 1e-12) {
                s.push(x);
                v.push(y);
            }
        }
        if s.len() < 68 {
            // knot beyond the table: continue along the tail
            for x in log_grid(knot * 1.01, knot * 1e6, 256) {
                s.push(x);
                v.push(self.eval(x));
            }
        }
        OneDimYoung::from_samples(s, v, Some(self.tail))
    }

    /// Two-column text export: `s value`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, v) in self.s.iter().zip(&self.v) {
            out.push_str(&format!("{s:.17e} {v:.17e}\n"));
        }
        out
    }

    /// Parses two-column text `(s, value)`; the tail continues the last power.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut s = Vec::new();
        let mut v = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|c| !c.is_empty())
                .collect();
            if cols.len() != 2 {
                return Err(Error::Parse {
                    line: ln + 1,
                    column: 1,
                    message: "expected two columns".into(),
                });
            }
            let parse = |c: &str, col: usize| {
                c.parse::<f64>().map_err(|e| Error::Parse {
                    line: ln + 1,
                    column: col,
                    message: e.to_string(),
                })
            };
            s.push(parse(cols[0], 1)?);
            v.push(parse(cols[1], 2)?);
        }
        Self::from_samples(s, v, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn power_is_exact_between_knots() {
        let a = OneDimYoung::power(0.7, 2.5).unwrap();
        for &s in &[1e-9, 3.3e-4, 0.5, 1.0, 17.0, 3e7] {
            assert!(rel(a.eval(s), 0.7 * s.powf(2.5)) < 1e-12, "s={s}");
            assert!(rel(a.deriv(s), 0.7 * 2.5 * s.powf(1.5)) < 1e-10);
            assert!(rel(a.inverse(a.eval(s)), s) < 1e-12);
        }
    }

    #[test]
    fn quadratic_half_is_self_conjugate() {
        let a = OneDimYoung::power(0.5, 2.0).unwrap();
        let c = a.conjugate().unwrap();
        for &t in &[1e-3, 0.2, 1.0, 4.0, 1e4, 1e8] {
            assert!(rel(c.eval(t), 0.5 * t * t) < 1e-10, "t={t}");
        }
    }

    #[test]
    fn cubic_over_three_conjugates_to_three_halves() {
        let a = OneDimYoung::power(1.0 / 3.0, 3.0).unwrap();
        let c = a.conjugate().unwrap();
        for &t in &[1e-2f64, 0.5, 2.0, 50.0] {
            let oracle = t.powf(1.5) / 1.5;
            assert!(rel(c.eval(t), oracle) < 1e-9, "t={t}");
        }
    }

    #[test]
    fn exponential_table_conjugate() {
        // dense-grid brute force maximisation as the oracle
        let f = |x: f64| x.exp() - x - 1.0;
        let grid: Vec<f64> = (1..=4000).map(|k| k as f64 * 0.005).collect();
        let a = OneDimYoung::from_fn(f, &grid, None).unwrap();
        let brute = (0..200_000)
            .map(|k| {
                let x = k as f64 * 1e-5;
                x - f(x)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let got = a.conjugate_at(1.0).unwrap();
        assert!((got - brute).abs() < 1e-5, "{got} vs {brute}");
        assert!((got - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-5);
    }

    #[test]
    fn plateau_inverse_and_conjugate_head() {
        let grid = standard_grid();
        let a = OneDimYoung::from_fn(|x| (x - 1.0).max(0.0).powi(2), &grid, None).unwrap();
        assert!((a.plateau() - 1.0).abs() < 1e-2);
        assert_eq!(a.inverse(0.0), a.plateau());
        // conjugate of a function with a plateau grows linearly near 0
        let c = a.conjugate().unwrap();
        // the sampled plateau edge sits within one grid step of 1
        assert!(rel(c.eval(1e-4), a.plateau() * 1e-4) < 2e-3);
    }

    #[test]
    fn linear_growth_has_no_conjugate() {
        let grid = standard_grid();
        let a = OneDimYoung::from_fn(|x| x, &grid, Some(TailModel::power(1.0))).unwrap();
        assert!(matches!(a.conjugate(), Err(Error::ConjugateNotYoung(_))));
    }

    #[test]
    fn renormalized_quadratic() {
        let a = OneDimYoung::power(1.0, 2.0).unwrap();
        let b = a.renormalize_near_zero(1.0).unwrap();
        assert!(rel(b.eval(0.25), 0.25) < 1e-12);
        assert!(rel(b.eval(3.0), 9.0) < 1e-12);
        assert!(!b.psi_vanishes_at_zero());
    }

    #[test]
    fn text_round_trip() {
        let a = OneDimYoung::power(2.0, 3.0).unwrap();
        let b = OneDimYoung::from_text(&a.to_text()).unwrap();
        assert!(rel(b.eval(0.37), a.eval(0.37)) < 1e-12);
    }
}
