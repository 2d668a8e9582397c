//! Right-continuous step functions on `(0, |Omega|]` in measure units.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Value `values[k]` on `[breaks[k], breaks[k+1])`; zero beyond the last break.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepProfile {
    pub breaks: Vec<f64>,
    pub values: Vec<f64>,
    /// Set when the values are known to be non-increasing.
    pub non_increasing: bool,
}

impl StepProfile {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || breaks.len() != values.len() + 1 {
            return invalid("step profile needs K values and K+1 breakpoints");
        }
        if breaks[0] != 0.0 || breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("breakpoints must start at 0 and increase strictly");
        }
        if values.iter().any(|v| !v.is_finite()) || !breaks.last().unwrap().is_finite() {
            return invalid("step profile entries must be finite");
        }
        let non_increasing = values.windows(2).all(|w| w[1] <= w[0]);
        Ok(Self {
            breaks,
            values,
            non_increasing,
        })
    }

    pub fn constant(c: f64, measure: f64) -> Result<Self> {
        Self::new(vec![0.0, measure], vec![c])
    }

    /// Steps of equal width `width` with the given values.
    pub fn uniform(values: Vec<f64>, width: f64) -> Result<Self> {
        let breaks = (0..=values.len()).map(|k| k as f64 * width).collect();
        Self::new(breaks, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn measure(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    /// Pieces as `(left, right, value)`.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (self.breaks[k], self.breaks[k + 1], v))
    }

    pub fn eval(&self, s: f64) -> f64 {
        if s < 0.0 || s >= self.measure() {
            return 0.0;
        }
        let j = self.breaks.partition_point(|&b| b <= s) - 1;
        self.values[j]
    }

    /// `int_0^s` of the profile, exact.
    pub fn integral_to(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for (a, b, v) in self.pieces() {
            if s <= a {
                break;
            }
            acc += v * (b.min(s) - a);
        }
        acc
    }

    pub fn integral(&self) -> f64 {
        self.integral_to(self.measure())
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        Self::new(self.breaks.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, k: f64) -> Self {
        let mut p = self.clone();
        for v in &mut p.values {
            *v *= k;
        }
        if k < 0.0 {
            p.non_increasing = p.values.windows(2).all(|w| w[1] <= w[0]);
        }
        p
    }

    /// Merges neighbouring pieces carrying the same value.
    pub fn merged(&self) -> Self {
        let mut breaks = vec![0.0];
        let mut values: Vec<f64> = Vec::new();
        for (_, b, v) in self.pieces() {
            if values.last() == Some(&v) {
                *breaks.last_mut().unwrap() = b;
            } else {
                values.push(v);
                breaks.push(b);
            }
        }
        Self {
            breaks,
            values,
            non_increasing: self.non_increasing,
        }
    }

    /// Decreasing rearrangement of `|profile|` on the same interval.
    pub fn rearranged(&self) -> Self {
        let mut pieces: Vec<(f64, f64)> = self.pieces().map(|(a, b, v)| (v.abs(), b - a)).collect();
        pieces.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
        let mut breaks = Vec::with_capacity(pieces.len() + 1);
        breaks.push(0.0);
        let mut acc = 0.0;
        let mut values = Vec::with_capacity(pieces.len());
        for (v, w) in pieces {
            acc += w;
            breaks.push(acc);
            values.push(v);
        }
        *breaks.last_mut().unwrap() = self.measure();
        Self {
            breaks,
            values,
            non_increasing: true,
        }
        .merged()
    }

    /// Decreasing rearrangement unless already flagged non-increasing and non-negative.
    pub fn as_rearrangement(&self) -> std::borrow::Cow<'_, Self> {
        if self.non_increasing && self.values.last().is_none_or(|v| *v >= 0.0) {
            std::borrow::Cow::Borrowed(self)
        } else {
            std::borrow::Cow::Owned(self.rearranged())
        }
    }

    /// Measure of `{|profile| > t}`.
    pub fn distribution(&self, t: f64) -> f64 {
        self.pieces().filter(|p| p.2.abs() > t).map(|(a, b, _)| b - a).sum()
    }

    /// CSV with columns `s_left,s_right,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s_left,s_right,value\n");
        for (a, b, v) in self.pieces() {
            out.push_str(&format!("{a:.17e},{b:.17e},{v:.17e}\n"));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut breaks = vec![0.0];
        let mut values = Vec::new();
        for (ln, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse {
                    line: ln + 1,
                    column: 0,
                    message: e.to_string(),
                })?;
            if cols.len() != 3 || cols[0] != *breaks.last().unwrap() {
                return Err(Error::Parse {
                    line: ln + 1,
                    column: 0,
                    message: "expected contiguous s_left,s_right,value rows".into(),
                });
            }
            breaks.push(cols[1]);
            values.push(cols[2]);
        }
        Self::new(breaks, values)
    }
}

/// Maximal function `u**(s) = (1/s) int_0^s u*`, evaluated exactly from the steps.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleStar {
    base: StepProfile,
    cumulative: Vec<f64>,
}

impl DoubleStar {
    pub fn eval(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return self.base.values[0];
        }
        let m = self.base.measure();
        if s >= m {
            return self.cumulative.last().unwrap() / s;
        }
        let j = self.base.breaks.partition_point(|&b| b <= s) - 1;
        (self.cumulative[j] + self.base.values[j] * (s - self.base.breaks[j])) / s
    }

    pub fn base(&self) -> &StepProfile {
        &self.base
    }

    /// `int_0^s u*`.
    pub fn primitive(&self, s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else {
            s * self.eval(s)
        }
    }
}

/// `u**` of a profile; the profile is rearranged first unless flagged.
pub fn double_star(p: &StepProfile) -> DoubleStar {
    let base = p.as_rearrangement().into_owned();
    let mut cumulative = Vec::with_capacity(base.len() + 1);
    let mut acc = 0.0;
    cumulative.push(0.0);
    for (a, b, v) in base.pieces() {
        acc += v * (b - a);
        cumulative.push(acc);
    }
    DoubleStar { base, cumulative }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_is_right_continuous() {
        let p = StepProfile::uniform(vec![3.0, 2.0, 2.0, 1.0], 1.0).unwrap();
        assert_eq!(p.eval(0.0), 3.0);
        assert_eq!(p.eval(1.0), 2.0);
        assert_eq!(p.eval(3.999), 1.0);
        assert_eq!(p.eval(4.0), 0.0);
        assert_eq!(p.integral(), 8.0);
        assert!(p.non_increasing);
        assert_eq!(p.merged().len(), 3);
    }

    #[test]
    fn double_star_average() {
        let p = StepProfile::uniform(vec![3.0, 2.0, 2.0, 1.0], 1.0).unwrap();
        let d = double_star(&p);
        assert_eq!(d.eval(2.0), 2.5);
        assert_eq!(d.eval(0.0), 3.0);
        let c = double_star(&StepProfile::constant(1.7, 5.0).unwrap());
        for s in [0.1, 1.0, 4.9] {
            assert!((c.eval(s) - 1.7).abs() < 1e-15);
        }
    }

    #[test]
    fn rearranged_sorts_absolute_values() {
        let p = StepProfile::new(vec![0.0, 0.5, 2.0, 2.5], vec![-1.0, 4.0, 2.0]).unwrap();
        let r = p.rearranged();
        assert_eq!(r.values, vec![4.0, 2.0, 1.0]);
        assert_eq!(r.breaks, vec![0.0, 1.5, 2.0, 2.5]);
        assert_eq!(r.distribution(1.5), p.distribution(1.5));
    }

    #[test]
    fn csv_round_trip() {
        let p = StepProfile::new(vec![0.0, 0.25, 1.0], vec![0.3, -2.0]).unwrap();
        assert_eq!(StepProfile::from_csv(&p.to_csv()).unwrap(), p);
    }
}
