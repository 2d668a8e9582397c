//! Scalar fields on uniform Cartesian grids with a domain mask.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Cell values over an axis-aligned box; cells outside `mask` read as zero.
/// Storage is row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub n: Vec<usize>,
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

impl GridFunction {
    /// Zero field with every cell in the domain.
    pub fn zeros(lo: Vec<f64>, hi: Vec<f64>, n: Vec<usize>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() || lo.len() != n.len() {
            return invalid("box bounds and cell counts must share one dimension");
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(b > a)) || n.contains(&0) {
            return invalid("box must be non-degenerate with at least one cell per axis");
        }
        let len = n.iter().product();
        Ok(Self {
            lo,
            hi,
            n,
            values: vec![0.0; len],
            mask: vec![true; len],
        })
    }

    /// Cube `[-half, half]^dim` with `n` cells per axis.
    pub fn cube(dim: usize, half: f64, n: usize) -> Result<Self> {
        Self::zeros(vec![-half; dim], vec![half; dim], vec![n; dim])
    }

    /// Box `[lo, hi]` split into `n` intervals per axis, with one cell centred
    /// on every lattice node. Cells centred on the boundary are masked out, so
    /// zero values sit exactly on the boundary of the box.
    pub fn vertex_box(lo: &[f64], hi: &[f64], n: usize) -> Result<Self> {
        if n < 2 || lo.len() != hi.len() || lo.iter().zip(hi).any(|(a, b)| !(b > a)) {
            return invalid("vertex box needs a non-degenerate box and at least two intervals");
        }
        let half: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (b - a) / n as f64).collect();
        let glo = lo.iter().zip(&half).map(|(a, d)| a - d).collect();
        let ghi = hi.iter().zip(&half).map(|(b, d)| b + d).collect();
        let mut g = Self::zeros(glo, ghi, vec![n + 1; lo.len()])?;
        for k in 0..g.len() {
            g.mask[k] = g.multi_index(k).iter().all(|&i| i > 0 && i < n);
        }
        Ok(g)
    }

    /// Ball of the given radius inside its bounding cube: a cell belongs to
    /// the domain when its centre lies within `radius - h/2`.
    pub fn ball(dim: usize, radius: f64, n: usize) -> Result<Self> {
        let mut g = Self::cube(dim, radius, n)?;
        let cut = radius - 0.5 * g.h()[0];
        g.set_mask(|x| x.iter().map(|c| c * c).sum::<f64>().sqrt() < cut);
        if g.measure() <= 0.0 {
            return invalid("ball mask is empty; refine the grid");
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn h(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| (self.hi[i] - self.lo[i]) / self.n[i] as f64)
            .collect()
    }

    pub fn cell_volume(&self) -> f64 {
        self.h().iter().product()
    }

    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    /// `|Omega|`, the number of masked cells times the cell volume.
    pub fn measure(&self) -> f64 {
        self.masked_count() as f64 * self.cell_volume()
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = flat % self.n[a];
            flat /= self.n[a];
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.n).fold(0, |acc, (i, n)| acc * n + i)
    }

    pub fn centre(&self, flat: usize) -> Vec<f64> {
        let h = self.h();
        self.multi_index(flat)
            .iter()
            .enumerate()
            .map(|(a, &i)| self.lo[a] + (i as f64 + 0.5) * h[a])
            .collect()
    }

    /// Value with zero extension outside the domain.
    pub fn get(&self, flat: usize) -> f64 {
        if self.mask[flat] {
            self.values[flat]
        } else {
            0.0
        }
    }

    pub fn set_mask<P: Fn(&[f64]) -> bool>(&mut self, inside: P) {
        for k in 0..self.len() {
            self.mask[k] = inside(&self.centre(k));
        }
    }

    /// Fills the domain cells with `f(centre)`; other cells are set to zero.
    pub fn fill<F: Fn(&[f64]) -> f64>(&mut self, f: F) {
        for k in 0..self.len() {
            self.values[k] = if self.mask[k] { f(&self.centre(k)) } else { 0.0 };
        }
    }

    /// Same skeleton with values from `f(centre)`.
    pub fn with_fn<F: Fn(&[f64]) -> f64>(&self, f: F) -> Self {
        let mut g = self.clone();
        g.fill(f);
        g
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        let mut g = self.clone();
        for k in 0..g.len() {
            g.values[k] = if g.mask[k] { f(g.values[k]) } else { 0.0 };
        }
        g
    }

    pub fn same_skeleton(&self, other: &GridFunction) -> bool {
        self.lo == other.lo && self.hi == other.hi && self.n == other.n && self.mask == other.mask
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.n.iter().product::<usize>() || self.mask.len() != self.values.len() {
            return invalid("value and mask arrays must have one entry per cell");
        }
        if self.masked_count() == 0 {
            return invalid("domain mask is empty");
        }
        if self.values.iter().zip(&self.mask).any(|(v, m)| *m && !v.is_finite()) {
            return invalid("grid values must be finite");
        }
        Ok(())
    }

    /// Integral over the domain.
    pub fn integral(&self) -> f64 {
        let s: f64 = (0..self.len()).map(|k| self.get(k)).sum();
        s * self.cell_volume()
    }

    pub fn max_abs(&self) -> f64 {
        (0..self.len()).map(|k| self.get(k).abs()).fold(0.0, f64::max)
    }

    /// CSV with one row per cell: axis indices, value, mask flag. The first
    /// line is a `#` comment holding the box.
    pub fn to_csv(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" ");
        let ns = self.n.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let mut out = format!("# lo={};hi={};n={}\n", join(&self.lo), join(&self.hi), ns);
        let names: Vec<String> = (0..self.dim()).map(|a| format!("i{a}")).collect();
        out.push_str(&format!("{},value,mask\n", names.join(",")));
        for k in 0..self.len() {
            for i in self.multi_index(k) {
                out.push_str(&format!("{i},"));
            }
            out.push_str(&format!("{:.17e},{}\n", self.values[k], u8::from(self.mask[k])));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, head) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let head = head
            .strip_prefix("# ")
            .ok_or_else(|| parse_err(1, "missing '# lo=..;hi=..;n=..' header"))?;
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        let mut n = Vec::new();
        for part in head.split(';') {
            let (key, val) = part.split_once('=').ok_or_else(|| parse_err(1, "bad header field"))?;
            let items = val.split_whitespace();
            match key.trim() {
                "lo" => lo = items.map(|x| x.parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|e| parse_err(1, &e.to_string()))?,
                "hi" => hi = items.map(|x| x.parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|e| parse_err(1, &e.to_string()))?,
                "n" => n = items.map(|x| x.parse::<usize>()).collect::<std::result::Result<_, _>>().map_err(|e| parse_err(1, &e.to_string()))?,
                other => return Err(parse_err(1, &format!("unknown header key {other}"))),
            }
        }
        let mut g = Self::zeros(lo, hi, n)?;
        let dim = g.dim();
        lines.next();
        let mut seen = vec![false; g.len()];
        for (ln, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != dim + 2 {
                return Err(parse_err(ln + 1, "wrong column count"));
            }
            let mut idx = Vec::with_capacity(dim);
            for (a, c) in cols[..dim].iter().enumerate() {
                let i: usize = c.parse().map_err(|_| parse_err(ln + 1, "bad index"))?;
                if i >= g.n[a] {
                    return Err(parse_err(ln + 1, "index out of range"));
                }
                idx.push(i);
            }
            let k = g.flat_index(&idx);
            g.values[k] = cols[dim].parse().map_err(|_| parse_err(ln + 1, "bad value"))?;
            g.mask[k] = match cols[dim + 1] {
                "1" | "true" => true,
                "0" | "false" => false,
                _ => return Err(parse_err(ln + 1, "mask must be 0 or 1")),
            };
            seen[k] = true;
        }
        if seen.iter().any(|s| !s) {
            return invalid("CSV does not list every cell");
        }
        g.validate()?;
        Ok(g)
    }

    /// Little-endian binary: dim (u64), n (u64 each), lo, hi, values (f64),
    /// mask (one byte per cell).
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.dim() as u64).to_le_bytes())?;
        for &k in &self.n {
            w.write_all(&(k as u64).to_le_bytes())?;
        }
        for x in self.lo.iter().chain(&self.hi).chain(&self.values) {
            w.write_all(&x.to_le_bytes())?;
        }
        let bytes: Vec<u8> = self.mask.iter().map(|&m| u8::from(m)).collect();
        w.write_all(&bytes)?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut b8 = [0u8; 8];
        let mut u64_next = |r: &mut R| -> Result<u64> {
            r.read_exact(&mut b8)?;
            Ok(u64::from_le_bytes(b8))
        };
        let dim = u64_next(&mut r)? as usize;
        if dim == 0 || dim > 16 {
            return invalid("binary grid: implausible dimension");
        }
        let n: Vec<usize> = (0..dim).map(|_| u64_next(&mut r).map(|x| x as usize)).collect::<Result<_>>()?;
        let f64_next = |r: &mut R| -> Result<f64> {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            Ok(f64::from_le_bytes(b))
        };
        let lo: Vec<f64> = (0..dim).map(|_| f64_next(&mut r)).collect::<Result<_>>()?;
        let hi: Vec<f64> = (0..dim).map(|_| f64_next(&mut r)).collect::<Result<_>>()?;
        let mut g = Self::zeros(lo, hi, n)?;
        for k in 0..g.len() {
            g.values[k] = f64_next(&mut r)?;
        }
        let mut m = vec![0u8; g.len()];
        r.read_exact(&mut m)?;
        g.mask = m.into_iter().map(|b| b != 0).collect();
        g.validate()?;
        Ok(g)
    }
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        column: 0,
        message: message.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GridFunction {
        let mut g = GridFunction::zeros(vec![0.0, 0.0], vec![2.0, 3.0], vec![2, 3]).unwrap();
        g.fill(|x| x[0] + 10.0 * x[1]);
        g.mask[4] = false;
        g
    }

    #[test]
    fn geometry() {
        let g = sample();
        assert_eq!(g.h(), vec![1.0, 1.0]);
        assert_eq!(g.multi_index(4), vec![1, 1]);
        assert_eq!(g.flat_index(&[1, 1]), 4);
        assert_eq!(g.centre(4), vec![1.5, 1.5]);
        assert_eq!(g.measure(), 5.0);
        assert_eq!(g.get(4), 0.0);
    }

    #[test]
    fn csv_round_trip() {
        let g = sample();
        let back = GridFunction::from_csv(&g.to_csv()).unwrap();
        assert_eq!(g, back);
        assert!(matches!(
            GridFunction::from_csv("# lo=0;hi=1;n=2\ni0,value,mask\n0,1.0,1\n"),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn binary_round_trip() {
        let g = sample();
        let mut buf = Vec::new();
        g.write_binary(&mut buf).unwrap();
        assert_eq!(GridFunction::read_binary(&buf[..]).unwrap(), g);
    }

    #[test]
    fn ball_mask_is_inscribed() {
        let g = GridFunction::ball(2, 1.0, 64).unwrap();
        let m = g.measure();
        assert!(m < std::f64::consts::PI && m > 0.9 * std::f64::consts::PI, "{m}");
    }
}
