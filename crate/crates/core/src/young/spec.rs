use rand::Rng;
use serde::{Deserialize, Serialize};

use super::grid2d::Gridded2d;
use super::table::{standard_grid, OneDimYoung, TailModel};
use crate::error::{invalid, Error, Result};

/// Catalog of N-dimensional Young functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum YoungVariant {
    /// `sum lambda_i |xi_i|^p_i`
    PowerSum { p: Vec<f64>, lambda: Vec<f64> },
    /// `sum |xi_i|^p_i log^alpha_i(c + |xi_i|)`
    LogPerturbedSum { p: Vec<f64>, alpha: Vec<f64>, c: f64 },
    /// `|xi_1 - xi_2|^alpha + |xi_1|^beta log^delta(c + |xi_1|)`, N = 2
    TwoDimCoupled {
        alpha: f64,
        beta: f64,
        delta: f64,
        c: f64,
    },
    /// `A(|xi|)`
    RadialOneDim { a: OneDimYoung },
    /// `sum A_i(|xi_i|)` with tabulated factors
    Tabulated { parts: Vec<OneDimYoung> },
    /// `sum A_i((M xi)_i)` for an invertible matrix `M` (row major)
    Sheared {
        matrix: Vec<Vec<f64>>,
        parts: Vec<OneDimYoung>,
    },
    /// Non-separable two-dimensional function sampled on a square grid
    Gridded(Gridded2d),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YoungSpec {
    pub variant: YoungVariant,
    pub dim: usize,
}

fn log_power(p: f64, alpha: f64, c: f64, s: f64) -> f64 {
    let s = s.abs();
    if s == 0.0 {
        return 0.0;
    }
    s.powf(p) * (c + s).ln().powf(alpha)
}

fn det(m: &[Vec<f64>]) -> f64 {
    // Gaussian elimination with partial pivoting
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut d = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        d *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    d
}

fn inverse_transpose(m: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[piv][col].abs() < 1e-300 {
            return invalid("shear matrix is singular");
        }
        a.swap(piv, col);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for c in 0..2 * n {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    // inverse is the right block; return its transpose
    Ok((0..n)
        .map(|i| (0..n).map(|j| a[j][n + i]).collect())
        .collect())
}

fn check_convex_samples(name: &str, f: &dyn Fn(f64) -> f64) -> Result<()> {
    let grid = standard_grid();
    let mut prev_slope = 0.0;
    let mut prev = (0.0, 0.0);
    for &s in &grid {
        let v = f(s);
        let slope = (v - prev.1) / (s - prev.0);
        if slope < prev_slope * (1.0 - 1e-8) - 1e-14 {
            return Err(Error::InvalidInput(format!(
                "{name} is not convex near s = {s:.3e}; increase the shift constant c"
            )));
        }
        prev_slope = slope;
        prev = (s, v);
    }
    Ok(())
}

impl YoungSpec {
    pub fn power_sum(p: Vec<f64>, lambda: Vec<f64>) -> Result<Self> {
        let dim = p.len();
        if dim < 2 {
            return invalid("dimension must be at least 2");
        }
        if lambda.len() != dim {
            return invalid(format!(
                "exponent list has {} entries but weight list has {}",
                dim,
                lambda.len()
            ));
        }
        if p.iter().any(|&x| !(x >= 1.0) || !x.is_finite()) {
            return invalid("power-sum exponents must satisfy p_i >= 1");
        }
        if lambda.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return invalid("power-sum weights must be positive");
        }
        Ok(Self {
            variant: YoungVariant::PowerSum { p, lambda },
            dim,
        })
    }

    pub fn log_perturbed(p: Vec<f64>, alpha: Vec<f64>, c: f64) -> Result<Self> {
        let dim = p.len();
        if dim < 2 {
            return invalid("dimension must be at least 2");
        }
        if alpha.len() != dim {
            return invalid("log exponents must match the exponent list in length");
        }
        if !(c >= std::f64::consts::E) {
            return invalid("shift constant c must be at least e");
        }
        for (&pi, &ai) in p.iter().zip(&alpha) {
            if !(pi > 1.0 || (pi == 1.0 && ai >= 0.0)) {
                return invalid(format!(
                    "each factor needs p_i > 1, or p_i = 1 with alpha_i >= 0 (got p={pi}, alpha={ai})"
                ));
            }
        }
        if p.iter().zip(&alpha).all(|(&pi, &ai)| pi == 1.0 && ai == 0.0) {
            return invalid("the case p_i = 1, alpha_i = 0 for every i is excluded");
        }
        for (i, (&pi, &ai)) in p.iter().zip(&alpha).enumerate() {
            check_convex_samples(&format!("factor {i}"), &|s| log_power(pi, ai, c, s))?;
        }
        Ok(Self {
            variant: YoungVariant::LogPerturbedSum { p, alpha, c },
            dim,
        })
    }

    pub fn two_dim_coupled(alpha: f64, beta: f64, delta: f64, c: f64) -> Result<Self> {
        if !(alpha >= 1.0 && beta >= 1.0) {
            return invalid("coupled example needs alpha, beta >= 1");
        }
        if beta == 1.0 && delta < 0.0 {
            return invalid("delta must be non-negative when beta = 1");
        }
        if !(c >= std::f64::consts::E) {
            return invalid("shift constant c must be at least e");
        }
        check_convex_samples("second factor", &|s| log_power(beta, delta, c, s))?;
        Ok(Self {
            variant: YoungVariant::TwoDimCoupled {
                alpha,
                beta,
                delta,
                c,
            },
            dim: 2,
        })
    }

    pub fn radial(a: OneDimYoung, dim: usize) -> Result<Self> {
        if dim < 2 {
            return invalid("dimension must be at least 2");
        }
        Ok(Self {
            variant: YoungVariant::RadialOneDim { a },
            dim,
        })
    }

    pub fn tabulated(parts: Vec<OneDimYoung>) -> Result<Self> {
        let dim = parts.len();
        if dim < 2 {
            return invalid("dimension must be at least 2");
        }
        Ok(Self {
            variant: YoungVariant::Tabulated { parts },
            dim,
        })
    }

    pub fn sheared(matrix: Vec<Vec<f64>>, parts: Vec<OneDimYoung>) -> Result<Self> {
        let dim = parts.len();
        if dim < 2 || matrix.len() != dim || matrix.iter().any(|r| r.len() != dim) {
            return invalid("shear matrix must be square and match the number of factors");
        }
        if det(&matrix).abs() < 1e-12 {
            return invalid("shear matrix is singular");
        }
        Ok(Self {
            variant: YoungVariant::Sheared { matrix, parts },
            dim,
        })
    }

    pub fn gridded(grid: Gridded2d) -> Self {
        Self {
            variant: YoungVariant::Gridded(grid),
            dim: 2,
        }
    }

    pub fn eval(&self, xi: &[f64]) -> Result<f64> {
        if xi.len() != self.dim {
            return invalid(format!("expected a {}-vector", self.dim));
        }
        if xi.iter().any(|x| !x.is_finite()) {
            return invalid("non-finite argument");
        }
        Ok(match &self.variant {
            YoungVariant::PowerSum { p, lambda } => xi
                .iter()
                .zip(p.iter().zip(lambda))
                .map(|(x, (pi, li))| li * x.abs().powf(*pi))
                .sum(),
            YoungVariant::LogPerturbedSum { p, alpha, c } => xi
                .iter()
                .zip(p.iter().zip(alpha))
                .map(|(x, (pi, ai))| log_power(*pi, *ai, *c, *x))
                .sum(),
            YoungVariant::TwoDimCoupled {
                alpha,
                beta,
                delta,
                c,
            } => (xi[0] - xi[1]).abs().powf(*alpha) + log_power(*beta, *delta, *c, xi[0]),
            YoungVariant::RadialOneDim { a } => a.eval(xi.iter().map(|x| x * x).sum::<f64>().sqrt()),
            YoungVariant::Tabulated { parts } => {
                xi.iter().zip(parts).map(|(x, a)| a.eval(*x)).sum()
            }
            YoungVariant::Sheared { matrix, parts } => matrix
                .iter()
                .zip(parts)
                .map(|(row, a)| a.eval(row.iter().zip(xi).map(|(m, x)| m * x).sum()))
                .sum(),
            YoungVariant::Gridded(g) => g.eval(xi[0], xi[1]),
        })
    }

    /// Separable form `sum A_i((M xi)_i)`: the matrix (None for the identity)
    /// and the one-dimensional factors as tables.
    pub fn separable_form(&self) -> Result<(Option<Vec<Vec<f64>>>, Vec<OneDimYoung>)> {
        let grid = standard_grid();
        match &self.variant {
            YoungVariant::PowerSum { p, lambda } => {
                let parts = p
                    .iter()
                    .zip(lambda)
                    .map(|(&pi, &li)| OneDimYoung::power(li, pi))
                    .collect::<Result<Vec<_>>>()?;
                Ok((None, parts))
            }
            YoungVariant::LogPerturbedSum { p, alpha, c } => {
                let parts = p
                    .iter()
                    .zip(alpha)
                    .map(|(&pi, &ai)| {
                        OneDimYoung::from_fn(
                            |s| log_power(pi, ai, *c, s),
                            &grid,
                            Some(TailModel::power_log(pi, ai, *c)),
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((None, parts))
            }
            YoungVariant::TwoDimCoupled {
                alpha,
                beta,
                delta,
                c,
            } => {
                // eta = M xi with eta_1 = xi_1 - xi_2, eta_2 = xi_1 (det M = 1)
                let a = OneDimYoung::power(1.0, *alpha)?;
                let (b_exp, b_log, cc) = (*beta, *delta, *c);
                let b = OneDimYoung::from_fn(
                    |s| log_power(b_exp, b_log, cc, s),
                    &grid,
                    Some(TailModel::power_log(b_exp, b_log, cc)),
                )?;
                Ok((Some(vec![vec![1.0, -1.0], vec![1.0, 0.0]]), vec![a, b]))
            }
            YoungVariant::Tabulated { parts } => Ok((None, parts.clone())),
            YoungVariant::Sheared { matrix, parts } => Ok((Some(matrix.clone()), parts.clone())),
            YoungVariant::RadialOneDim { .. } | YoungVariant::Gridded(_) => Err(Error::Unsupported(
                "function is not separable after a linear change of variables".into(),
            )),
        }
    }

    /// Young conjugate, returned in the same family where one exists.
    pub fn conjugate(&self) -> Result<YoungSpec> {
        match &self.variant {
            YoungVariant::PowerSum { p, lambda } => {
                if p.contains(&1.0) {
                    return Err(Error::ConjugateNotYoung(
                        "a linear factor makes the conjugate infinite".into(),
                    ));
                }
                let mut q = Vec::new();
                let mut mu = Vec::new();
                for (&pi, &li) in p.iter().zip(lambda) {
                    let pc = pi / (pi - 1.0);
                    q.push(pc);
                    mu.push((pi - 1.0) * li * (pi * li).powf(-pc));
                }
                YoungSpec::power_sum(q, mu)
            }
            YoungVariant::RadialOneDim { a } => YoungSpec::radial(a.conjugate()?, self.dim),
            YoungVariant::Gridded(g) => Ok(YoungSpec::gridded(g.conjugate())),
            _ => {
                let (m, parts) = self.separable_form()?;
                let conj = parts
                    .iter()
                    .map(|a| a.conjugate())
                    .collect::<Result<Vec<_>>>()?;
                match m {
                    None => YoungSpec::tabulated(conj),
                    Some(m) => YoungSpec::sheared(inverse_transpose(&m)?, conj),
                }
            }
        }
    }

    /// Absolute determinant of the linear change of variables of the separable form.
    pub fn shear_determinant(&self) -> f64 {
        match &self.variant {
            YoungVariant::Sheared { matrix, .. } => det(matrix).abs(),
            _ => 1.0,
        }
    }

    /// Midpoint convexity on random segments in `[-scale, scale]^N`.
    /// Returns the largest violation `Phi(mid) - (Phi(a)+Phi(b))/2` found.
    pub fn sampled_convexity<R: Rng>(&self, rng: &mut R, trials: usize, scale: f64) -> Result<f64> {
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..trials {
            let a: Vec<f64> = (0..self.dim).map(|_| rng.gen_range(-scale..scale)).collect();
            let b: Vec<f64> = (0..self.dim).map(|_| rng.gen_range(-scale..scale)).collect();
            let m: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
            let fa = self.eval(&a)?;
            let fb = self.eval(&b)?;
            let fm = self.eval(&m)?;
            worst = worst.max((fm - 0.5 * (fa + fb)) / (1.0 + 0.5 * (fa + fb)));
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eval_examples() {
        let s = YoungSpec::power_sum(vec![2.0, 2.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(s.eval(&[0.0, 0.0]).unwrap(), 0.0);
        assert!((s.eval(&[1.0, 2.0]).unwrap() - 5.0).abs() < 1e-15);
        let e = std::f64::consts::E;
        let l = YoungSpec::log_perturbed(vec![2.0, 2.0], vec![1.0, 1.0], e).unwrap();
        let v = l.eval(&[1.0, 0.0]).unwrap();
        assert!((v - (e + 1.0).ln()).abs() < 1e-14);
        assert!((v - 1.3133).abs() < 1e-4);
        assert!(s.eval(&[f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn evenness() {
        let l = YoungSpec::two_dim_coupled(2.0, 3.0, 1.0, 3.0).unwrap();
        let a = l.eval(&[0.3, -1.2]).unwrap();
        let b = l.eval(&[-0.3, 1.2]).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn construction_rejections() {
        assert!(YoungSpec::power_sum(vec![2.0, 2.0], vec![1.0, 0.0]).is_err());
        assert!(YoungSpec::log_perturbed(vec![1.0, 1.0], vec![0.0, 0.0], 3.0).is_err());
        assert!(YoungSpec::log_perturbed(vec![1.0, 2.0], vec![-1.0, 0.0], 3.0).is_err());
        assert!(YoungSpec::log_perturbed(vec![2.0, 2.0], vec![1.0, 1.0], 2.0).is_err());
        assert!(YoungSpec::power_sum(vec![2.0, 2.0], vec![1.0]).is_err());
    }

    #[test]
    fn catalog_is_convex() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let e = std::f64::consts::E;
        let specs = vec![
            YoungSpec::power_sum(vec![1.5, 3.0], vec![1.0, 2.0]).unwrap(),
            YoungSpec::log_perturbed(vec![2.0, 1.5], vec![1.0, -0.5], e).unwrap(),
            YoungSpec::two_dim_coupled(2.0, 3.0, 1.0, 3.0).unwrap(),
            YoungSpec::radial(OneDimYoung::power(1.0, 2.5).unwrap(), 3).unwrap(),
        ];
        for s in specs {
            let w = s.sampled_convexity(&mut rng, 500, 5.0).unwrap();
            assert!(w <= 1e-9, "{:?}: {w}", s.variant);
        }
    }

    #[test]
    fn power_sum_conjugate_closed_form() {
        let s = YoungSpec::power_sum(vec![1.5, 3.0], vec![1.0, 2.0]).unwrap();
        let c = s.conjugate().unwrap();
        // brute maximisation along each coordinate
        let xi = [0.7, 2.0];
        let mut best = 0.0f64;
        for i in 0..4000 {
            let x = i as f64 * 1e-3;
            best = best.max(x * xi[0] - x.powf(1.5));
        }
        let mut best2 = 0.0f64;
        for i in 0..4000 {
            let x = i as f64 * 1e-3;
            best2 = best2.max(x * xi[1] - 2.0 * x.powi(3));
        }
        let got = c.eval(&xi).unwrap();
        assert!((got - best - best2).abs() < 1e-5, "{got} {}", best + best2);
    }

    #[test]
    fn sheared_conjugate_matches_brute_force() {
        let s = YoungSpec::two_dim_coupled(2.0, 3.0, 0.0, 3.0).unwrap();
        let c = s.conjugate().unwrap();
        let xp = [0.8, -0.3];
        let mut best = f64::NEG_INFINITY;
        let n = 600;
        for i in 0..=n {
            for j in 0..=n {
                let x = -1.5 + 3.0 * i as f64 / n as f64;
                let y = -1.5 + 3.0 * j as f64 / n as f64;
                let v = x * xp[0] + y * xp[1] - s.eval(&[x, y]).unwrap();
                best = best.max(v);
            }
        }
        let got = c.eval(&xp).unwrap();
        assert!((got - best).abs() < 2e-4, "{got} vs {best}");
    }

    #[test]
    fn inverse_transpose_of_shear() {
        let m = vec![vec![1.0, -1.0], vec![1.0, 0.0]];
        let it = inverse_transpose(&m).unwrap();
        assert_eq!(it, vec![vec![0.0, -1.0], vec![1.0, 1.0]]);
        assert!((det(&m) - 1.0).abs() < 1e-15);
    }
}
