//! Gradient bounds along truncations `f_H = min(f, H)` of `f = |x|^{-gamma}`,
//! with `q_i = p_i m* / pbar'`, checked through the chain
//!
//! ```text
//! ||d_i u_H||_{q_i}^{q_i} <= c E_H,   E_H = int (s^{1/m* - 1/N'} int_0^s f_H*)^{m*} ds/s <= (m')^{m*} ||f_H||_{L^{m,m*}}^{m*}
//! ```
//!
//! The second step is the weighted Hardy inequality with `r = 1/m'`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::hardy_check;
use crate::pde::{harmonic_mean, solve, Assembly, DiscreteProblem, SolveOptions};
use crate::rearrange::{decreasing_rearrangement, GridFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionalSetup {
    /// domain skeleton
    pub grid: GridFunction,
    pub p: Vec<f64>,
    pub lambda: Vec<f64>,
    pub gamma: f64,
    pub m: f64,
    /// truncation heights as multiples of the median of `f`
    pub levels: Vec<f64>,
    /// largest allowed max/min ratio of the envelope constants
    pub stable_factor: f64,
    pub solve: SolveOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationRow {
    pub height: f64,
    pub f_norm: f64,
    pub grad_norms: Vec<f64>,
    /// `E_H`
    pub hardy_lhs: f64,
    /// `||d_i u||_{q_i}^{q_i} / E_H`
    pub envelope: Vec<f64>,
    /// `||d_i u||_{q_i}^{q_i} / ||f_H||_{m,m*}^{m*}`
    pub lorentz_envelope: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionalReport {
    pub m_star: f64,
    pub q: Vec<f64>,
    pub rows: Vec<TruncationRow>,
    /// max over axes of max/min envelope across levels
    pub spread: f64,
    /// `(m')^{m*}`, the bound on `E_H / ||f_H||^{m*}`
    pub hardy_constant: f64,
    pub pass: bool,
    pub warnings: Vec<String>,
}

impl DistributionalReport {
    pub fn to_csv(&self) -> String {
        let n = self.q.len();
        let mut out = String::from("height,f_norm,hardy_lhs");
        for i in 0..n {
            out.push_str(&format!(",grad_norm_{i},envelope_{i},lorentz_envelope_{i}"));
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{:e},{:e},{:e}", r.height, r.f_norm, r.hardy_lhs));
            for i in 0..n {
                out.push_str(&format!(
                    ",{:e},{:e},{:e}",
                    r.grad_norms[i], r.envelope[i], r.lorentz_envelope[i]
                ));
            }
            out.push('\n');
        }
        out
    }
}

fn refuse<T>(msg: String) -> Result<T> {
    Err(Error::HypothesisViolation(msg))
}

/// Validates the hypotheses; returns `(m*, q, warnings)`.
pub fn validate(p: &[f64], dim: usize, gamma: f64, m: f64) -> Result<(f64, Vec<f64>, Vec<String>)> {
    let n = dim as f64;
    let pb = harmonic_mean(p);
    if dim < 2 {
        return refuse("the distributional bound needs N >= 2".into());
    }
    if !(pb > 1.0) {
        return refuse(format!("pbar = {pb} must exceed 1"));
    }
    if pb >= n {
        return refuse(format!(
            "pbar < N fails (pbar = {pb:.6}, N = {dim}); then (pbar*)' = 1 and the range 1 < m < (pbar*)' is empty"
        ));
    }
    let pstar = n * pb / (n - pb);
    let pmax = p.iter().cloned().fold(0.0, f64::max);
    if pmax >= pstar {
        return refuse(format!("max p_i < pbar* fails: max p_i = {pmax}, pbar* = {pstar:.6}"));
    }
    let pbc = pb / (pb - 1.0);
    for (i, &pi) in p.iter().enumerate() {
        if !(pi / pbc > n / (n - 1.0)) {
            return refuse(format!(
                "p_{i}/pbar' > N/(N-1) fails: {:.6} <= {:.6}",
                pi / pbc,
                n / (n - 1.0)
            ));
        }
    }
    let mc = pstar / (pstar - 1.0);
    if !(m > 1.0 && m < mc) {
        return refuse(format!("1 < m < (pbar*)' = {mc:.6} fails (m = {m})"));
    }
    if !(gamma > 0.0 && gamma < n / m) {
        return refuse(format!(
            "|x|^-gamma lies in L^(m,m*) only for gamma < N/m = {:.6} (gamma = {gamma})",
            n / m
        ));
    }
    let mut warnings = Vec::new();
    if gamma < n / mc {
        warnings.push(format!(
            "gamma < N/(pbar*)' = {:.6}: f is in L^((pbar*)') and the weak-solution theory already applies",
            n / mc
        ));
    }
    let m_star = n * m / (n - m);
    let q = p.iter().map(|pi| pi * m_star / pbc).collect();
    Ok((m_star, q, warnings))
}

pub fn distributional_exponents_check(setup: &DistributionalSetup) -> Result<DistributionalReport> {
    let dim = setup.grid.dim();
    let (m_star, q, warnings) = validate(&setup.p, dim, setup.gamma, setup.m)?;
    if setup.levels.is_empty() {
        return Err(Error::InvalidInput("at least one truncation level is required".into()));
    }
    let gamma = setup.gamma;
    let f = setup.grid.with_fn(|x| x.iter().map(|c| c * c).sum::<f64>().sqrt().powf(-gamma));
    let median = decreasing_rearrangement(&f).eval(0.5 * f.measure());
    let m_conj = setup.m / (setup.m - 1.0);
    let hardy_constant = m_conj.powf(m_star);
    let mut hardy_ok = true;
    let mut rows = Vec::with_capacity(setup.levels.len());
    for &level in &setup.levels {
        let height = level * median;
        let fh = f.map(|v| v.min(height));
        let f_star = decreasing_rearrangement(&fh);
        let r = 1.0 / m_conj;
        let sides = hardy_check(&f_star, r, m_star, true)?.inner;
        // the Hardy side runs to infinity; beyond |Omega| the primitive is constant
        let tail = f_star.integral().powf(m_star) * f_star.measure().powf(-r * m_star) / (r * m_star);
        let (hardy_lhs, f_norm) = (sides.lhs.powf(m_star) - tail, sides.rhs);
        hardy_ok &= hardy_lhs <= hardy_constant * f_norm.powf(m_star);
        let prob = DiscreteProblem::new(setup.grid.clone(), setup.p.clone(), setup.lambda.clone(), fh, Vec::new())?;
        let sol = solve(&prob, &setup.solve)?;
        let asm = Assembly::new(&prob);
        let u = asm.from_grid(&sol.u);
        let grad_norms: Vec<f64> = (0..dim).map(|i| asm.gradient_norms(&u, q[i], false)[i]).collect();
        let powers: Vec<f64> = grad_norms.iter().zip(&q).map(|(g, qi)| g.powf(*qi)).collect();
        rows.push(TruncationRow {
            height,
            f_norm,
            hardy_lhs,
            envelope: powers.iter().map(|x| x / hardy_lhs).collect(),
            lorentz_envelope: powers.iter().map(|x| x / f_norm.powf(m_star)).collect(),
            grad_norms,
        });
    }
    let mut spread = 1.0f64;
    for i in 0..dim {
        let (lo, hi) = rows
            .iter()
            .map(|r| r.envelope[i])
            .fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(x), b.max(x)));
        spread = spread.max(if lo > 0.0 { hi / lo } else { f64::INFINITY });
    }
    let finite = rows.iter().all(|r| r.grad_norms.iter().all(|g| g.is_finite()));
    Ok(DistributionalReport {
        m_star,
        q,
        pass: finite && hardy_ok && spread <= setup.stable_factor,
        rows,
        spread,
        hardy_constant,
        warnings,
    })
}
