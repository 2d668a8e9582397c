//! Norm bounds for solutions in terms of Lorentz norms of the data.
//!
//! * case i: `||u||_inf <= c(||f||_{m, s/(pb-1)}^{1/(pb-1)} + sum ||g_i||_{N p_i'/pb, p_i'/pb}^{p_i'/pb})`
//! * case ii: `||u||_{L^{inf,s}(log L)^{-1}} <= c(||f||_{N/pb, s/(pb-1)}^{1/(pb-1)} + sum ||g_i||_{N p_i'/pb, s p_i'/pb}^{p_i'/pb})`
//! * case iii: `||u||_{k, s} <= c(||f||_{m, s/(pb-1)}^{1/(pb-1)} + sum ||g_i||_{k_i, s p_i'/pb}^{p_i'/pb})`
//!   with `k = mN(pb-1)/(N - m pb)` and `k_i = mN(pb-1)p_i'/((N-m) pb)`.
//!
//! The `g` terms carry the power `p_i'/pb` in every case, which keeps the right
//! side homogeneous of degree `1/(pb-1)` under `f -> t f`, `g_i -> t^{pb'/p_i'} g_i`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::norms::{lorentz_norm, lorentz_zygmund_norm, LorentzZygmund};
use crate::pde::harmonic_mean;
use crate::rearrange::{decreasing_rearrangement, GridFunction, StepProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegularityCase {
    I,
    Ii,
    Iii,
}

impl std::str::FromStr for RegularityCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" => Ok(Self::I),
            "ii" => Ok(Self::Ii),
            "iii" => Ok(Self::Iii),
            _ => invalid(format!("unknown regularity case {s:?}")),
        }
    }
}

/// Declared summability of the data: `f in L^{m, sigma/(pb-1)}`, and for
/// case i `g_i in L^{r_i, s_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataExponents {
    pub m: f64,
    pub sigma: f64,
    #[serde(default)]
    pub r: Vec<f64>,
    #[serde(default)]
    pub s: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub case: RegularityCase,
    pub lhs: f64,
    pub rhs: f64,
    pub f_term: f64,
    pub g_terms: Vec<f64>,
    /// `lhs / rhs`, 0 when both vanish
    pub constant: f64,
    pub warnings: Vec<String>,
}

fn conj(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

fn refuse<T>(msg: String) -> Result<T> {
    Err(Error::HypothesisViolation(msg))
}

/// Checks the case constraints; returns structural warnings that do not refuse.
pub fn validate(case: RegularityCase, p: &[f64], dim: usize, ex: &DataExponents) -> Result<Vec<String>> {
    let n = dim as f64;
    let pb = harmonic_mean(p);
    let mut warnings = Vec::new();
    if !(pb > 1.0) {
        return refuse(format!("pbar = {pb} must exceed 1"));
    }
    if pb >= n {
        warnings.push(format!("pbar < N fails (pbar = {pb:.6}, N = {dim})"));
    }
    let pstar = if pb < n { n * pb / (n - pb) } else { f64::INFINITY };
    let pmax = p.iter().cloned().fold(0.0, f64::max);
    if pmax >= pstar {
        return refuse(format!("max p_i < pbar* fails: max p_i = {pmax}, pbar* = {pstar:.6}"));
    }
    let (m, sigma) = (ex.m, ex.sigma);
    if !(sigma > 0.0) {
        return refuse(format!("sigma = {sigma} must be positive"));
    }
    match case {
        RegularityCase::I => {
            let crit = n / pb;
            if !(m > crit || (m == crit && sigma <= 1.0)) {
                return refuse(format!(
                    "case i needs m > N/pbar = {crit:.6}, or m = N/pbar with sigma <= 1 (m = {m}, sigma = {sigma})"
                ));
            }
            if ex.r.len() != dim || ex.s.len() != dim {
                return refuse("case i needs one (r_i, s_i) pair per axis".into());
            }
            for i in 0..dim {
                let crit = n * conj(p[i]) / pb;
                let (r, s) = (ex.r[i], ex.s[i]);
                let ok = s > 0.0 && (r > crit || (r == crit && s <= conj(p[i]) / pb));
                if !ok {
                    return refuse(format!(
                        "case i needs r_{i} > N p_{i}'/pbar = {crit:.6}, or equality with s_{i} <= p_{i}'/pbar (r = {r}, s = {s})"
                    ));
                }
            }
        }
        RegularityCase::Ii => {
            if !(sigma > 1.0) {
                return refuse(format!("case ii needs 1 < sigma <= inf (sigma = {sigma})"));
            }
        }
        RegularityCase::Iii => {
            let lo = if pstar.is_infinite() { 1.0 } else { pstar / (pstar - 1.0) };
            let hi = n / pb;
            let inside = lo < m && m < hi;
            let endpoint = m == lo && (sigma - pb).abs() <= 1e-12 * pb;
            if !(inside || endpoint) {
                return refuse(format!(
                    "case iii needs (pbar*)' = {lo:.6} < m < N/pbar = {hi:.6}, or m = (pbar*)' with sigma = pbar (m = {m}, sigma = {sigma})"
                ));
            }
        }
    }
    Ok(warnings)
}

/// Lorentz indices `(p, q)` and power for `f` and each `g_i`.
fn data_indices(case: RegularityCase, p: &[f64], dim: usize, ex: &DataExponents) -> ((f64, f64), Vec<(f64, f64, f64)>) {
    let n = dim as f64;
    let pb = harmonic_mean(p);
    let (m, sigma) = (ex.m, ex.sigma);
    let fq = sigma / (pb - 1.0);
    let f = match case {
        RegularityCase::Ii => (n / pb, fq),
        _ => (m, fq),
    };
    let g = p
        .iter()
        .map(|&pi| {
            let pc = conj(pi);
            let power = pc / pb;
            match case {
                RegularityCase::I => (n * pc / pb, pc / pb, power),
                RegularityCase::Ii => (n * pc / pb, sigma * pc / pb, power),
                RegularityCase::Iii => (m * n * (pb - 1.0) * pc / ((n - m) * pb), sigma * pc / pb, power),
            }
        })
        .collect();
    (f, g)
}

/// Right side for given data profiles.
pub fn regularity_rhs(
    case: RegularityCase,
    p: &[f64],
    dim: usize,
    ex: &DataExponents,
    f_star: &StepProfile,
    g_star: &[StepProfile],
) -> Result<(f64, Vec<f64>)> {
    let pb = harmonic_mean(p);
    let ((fp, fq), g_idx) = data_indices(case, p, dim, ex);
    let f_term = lorentz_norm(f_star, fp, fq)?.powf(1.0 / (pb - 1.0));
    let mut g_terms = Vec::with_capacity(g_star.len());
    for (g, &(gp, gq, power)) in g_star.iter().zip(&g_idx) {
        g_terms.push(lorentz_norm(g, gp, gq)?.powf(power));
    }
    Ok((f_term, g_terms))
}

fn lhs(case: RegularityCase, p: &[f64], dim: usize, ex: &DataExponents, u: &GridFunction) -> Result<f64> {
    let u_star = decreasing_rearrangement(u);
    let n = dim as f64;
    let pb = harmonic_mean(p);
    match case {
        RegularityCase::I => Ok(u_star.sup_abs()),
        RegularityCase::Ii => {
            let lz = LorentzZygmund::new(f64::INFINITY, ex.sigma, -1.0, 0.0)?;
            lorentz_zygmund_norm(&u_star, &lz, u.measure())
        }
        RegularityCase::Iii => {
            let k = ex.m * n * (pb - 1.0) / (n - ex.m * pb);
            lorentz_norm(&u_star, k, ex.sigma)
        }
    }
}

pub fn regularity_table(
    case: RegularityCase,
    p: &[f64],
    ex: &DataExponents,
    u: &GridFunction,
    f: &GridFunction,
    g: &[GridFunction],
) -> Result<RegularityReport> {
    let dim = u.dim();
    if p.len() != dim || (!g.is_empty() && g.len() != dim) {
        return invalid("one exponent and one g component per axis are required");
    }
    let warnings = validate(case, p, dim, ex)?;
    let f_star = decreasing_rearrangement(f);
    let g_star: Vec<StepProfile> = g.iter().map(decreasing_rearrangement).collect();
    let (f_term, g_terms) = regularity_rhs(case, p, dim, ex, &f_star, &g_star)?;
    let rhs = f_term + g_terms.iter().sum::<f64>();
    let lhs = lhs(case, p, dim, ex, u)?;
    let constant = if lhs == 0.0 {
        0.0
    } else if rhs > 0.0 {
        lhs / rhs
    } else {
        f64::INFINITY
    };
    Ok(RegularityReport {
        case,
        lhs,
        rhs,
        f_term,
        g_terms,
        constant,
        warnings,
    })
}

/// Right side after `f -> t f`, `g_i -> t^{pb'/p_i'} g_i`, divided by the
/// original right side.
pub fn rhs_scaling(
    case: RegularityCase,
    p: &[f64],
    ex: &DataExponents,
    f: &GridFunction,
    g: &[GridFunction],
    t: f64,
) -> Result<f64> {
    let dim = f.dim();
    let pb = harmonic_mean(p);
    let pbc = conj(pb);
    let f_star = decreasing_rearrangement(f);
    let g_star: Vec<StepProfile> = g.iter().map(decreasing_rearrangement).collect();
    let base = regularity_rhs(case, p, dim, ex, &f_star, &g_star)?;
    let gs: Vec<StepProfile> = g_star
        .iter()
        .zip(p)
        .map(|(gi, &pi)| gi.scaled(t.powf(pbc / conj(pi))))
        .collect();
    let scaled = regularity_rhs(case, p, dim, ex, &f_star.scaled(t), &gs)?;
    let sum = |x: &(f64, Vec<f64>)| x.0 + x.1.iter().sum::<f64>();
    Ok(sum(&scaled) / sum(&base))
}
