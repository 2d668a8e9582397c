//! Klimov symmetrisation: conjugate, symmetric increasing rearrangement,
//! conjugate again.

use serde::{Deserialize, Serialize};

use super::spec::{YoungSpec, YoungVariant};
use super::table::{log_grid, OneDimYoung, TailModel};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_with, QuadOptions};
use crate::radial::omega;

/// Harmonic mean of the exponents and the constant of `Lambda s^pbar`.
pub fn power_sum_klimov(p: &[f64], lambda: &[f64], n: usize) -> Result<(f64, f64)> {
    if p.len() != n || lambda.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} exponents and weights, got {} and {}",
            p.len(),
            lambda.len()
        )));
    }
    if p.iter().any(|&x| !(x >= 1.0)) || lambda.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::InvalidInput("need p_i >= 1 and lambda_i > 0".into()));
    }
    let nf = n as f64;
    let pbar = nf / p.iter().map(|x| 1.0 / x).sum::<f64>();
    if !(pbar > 1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "harmonic mean {pbar} must exceed 1"
        )));
    }
    let pbar_c = pbar / (pbar - 1.0);
    let mut prod = 1.0;
    for &pi in p {
        // p_i' = inf when p_i = 1: (p')^{1/p'} -> 1 and Gamma(1 + 1/p') -> 1
        let (pc_pow, g) = if pi == 1.0 {
            (1.0, 1.0)
        } else {
            let pc = pi / (pi - 1.0);
            (pc.powf(1.0 / pc), libm::tgamma(1.0 + 1.0 / pc))
        };
        prod *= pi.powf(1.0 / pi) * pc_pow * g;
    }
    let bracket = prod / (omega(n) * libm::tgamma(1.0 + nf / pbar_c));
    let weights: f64 = p.iter().zip(lambda).map(|(pi, li)| li.powf(1.0 / pi)).product();
    let lead = 2f64.powf(pbar) * (pbar - 1.0).powf(pbar - 1.0) / pbar.powf(pbar);
    let big_lambda = lead * bracket.powf(pbar / nf) * weights.powf(pbar / nf);
    Ok((pbar, big_lambda))
}

/// Asymptotic power-log model `s^power log^log_exponent(c + s)` near infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticModel {
    pub power: f64,
    pub log_exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KlimovRoute {
    ClosedForm,
    Radial,
    SublevelQuadrature,
    Grid2d,
}

#[derive(Debug, Clone)]
pub struct KlimovResult {
    pub phi_diamond: OneDimYoung,
    pub model: Option<AsymptoticModel>,
    pub route: KlimovRoute,
    /// `(pbar, Lambda)` when the closed form applies.
    pub closed_form: Option<(f64, f64)>,
}

/// Piecewise power interpolant of a positive increasing function of `tau`,
/// linear in log-log coordinates and extrapolated the same way.
struct LogTable {
    lx: Vec<f64>,
    ly: Vec<f64>,
}

impl LogTable {
    fn eval(&self, x: f64) -> f64 {
        let lx = x.max(1e-300).ln();
        let n = self.lx.len();
        let j = self.lx.partition_point(|&v| v <= lx).clamp(1, n - 1) - 1;
        let t = (lx - self.lx[j]) / (self.lx[j + 1] - self.lx[j]);
        (self.ly[j] + t * (self.ly[j + 1] - self.ly[j])).exp()
    }
}

enum Level<'a> {
    Exact(&'a OneDimYoung),
    Table(LogTable),
}

impl Level<'_> {
    fn eval(&self, tau: f64) -> f64 {
        match self {
            Level::Exact(c) => 2.0 * c.inverse(tau.max(0.0)),
            Level::Table(t) => t.eval(tau),
        }
    }
}

/// `2 int_0^X next(tau - a(x)) dx` with `X = a^{-1}(tau)`, integrated in
/// `x = X (1 - w^2)` to soften the endpoint behaviour.
fn level_up(a: &OneDimYoung, next: &Level, tau: f64) -> Result<f64> {
    let x_max = a.inverse(tau);
    if x_max == 0.0 {
        return Ok(0.0);
    }
    let f = |w: f64| {
        let x = x_max * (1.0 - w * w);
        next.eval(tau - a.eval(x)) * 2.0 * x_max * w
    };
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-10,
        max_depth: 30,
    };
    let plateau = a.plateau();
    let v = if plateau > 0.0 && plateau < x_max {
        // the integrand has a kink where x crosses the plateau edge
        let wk = (1.0 - plateau / x_max).sqrt();
        integrate_with(f, 0.0, wk, opts).zip(integrate_with(f, wk, 1.0, opts)).map(|(p, q)| p + q)
    } else {
        integrate_with(f, 0.0, 1.0, opts)
    };
    v.map(|v| 2.0 * v)
        .ok_or_else(|| Error::Quadrature(format!("sublevel measure at level {tau:e}")))
}

/// Measure of `{ sum_i parts_i(|x_i|) < tau }` on a grid of levels.
pub fn sublevel_measures(parts: &[OneDimYoung], taus: &[f64]) -> Result<Vec<f64>> {
    let n = parts.len();
    let mut next = Level::Exact(&parts[n - 1]);
    let inner_grid = log_grid(1e-22, 1e22, 441);
    for k in (1..n - 1).rev() {
        let vals = inner_grid
            .iter()
            .map(|&t| level_up(&parts[k], &next, t))
            .collect::<Result<Vec<_>>>()?;
        next = Level::Table(LogTable {
            lx: inner_grid.iter().map(|t| t.ln()).collect(),
            ly: vals.iter().map(|v| v.max(1e-300).ln()).collect(),
        });
    }
    taus.iter().map(|&t| level_up(&parts[0], &next, t)).collect()
}

/// Tail of the radial function whose sublevel measures match those of
/// `sum parts_i`, deduced from the part tails.
fn rearranged_tail(parts: &[OneDimYoung]) -> TailModel {
    let n = parts.len() as f64;
    let e: f64 = parts.iter().map(|p| 1.0 / p.tail().exponent).sum();
    let g: f64 = parts
        .iter()
        .map(|p| -p.tail().log_exponent / p.tail().exponent)
        .sum();
    TailModel::power_log(n / e, -g / e, std::f64::consts::E)
}

/// Symmetric increasing rearrangement of `xi -> sum parts_i((A xi)_i)`,
/// returned as the radial profile `r -> value` with `|det A| = det_abs`.
pub fn symmetric_increasing(parts: &[OneDimYoung], det_abs: f64) -> Result<OneDimYoung> {
    let n = parts.len();
    let w = omega(n);
    let taus = log_grid(1e-16, 1e16, 513);
    let vols = sublevel_measures(parts, &taus)?;
    let vol0: f64 = parts.iter().map(|p| 2.0 * p.plateau()).product::<f64>() / det_abs;
    let rho0 = (vol0 / w).powf(1.0 / n as f64);
    let mut rho = Vec::with_capacity(taus.len() + 1);
    let mut vals = Vec::with_capacity(taus.len() + 1);
    if rho0 > 0.0 {
        rho.push(rho0);
        vals.push(0.0);
    }
    for (&t, &v) in taus.iter().zip(&vols) {
        let r = (v / det_abs / w).powf(1.0 / n as f64);
        if r > rho.last().copied().unwrap_or(0.0) * (1.0 + 1e-10) && r > 0.0 {
            rho.push(r);
            vals.push(t);
        }
    }
    OneDimYoung::from_samples(rho, vals, Some(rearranged_tail(parts)))
}

fn model_of(t: TailModel) -> AsymptoticModel {
    AsymptoticModel {
        power: t.exponent,
        log_exponent: t.log_exponent,
    }
}

/// Klimov symmetrisation, with the closed form for power sums.
pub fn klimov_symmetrize(spec: &YoungSpec) -> Result<KlimovResult> {
    if let YoungVariant::PowerSum { p, lambda } = &spec.variant {
        let (pbar, lam) = power_sum_klimov(p, lambda, spec.dim)?;
        let phi = OneDimYoung::power(lam, pbar)?;
        return Ok(KlimovResult {
            phi_diamond: phi,
            model: Some(AsymptoticModel {
                power: pbar,
                log_exponent: 0.0,
            }),
            route: KlimovRoute::ClosedForm,
            closed_form: Some((pbar, lam)),
        });
    }
    klimov_numeric(spec)
}

/// Klimov symmetrisation through the numeric pipeline for every variant.
pub fn klimov_numeric(spec: &YoungSpec) -> Result<KlimovResult> {
    match &spec.variant {
        YoungVariant::RadialOneDim { a } => Ok(KlimovResult {
            phi_diamond: a.clone(),
            model: Some(model_of(a.tail())),
            route: KlimovRoute::Radial,
            closed_form: None,
        }),
        YoungVariant::Gridded(g) => Ok(KlimovResult {
            phi_diamond: g.klimov()?,
            model: None,
            route: KlimovRoute::Grid2d,
            closed_form: None,
        }),
        _ => {
            let conj = spec.conjugate()?;
            let (_, parts) = conj.separable_form()?;
            let radial = symmetric_increasing(&parts, conj.shear_determinant())?;
            let phi = radial.conjugate()?;
            let model = Some(model_of(phi.tail()));
            Ok(KlimovResult {
                phi_diamond: phi,
                model,
                route: KlimovRoute::SublevelQuadrature,
                closed_form: None,
            })
        }
    }
}

/// Radial profile of the symmetric increasing rearrangement of `Phi` itself.
pub fn symmetric_rearrangement_of(spec: &YoungSpec) -> Result<OneDimYoung> {
    match &spec.variant {
        YoungVariant::RadialOneDim { a } => Ok(a.clone()),
        YoungVariant::Gridded(_) => Err(Error::Unsupported(
            "rearrangement of gridded functions is only available through the conjugate".into(),
        )),
        _ => {
            let (_, parts) = spec.separable_form()?;
            symmetric_increasing(&parts, spec.shear_determinant())
        }
    }
}

/// Least-squares log exponent of `phi(s) / s^power` against `log(c + s)`
/// over the given abscissae.
pub fn fitted_log_exponent(phi: &OneDimYoung, power: f64, c: f64, ss: &[f64]) -> f64 {
    let xs: Vec<f64> = ss.iter().map(|s| (c + s).ln().ln()).collect();
    let ys: Vec<f64> = ss.iter().map(|s| (phi.eval(*s) / s.powf(power)).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Measured constants of `Phi_star(K1 s) <= Phi_diamond(s) <= Phi_star(K2 s)`.
pub fn equivalence_constants(phi_star: &OneDimYoung, phi_diamond: &OneDimYoung, ss: &[f64]) -> (f64, f64) {
    let mut k1 = f64::INFINITY;
    let mut k2 = 0.0f64;
    for &s in ss {
        let k = phi_star.inverse(phi_diamond.eval(s)) / s;
        k1 = k1.min(k);
        k2 = k2.max(k);
    }
    (k1, k2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_closed_form_values() {
        let (pb, l) = power_sum_klimov(&[2.0, 2.0], &[1.0, 1.0], 2).unwrap();
        assert_eq!(pb, 2.0);
        assert!((l - 1.0).abs() < 1e-12, "{l}");
        let (pb, l) = power_sum_klimov(&[1.5, 3.0], &[1.0, 1.0], 2).unwrap();
        assert!((pb - 2.0).abs() < 1e-15);
        assert!((l - 0.916_486_424_665_7).abs() < 1e-10, "{l}");
        assert!(power_sum_klimov(&[1.0, 1.0], &[1.0, 1.0], 2).is_err());
    }

    #[test]
    fn lambda_three_dims_by_independent_route() {
        // isotropic quadratic: Phi = |xi|^2 is radial, so Phi_diamond = s^2
        let (pb, l) = power_sum_klimov(&[2.0, 2.0, 2.0], &[1.0, 1.0, 1.0], 3).unwrap();
        assert_eq!(pb, 2.0);
        assert!((l - 1.0).abs() < 1e-12, "{l}");
    }

    #[test]
    fn lambda_weight_scaling() {
        // Phi(xi) = sum lambda |xi_i|^2 equals |D xi|^2; the symmetrisation
        // scales by the geometric mean of the weights.
        let (_, l) = power_sum_klimov(&[2.0, 2.0], &[4.0, 1.0], 2).unwrap();
        assert!((l - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sublevel_measure_of_square_sum() {
        // |{x^2 + y^2 < tau}| = pi tau
        let a = OneDimYoung::power(1.0, 2.0).unwrap();
        let v = sublevel_measures(&[a.clone(), a], &[0.5, 2.0]).unwrap();
        assert!((v[0] - std::f64::consts::PI * 0.5).abs() < 1e-8);
        assert!((v[1] - std::f64::consts::PI * 2.0).abs() < 1e-8);
    }

    #[test]
    fn sublevel_measure_three_dims() {
        let a = OneDimYoung::power(1.0, 2.0).unwrap();
        let v = sublevel_measures(&[a.clone(), a.clone(), a], &[1.0]).unwrap();
        let exact = 4.0 / 3.0 * std::f64::consts::PI;
        assert!((v[0] - exact).abs() / exact < 1e-4, "{}", v[0]);
    }

    #[test]
    fn numeric_route_matches_closed_form() {
        let spec = YoungSpec::power_sum(vec![1.5, 3.0], vec![1.0, 1.0]).unwrap();
        let num = klimov_numeric(&spec).unwrap();
        let (_, lam) = power_sum_klimov(&[1.5, 3.0], &[1.0, 1.0], 2).unwrap();
        for s in log_grid(0.1, 10.0, 25) {
            let rel = (num.phi_diamond.eval(s) - lam * s * s).abs() / (lam * s * s);
            assert!(rel < 0.02, "s={s}: rel {rel}");
        }
    }

    #[test]
    fn coupled_quadratic_is_square() {
        let spec = YoungSpec::two_dim_coupled(2.0, 2.0, 0.0, std::f64::consts::E).unwrap();
        let r = klimov_symmetrize(&spec).unwrap();
        let m = r.model.unwrap();
        assert!((m.power - 2.0).abs() < 1e-12);
        for s in log_grid(0.1, 10.0, 9) {
            let rel = (r.phi_diamond.eval(s) - s * s).abs() / (s * s);
            assert!(rel < 0.02, "s={s}: {rel}");
        }
    }

    #[test]
    fn coupled_grid_route_cross_check() {
        use super::super::grid2d::Gridded2d;
        let spec = YoungSpec::two_dim_coupled(2.0, 2.0, 0.0, std::f64::consts::E).unwrap();
        let exact = klimov_symmetrize(&spec).unwrap().phi_diamond;
        let g = Gridded2d::from_fn(|x, y| spec.eval(&[x, y]).unwrap(), 4.0, 161).unwrap();
        let grid = g.klimov().unwrap();
        for &s in &[0.2, 0.4, 0.6] {
            let rel = (grid.eval(s) - exact.eval(s)).abs() / exact.eval(s);
            assert!(rel < 0.05, "s={s}: {rel}");
        }
    }

    #[test]
    fn log_perturbed_asymptotic_model() {
        let e = std::f64::consts::E;
        let spec = YoungSpec::log_perturbed(vec![2.0, 2.0], vec![1.0, 1.0], e).unwrap();
        let r = klimov_symmetrize(&spec).unwrap();
        let m = r.model.unwrap();
        assert!((m.power - 2.0).abs() < 1e-12);
        assert!((m.log_exponent - 1.0).abs() < 1e-12);
        let fit = fitted_log_exponent(&r.phi_diamond, 2.0, e, &log_grid(1e4, 1e6, 20));
        assert!((fit - 1.0).abs() < 0.25, "fitted {fit}");
    }

    #[test]
    fn equivalence_is_identity_for_radial_power_sum() {
        let spec = YoungSpec::power_sum(vec![2.0, 2.0], vec![1.0, 1.0]).unwrap();
        let star = symmetric_rearrangement_of(&spec).unwrap();
        let dia = klimov_symmetrize(&spec).unwrap().phi_diamond;
        let (k1, k2) = equivalence_constants(&star, &dia, &log_grid(1e-2, 1e2, 30));
        assert!((k1 - 1.0).abs() < 1e-4 && (k2 - 1.0).abs() < 1e-4, "{k1} {k2}");
    }
}
