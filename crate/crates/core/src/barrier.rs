//! The radial comparison function
//!
//! ```text
//! F(r) = Psi^{-1}( C1 r^{1/N} f**(r) / (N w^{1/N}) + C1 (Phi_conj)^{-1}(G(r)) )
//! v(s) = int_s^{|Omega|} F(r) / (N w^{1/N} r^{1/N'}) dr
//! ```
//!
//! with `Psi(s) = Phi(s)/s`. In the radius variable `rho = r^{1/N}` the
//! barrier reads `v = w^{-1/N} int F(rho^N) d rho`, which removes the
//! `r^{-1/N'}` singularity.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate_with, QuadOptions};
use crate::radial::{omega, Interp, RadialProfile};
use crate::rearrange::{double_star, DoubleStar, StepProfile};
use crate::young::{power_sum_klimov, Diamond, OneDimYoung};

/// Source data for `f*` or `G`.
#[derive(Debug, Clone)]
pub enum DataProfile {
    Step(StepProfile),
    /// `coef * s^exponent` on `(0, measure)`
    Power { coef: f64, exponent: f64, measure: f64 },
}

impl DataProfile {
    pub fn zero(measure: f64) -> Self {
        DataProfile::Power {
            coef: 0.0,
            exponent: 0.0,
            measure,
        }
    }

    pub fn constant(c: f64, measure: f64) -> Self {
        DataProfile::Power {
            coef: c,
            exponent: 0.0,
            measure,
        }
    }

    pub fn measure(&self) -> f64 {
        match self {
            DataProfile::Step(p) => p.measure(),
            DataProfile::Power { measure, .. } => *measure,
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            DataProfile::Step(p) => p.eval(s),
            DataProfile::Power { coef, exponent, measure } => {
                if s >= *measure || *coef == 0.0 {
                    0.0
                } else {
                    coef * s.powf(*exponent)
                }
            }
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            DataProfile::Step(p) => p.breaks.clone(),
            DataProfile::Power { measure, .. } => vec![0.0, *measure],
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            DataProfile::Step(p) => p.values.iter().all(|v| *v == 0.0),
            DataProfile::Power { coef, .. } => *coef == 0.0,
        }
    }
}

/// `u**` for either data representation.
#[derive(Debug, Clone)]
enum MaximalFunction {
    Step(DoubleStar),
    Power { coef: f64, exponent: f64, measure: f64 },
}

impl MaximalFunction {
    fn of(p: &DataProfile) -> Result<Self> {
        Ok(match p {
            DataProfile::Step(s) => MaximalFunction::Step(double_star(s)),
            DataProfile::Power { coef, exponent, measure } => {
                if *coef != 0.0 && *exponent <= -1.0 {
                    return invalid("f* = c s^e needs e > -1 for f** to be finite");
                }
                MaximalFunction::Power {
                    coef: *coef,
                    exponent: *exponent,
                    measure: *measure,
                }
            }
        })
    }

    fn eval(&self, s: f64) -> f64 {
        match self {
            MaximalFunction::Step(d) => d.eval(s),
            MaximalFunction::Power { coef, exponent, measure } => {
                if *coef == 0.0 {
                    return 0.0;
                }
                let top = measure.min(s);
                coef * top.powf(exponent + 1.0) / (exponent + 1.0) / s
            }
        }
    }
}

/// The symmetrised Young function in the barrier: either `Lambda s^pbar`
/// in closed form or a tabulated function with its conjugate.
#[derive(Debug, Clone)]
pub enum Kernel {
    Power { pbar: f64, lambda: f64 },
    Tabulated(Diamond),
}

impl Kernel {
    pub fn phi(&self, s: f64) -> f64 {
        match self {
            Kernel::Power { pbar, lambda } => lambda * s.abs().powf(*pbar),
            Kernel::Tabulated(d) => d.phi.eval(s),
        }
    }

    pub fn psi_sup(&self) -> f64 {
        match self {
            Kernel::Power { pbar, .. } if *pbar > 1.0 => f64::INFINITY,
            Kernel::Power { lambda, .. } => *lambda,
            Kernel::Tabulated(d) => d.psi_sup(),
        }
    }

    pub fn psi_inverse(&self, y: f64) -> Result<f64> {
        match self {
            Kernel::Power { pbar, lambda } => {
                if y <= 0.0 {
                    Ok(0.0)
                } else {
                    Ok((y / lambda).powf(1.0 / (pbar - 1.0)))
                }
            }
            Kernel::Tabulated(d) => d.psi_inverse(y),
        }
    }

    /// Inverse of the conjugate: `pbar Lambda^{1/pbar} (G/(pbar-1))^{1/pbar'}` for powers.
    pub fn conj_inverse(&self, g: f64) -> f64 {
        if g <= 0.0 {
            return 0.0;
        }
        match self {
            Kernel::Power { pbar, lambda } => {
                let pp = pbar / (pbar - 1.0);
                pbar * lambda.powf(1.0 / pbar) * (g / (pbar - 1.0)).powf(1.0 / pp)
            }
            Kernel::Tabulated(d) => d.conj_inverse(g),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BarrierSpec {
    pub kernel: Kernel,
    pub dim: usize,
    pub c1: f64,
    /// recorded for provenance; it enters through `G`
    pub c2: f64,
    pub f_profile: DataProfile,
    pub g_profile: DataProfile,
    /// `|Omega|`
    pub measure: f64,
}

impl BarrierSpec {
    pub fn new(
        kernel: Kernel,
        dim: usize,
        c1: f64,
        c2: f64,
        f_profile: DataProfile,
        g_profile: DataProfile,
        measure: f64,
    ) -> Result<Self> {
        if dim < 1 || !(c1 > 0.0) || !(c2 > 0.0) || !(measure > 0.0) {
            return invalid("barrier needs N >= 1, C1, C2 > 0 and |Omega| > 0");
        }
        for p in [&f_profile, &g_profile] {
            if p.measure() > measure * (1.0 + 1e-12) {
                return invalid("data profile extends beyond |Omega|");
            }
        }
        if let DataProfile::Step(s) = &f_profile {
            if !s.non_increasing || s.values.iter().any(|v| *v < 0.0) {
                return invalid("f profile must be a decreasing rearrangement");
            }
        }
        Ok(Self {
            kernel,
            dim,
            c1,
            c2,
            f_profile,
            g_profile,
            measure,
        })
    }

    /// Kernel `Lambda s^pbar` of the power-sum function `sum lambda_i |xi_i|^{p_i}`.
    pub fn power_sum_kernel(p: &[f64], lambda: &[f64]) -> Result<Kernel> {
        let (pbar, lam) = power_sum_klimov(p, lambda, p.len())?;
        if !(pbar > 1.0) {
            return invalid("the harmonic mean of the exponents must exceed 1");
        }
        Ok(Kernel::Power { pbar, lambda: lam })
    }

    pub fn tabulated_kernel(phi: OneDimYoung) -> Result<Kernel> {
        Ok(Kernel::Tabulated(Diamond::new(phi)?))
    }

    fn scale(&self) -> f64 {
        self.dim as f64 * omega(self.dim).powf(1.0 / self.dim as f64)
    }

    fn maximal(&self) -> Result<MaximalFunction> {
        MaximalFunction::of(&self.f_profile)
    }
}

/// Argument of `Psi^{-1}` in `F`.
fn argument(spec: &BarrierSpec, fss: &MaximalFunction, r: f64) -> f64 {
    let n = spec.dim as f64;
    let f_part = if r > 0.0 { r.powf(1.0 / n) * fss.eval(r) / spec.scale() } else { 0.0 };
    spec.c1 * f_part + spec.c1 * spec.kernel.conj_inverse(spec.g_profile.eval(r))
}

/// Evaluation nodes: data breakpoints, 64 log-spaced nodes per decade on
/// `[1e-8, 1e-2] |Omega|`, and 512 nodes uniform in the radius.
fn nodes(spec: &BarrierSpec) -> Vec<f64> {
    let m = spec.measure;
    let n = spec.dim as f64;
    let mut s: Vec<f64> = Vec::new();
    s.extend(spec.f_profile.breakpoints());
    s.extend(spec.g_profile.breakpoints());
    for k in 0..=384 {
        s.push(m * 10f64.powf(-8.0 + 6.0 * k as f64 / 384.0));
    }
    for k in 0..=512 {
        s.push(m * (k as f64 / 512.0).powf(n));
    }
    s.push(0.0);
    s.push(m);
    s.retain(|x| *x >= 0.0 && *x <= m);
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * m);
    s
}

/// `F` sampled at the barrier nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FProfile {
    pub r: Vec<f64>,
    pub values: Vec<f64>,
}

impl FProfile {
    /// Step view: `F` at the left end of each node interval.
    pub fn to_step(&self) -> Result<StepProfile> {
        StepProfile::new(self.r.clone(), self.values[..self.values.len() - 1].to_vec())
    }
}

/// Evaluates `F(r)`; fails when the argument leaves the range of `Psi`.
pub fn f_value(spec: &BarrierSpec, r: f64) -> Result<f64> {
    let fss = spec.maximal()?;
    f_value_with(spec, &fss, r)
}

fn f_value_with(spec: &BarrierSpec, fss: &MaximalFunction, r: f64) -> Result<f64> {
    let y = argument(spec, fss, r);
    if !(y < spec.kernel.psi_sup()) {
        return Err(Error::BarrierUndefined(format!(
            "the range condition on Psi fails at r = {r:e} (argument {y:e}, sup Psi = {:e})",
            spec.kernel.psi_sup()
        )));
    }
    spec.kernel.psi_inverse(y)
}

#[allow(non_snake_case)]
pub fn F_profile(spec: &BarrierSpec) -> Result<FProfile> {
    let fss = spec.maximal()?;
    let r = nodes(spec);
    let mut values = Vec::with_capacity(r.len());
    for &x in &r {
        // right limit at 0, left limit at |Omega|
        let at = if x == 0.0 { r[1] * 1e-12 } else { x.min(spec.measure * (1.0 - 1e-14)) };
        values.push(f_value_with(spec, &fss, at)?);
    }
    Ok(FProfile { r, values })
}

/// The radial barrier on its node grid.
#[derive(Debug, Clone)]
pub struct Barrier {
    pub spec: BarrierSpec,
    pub s: Vec<f64>,
    pub v: Vec<f64>,
    /// local exponent `v ~ s^{-k}` near 0 when `v(0+) = +inf`
    pub blow_up: Option<f64>,
    fss: MaximalFunction,
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-11,
        max_depth: 40,
    }
}

impl Barrier {
    fn w_root(&self) -> f64 {
        omega(self.spec.dim).powf(1.0 / self.spec.dim as f64)
    }

    /// `int_{rho_a}^{rho_b} F(rho^N) d rho`.
    fn radial_integral(spec: &BarrierSpec, fss: &MaximalFunction, a: f64, b: f64) -> Result<f64> {
        let n = spec.dim as f64;
        let (ra, rb) = (a.powf(1.0 / n), b.powf(1.0 / n));
        let err = std::cell::RefCell::new(None);
        let val = integrate_with(
            |rho| match f_value_with(spec, fss, rho.powf(n).max(f64::MIN_POSITIVE)) {
                Ok(x) => x,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            },
            ra,
            rb,
            quad_opts(),
        );
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        val.ok_or_else(|| Error::Quadrature(format!("barrier integral on [{a:e}, {b:e}]")))
    }

    /// `v` at measure coordinate `s`, exact up to quadrature.
    pub fn at_measure(&self, s: f64) -> Result<f64> {
        if s >= self.spec.measure {
            return Ok(0.0);
        }
        if s <= 0.0 {
            return Ok(self.v[0]);
        }
        let k = self.s.partition_point(|&x| x <= s);
        let top = self.s[k];
        Ok(self.v[k] + Self::radial_integral(&self.spec, &self.fss, s, top)? / self.w_root())
    }

    pub fn at_point(&self, x: &[f64]) -> Result<f64> {
        let r: f64 = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        self.at_measure(omega(self.spec.dim) * r.powi(self.spec.dim as i32))
    }

    /// Node values as a radial profile (linear in `s` between nodes).
    pub fn profile(&self) -> RadialProfile {
        let mut s = self.s.clone();
        let mut v = self.v.clone();
        if !v[0].is_finite() {
            s.remove(0);
            v.remove(0);
            s[0] = 0.0;
        }
        RadialProfile::new(s, v, self.spec.dim, Interp::Linear).expect("barrier nodes increase")
    }

    /// `int_0^{|Omega|} Phi(F(r)) dr`, the gradient energy of `v`.
    pub fn gradient_energy(&self) -> Result<f64> {
        gradient_energy(&self.spec)
    }
}

pub fn barrier_solution(spec: &BarrierSpec) -> Result<Barrier> {
    let fss = spec.maximal()?;
    let s = nodes(spec);
    let w = omega(spec.dim).powf(1.0 / spec.dim as f64);
    let mut v = vec![0.0; s.len()];
    for k in (0..s.len() - 1).rev() {
        let piece = if k == 0 {
            match Barrier::radial_integral(spec, &fss, s[0], s[1]) {
                Ok(x) => x,
                Err(Error::Quadrature(_)) => f64::INFINITY,
                Err(e) => return Err(e),
            }
        } else {
            Barrier::radial_integral(spec, &fss, s[k], s[k + 1])?
        };
        v[k] = v[k + 1] + piece / w;
    }
    let blow_up = if v[0].is_finite() {
        None
    } else {
        let (a, b) = (s[1], s[2]);
        Some(-(v[1] / v[2]).ln() / (a / b).ln())
    };
    Ok(Barrier {
        spec: spec.clone(),
        s,
        v,
        blow_up,
        fss,
    })
}

/// Closed form of the power-sum barrier,
/// `v(s) = int_s^M Lambda^{-1/(pbar-1)} / (N w^{1/N} t^{1/N'}) (t^{1/N} f**/(N w^{1/N}) + (pbar Lambda)^{1/pbar} (pbar' G)^{1/pbar'})^{1/(pbar-1)} dt`,
/// evaluated by direct quadrature in `t`.
pub fn power_sum_closed_form(spec: &BarrierSpec, s: f64) -> Result<f64> {
    let Kernel::Power { pbar, lambda } = spec.kernel else {
        return invalid("closed form needs a power kernel");
    };
    let fss = spec.maximal()?;
    let n = spec.dim as f64;
    let c = spec.scale();
    let pp = pbar / (pbar - 1.0);
    let integrand = |t: f64| {
        let inner = t.powf(1.0 / n) * fss.eval(t) / c
            + (pbar * lambda).powf(1.0 / pbar) * (pp * spec.g_profile.eval(t)).powf(1.0 / pp);
        lambda.powf(-1.0 / (pbar - 1.0)) / (c * t.powf(1.0 - 1.0 / n)) * (spec.c1 * inner).powf(1.0 / (pbar - 1.0))
    };
    let mut pts: Vec<f64> = spec
        .f_profile
        .breakpoints()
        .into_iter()
        .chain(spec.g_profile.breakpoints())
        .filter(|x| *x > s && *x < spec.measure)
        .collect();
    pts.push(s);
    pts.push(spec.measure);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let mut acc = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let piece = if a == 0.0 {
            // t = b x^N removes the t^{-1/N'} factor
            integrate_with(|x| integrand(b * x.powf(n)) * n * b * x.powf(n - 1.0), 0.0, 1.0, quad_opts())
        } else {
            integrate_with(integrand, a, b, quad_opts())
        }
        .ok_or_else(|| Error::Quadrature("closed-form barrier integral".into()))?;
        acc += piece;
    }
    Ok(acc)
}

/// `int_0^{|Omega|} Phi(F(r)) dr` in `r = rho^N`.
pub fn gradient_energy(spec: &BarrierSpec) -> Result<f64> {
    let fss = spec.maximal()?;
    let n = spec.dim as f64;
    let s = nodes(spec);
    let mut acc = 0.0;
    for w in s.windows(2) {
        let (ra, rb) = (w[0].powf(1.0 / n), w[1].powf(1.0 / n));
        let err = std::cell::RefCell::new(None);
        let piece = integrate_with(
            |rho| {
                let r = rho.powf(n).max(f64::MIN_POSITIVE);
                match f_value_with(spec, &fss, r) {
                    Ok(f) => spec.kernel.phi(f) * n * rho.powf(n - 1.0),
                    Err(e) => {
                        err.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                }
            },
            ra,
            rb,
            quad_opts(),
        );
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        acc += piece.ok_or_else(|| Error::Quadrature("gradient energy".into()))?;
    }
    Ok(acc)
}

/// Pass/fail of the existence conditions for the radial problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellPosedness {
    /// `Psi(r) -> inf`
    pub cond1: bool,
    /// argument of `Psi^{-1}` stays below `sup Psi` at every node
    pub cond2: bool,
    /// `int Phi(F) < inf`, equivalently finite gradient energy of `v`
    pub grad_finite: bool,
    pub details: Vec<String>,
}

impl WellPosedness {
    pub fn ok(&self) -> bool {
        (self.cond1 || self.cond2) && self.grad_finite
    }
}

pub fn barrier_wellposed(spec: &BarrierSpec) -> WellPosedness {
    let mut details = Vec::new();
    let sup = spec.kernel.psi_sup();
    let cond1 = sup.is_infinite();
    if !cond1 {
        details.push(format!("Psi is bounded by {sup:e}"));
    }
    let fss = match spec.maximal() {
        Ok(f) => f,
        Err(e) => {
            details.push(e.to_string());
            return WellPosedness {
                cond1,
                cond2: false,
                grad_finite: false,
                details,
            };
        }
    };
    let mut cond2 = true;
    for &r in nodes(spec).iter().skip(1) {
        let y = argument(spec, &fss, r);
        if !(y < sup) {
            cond2 = false;
            details.push(format!("range condition fails at r = {r:e}: argument {y:e} >= {sup:e}"));
            break;
        }
    }
    let grad_finite = if !(cond1 || cond2) {
        details.push("F undefined, gradient energy not evaluated".into());
        false
    } else {
        // local exponent of Phi(F(r)) at the origin; integrable iff > -1
        let m = spec.measure;
        let (r1, r2) = (m * 1e-40, m * 1e-36);
        let val = |r: f64| f_value_with(spec, &fss, r).map(|f| spec.kernel.phi(f));
        match (val(r1), val(r2)) {
            (Ok(a), Ok(b)) if a > 0.0 && b > 0.0 => {
                let k = (b / a).ln() / (r2 / r1).ln();
                if k <= -1.0 + 1e-3 {
                    details.push(format!("Phi(F(r)) ~ r^{k:.4} at 0 is not integrable"));
                    false
                } else {
                    true
                }
            }
            (Ok(_), Ok(_)) => true,
            (Err(e), _) | (_, Err(e)) => {
                details.push(e.to_string());
                false
            }
        }
    };
    WellPosedness {
        cond1,
        cond2,
        grad_finite,
        details,
    }
}

/// Whether the barrier data vanish identically.
pub fn data_vanish(spec: &BarrierSpec) -> bool {
    spec.f_profile.is_zero() && spec.g_profile.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn square_kernel() -> Kernel {
        BarrierSpec::power_sum_kernel(&[2.0, 2.0], &[1.0, 1.0]).unwrap()
    }

    fn torsion(kernel: Kernel) -> BarrierSpec {
        BarrierSpec::new(
            kernel,
            2,
            1.0,
            1.0,
            DataProfile::Step(StepProfile::constant(1.0, PI).unwrap()),
            DataProfile::zero(PI),
            PI,
        )
        .unwrap()
    }

    #[test]
    fn torsion_barrier() {
        for kernel in [square_kernel(), BarrierSpec::tabulated_kernel(OneDimYoung::power(1.0, 2.0).unwrap()).unwrap()] {
            let spec = torsion(kernel);
            let f = F_profile(&spec).unwrap();
            for (r, v) in f.r.iter().zip(&f.values).skip(1) {
                let exact = r.sqrt() / (2.0 * PI.sqrt());
                assert!((v - exact).abs() < 1e-9 * exact.max(1e-6), "F({r})");
            }
            let b = barrier_solution(&spec).unwrap();
            for x in [0.0, 0.1, 0.5, 0.9, 0.999] {
                let exact = (1.0 - x * x) / 4.0;
                assert!((b.at_point(&[x, 0.0]).unwrap() - exact).abs() < 1e-9, "x={x}");
            }
            assert!(b.profile().is_non_increasing());
            let e = b.gradient_energy().unwrap();
            assert!((e - PI / 8.0).abs() < 1e-8, "{e}");
        }
    }

    #[test]
    fn divergence_datum_barrier() {
        let g0 = 0.7;
        let spec = BarrierSpec::new(
            square_kernel(),
            2,
            1.0,
            1.0,
            DataProfile::zero(PI),
            DataProfile::Step(StepProfile::constant(g0, PI).unwrap()),
            PI,
        )
        .unwrap();
        let f = F_profile(&spec).unwrap();
        assert!(f.values.iter().all(|v| (v - 2.0 * g0.sqrt()).abs() < 1e-12));
        let b = barrier_solution(&spec).unwrap();
        for x in [0.0, 0.3, 0.77, 1.0] {
            let exact = 2.0 * g0.sqrt() * (1.0 - x);
            assert!((b.at_point(&[0.0, x]).unwrap() - exact).abs() < 1e-9);
        }
        let zero = BarrierSpec::new(square_kernel(), 2, 1.0, 1.0, DataProfile::zero(PI), DataProfile::zero(PI), PI).unwrap();
        let bz = barrier_solution(&zero).unwrap();
        assert!(bz.v.iter().all(|v| *v == 0.0));
        assert_eq!(bz.gradient_energy().unwrap(), 0.0);
    }

    #[test]
    fn closed_form_agrees_with_generic_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let p = [rng.gen_range(1.4..3.5), rng.gen_range(1.4..3.5)];
            let lambda = [rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)];
            let m = rng.gen_range(0.5..4.0);
            let fvals = {
                let mut v: Vec<f64> = (0..5).map(|_| rng.gen_range(0.0..3.0)).collect();
                v.sort_by(|a, b| b.partial_cmp(a).unwrap());
                v
            };
            let gvals: Vec<f64> = (0..5).map(|_| rng.gen_range(0.0..1.0)).collect();
            let fp = DataProfile::Step(StepProfile::uniform(fvals, m / 5.0).unwrap());
            let gp = DataProfile::Step(StepProfile::uniform(gvals, m / 5.0).unwrap());
            let kernel = BarrierSpec::power_sum_kernel(&p, &lambda).unwrap();
            let Kernel::Power { pbar, lambda: lam } = kernel else { unreachable!() };
            let tab = BarrierSpec::tabulated_kernel(OneDimYoung::power(lam, pbar).unwrap()).unwrap();
            let exact = BarrierSpec::new(kernel, 2, 1.0, 1.0, fp.clone(), gp.clone(), m).unwrap();
            let generic = BarrierSpec::new(tab, 2, 1.0, 1.0, fp, gp, m).unwrap();
            let b = barrier_solution(&generic).unwrap();
            for s in [0.0, 0.1 * m, 0.5 * m, 0.9 * m] {
                let c = power_sum_closed_form(&exact, s).unwrap();
                let g = b.at_measure(s).unwrap();
                assert!((c - g).abs() <= 5e-3 * c, "s={s}: {c} vs {g}");
            }
        }
    }

    #[test]
    fn homogeneity_and_monotonicity() {
        let kernel = BarrierSpec::power_sum_kernel(&[1.5, 3.0], &[1.0, 1.0]).unwrap();
        let Kernel::Power { pbar, .. } = kernel else { unreachable!() };
        let f = StepProfile::uniform(vec![3.0, 2.0, 0.5], 1.0).unwrap();
        let base = BarrierSpec::new(kernel.clone(), 2, 1.0, 1.0, DataProfile::Step(f.clone()), DataProfile::zero(3.0), 3.0).unwrap();
        let t = 2.7;
        let scaled = BarrierSpec { f_profile: DataProfile::Step(f.scaled(t)), ..base.clone() };
        let (b0, b1) = (barrier_solution(&base).unwrap(), barrier_solution(&scaled).unwrap());
        for (x, y) in b0.v.iter().zip(&b1.v) {
            assert!((y - t.powf(1.0 / (pbar - 1.0)) * x).abs() <= 1e-10 * y.max(1e-300));
        }
        let bigger = BarrierSpec {
            g_profile: DataProfile::constant(0.2, 3.0),
            ..base.clone()
        };
        let b2 = barrier_solution(&bigger).unwrap();
        assert!(b0.v.iter().zip(&b2.v).all(|(a, b)| b >= a));
    }

    #[test]
    fn wellposedness_diagnostics() {
        let spec = torsion(square_kernel());
        let w = barrier_wellposed(&spec);
        assert!(w.cond1 && w.cond2 && w.grad_finite && w.ok());
        // bounded Psi: Phi(s) = s^2 on [0, 1/2], slope 1 afterwards, so sup Psi = 1
        let knots: Vec<f64> = (0..=400).map(|k| 20.0 * k as f64 / 400.0).collect();
        let vals: Vec<f64> = knots.iter().map(|&s| if s <= 0.5 { s * s } else { s - 0.25 }).collect();
        let phi = OneDimYoung::from_samples(knots, vals, Some(crate::young::TailModel::power(1.0))).unwrap();
        let diamond = Diamond { conj: OneDimYoung::power(1.0, 2.0).unwrap(), phi };
        let big_f = BarrierSpec {
            kernel: Kernel::Tabulated(diamond),
            f_profile: DataProfile::Step(StepProfile::constant(50.0, PI).unwrap()),
            ..spec.clone()
        };
        let w = barrier_wellposed(&big_f);
        assert!(!w.cond1 && !w.cond2 && !w.ok());
        assert!(matches!(barrier_solution(&big_f), Err(Error::BarrierUndefined(_))));
        // G = 1/s: Phi(F(r)) = 4/r is not integrable at 0
        let g_inv = BarrierSpec {
            f_profile: DataProfile::zero(PI),
            g_profile: DataProfile::Power { coef: 1.0, exponent: -1.0, measure: PI },
            ..spec
        };
        let w = barrier_wellposed(&g_inv);
        assert!(w.cond1 && !w.grad_finite);
    }
}
