use serde::{Deserialize, Serialize};

use crate::barrier::{barrier_solution, data_vanish, Barrier, BarrierSpec, DataProfile, Kernel};
use crate::error::{invalid, Error, Result};
use crate::pde::{Assembly, DiscreteProblem};
use crate::quadrature::integrate;
use crate::radial::omega;
use crate::rearrange::{decreasing_rearrangement, double_star, pseudo_rearrangement, GridFunction, StepProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginRow {
    pub s: f64,
    pub u_star: f64,
    pub v: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: Option<String>,
    pub resolutions: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `sup u*(s)/v(s)` over the evaluated `s`, with `0/0 = 0`
    pub empirical_constant: f64,
    pub threshold: f64,
    pub pass: bool,
    pub margins: Vec<MarginRow>,
    pub provenance: Provenance,
}

impl VerificationReport {
    /// Margin row where the sup is attained.
    pub fn argmax(&self) -> Option<&MarginRow> {
        self.margins.iter().find(|m| m.ratio == self.empirical_constant)
    }

    /// Columns `s,u_star,v,ratio`.
    pub fn margin_csv(&self) -> String {
        let mut out = String::from("s,u_star,v,ratio\n");
        for r in &self.margins {
            out.push_str(&format!("{:.17e},{:.17e},{:.17e},{:.17e}\n", r.s, r.u_star, r.v, r.ratio));
        }
        out
    }

    /// `v - u*` as a step profile on the evaluated nodes.
    pub fn margin_profile(&self) -> Result<StepProfile> {
        let mut breaks = vec![0.0];
        let mut values = Vec::new();
        for r in &self.margins {
            if r.s > *breaks.last().unwrap() {
                breaks.push(r.s);
                values.push(r.v - r.u_star);
            }
        }
        StepProfile::new(breaks, values)
    }
}

/// Which `G` enters the barrier.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GVariant {
    /// pseudo-rearrangement with respect to the solution
    #[default]
    Pseudo,
    /// decreasing rearrangement of the data term; solver independent
    Conservative,
}

/// Domain measure seen by the discrete problem: masked cells plus half a
/// cell behind every boundary face.
pub fn effective_measure(prob: &DiscreteProblem) -> f64 {
    let asm = Assembly::new(prob);
    prob.grid.measure() + asm.boundary_faces() as f64 * prob.grid.cell_volume() * 0.5
}

/// Conjugate of `lambda |t|^p` at `eta`.
pub fn power_conjugate(p: f64, lambda: f64, eta: f64) -> f64 {
    let e = eta.abs();
    if p == 1.0 {
        return if e <= lambda { 0.0 } else { f64::INFINITY };
    }
    let pp = p / (p - 1.0);
    e.powf(pp) / (pp * (lambda * p).powf(pp / p))
}

/// Cellwise `Phi_conj(C2 g)` for `Phi(xi) = sum lambda_i |xi_i|^{p_i}`.
pub fn data_term(prob: &DiscreteProblem, c2: f64) -> Result<GridFunction> {
    let mut h = prob.grid.clone();
    for k in 0..h.len() {
        h.values[k] = if !h.mask[k] || prob.g.is_empty() {
            0.0
        } else {
            (0..prob.dim())
                .map(|i| power_conjugate(prob.p[i], prob.lambda[i], c2 * prob.g[i].values[k]))
                .sum()
        };
        if !h.values[k].is_finite() {
            return Err(Error::HypothesisViolation(
                "g exceeds the weight of a p_i = 1 direction, so Phi_conj(g) is infinite".into(),
            ));
        }
    }
    Ok(h)
}

/// Barrier data for the prototype problem and a computed solution `u`.
pub fn barrier_spec_for(
    prob: &DiscreteProblem,
    u: &GridFunction,
    c1: f64,
    c2: f64,
    variant: GVariant,
) -> Result<BarrierSpec> {
    let kernel = BarrierSpec::power_sum_kernel(&prob.p, &prob.lambda)?;
    let measure = effective_measure(prob);
    let f_star = decreasing_rearrangement(&prob.f);
    let h = data_term(prob, c2)?;
    let g = match variant {
        GVariant::Pseudo => pseudo_rearrangement(&h, u)?,
        GVariant::Conservative => decreasing_rearrangement(&h),
    };
    BarrierSpec::new(kernel, prob.dim(), c1, c2, DataProfile::Step(f_star), DataProfile::Step(g), measure)
}

/// Left limit of a step profile at `s`.
fn left_value(f: &StepProfile, s: f64) -> f64 {
    let k = f.breaks.partition_point(|&b| b < s);
    if k == 0 {
        f.values.first().copied().unwrap_or(0.0)
    } else if k > f.values.len() {
        0.0
    } else {
        f.values[k - 1]
    }
}

fn ratio(u: f64, v: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else if v > 0.0 {
        u / v
    } else {
        f64::INFINITY
    }
}

/// Compares `u*` with the barrier on the breakpoints of `u*` and 512
/// log-spaced nodes, skipping the last cell before `|supp|`.
pub fn comparison_report(u: &GridFunction, spec: &BarrierSpec, threshold: f64) -> Result<VerificationReport> {
    let barrier = barrier_solution(spec)?;
    comparison_with_barrier(u, &barrier, threshold)
}

pub fn comparison_with_barrier(u: &GridFunction, barrier: &Barrier, threshold: f64) -> Result<VerificationReport> {
    let u_star = decreasing_rearrangement(u);
    let nonzero = u_star.values.iter().any(|&v| v != 0.0);
    if nonzero && (data_vanish(&barrier.spec) || barrier.v.iter().all(|&v| v == 0.0)) {
        return Err(Error::ComparisonVacuous);
    }
    let top = u.measure() - u.cell_volume();
    let mut s: Vec<f64> = u_star.breaks[1..].iter().copied().filter(|&b| b <= top * (1.0 + 1e-12)).collect();
    if top > 0.0 {
        let lo = (top * 1e-6).ln();
        for k in 0..512 {
            s.push((lo + (top.ln() - lo) * k as f64 / 511.0).exp());
        }
    }
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s.dedup();
    let mut margins = Vec::with_capacity(s.len());
    let mut sup = 0.0f64;
    for &x in &s {
        let us = left_value(&u_star, x);
        let v = barrier.at_measure(x)?;
        let r = ratio(us, v);
        sup = sup.max(r);
        margins.push(MarginRow {
            s: x,
            u_star: us,
            v,
            ratio: r,
        });
    }
    Ok(VerificationReport {
        empirical_constant: sup,
        threshold,
        pass: sup <= threshold,
        margins,
        provenance: Provenance {
            config_hash: None,
            resolutions: u.h(),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs` with `0/0 = 0`
    pub ratio: f64,
    pub bound: f64,
    pub pass: bool,
}

impl RatioReport {
    pub fn new(lhs: f64, rhs: f64, bound: f64) -> Self {
        let r = ratio(lhs, rhs);
        Self {
            lhs,
            rhs,
            ratio: r,
            bound,
            pass: r <= bound,
        }
    }
}

/// Discrete `int Phi(grad u)` for the prototype.
pub fn phi_energy(prob: &DiscreteProblem, u: &GridFunction) -> f64 {
    let asm = Assembly::new(prob);
    asm.phi_energy(&asm.from_grid(u))
}

/// `int Phi(grad u)` against `int Phi_diamond(|grad v|)`.
pub fn gradient_estimate_report(prob: &DiscreteProblem, u: &GridFunction, barrier: &Barrier, slack: f64) -> Result<RatioReport> {
    let lhs = phi_energy(prob, u);
    let rhs = barrier.gradient_energy()?;
    Ok(RatioReport::new(lhs, rhs, 1.0 + slack))
}

/// `int Phi_diamond(|grad u_star|)` for `u*` averaged over `bins` shells of
/// equal radial width, interpolated linearly between shell midpoints and
/// vanishing at `measure`. Averaging first keeps the slope from picking up
/// the irregular spacing of the sorted cell values.
pub fn symmetrized_energy(u_star: &StepProfile, kernel: &Kernel, dim: usize, measure: f64, bins: usize) -> Result<f64> {
    if measure < u_star.measure() * (1.0 - 1e-12) || bins == 0 {
        return invalid("measure must cover the profile and at least one shell is needed");
    }
    let abs = u_star.as_rearrangement();
    let edges: Vec<f64> = (0..=bins).map(|k| measure * (k as f64 / bins as f64).powi(dim as i32)).collect();
    let mut nodes: Vec<(f64, f64)> = edges
        .windows(2)
        .map(|w| (0.5 * (w[0] + w[1]), (abs.integral_to(w[1]) - abs.integral_to(w[0])) / (w[1] - w[0])))
        .collect();
    nodes.push((measure, 0.0));
    let n = dim as f64;
    let c = n * omega(dim).powf(1.0 / n);
    let e = 1.0 - 1.0 / n;
    let mut acc = 0.0;
    for w in nodes.windows(2) {
        let ((a, ua), (b, ub)) = (w[0], w[1]);
        let slope = (ua - ub) / (b - a);
        if slope == 0.0 {
            continue;
        }
        let slope = slope.abs();
        acc += match kernel {
            Kernel::Power { pbar, lambda } => {
                let k = pbar * e + 1.0;
                lambda * (slope * c).powf(*pbar) * (b.powf(k) - a.powf(k)) / k
            }
            Kernel::Tabulated(_) => integrate(|s| kernel.phi(slope * c * s.powf(e)), a, b)
                .ok_or_else(|| Error::Quadrature("symmetrised energy".into()))?,
        };
    }
    Ok(acc)
}

/// Ratio `int Phi_diamond(|grad u_star|) / int Phi(grad u)`.
pub fn polya_szego_check(prob: &DiscreteProblem, u: &GridFunction, slack: f64) -> Result<RatioReport> {
    let kernel = BarrierSpec::power_sum_kernel(&prob.p, &prob.lambda)?;
    let bins = prob.grid.n.iter().copied().max().unwrap_or(1);
    let lhs = symmetrized_energy(&decreasing_rearrangement(u), &kernel, prob.dim(), effective_measure(prob), bins)?;
    Ok(RatioReport::new(lhs, phi_energy(prob, u), 1.0 + slack))
}

/// Modulars of the two data conditions: `int Phi_diamond_conj(s^{1/N} f**)`
/// and `int Phi_conj(g)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataConditions {
    pub f_modular: f64,
    pub g_modular: f64,
    pub within_hypotheses: bool,
}

pub fn data_conditions(prob: &DiscreteProblem) -> Result<DataConditions> {
    let Kernel::Power { pbar, lambda } = BarrierSpec::power_sum_kernel(&prob.p, &prob.lambda)? else {
        unreachable!()
    };
    let f_star = decreasing_rearrangement(&prob.f);
    let fss = double_star(&f_star);
    let n = prob.dim() as f64;
    let conj = |y: f64| power_conjugate(pbar, lambda, y);
    let mut f_modular = 0.0;
    for (a, b, _) in f_star.pieces() {
        f_modular += integrate(|s| conj(s.powf(1.0 / n) * fss.eval(s)), a, b)
            .ok_or_else(|| Error::Quadrature("data modular".into()))?;
    }
    let g_modular = match data_term(prob, 1.0) {
        Ok(h) => h.integral(),
        Err(Error::HypothesisViolation(_)) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    Ok(DataConditions {
        f_modular,
        g_modular,
        within_hypotheses: f_modular.is_finite() && g_modular.is_finite(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::{solve, SolveOptions};
    use std::f64::consts::PI;

    fn torsion(n: usize, t: f64) -> (DiscreteProblem, GridFunction) {
        let grid = GridFunction::ball(2, 1.0, n).unwrap();
        let f = grid.with_fn(|_| t);
        let prob = DiscreteProblem::new(grid, vec![2.0, 2.0], vec![1.0, 1.0], f, Vec::new()).unwrap();
        let u = solve(&prob, &SolveOptions::default()).unwrap().u;
        (prob, u)
    }

    #[test]
    fn torsion_is_an_equality_case() {
        let (prob, u) = torsion(64, 1.0);
        let spec = barrier_spec_for(&prob, &u, 1.0, 1.0, GVariant::Pseudo).unwrap();
        let barrier = barrier_solution(&spec).unwrap();
        let rep = comparison_with_barrier(&u, &barrier, 1.05).unwrap();
        let h = prob.grid.h()[0];
        assert!((rep.empirical_constant - 1.0).abs() <= 3.0 * h, "{}", rep.empirical_constant);
        let grad = gradient_estimate_report(&prob, &u, &barrier, 0.05).unwrap();
        assert!((grad.rhs - PI / 8.0).abs() < 4.0 * h, "{}", grad.rhs);
        assert!((grad.lhs - PI / 8.0).abs() < 4.0 * h, "{}", grad.lhs);
        let ps = polya_szego_check(&prob, &u, 0.05).unwrap();
        assert!((ps.ratio - 1.0).abs() < 4.0 * h, "{}", ps.ratio);
        let cond = data_conditions(&prob).unwrap();
        assert!(cond.within_hypotheses && cond.g_modular == 0.0);
        assert!(rep.margin_csv().starts_with("s,u_star,v,ratio\n"));
    }

    #[test]
    fn zero_solution_and_vacuous_barrier() {
        let grid = GridFunction::ball(2, 1.0, 16).unwrap();
        let zero = grid.with_fn(|_| 0.0);
        let prob = DiscreteProblem::new(grid.clone(), vec![2.0, 2.0], vec![1.0, 1.0], zero.clone(), Vec::new()).unwrap();
        let spec = barrier_spec_for(&prob, &zero, 1.0, 1.0, GVariant::Pseudo).unwrap();
        let rep = comparison_report(&zero, &spec, 1.05).unwrap();
        assert_eq!(rep.empirical_constant, 0.0);
        let grad = gradient_estimate_report(&prob, &zero, &barrier_solution(&spec).unwrap(), 0.05).unwrap();
        assert_eq!(grad.lhs, 0.0);
        assert!(grad.pass);
        let bump = grid.with_fn(|x| 1.0 - x[0] * x[0]);
        assert!(matches!(comparison_report(&bump, &spec, 1.05), Err(Error::ComparisonVacuous)));
    }

    #[test]
    fn pass_flag_is_scale_invariant() {
        let mut flags = Vec::new();
        for t in [0.25, 1.0, 4.0] {
            let (prob, u) = torsion(24, t);
            let spec = barrier_spec_for(&prob, &u, 1.0, 1.0, GVariant::Pseudo).unwrap();
            let rep = comparison_report(&u, &spec, 1.05).unwrap();
            flags.push((rep.pass, rep.empirical_constant));
        }
        assert!(flags.iter().all(|f| f.0 == flags[0].0));
        assert!((flags[0].1 - flags[2].1).abs() < 1e-6 * flags[1].1);
    }

    #[test]
    fn product_of_cosines_contracts() {
        let grid = GridFunction::vertex_box(&[-1.0, -1.0], &[1.0, 1.0], 64).unwrap();
        let zero = grid.with_fn(|_| 0.0);
        let prob = DiscreteProblem::new(grid.clone(), vec![2.0, 2.0], vec![1.0, 1.0], zero, Vec::new()).unwrap();
        let u = grid.with_fn(|x| (0.5 * PI * x[0]).cos() * (0.5 * PI * x[1]).cos());
        let rep = polya_szego_check(&prob, &u, 0.05).unwrap();
        assert!(rep.ratio < 1.0 && rep.pass, "{}", rep.ratio);
    }

    #[test]
    fn conjugate_of_power() {
        // (|x|^2)_conj(y) = y^2 / 4
        assert!((power_conjugate(2.0, 1.0, 3.0) - 2.25).abs() < 1e-14);
        assert_eq!(power_conjugate(1.0, 2.0, 1.5), 0.0);
        assert!(power_conjugate(1.0, 2.0, 2.5).is_infinite());
    }
}
