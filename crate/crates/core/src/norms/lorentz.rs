//! Lorentz and Lorentz–Zygmund (quasi-)norms of decreasing step profiles.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate_to_infinity, integrate_with, QuadOptions};
use crate::rearrange::StepProfile;

/// `L^{p,q}` on the profile; `p` or `q` may be infinite. Exact piecewise
/// integration; a divergent integral returns `+inf`.
pub fn lorentz_norm(f: &StepProfile, p: f64, q: f64) -> Result<f64> {
    check_pq(p, q)?;
    let f = f.as_rearrangement();
    let ip = if p.is_infinite() { 0.0 } else { 1.0 / p };
    if q.is_infinite() {
        // sup of s^{1/p} f*(s): each piece peaks at its right end (left limit)
        let m = f
            .pieces()
            .map(|(_, b, v)| if ip == 0.0 { v } else { b.powf(ip) * v })
            .fold(0.0, f64::max);
        return Ok(m);
    }
    let e = q * ip;
    let mut acc = 0.0;
    for (a, b, v) in f.pieces() {
        if v == 0.0 {
            continue;
        }
        if e == 0.0 {
            if a == 0.0 {
                return Ok(f64::INFINITY);
            }
            acc += v.powf(q) * (b / a).ln();
        } else {
            acc += v.powf(q) * (b.powf(e) - a.powf(e)) / e;
        }
    }
    Ok(acc.powf(1.0 / q))
}

fn check_pq(p: f64, q: f64) -> Result<()> {
    if !(p > 0.0) || !(q > 0.0) || p.is_nan() || q.is_nan() {
        return invalid("Lorentz exponents must be positive (infinity allowed)");
    }
    Ok(())
}

/// Parameters of `L^{p,q}(log L)^alpha (log log L)^beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzZygmund {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
}

impl LorentzZygmund {
    /// Rejects the trivial `p = inf` combinations.
    pub fn new(p: f64, q: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_pq(p, q)?;
        if !alpha.is_finite() || !beta.is_finite() {
            return invalid("log exponents must be finite");
        }
        if p.is_infinite() {
            let ok = if q.is_infinite() {
                alpha < 0.0 || (alpha == 0.0 && beta <= 0.0)
            } else {
                let lead = alpha + 1.0 / q;
                lead < 0.0 || (lead == 0.0 && beta + 1.0 / q < 0.0)
            };
            if !ok {
                return Err(Error::InvalidInput(format!(
                    "L^(inf,{q})(log L)^{alpha} with log-log exponent {beta} is trivial"
                )));
            }
        }
        Ok(Self { p, q, alpha, beta })
    }

    /// Weight `(1+log(M/s))^alpha (1+log(1+log(M/s)))^beta` written in
    /// `z = log(1 + log(M/s))`.
    fn log_weight(&self, z: f64) -> f64 {
        let mut w = (self.alpha * z).exp();
        if self.beta != 0.0 {
            w *= (1.0 + z).powf(self.beta);
        }
        w
    }
}

fn z_of(s: f64, measure: f64) -> f64 {
    (measure / s).ln().ln_1p()
}

/// Lorentz–Zygmund norm on `(0, measure)`; the profile is extended by zero.
/// Pieces are integrated in `z = log(1 + log(measure/s))`, where the weight
/// is smooth and the head decays at worst algebraically.
pub fn lorentz_zygmund_norm(f: &StepProfile, spec: &LorentzZygmund, measure: f64) -> Result<f64> {
    let f = f.as_rearrangement();
    if f.measure() > measure * (1.0 + 1e-12) {
        return invalid("profile extends beyond the domain measure");
    }
    let ip = if spec.p.is_infinite() { 0.0 } else { 1.0 / spec.p };
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-11,
        max_depth: 50,
    };
    if spec.q.is_infinite() {
        let mut best = 0.0f64;
        for (a, b, v) in f.pieces() {
            if v == 0.0 {
                continue;
            }
            let b = b.min(measure);
            let g = |s: f64| v * s.powf(ip) * spec.log_weight(z_of(s, measure));
            best = best.max(sup_on(&g, a, b));
        }
        return Ok(best);
    }
    let q = spec.q;
    // ds/s = -dx with x = log(M/s) = e^z - 1, dx = e^z dz
    let integrand = |z: f64| {
        let x = z.exp_m1();
        let w = spec.log_weight(z);
        (measure.powf(ip) * (-x * ip).exp() * w).powf(q) * z.exp()
    };
    let mut acc = 0.0;
    for (a, b, v) in f.pieces() {
        if v == 0.0 {
            continue;
        }
        let zb = z_of(b.min(measure), measure).max(0.0);
        let piece = if a == 0.0 {
            if ip == 0.0 {
                let lead = spec.alpha * q + 1.0;
                if lead > 0.0 || (lead == 0.0 && spec.beta * q >= -1.0) {
                    return Ok(f64::INFINITY);
                }
            }
            integrate_to_infinity(integrand, zb, opts)
        } else {
            integrate_with(integrand, zb, z_of(a, measure), opts)
        }
        .ok_or_else(|| Error::Quadrature("Lorentz-Zygmund piece integral did not converge".into()))?;
        acc += v.powf(q) * piece;
    }
    Ok(acc.powf(1.0 / q))
}

/// Supremum of a continuous function on `(a, b]`: log-spaced scan plus
/// golden-section refinement around the best sample.
fn sup_on<F: Fn(f64) -> f64>(g: &F, a: f64, b: f64) -> f64 {
    let lo = if a > 0.0 { a } else { b * 1e-300f64.max(f64::MIN_POSITIVE) };
    let n = 200;
    let pts: Vec<f64> = (0..=n)
        .map(|k| lo * (b / lo).powf(k as f64 / n as f64))
        .collect();
    let (mut kbest, mut best) = (n, g(b));
    for (k, &s) in pts.iter().enumerate() {
        let v = g(s);
        if v > best {
            best = v;
            kbest = k;
        }
    }
    let (mut l, mut r) = (pts[kbest.saturating_sub(1)].ln(), pts[(kbest + 1).min(n)].ln());
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let m1 = r - phi * (r - l);
        let m2 = l + phi * (r - l);
        if g(m1.exp()) < g(m2.exp()) {
            l = m1;
        } else {
            r = m2;
        }
    }
    best.max(g((0.5 * (l + r)).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_profile(rng: &mut ChaCha8Rng) -> StepProfile {
        let k = rng.gen_range(1..12);
        let mut vals: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..5.0)).collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut breaks = vec![0.0];
        for _ in 0..k {
            let last = *breaks.last().unwrap();
            breaks.push(last + rng.gen_range(0.05..0.5));
        }
        StepProfile::new(breaks, vals).unwrap()
    }

    #[test]
    fn indicator_closed_forms() {
        let one = StepProfile::constant(1.0, 1.0).unwrap();
        assert!((lorentz_norm(&one, 2.0, 1.0).unwrap() - 2.0).abs() < 1e-14);
        let two = StepProfile::constant(2.0, 1.0).unwrap();
        assert!((lorentz_norm(&two, 3.0, 3.0).unwrap() - 2.0).abs() < 1e-14);
        let p = StepProfile::uniform(vec![5.0, 1.0], 1.0).unwrap();
        assert_eq!(lorentz_norm(&p, f64::INFINITY, f64::INFINITY).unwrap(), 5.0);
        assert_eq!(lorentz_norm(&p, f64::INFINITY, 2.0).unwrap(), f64::INFINITY);
        // (p/q)^{1/q} m^{1/p}
        let m = 0.37;
        let ind = StepProfile::constant(1.0, m).unwrap();
        for &(pp, qq) in &[(2.0f64, 1.0f64), (3.0, 2.5), (1.5, 0.5)] {
            let exact = (pp / qq).powf(1.0 / qq) * m.powf(1.0 / pp);
            assert!((lorentz_norm(&ind, pp, qq).unwrap() - exact).abs() < 1e-13 * exact);
            let lz = LorentzZygmund::new(pp, qq, 0.0, 0.0).unwrap();
            let quad = lorentz_zygmund_norm(&ind, &lz, 1.0).unwrap();
            assert!((quad - exact).abs() < 1e-9 * exact, "{quad} vs {exact}");
        }
    }

    #[test]
    fn zygmund_reduces_to_lorentz() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = random_profile(&mut rng);
            let (p, q) = (rng.gen_range(1.2..4.0), rng.gen_range(0.8..3.0));
            let lz = LorentzZygmund::new(p, q, 0.0, 0.0).unwrap();
            let a = lorentz_zygmund_norm(&f, &lz, f.measure() * 1.5).unwrap();
            let b = lorentz_norm(&f, p, q).unwrap();
            assert!((a - b).abs() <= 1e-8 * b, "{a} vs {b}");
        }
    }

    #[test]
    fn log_weighted_indicators() {
        let one = StepProfile::constant(1.0, 1.0).unwrap();
        let lz = LorentzZygmund::new(f64::INFINITY, 1.0, -2.0, 0.0).unwrap();
        assert!((lorentz_zygmund_norm(&one, &lz, 1.0).unwrap() - 1.0).abs() < 1e-9);
        // log-log weight: substitution w = log(1+log(1/s)) gives int (1+w)^{-2} = 1
        let ll = LorentzZygmund::new(f64::INFINITY, 2.0, -0.5, -1.0).unwrap();
        assert!((lorentz_zygmund_norm(&one, &ll, 1.0).unwrap() - 1.0).abs() < 1e-8);
        let sup = LorentzZygmund::new(f64::INFINITY, f64::INFINITY, -1.0, 0.0).unwrap();
        assert!((lorentz_zygmund_norm(&one, &sup, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(LorentzZygmund::new(f64::INFINITY, 2.0, -0.5, 0.0).is_err());
        assert!(LorentzZygmund::new(f64::INFINITY, f64::INFINITY, 0.5, 0.0).is_err());
    }

    #[test]
    fn homogeneous_and_rearrangement_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let f = random_profile(&mut rng);
            let n1 = lorentz_norm(&f, 2.0, 1.0).unwrap();
            assert!((lorentz_norm(&f.scaled(2.0), 2.0, 1.0).unwrap() - 2.0 * n1).abs() < 1e-12 * n1);
            let mut rev = f.clone();
            rev.values.reverse();
            let widths: Vec<f64> = f.breaks.windows(2).map(|w| w[1] - w[0]).rev().collect();
            let mut acc = 0.0;
            rev.breaks = std::iter::once(0.0)
                .chain(widths.iter().map(|w| {
                    acc += w;
                    acc
                }))
                .collect();
            rev.non_increasing = false;
            assert!((lorentz_norm(&rev, 2.0, 1.0).unwrap() - n1).abs() < 1e-12 * n1);
        }
    }
}
