// Klimov symmetrisation of power-sum and log-perturbed Young functions.

use anisym::young::{klimov_numeric, klimov_symmetrize, power_sum_klimov, YoungSpec};

pub fn run_example() {
    let (pbar, lambda) = power_sum_klimov(&[2.0, 2.0], &[1.0, 1.0], 2).unwrap();
    println!("p = (2, 2): Phi_diamond(s) = {lambda} s^{pbar}");

    let spec = YoungSpec::power_sum(vec![1.5, 3.0], vec![1.0, 1.0]).unwrap();
    let closed = klimov_symmetrize(&spec).unwrap();
    let numeric = klimov_numeric(&spec).unwrap();
    let (pbar, lambda) = closed.closed_form.unwrap();
    println!("p = (1.5, 3): pbar = {pbar:.6}, Lambda = {lambda:.10}");
    for s in [0.1, 1.0, 10.0] {
        let exact = closed.phi_diamond.eval(s);
        let num = numeric.phi_diamond.eval(s);
        println!("  s = {s:>5}: closed {exact:.6e}  numeric {num:.6e}  rel diff {:.2e}", (num / exact - 1.0).abs());
    }

    let log = YoungSpec::log_perturbed(vec![2.0, 3.0], vec![1.0, 0.0], std::f64::consts::E).unwrap();
    let k = klimov_symmetrize(&log).unwrap();
    println!("log-perturbed route {:?}, tail model {:?}", k.route, k.model);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
