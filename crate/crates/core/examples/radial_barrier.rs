// The radial comparison barrier: the torsion case and a pure divergence datum.

use anisym::barrier::{barrier_solution, barrier_wellposed, BarrierSpec, DataProfile};
use std::f64::consts::PI;

pub fn run_example() {
    let kernel = BarrierSpec::power_sum_kernel(&[2.0, 2.0], &[1.0, 1.0]).unwrap();
    let torsion = BarrierSpec::new(kernel.clone(), 2, 1.0, 1.0, DataProfile::constant(1.0, PI), DataProfile::zero(PI), PI).unwrap();
    let b = barrier_solution(&torsion).unwrap();
    for r in [0.0, 0.5, 0.9] {
        println!("torsion v(|x| = {r}) = {:.8}, exact {:.8}", b.at_point(&[r, 0.0]).unwrap(), (1.0 - r * r) / 4.0);
    }
    println!("gradient energy {:.8} (pi/8 = {:.8})", b.gradient_energy().unwrap(), PI / 8.0);

    let g0 = 0.3;
    let div = BarrierSpec::new(kernel, 2, 1.0, 1.0, DataProfile::zero(PI), DataProfile::constant(g0, PI), PI).unwrap();
    println!("well-posed: {:?}", barrier_wellposed(&div).ok());
    let b = barrier_solution(&div).unwrap();
    for r in [0.0, 0.5] {
        let exact = 2.0 * f64::sqrt(g0) * (1.0 - r);
        println!("divergence datum v(|x| = {r}) = {:.8}, closed form {exact:.8}", b.at_point(&[r, 0.0]).unwrap());
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
