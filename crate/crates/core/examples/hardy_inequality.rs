// Both sides of the weighted Hardy inequalities for step functions.

use anisym::norms::hardy_check;
use anisym::rearrange::StepProfile;

pub fn run_example() {
    let indicator = StepProfile::constant(1.0, 1.0).unwrap();
    let rep = hardy_check(&indicator, 0.5, 1.0, true).unwrap();
    println!("indicator, r = 1/2, q = 1: lhs = {:.10}, rhs = {:.10}", rep.inner.lhs, rep.inner.rhs);

    let psi = StepProfile::new(vec![0.0, 0.1, 0.5, 2.0], vec![3.0, 1.0, 0.2]).unwrap();
    for (r, q) in [(1.0, 2.0), (0.5, 1.0), (1.0 / 3.0, 0.5)] {
        let rep = hardy_check(&psi, r, q, true).unwrap();
        println!(
            "r = {r:.3}, q = {q}: inner ratio {:?}, outer ratio {:?}",
            rep.inner.ratio, rep.outer.ratio
        );
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
