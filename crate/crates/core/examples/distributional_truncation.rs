// Gradient bounds along truncations of an unbounded datum in three dimensions.

use anisym::pde::SolveOptions;
use anisym::rearrange::GridFunction;
use anisym::verify::{distributional_exponents_check, validate_distributional, DistributionalSetup};

pub fn run_example() {
    if let Err(e) = validate_distributional(&[2.5, 2.5], 2, 1.0, 1.01) {
        println!("planar p = (2.5, 2.5): {e}");
    }
    let setup = DistributionalSetup {
        grid: GridFunction::ball(3, 1.0, 14).unwrap(),
        p: vec![2.7, 2.8, 2.9],
        lambda: vec![1.0; 3],
        gamma: 2.94,
        m: 1.012,
        levels: vec![2.0, 4.0, 8.0, 16.0],
        stable_factor: 1.25,
        solve: SolveOptions { tol: 1e-7, ..Default::default() },
    };
    let rep = distributional_exponents_check(&setup).unwrap();
    println!("m* = {:.5}, q = {:?}", rep.m_star, rep.q);
    print!("{}", rep.to_csv());
    println!("envelope spread {:.4}, pass = {}", rep.spread, rep.pass);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
