// Comparison of a computed solution with its radial barrier, with the
// gradient estimate and the Polya-Szego ratio.

use anisym::barrier::barrier_solution;
use anisym::pde::{solve, DiscreteProblem, SolveOptions};
use anisym::rearrange::GridFunction;
use anisym::verify::{barrier_spec_for, comparison_with_barrier, gradient_estimate_report, polya_szego_check, GVariant};

pub fn run_example() {
    let grid = GridFunction::ball(2, 1.0, 64).unwrap();
    let f = grid.with_fn(|_| 1.0);
    let prob = DiscreteProblem::new(grid, vec![2.0, 2.0], vec![1.0, 1.0], f, Vec::new()).unwrap();
    let sol = solve(&prob, &SolveOptions::default()).unwrap();
    let spec = barrier_spec_for(&prob, &sol.u, 1.0, 1.0, GVariant::Pseudo).unwrap();
    let barrier = barrier_solution(&spec).unwrap();
    let rep = comparison_with_barrier(&sol.u, &barrier, 1.05).unwrap();
    println!("torsion: empirical C = {:.5}, pass = {}", rep.empirical_constant, rep.pass);
    let grad = gradient_estimate_report(&prob, &sol.u, &barrier, 0.05).unwrap();
    println!("gradient estimate: {:.6} vs {:.6}, ratio {:.4}", grad.lhs, grad.rhs, grad.ratio);
    let ps = polya_szego_check(&prob, &sol.u, 0.05).unwrap();
    println!("Polya-Szego ratio {:.4}", ps.ratio);
    println!("{}", rep.margin_csv().lines().take(4).collect::<Vec<_>>().join("\n"));
}

#[allow(dead_code)]
fn main() {
    run_example();
}
