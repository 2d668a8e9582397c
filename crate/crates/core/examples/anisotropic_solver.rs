// Energy minimisation for the anisotropic prototype with p = (1.5, 3).

use anisym::pde::{solve, DiscreteProblem, SolveOptions};
use anisym::rearrange::GridFunction;

pub fn run_example() {
    let grid = GridFunction::vertex_box(&[0.0, 0.0], &[1.0, 1.0], 32).unwrap();
    let f = grid.with_fn(|_| 1.0);
    let g = vec![grid.with_fn(|_| 0.3), grid.with_fn(|x| -0.2 * x[0])];
    let prob = DiscreteProblem::new(grid, vec![1.5, 3.0], vec![1.0, 1.0], f, g).unwrap();
    let opts = SolveOptions { tol: 1e-7, ..Default::default() };
    let sol = solve(&prob, &opts).unwrap();
    println!(
        "J = {:.8}, iterations {}, final eps {:e}, relative residual {:.2e}",
        sol.energy, sol.iterations, sol.eps, sol.residual
    );
    println!("sup u = {:.6}, continuation stages {}", sol.u.max_abs(), sol.stage_residuals.len());
    let trace = sol.trace_csv();
    println!("trace has {} rows; first: {}", trace.lines().count() - 1, trace.lines().nth(1).unwrap_or(""));
}

#[allow(dead_code)]
fn main() {
    run_example();
}
