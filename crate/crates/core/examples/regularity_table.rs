// Regularity bounds of the three summability cases and their homogeneity.

use anisym::pde::{harmonic_mean, solve, DiscreteProblem, SolveOptions};
use anisym::rearrange::GridFunction;
use anisym::verify::{regularity_table, rhs_scaling, DataExponents, RegularityCase};

pub fn run_example() {
    let grid = GridFunction::ball(2, 1.0, 48).unwrap();
    let f = grid.with_fn(|x| 1.0 + x[0].abs());
    let prob = DiscreteProblem::new(grid, vec![2.0, 2.0], vec![1.0, 1.0], f.clone(), Vec::new()).unwrap();
    let sol = solve(&prob, &SolveOptions::default()).unwrap();
    let ex = DataExponents { m: 2.0, sigma: 1.0, r: vec![4.0, 4.0], s: vec![1.0, 1.0] };
    let rep = regularity_table(RegularityCase::I, &prob.p, &ex, &sol.u, &f, &[]).unwrap();
    println!("case i: ||u||_inf = {:.5} <= c ({:.5}), c = {:.4}; warnings {:?}", rep.lhs, rep.rhs, rep.constant, rep.warnings);

    let p = [2.5, 2.5, 2.5];
    let g3 = GridFunction::ball(3, 1.0, 12).unwrap();
    let f3 = g3.with_fn(|x| 1.0 + x[2] * x[2]);
    let pb = harmonic_mean(&p);
    let ex = DataExponents { m: 1.1, sigma: 2.0, r: vec![], s: vec![] };
    let ratio = rhs_scaling(RegularityCase::Iii, &p, &ex, &f3, &[], 4.0).unwrap();
    println!("case iii: f -> 4f scales the right side by {ratio:.12} = 4^(1/(pbar-1)) = {:.12}", 4f64.powf(1.0 / (pb - 1.0)));

    match regularity_table(RegularityCase::Iii, &prob.p, &DataExponents { m: 1.0, sigma: 1.0, r: vec![], s: vec![] }, &sol.u, &f, &[]) {
        Err(e) => println!("refused: {e}"),
        Ok(_) => println!("unexpectedly accepted"),
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
