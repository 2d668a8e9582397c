// Decreasing rearrangement, symmetric rearrangement and the
// pseudo-rearrangement of a field with respect to another.

use anisym::norms::{lorentz_norm, NormSpec};
use anisym::rearrange::{
    decreasing_rearrangement, distribution_function, pseudo_rearrangement, symmetric_rearrangement, GridFunction,
};

pub fn run_example() {
    let grid = GridFunction::ball(2, 1.0, 32).unwrap();
    let u = grid.with_fn(|x| (1.0 - x[0] * x[0] - x[1] * x[1]) * (1.0 + 0.5 * x[0]));
    let u_star = decreasing_rearrangement(&u);
    println!("|Omega| = {:.4}, sup u* = {:.4}, {} pieces", u_star.measure(), u_star.sup_abs(), u_star.len());
    for t in [0.25, 0.5, 1.0] {
        println!("  mu_u({t}) = {:.4} = {:.4}", distribution_function(&u, t), u_star.distribution(t));
    }
    let radial = symmetric_rearrangement(&u);
    println!("u_star at the origin {:.4}, at |x| = 0.5 {:.4}", radial.at_point(&[0.0, 0.0]), radial.at_point(&[0.5, 0.0]));

    let h = grid.with_fn(|x| 1.0 + x[1].abs());
    let g = pseudo_rearrangement(&h, &u).unwrap();
    for (p, q) in [(2.0, 2.0), (2.0, 1.0), (4.0, 2.0)] {
        let ng = lorentz_norm(&g, p, q).unwrap();
        let nh = NormSpec::lorentz(p, q).eval_grid(&h).unwrap();
        println!("  L^({p},{q}): ||G|| = {ng:.5} <= ||h|| = {nh:.5}");
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
