//! Rearrangements of grid fields: distribution function, `u*`, `u**`, the
//! symmetric rearrangement and the pseudo-rearrangement of one field with
//! respect to another.

mod grid;
mod step;

pub use grid::GridFunction;
pub use step::{double_star, DoubleStar, StepProfile};

use crate::error::{invalid, Result};
use crate::radial::{Interp, RadialProfile};

/// `mu_u(t)`: measure of the domain cells with `|u| > t`.
pub fn distribution_function(u: &GridFunction, t: f64) -> f64 {
    let count = (0..u.len()).filter(|&k| u.mask[k] && u.values[k].abs() > t).count();
    count as f64 * u.cell_volume()
}

/// `u*`: the domain values of `|u|` sorted in decreasing order, one step per
/// distinct value. Breakpoints are exact multiples of the cell volume.
pub fn decreasing_rearrangement(u: &GridFunction) -> StepProfile {
    let mut vals: Vec<f64> = (0..u.len()).filter(|&k| u.mask[k]).map(|k| u.values[k].abs()).collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let vol = u.cell_volume();
    let mut breaks = vec![0.0];
    let mut values: Vec<f64> = Vec::new();
    for (k, &v) in vals.iter().enumerate() {
        let right = (k + 1) as f64 * vol;
        if values.last() == Some(&v) {
            *breaks.last_mut().unwrap() = right;
        } else {
            values.push(v);
            breaks.push(right);
        }
    }
    StepProfile {
        breaks,
        values,
        non_increasing: true,
    }
}

/// `u★(x) = u*(omega_N |x|^N)` as a radial step profile on the ball of measure `|Omega|`.
pub fn symmetric_rearrangement(u: &GridFunction) -> RadialProfile {
    let p = decreasing_rearrangement(u);
    let mut v = p.values.clone();
    v.push(*p.values.last().unwrap());
    RadialProfile::new(p.breaks, v, u.dim(), Interp::Step).expect("rearrangement breakpoints are increasing")
}

/// Order in which cells enter the nested family `E(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// equal `|u|` values enter in increasing cell index
    #[default]
    Index,
    /// equal `|u|` values enter in decreasing cell index
    ReverseIndex,
}

/// Domain cells sorted by `|u|` descending; prefixes of this list are the sets `E(s)`.
pub fn sweep_order(u: &GridFunction, tie: TieBreak) -> Vec<usize> {
    let mut cells: Vec<usize> = (0..u.len()).filter(|&k| u.mask[k]).collect();
    cells.sort_by(|&a, &b| {
        let ord = u.values[b].abs().partial_cmp(&u.values[a].abs()).unwrap();
        ord.then(match tie {
            TieBreak::Index => a.cmp(&b),
            TieBreak::ReverseIndex => b.cmp(&a),
        })
    });
    cells
}

/// Pseudo-rearrangement `G` of `h` with respect to `u`: the value of `h` on
/// the cell swept at measure `s`, one step per cell.
pub fn pseudo_rearrangement(h: &GridFunction, u: &GridFunction) -> Result<StepProfile> {
    pseudo_rearrangement_with(h, u, TieBreak::Index)
}

pub fn pseudo_rearrangement_with(h: &GridFunction, u: &GridFunction, tie: TieBreak) -> Result<StepProfile> {
    if !h.same_skeleton(u) {
        return invalid("pseudo-rearrangement needs both fields on the same grid and domain");
    }
    let order = sweep_order(u, tie);
    let vol = u.cell_volume();
    let breaks = (0..=order.len()).map(|k| k as f64 * vol).collect();
    let values = order.iter().map(|&k| h.values[k]).collect();
    StepProfile::new(breaks, values)
}
