//! Nearest-neighbor energies of spin fields and their lower-bound surrogates.

use rayon::prelude::*;

use crate::geometry::Shape;
use crate::lattice::SpinField;
use crate::sum::blocked_sum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    /// `sum eps^2 |u_i - u_j|^2` over unordered bonds in the region.
    pub xy_total: f64,
    /// Largest `|u_i - u_j|^2` over those bonds.
    pub per_bond_max: f64,
    pub bond_count: usize,
    pub region: Option<Shape>,
}

fn region_mask(field: &SpinField, region: Option<&Shape>) -> Option<Vec<bool>> {
    let region = region?;
    let d = field.domain();
    Some(
        (0..d.len())
            .into_par_iter()
            .map(|k| region.contains(&d.position(k)))
            .collect(),
    )
}

/// Sum of `w[step distance]` over the bonds of `field` inside the region.
fn bond_sum(field: &SpinField, region: Option<&Shape>, weights: &[f64]) -> f64 {
    let mask = region_mask(field, region);
    let d = field.domain();
    let states = field.states();
    let circle = field.circle();
    let inside = |k: usize| mask.as_ref().map_or(true, |m| m[k]);
    blocked_sum(d.len(), |k| {
        if !inside(k) {
            return 0.0;
        }
        let mut s = 0.0;
        for j in d.forward_neighbors(k).into_iter().flatten() {
            if inside(j) {
                s += weights[circle.step_distance(states[k], states[j]) as usize];
            }
        }
        s
    })
}

pub fn xy_energy(field: &SpinField, region: Option<&Shape>) -> EnergyBreakdown {
    let eps = field.epsilon();
    let chord2 = field.circle().chord_squared_table();
    let total = bond_sum(field, region, &chord2);

    let mask = region_mask(field, region);
    let d = field.domain();
    let states = field.states();
    let circle = field.circle();
    let inside = |k: usize| mask.as_ref().map_or(true, |m| m[k]);
    let (max_step, count) = (0..d.len())
        .into_par_iter()
        .filter(|&k| inside(k))
        .map(|k| {
            d.forward_neighbors(k)
                .into_iter()
                .flatten()
                .filter(|&j| inside(j))
                .fold((0u32, 0usize), |(m, c), j| {
                    (m.max(circle.step_distance(states[k], states[j])), c + 1)
                })
        })
        .reduce(|| (0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));

    EnergyBreakdown {
        xy_total: eps * eps * total,
        per_bond_max: chord2[max_step as usize],
        bond_count: count,
        region: region.copied(),
    }
}

/// `E / (eps theta)`.
pub fn rescaled_energy(field: &SpinField, theta: f64, region: Option<&Shape>) -> f64 {
    xy_energy(field, region).xy_total / (field.epsilon() * theta)
}

/// Logarithmic cost `2 pi M |ln eps| eps / theta` of `M` vortices.
pub fn vortex_cost(epsilon: f64, theta: f64, vortices: u32) -> f64 {
    std::f64::consts::TAU * vortices as f64 * (-epsilon.ln()).abs() * epsilon / theta
}

/// Rescaled energy minus the logarithmic cost of `vortices` vortices.
pub fn excess_energy(field: &SpinField, theta: f64, vortices: u32, region: Option<&Shape>) -> f64 {
    rescaled_energy(field, theta, region) - vortex_cost(field.epsilon(), theta, vortices)
}

/// `sum eps d(u_i, u_j)` over unordered bonds.
pub fn geodesic_bond_sum(field: &SpinField, region: Option<&Shape>) -> f64 {
    let theta = field.circle().theta();
    let steps: Vec<f64> = (0..=field.circle().n_states() / 2)
        .map(|k| k as f64 * theta)
        .collect();
    field.epsilon() * bond_sum(field, region, &steps)
}

/// `(2 sin(theta/2) / theta) sum eps |u_i - u_j|`, a lower bound for the
/// rescaled energy.
pub fn bv_lower_bound(field: &SpinField, region: Option<&Shape>) -> f64 {
    let circle = field.circle();
    let chord = circle.chord_table();
    let theta = circle.theta();
    chord[1] / theta * field.epsilon() * bond_sum(field, region, &chord)
}
