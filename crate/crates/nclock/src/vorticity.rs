//! Discrete vorticity, atomic vorticity measures, their flat distance, and
//! winding numbers of continuum maps.

use std::f64::consts::{PI, TAU};

use crate::assignment::min_cost_assignment;
use crate::circle::{wrap_psi, wrap_steps};
use crate::error::{Error, Result};
use crate::geometry::{Point, Shape};
use crate::lattice::SpinField;
use crate::maps::SpinMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub position: Point,
    pub charge: i32,
}

/// Finite signed sum of Dirac masses with integer charges.
#[derive(Debug, Clone, PartialEq)]
pub struct VorticityMeasure {
    atoms: Vec<Atom>,
    domain: Shape,
}

impl VorticityMeasure {
    /// Atoms at identical positions are merged and zero charges dropped;
    /// atoms are kept ordered by `(y, x)`.
    pub fn new(atoms: impl IntoIterator<Item = Atom>, domain: Shape) -> Self {
        let mut merged: Vec<Atom> = Vec::new();
        for a in atoms {
            match merged.iter_mut().find(|b| b.position == a.position) {
                Some(b) => b.charge += a.charge,
                None => merged.push(a),
            }
        }
        merged.retain(|a| a.charge != 0);
        merged.sort_by(|a, b| {
            a.position
                .y
                .total_cmp(&b.position.y)
                .then(a.position.x.total_cmp(&b.position.x))
        });
        Self {
            atoms: merged,
            domain,
        }
    }

    pub fn empty(domain: Shape) -> Self {
        Self::new([], domain)
    }

    pub fn single(position: Point, charge: i32, domain: Shape) -> Self {
        Self::new([Atom { position, charge }], domain)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn domain(&self) -> &Shape {
        &self.domain
    }

    pub fn total_charge(&self) -> i64 {
        self.atoms.iter().map(|a| a.charge as i64).sum()
    }

    /// `|mu|(Omega)`.
    pub fn total_variation(&self) -> u64 {
        self.atoms.iter().map(|a| a.charge.unsigned_abs() as u64).sum()
    }
}

/// Winding of the field around the plaquette with lower-left corner at site
/// `k`, or `None` if a corner is missing.
pub fn plaquette_vorticity(field: &SpinField, k: usize) -> Option<i32> {
    let corners = field.domain().plaquette(k)?;
    let n = field.circle().n_states() as i64;
    let s = field.states();
    let total: i64 = (0..4)
        .map(|c| {
            let a = s[corners[c]] as i64;
            let b = s[corners[(c + 1) % 4]] as i64;
            wrap_steps(b - a, n)
        })
        .sum();
    debug_assert_eq!(total % n, 0);
    Some((total / n) as i32)
}

/// Atoms `d_u(eps i) delta_{eps i + (eps, eps)}` over all complete
/// plaquettes.
pub fn vorticity_measure(field: &SpinField) -> VorticityMeasure {
    let d = field.domain();
    let eps = d.epsilon();
    let atoms = (0..d.len()).filter_map(|k| {
        let charge = plaquette_vorticity(field, k)?;
        (charge != 0).then(|| {
            let [ix, iy] = d.site(k);
            Atom {
                position: Point::new((ix + 1) as f64 * eps, (iy + 1) as f64 * eps),
                charge,
            }
        })
    });
    VorticityMeasure::new(atoms.collect::<Vec<_>>(), *d.shape())
}

/// Flat distance `sup { <phi, mu - nu> : Lip(phi) <= 1, |phi| <= 1,
/// phi = 0 on the boundary }` between atomic measures on a convex domain.
///
/// Each unit of positive excess is sent to a unit of negative excess at
/// cost `|x - y|` or leaves at cost `min(dist(x, boundary), 1)`, and the
/// cheapest such plan is found by assignment.
pub fn flat_distance(mu: &VorticityMeasure, nu: &VorticityMeasure, domain: &Shape) -> f64 {
    let diff = VorticityMeasure::new(
        mu.atoms
            .iter()
            .copied()
            .chain(nu.atoms.iter().map(|a| Atom {
                position: a.position,
                charge: -a.charge,
            })),
        *domain,
    );
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for a in diff.atoms() {
        let target = if a.charge > 0 { &mut pos } else { &mut neg };
        for _ in 0..a.charge.unsigned_abs() {
            target.push(a.position);
        }
    }
    let exit = |p: &Point| domain.boundary_distance(p).min(1.0);
    let (np, nn) = (pos.len(), neg.len());
    let size = np + nn;
    if size == 0 {
        return 0.0;
    }
    // rows: positive units, then one slack row per negative unit
    // columns: negative units, then one slack column per positive unit
    let mut cost = vec![vec![0.0; size]; size];
    for (i, p) in pos.iter().enumerate() {
        for (j, q) in neg.iter().enumerate() {
            cost[i][j] = p.dist(q);
        }
        let c = exit(p);
        for j in nn..size {
            cost[i][j] = c;
        }
    }
    for (j, q) in neg.iter().enumerate() {
        let c = exit(q);
        for row in cost.iter_mut().skip(np) {
            row[j] = c;
        }
    }
    min_cost_assignment(&cost).0
}

/// Degree of `map` along the circle of given radius, from `samples`
/// equally spaced points.
pub fn winding_number<M: SpinMap + ?Sized>(
    map: &M,
    center: Point,
    radius: f64,
    samples: usize,
) -> Result<i64> {
    if samples < 3 || !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "winding number needs radius > 0 and at least 3 samples (got {radius}, {samples})"
        )));
    }
    let phase = |j: usize| {
        let t = TAU * (j % samples) as f64 / samples as f64;
        let p = center.offset(radius * t.cos(), radius * t.sin());
        map.phase(p).ok_or(Error::SingularSample { x: p.x, y: p.y })
    };
    let first = phase(0)?;
    let mut prev = first;
    let mut total = 0.0;
    for j in 1..=samples {
        let cur = if j == samples { first } else { phase(j)? };
        let step = wrap_psi(cur - prev);
        if step.abs() >= PI {
            return Err(Error::Resolution { gap: step.abs() });
        }
        total += step;
        prev = cur;
    }
    Ok((total / TAU).round() as i64)
}
