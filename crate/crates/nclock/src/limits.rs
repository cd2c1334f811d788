//! Continuum limit functionals: the anisotropic Dirichlet integral, the
//! geodesic jump functional of piecewise-constant fields, and the
//! parametric integrand.

use crate::circle::geodesic_distance;
use crate::error::{Error, Result};
use crate::geometry::{Point, Shape};
use crate::lattice::{norm_1, PcField};
use crate::maps::SpinMap;
use crate::sum::blocked_sum;

/// Midpoint rule on the grid `(1/refinement) Z^2`, skipping the open disks
/// of radius `exclusion_radius` around `singularities`. Overlapping disks
/// are excluded as their union.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub refinement: usize,
    pub exclusion_radius: f64,
    pub singularities: Vec<Point>,
}

impl QuadratureSpec {
    pub fn new(refinement: usize, exclusion_radius: f64, singularities: Vec<Point>) -> Self {
        Self {
            refinement,
            exclusion_radius,
            singularities,
        }
    }

    fn excluded(&self, p: &Point) -> bool {
        self.singularities.iter().any(|s| s.dist(p) < self.exclusion_radius)
    }
}

/// `int |grad u|_{2,1} dx` over the region minus the exclusion disks. For
/// `u = exp(i phi)` the column norms of `grad u` are `|d_1 phi|`, `|d_2 phi|`.
pub fn anisotropic_dirichlet<M: SpinMap + ?Sized>(map: &M, region: &Shape, quad: &QuadratureSpec) -> Result<f64> {
    if quad.refinement == 0 || !(quad.exclusion_radius >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "quadrature needs refinement >= 1 and exclusion radius >= 0 (got {}, {})",
            quad.refinement, quad.exclusion_radius
        )));
    }
    let h = 1.0 / quad.refinement as f64;
    let (lo, hi) = region.bounds();
    let x0 = (lo.x / h).floor() as i64;
    let y0 = (lo.y / h).floor() as i64;
    let nx = ((hi.x / h).ceil() as i64 - x0).max(0) as usize;
    let ny = ((hi.y / h).ceil() as i64 - y0).max(0) as usize;
    let node = |k: usize| {
        let (ix, iy) = ((k % nx) as i64 + x0, (k / nx) as i64 + y0);
        Point::new(h * (ix as f64 + 0.5), h * (iy as f64 + 0.5))
    };
    let integrand = |k: usize| -> Option<f64> {
        let p = node(k);
        if !region.contains(&p) || quad.excluded(&p) {
            return Some(0.0);
        }
        map.phase_gradient(p).map(|g| norm_1(&g))
    };
    let total = blocked_sum(nx * ny, |k| integrand(k).unwrap_or(f64::NAN));
    if total.is_nan() {
        let k = (0..nx * ny).find(|&k| integrand(k).is_none()).unwrap_or(0);
        let p = node(k);
        return Err(Error::SingularSample { x: p.x, y: p.y });
    }
    Ok(total * h * h)
}

/// `sum lambda d(u^-, u^+)` over pairs of face-adjacent stored cells whose
/// lower-left corners both lie in the region.
pub fn jump_functional(pc: &PcField, region: &Shape) -> f64 {
    let lambda = pc.lambda();
    let [nx, ny] = pc.dims();
    let [cx0, cy0] = pc.cell_min();
    let inside = |x: usize, y: usize| {
        region.contains(&Point::new(
            lambda * (cx0 + x as i64) as f64,
            lambda * (cy0 + y as i64) as f64,
        ))
    };
    let values = pc.values();
    let total = blocked_sum(nx * ny, |k| {
        let (x, y) = (k % nx, k / nx);
        if !inside(x, y) {
            return 0.0;
        }
        let mut s = 0.0;
        if x + 1 < nx && inside(x + 1, y) {
            s += geodesic_distance(&values[k], &values[k + 1]);
        }
        if y + 1 < ny && inside(x, y + 1) {
            s += geodesic_distance(&values[k], &values[k + nx]);
        }
        s
    });
    lambda * total
}

/// Components of a 2-vector in the basis used by the parametric integrand:
/// `xi_21`, `xi_22`, `xi_11`, `xi_12` and the two components along
/// `e1 ^ e2` and its dual, which do not enter the integrand.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TwoVector {
    pub xi21: f64,
    pub xi22: f64,
    pub xi11: f64,
    pub xi12: f64,
    pub xi_bar0_0: f64,
    pub xi_0_bar0: f64,
}

impl TwoVector {
    pub fn scaled(&self, t: f64) -> Self {
        Self {
            xi21: t * self.xi21,
            xi22: t * self.xi22,
            xi11: t * self.xi11,
            xi12: t * self.xi12,
            xi_bar0_0: t * self.xi_bar0_0,
            xi_0_bar0: t * self.xi_0_bar0,
        }
    }
}

impl std::ops::Add for TwoVector {
    type Output = TwoVector;
    fn add(self, o: TwoVector) -> TwoVector {
        TwoVector {
            xi21: self.xi21 + o.xi21,
            xi22: self.xi22 + o.xi22,
            xi11: self.xi11 + o.xi11,
            xi12: self.xi12 + o.xi12,
            xi_bar0_0: self.xi_bar0_0 + o.xi_bar0_0,
            xi_0_bar0: self.xi_0_bar0 + o.xi_0_bar0,
        }
    }
}

pub fn phi_parametric(xi: &TwoVector) -> f64 {
    xi.xi21.hypot(xi.xi22) + xi.xi11.hypot(xi.xi12)
}

/// Cantor part of `|Du|_{2,1}`. Every map built here is smooth away from
/// finitely many points or piecewise constant, so it is always zero.
pub fn cantor_part() -> f64 {
    0.0
}
