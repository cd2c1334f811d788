use std::f64::consts::PI;
use std::sync::Arc;

use crate::circle::{midpoint, project_to_discrete, DiscreteCircle, GeodesicPath, UnitVector};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::lattice::{cell_index, Axis, LatticeDomain, PcField, SpinField};

use super::datum::{BoundaryDatum, Side};
use super::C0_FLAT;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatRecoveryOptions {
    pub c0: f64,
    /// Largest allowed geodesic jump between face-adjacent cells; unchecked
    /// when `None`.
    pub continuity_tolerance: Option<f64>,
}

impl Default for FlatRecoveryOptions {
    fn default() -> Self {
        Self {
            c0: C0_FLAT,
            continuity_tolerance: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Face {
    Bottom,
    Right,
    Top,
    Left,
}

/// Closest face of the cell `[0, s)^2` to the local point `(a, b)`, its
/// distance, and the parameter of the projection along that face. Ties go
/// to bottom, right, top, left in that order.
pub(crate) fn nearest_face(a: f64, b: f64, s: f64) -> (Face, f64, f64) {
    let mut best = (Face::Bottom, b, a);
    for (face, d, t) in [(Face::Right, s - a, b), (Face::Top, s - b, a), (Face::Left, a, b)] {
        if d < best.1 {
            best = (face, d, t);
        }
    }
    best
}

/// `Geo[boundary, inner](theta/eps * dist)`.
pub(crate) fn transition(boundary: UnitVector, inner: UnitVector, dist: f64, eps: f64, theta: f64) -> UnitVector {
    GeodesicPath::new(boundary, inner).eval(theta / eps * dist)
}

pub(crate) fn check_scales(lambda: f64, c0: f64, eps: f64, theta: f64) -> Result<()> {
    if !(c0 > 0.0) || !(eps > 0.0) || !(theta > 0.0) || !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "c0, eps, theta, lambda must be positive (got {c0}, {eps}, {theta}, {lambda})"
        )));
    }
    let ramp = c0 * eps / theta;
    if lambda < 4.0 * ramp {
        return Err(Error::ScaleSeparation(format!(
            "cell size {lambda} is below 4 c0 eps/theta = {}",
            4.0 * ramp
        )));
    }
    if PI * eps / theta >= lambda / 4.0 {
        return Err(Error::ScaleSeparation(format!(
            "pi eps/theta = {} is not below lambda/4 = {}",
            PI * eps / theta,
            lambda / 4.0
        )));
    }
    Ok(())
}

/// Per-site evaluator of the recovery of a piecewise-constant field.
#[derive(Debug, Clone)]
pub struct FlatRecovery<'a> {
    pc: &'a PcField,
    circle: DiscreteCircle,
    epsilon: f64,
    ramp: f64,
}

impl<'a> FlatRecovery<'a> {
    pub fn new(pc: &'a PcField, circle: DiscreteCircle, epsilon: f64, opts: FlatRecoveryOptions) -> Result<Self> {
        check_scales(pc.lambda(), opts.c0, epsilon, circle.theta())?;
        if let Some(tol) = opts.continuity_tolerance {
            let gap = pc.max_face_jump();
            if gap > tol {
                return Err(Error::Discontinuous { gap, tolerance: tol });
            }
        }
        Ok(Self {
            pc,
            circle,
            epsilon,
            ramp: opts.c0 * epsilon / circle.theta(),
        })
    }

    /// Datum on the side starting at grid node `(i, j)` along `axis`.
    pub fn side_datum(&self, i: i64, j: i64, axis: Axis) -> BoundaryDatum {
        let lambda = self.pc.lambda();
        let u = |x: i64, y: i64| self.pc.cell(x, y);
        let values = match axis {
            Axis::Horizontal => [u(i, j), midpoint(&u(i, j - 1), &u(i, j)), u(i + 1, j)],
            Axis::Vertical => [u(i, j), midpoint(&u(i - 1, j), &u(i, j)), u(i, j + 1)],
        };
        let side = Side::new(Point::new(i as f64 * lambda, j as f64 * lambda), axis, lambda);
        BoundaryDatum::new(side, values, self.ramp, 1.0).expect("side length checked at construction")
    }

    /// Interpolated value before projection onto the discrete circle.
    pub fn value_at(&self, p: Point) -> UnitVector {
        let lambda = self.pc.lambda();
        let cx = cell_index(p.x, lambda);
        let cy = cell_index(p.y, lambda);
        let a = p.x - cx as f64 * lambda;
        let b = p.y - cy as f64 * lambda;
        let (face, dist, t) = nearest_face(a, b, lambda);
        let datum = match face {
            Face::Bottom => self.side_datum(cx, cy, Axis::Horizontal),
            Face::Right => self.side_datum(cx + 1, cy, Axis::Vertical),
            Face::Top => self.side_datum(cx, cy + 1, Axis::Horizontal),
            Face::Left => self.side_datum(cx, cy, Axis::Vertical),
        };
        transition(datum.eval(t), self.pc.cell(cx, cy), dist, self.epsilon, self.circle.theta())
    }

    pub fn state_at(&self, p: Point) -> u32 {
        project_to_discrete(&self.value_at(p), &self.circle)
    }
}

/// Recovery spin field of a piecewise-constant field on a `lambda`-grid:
/// geodesic transitions from the boundary data of each cell to its value,
/// projected onto the discrete circle.
pub fn recovery_flat(
    pc: &PcField,
    domain: Arc<LatticeDomain>,
    circle: DiscreteCircle,
    opts: FlatRecoveryOptions,
) -> Result<SpinField> {
    let rec = FlatRecovery::new(pc, circle, domain.epsilon(), opts)?;
    SpinField::try_from_fn(domain, circle, |_, p| Ok(rec.state_at(p)))
}
