use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::maps::SpinMap;
use crate::vorticity::winding_number;

const WINDING_SAMPLES: usize = 1024;

/// `u (x - x1)/|x - x1|^-1 ((x - x1 - tau e1)/|x - x1 - tau e1|)`, with both
/// factors conjugated when the split degree is negative.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitMap<M> {
    inner: M,
    sign: i32,
    old: Point,
    new: Point,
}

impl<M> SplitMap<M> {
    pub fn inner(&self) -> &M {
        &self.inner
    }

    /// The singularity whose degree was reduced.
    pub fn old_center(&self) -> Point {
        self.old
    }

    /// The new unit singularity.
    pub fn new_center(&self) -> Point {
        self.new
    }

    /// Degree of the new singularity.
    pub fn sign(&self) -> i32 {
        self.sign
    }
}

fn angle_about(c: Point, p: Point) -> Option<f64> {
    let dx = p.x - c.x;
    let dy = p.y - c.y;
    (dx != 0.0 || dy != 0.0).then(|| dy.atan2(dx))
}

fn angle_gradient(c: Point, p: Point) -> Option<[f64; 2]> {
    let dx = p.x - c.x;
    let dy = p.y - c.y;
    let r2 = dx * dx + dy * dy;
    (r2 != 0.0).then(|| [-dy / r2, dx / r2])
}

impl<M: SpinMap> SpinMap for SplitMap<M> {
    fn phase(&self, p: Point) -> Option<f64> {
        let s = self.sign as f64;
        Some(self.inner.phase(p)? + s * (angle_about(self.new, p)? - angle_about(self.old, p)?))
    }

    fn phase_gradient(&self, p: Point) -> Option<[f64; 2]> {
        let s = self.sign as f64;
        let g = self.inner.phase_gradient(p)?;
        let a = angle_gradient(self.new, p)?;
        let b = angle_gradient(self.old, p)?;
        Some([g[0] + s * (a[0] - b[0]), g[1] + s * (a[1] - b[1])])
    }
}

/// Moves one unit of the degree of `map` at `x1` to the new point
/// `x1 + tau e1`.
pub fn split_degree<M: SpinMap>(map: M, x1: Point, tau: f64) -> Result<SplitMap<M>> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
    }
    let radius = tau / 4.0;
    let d = winding_number(&map, x1, radius, WINDING_SAMPLES)?;
    if d.abs() < 2 {
        return Err(Error::InvalidParameter(format!(
            "degree {d} at ({}, {}) cannot be split",
            x1.x, x1.y
        )));
    }
    let new = x1.offset(tau, 0.0);
    let collision = || Error::Placement(format!("({}, {}) is already singular", new.x, new.y));
    if map.phase(new).is_none() {
        return Err(collision());
    }
    match winding_number(&map, new, radius, WINDING_SAMPLES) {
        Ok(0) => {}
        Ok(_) | Err(Error::SingularSample { .. }) => return Err(collision()),
        Err(e) => return Err(e),
    }
    Ok(SplitMap {
        inner: map,
        sign: d.signum() as i32,
        old: x1,
        new,
    })
}
