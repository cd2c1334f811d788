use crate::circle::{GeodesicPath, UnitVector};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::lattice::Axis;

/// Segment `start + t e_axis`, `t` in `[0, length]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Side {
    pub start: Point,
    pub axis: Axis,
    pub length: f64,
}

impl Side {
    pub fn new(start: Point, axis: Axis, length: f64) -> Self {
        Self {
            start,
            axis,
            length,
        }
    }

    pub fn end(&self) -> Point {
        match self.axis {
            Axis::Horizontal => self.start.offset(self.length, 0.0),
            Axis::Vertical => self.start.offset(0.0, self.length),
        }
    }

    /// Arc-length parameter of the orthogonal projection of `p` on the side.
    pub fn parameter(&self, p: Point) -> f64 {
        match self.axis {
            Axis::Horizontal => p.x - self.start.x,
            Axis::Vertical => p.y - self.start.y,
        }
    }
}

/// Boundary values on one side of a cell: the endpoint values `v1`, `v3`
/// held on plateaus of width `ramp` near the ends, geodesic ramps of width
/// `ramp`, and `v2` on the middle plateau.
///
/// With `scale != 1` the datum is the one of the side dilated by `scale`,
/// evaluated at `scale * t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryDatum {
    side: Side,
    values: [UnitVector; 3],
    ramp: f64,
    scale: f64,
    first: GeodesicPath,
    second: GeodesicPath,
}

impl BoundaryDatum {
    pub fn new(side: Side, values: [UnitVector; 3], ramp: f64, scale: f64) -> Result<Self> {
        if !(ramp > 0.0) || !(scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "boundary datum needs positive ramp and scale, got {ramp}, {scale}"
            )));
        }
        let nominal = side.length * scale;
        if nominal < 4.0 * ramp {
            return Err(Error::SideTooShort {
                length: side.length,
                required: 4.0 * ramp / scale,
            });
        }
        Ok(Self {
            side,
            values,
            ramp,
            scale,
            first: GeodesicPath::new(values[0], values[1]),
            second: GeodesicPath::new(values[1], values[2]),
        })
    }

    pub fn side(&self) -> &Side {
        &self.side
    }

    pub fn values(&self) -> [UnitVector; 3] {
        self.values
    }

    /// Width of each plateau and ramp in the side's own length units.
    pub fn ramp_width(&self) -> f64 {
        self.ramp / self.scale
    }

    pub fn eval(&self, t: f64) -> UnitVector {
        let w = self.ramp;
        let len = self.side.length * self.scale;
        let t = t * self.scale;
        if t < w {
            self.values[0]
        } else if t < 2.0 * w {
            self.first.eval(self.first.length() * (t - w) / w)
        } else if t < len - 2.0 * w {
            self.values[1]
        } else if t < len - w {
            self.second.eval(self.second.length() * (t - (len - 2.0 * w)) / w)
        } else {
            self.values[2]
        }
    }
}

/// Datum with ramp width `c0 eps / theta` on a side of its natural size.
pub fn boundary_datum(
    side: Side,
    values: [UnitVector; 3],
    c0: f64,
    epsilon: f64,
    theta: f64,
) -> Result<BoundaryDatum> {
    BoundaryDatum::new(side, values, c0 * epsilon / theta, 1.0)
}
