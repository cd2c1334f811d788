//! Arithmetic on the unit circle and on its discrete subsets of `N` equally
//! spaced states.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Default radius within which geodesics from nearby starting points stay
/// uniformly close.
pub const DEFAULT_STABILITY_RADIUS: f64 = 0.5;

/// Relative tolerance used to attribute an angle lying on a sector boundary
/// (up to rounding) to the sector starting there.
const SECTOR_SNAP: f64 = 1e-12;

/// The discrete target set of `n_states` equally spaced unit vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteCircle {
    n_states: u32,
    theta: f64,
}

impl DiscreteCircle {
    pub fn new(n_states: u32) -> Result<Self> {
        if n_states < 2 {
            return Err(Error::InvalidParameter(format!(
                "a discrete circle needs at least 2 states, got {n_states}"
            )));
        }
        Ok(Self {
            n_states,
            theta: TAU / n_states as f64,
        })
    }

    /// Circle whose angular step is the closest achievable to `theta`.
    pub fn from_theta(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= PI) {
            return Err(Error::InvalidParameter(format!(
                "angular step must lie in (0, pi], got {theta}"
            )));
        }
        let n = (TAU / theta).round().max(2.0);
        if n > u32::MAX as f64 {
            return Err(Error::InvalidParameter(format!(
                "angular step {theta} needs too many states"
            )));
        }
        Self::new(n as u32)
    }

    pub fn n_states(&self) -> u32 {
        self.n_states
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Unit vector of state `k` (taken modulo `n_states`).
    pub fn state_vector(&self, k: u32) -> UnitVector {
        UnitVector::from_angle((k % self.n_states) as f64 * self.theta)
    }

    /// Number of steps between two states along the shorter arc.
    pub fn step_distance(&self, a: u32, b: u32) -> u32 {
        let n = self.n_states;
        let d = (a % n).abs_diff(b % n);
        d.min(n - d)
    }

    /// Geodesic distance between two states.
    pub fn state_distance(&self, a: u32, b: u32) -> f64 {
        self.step_distance(a, b) as f64 * self.theta
    }

    /// Squared chord length `|u_a - u_b|^2 = 4 sin^2(k theta / 2)` for
    /// every step count `k` in `0..=n/2`.
    pub fn chord_squared_table(&self) -> Vec<f64> {
        (0..=self.n_states / 2)
            .map(|k| {
                let s = (k as f64 * self.theta / 2.0).sin();
                4.0 * s * s
            })
            .collect()
    }

    /// Chord length `|u_a - u_b| = 2 sin(k theta / 2)` per step count.
    pub fn chord_table(&self) -> Vec<f64> {
        (0..=self.n_states / 2)
            .map(|k| 2.0 * (k as f64 * self.theta / 2.0).sin())
            .collect()
    }
}

/// A point of the unit circle, stored by its angle in `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector {
    angle: f64,
}

impl UnitVector {
    pub const E1: UnitVector = UnitVector { angle: 0.0 };

    pub fn from_angle(angle: f64) -> Self {
        let mut a = angle.rem_euclid(TAU);
        if a >= TAU {
            a = 0.0;
        }
        Self { angle: a }
    }

    /// Direction of a nonzero planar vector.
    pub fn from_components(x: f64, y: f64) -> Option<Self> {
        if x == 0.0 && y == 0.0 {
            return None;
        }
        Some(Self::from_angle(y.atan2(x)))
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn components(&self) -> (f64, f64) {
        let (s, c) = self.angle.sin_cos();
        (c, s)
    }

    /// Euclidean distance `|u - v|` in the plane.
    pub fn chord(&self, other: &UnitVector) -> f64 {
        let (a, b) = self.components();
        let (c, d) = other.components();
        (a - c).hypot(b - d)
    }

    pub fn rotated(&self, by: f64) -> Self {
        Self::from_angle(self.angle + by)
    }
}

/// `t - Q(t)`, where `Q(t)` is the multiple of `2 pi` closest to `t`; ties go
/// to the multiple of smaller modulus, so `wrap_psi(pi) = pi` and
/// `wrap_psi(-pi) = -pi`.
pub fn wrap_psi(t: f64) -> f64 {
    let x = t / TAU;
    let fl = x.floor();
    let frac = x - fl;
    let n = if frac > 0.5 {
        fl + 1.0
    } else if frac < 0.5 || fl >= 0.0 {
        // ties go to the multiple of smaller modulus
        fl
    } else {
        fl + 1.0
    };
    t - n * TAU
}

/// Integer analogue of [`wrap_psi`] for a step difference on a circle with
/// `n` states: the representative of `d` modulo `n` in `[-n/2, n/2]`, ties
/// kept on the side of `d`'s sign.
pub fn wrap_steps(d: i64, n: i64) -> i64 {
    let r = d.rem_euclid(n);
    if 2 * r < n {
        r
    } else if 2 * r > n {
        r - n
    } else if d >= 0 {
        // tie: the minimal-modulus multiple of n is the one towards zero
        d - n * (d.div_euclid(n))
    } else {
        d - n * (d.div_euclid(n) + 1)
    }
}

/// Geodesic (arc-length) distance on the circle, in `[0, pi]`.
pub fn geodesic_distance(u: &UnitVector, v: &UnitVector) -> f64 {
    wrap_psi(v.angle - u.angle).abs().min(PI)
}

/// Index `floor(phi_u / theta) mod N` of the sector containing `u`.
pub fn project_to_discrete(u: &UnitVector, circle: &DiscreteCircle) -> u32 {
    let x = u.angle / circle.theta;
    let r = x.round();
    let k = if (x - r).abs() <= SECTOR_SNAP * r.abs().max(1.0) {
        r
    } else {
        x.floor()
    };
    let n = circle.n_states as i64;
    (k as i64).rem_euclid(n) as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
}

/// Unit-speed minimizing geodesic between two points of the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicPath {
    start: UnitVector,
    end: UnitVector,
    length: f64,
    orientation: Orientation,
}

impl GeodesicPath {
    /// Antipodal endpoints are joined counterclockwise.
    pub fn new(start: UnitVector, end: UnitVector) -> Self {
        let delta = wrap_psi(end.angle - start.angle);
        let (length, orientation) = if delta.abs() >= PI {
            (PI, Orientation::Counterclockwise)
        } else if delta >= 0.0 {
            (delta, Orientation::Counterclockwise)
        } else {
            (-delta, Orientation::Clockwise)
        };
        Self {
            start,
            end,
            length,
            orientation,
        }
    }

    pub fn start(&self) -> UnitVector {
        self.start
    }

    pub fn end(&self) -> UnitVector {
        self.end
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Point at arc length `t` from the start, clamped to the endpoints.
    pub fn eval(&self, t: f64) -> UnitVector {
        if t <= 0.0 || self.length == 0.0 {
            return self.start;
        }
        if t >= self.length {
            return self.end;
        }
        match self.orientation {
            Orientation::Counterclockwise => self.start.rotated(t),
            Orientation::Clockwise => self.start.rotated(-t),
        }
    }
}

pub fn geo_eval(path: &GeodesicPath, t: f64) -> UnitVector {
    path.eval(t)
}

/// Midpoint of the geodesic from `u` to `v`.
pub fn midpoint(u: &UnitVector, v: &UnitVector) -> UnitVector {
    let path = GeodesicPath::new(*u, *v);
    path.eval(path.length / 2.0)
}
