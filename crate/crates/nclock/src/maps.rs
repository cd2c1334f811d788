//! Continuum spin maps `u: R^2 -> S^1`, described by a phase and its gradient.

use crate::circle::UnitVector;
use crate::geometry::Point;

/// A circle-valued map given through its phase. Singular points return
/// `None`.
pub trait SpinMap: Send + Sync {
    /// Phase `phi(p)` with `u(p) = (cos phi, sin phi)`; any representative.
    fn phase(&self, p: Point) -> Option<f64>;

    /// Gradient of the phase.
    fn phase_gradient(&self, p: Point) -> Option<[f64; 2]>;

    fn value(&self, p: Point) -> Option<UnitVector> {
        self.phase(p).map(UnitVector::from_angle)
    }

    /// Jacobian of `u`, entry `[i][j] = d u_i / d x_j`.
    fn jacobian(&self, p: Point) -> Option<[[f64; 2]; 2]> {
        let phi = self.phase(p)?;
        let g = self.phase_gradient(p)?;
        let (s, c) = phi.sin_cos();
        Some([[-s * g[0], -s * g[1]], [c * g[0], c * g[1]]])
    }
}

impl<M: SpinMap + ?Sized> SpinMap for Box<M> {
    fn phase(&self, p: Point) -> Option<f64> {
        (**self).phase(p)
    }
    fn phase_gradient(&self, p: Point) -> Option<[f64; 2]> {
        (**self).phase_gradient(p)
    }
}

impl<M: SpinMap + ?Sized> SpinMap for &M {
    fn phase(&self, p: Point) -> Option<f64> {
        (**self).phase(p)
    }
    fn phase_gradient(&self, p: Point) -> Option<[f64; 2]> {
        (**self).phase_gradient(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantMap {
    pub angle: f64,
}

impl SpinMap for ConstantMap {
    fn phase(&self, _p: Point) -> Option<f64> {
        Some(self.angle)
    }
    fn phase_gradient(&self, _p: Point) -> Option<[f64; 2]> {
        Some([0.0, 0.0])
    }
}

/// `((x - c)/|x - c|)^degree`. Degree `-1` is the reflected vortex
/// `diag(1, -1) (x - c)/|x - c|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexMap {
    pub center: Point,
    pub degree: i32,
}

impl VortexMap {
    pub fn new(center: Point, degree: i32) -> Self {
        Self { center, degree }
    }
}

impl SpinMap for VortexMap {
    fn phase(&self, p: Point) -> Option<f64> {
        let dx = p.x - self.center.x;
        let dy = p.y - self.center.y;
        if dx == 0.0 && dy == 0.0 {
            return None;
        }
        Some(match self.degree {
            1 => dy.atan2(dx),
            -1 => (-dy).atan2(dx),
            d => d as f64 * dy.atan2(dx),
        })
    }

    fn phase_gradient(&self, p: Point) -> Option<[f64; 2]> {
        let dx = p.x - self.center.x;
        let dy = p.y - self.center.y;
        let r2 = dx * dx + dy * dy;
        if r2 == 0.0 {
            return None;
        }
        let d = self.degree as f64;
        Some([-d * dy / r2, d * dx / r2])
    }
}

/// Post-composition with a fixed rotation of the target circle.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatedMap<M> {
    pub inner: M,
    pub angle: f64,
}

impl<M: SpinMap> SpinMap for RotatedMap<M> {
    fn phase(&self, p: Point) -> Option<f64> {
        self.inner.phase(p).map(|a| a + self.angle)
    }
    fn phase_gradient(&self, p: Point) -> Option<[f64; 2]> {
        self.inner.phase_gradient(p)
    }
}

/// Pointwise complex product of maps.
#[derive(Default)]
pub struct ProductMap {
    factors: Vec<Box<dyn SpinMap>>,
}

impl ProductMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, factor: impl SpinMap + 'static) -> Self {
        self.factors.push(Box::new(factor));
        self
    }

    /// Product of unit vortices at the given points with the given signs.
    pub fn vortices(atoms: &[(Point, i32)]) -> Self {
        atoms
            .iter()
            .fold(Self::new(), |m, &(c, d)| m.with(VortexMap::new(c, d)))
    }
}

impl SpinMap for ProductMap {
    fn phase(&self, p: Point) -> Option<f64> {
        self.factors.iter().try_fold(0.0, |acc, f| Some(acc + f.phase(p)?))
    }
    fn phase_gradient(&self, p: Point) -> Option<[f64; 2]> {
        self.factors.iter().try_fold([0.0, 0.0], |acc, f| {
            let g = f.phase_gradient(p)?;
            Some([acc[0] + g[0], acc[1] + g[1]])
        })
    }
}
