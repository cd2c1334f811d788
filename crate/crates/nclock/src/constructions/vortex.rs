use std::sync::Arc;

use crate::circle::{project_to_discrete, DiscreteCircle, UnitVector};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::lattice::{LatticeDomain, SpinField};

/// Sector index of the site `p` for the vortex of the given sign at `center`.
/// The center itself gets state 0; sign `-1` reflects by `diag(1, -1)`.
pub fn vortex_state(center: Point, sign: i32, p: Point, circle: &DiscreteCircle) -> u32 {
    let dx = p.x - center.x;
    let dy = p.y - center.y;
    let dy = if sign < 0 { -dy } else { dy };
    match UnitVector::from_components(dx, dy) {
        Some(u) => project_to_discrete(&u, circle),
        None => 0,
    }
}

/// Discretization of `+-(x - center)/|x - center|` by angular sectors.
pub fn vortex_field(
    center: Point,
    sign: i32,
    domain: Arc<LatticeDomain>,
    circle: DiscreteCircle,
) -> Result<SpinField> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidParameter(format!("vortex sign must be +-1, got {sign}")));
    }
    SpinField::try_from_fn(domain, circle, |_, p| Ok(vortex_state(center, sign, p, &circle)))
}

/// Core radius `4 eps / theta`.
pub fn radius_r_eps(epsilon: f64, theta: f64) -> f64 {
    4.0 * epsilon / theta
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_example() {
        let c = DiscreteCircle::new(4).unwrap();
        let a = 0.3 * std::f64::consts::PI;
        assert_eq!(vortex_state(Point::ORIGIN, 1, Point::new(a.cos(), a.sin()), &c), 0);
        assert_eq!(vortex_state(Point::ORIGIN, 1, Point::ORIGIN, &c), 0);
        assert_eq!(vortex_state(Point::ORIGIN, -1, Point::new(0.0, 1.0), &c), 3);
    }

    #[test]
    fn r_eps_examples() {
        assert!((radius_r_eps(0.01, 0.2) - 0.2).abs() < 1e-15);
        assert!((radius_r_eps(0.3, 0.3) - 4.0).abs() < 1e-15);
        assert_eq!(radius_r_eps(0.25, 1.0), 1.0);
    }
}
