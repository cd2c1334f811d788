use std::sync::Arc;

use crate::circle::{midpoint, project_to_discrete, DiscreteCircle, UnitVector};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::lattice::{Axis, LatticeDomain, PcField, SpinField};
use crate::maps::SpinMap;
use crate::vorticity::{winding_number, VorticityMeasure};

use super::datum::{BoundaryDatum, Side};
use super::flat::{check_scales, nearest_face, transition, Face, FlatRecovery, FlatRecoveryOptions};
use super::C0_VORTICES;

fn is_power_of_two(x: f64) -> bool {
    x > 0.0 && x.is_finite() && x.log2().round().exp2() == x
}

/// Where a point sits relative to the nested squares `Q_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Outside `Q_{-2}`.
    Outside,
    /// In the layer `L_k = Q_{k-1} \ Q_k`, `-1 <= k <= k_eps`.
    Layer(i32),
    /// Inside `Q_{k_eps}`.
    Hole,
}

/// Nested half-open squares `Q_k = center + [-h_k, h_k)^2` around a
/// singularity: `h_{-2} = (2^m + 1) lambda`, `h_{-1} = 2^m lambda` and
/// `h_k = (2^m - 2 + 2^-k) lambda` for `k >= 0`. The layer `L_k` is tiled by
/// cubes of side `2^-max(k,0) lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicDecomposition {
    center: Point,
    lambda: f64,
    eta: f64,
    m_lambda: u32,
    k_eps: i32,
}

/// `k` with `2^-k <= theta < 2^(-k+1)`.
fn k_eps_for(theta: f64) -> i32 {
    let mut k = 0i32;
    while (-k as f64).exp2() > theta {
        k += 1;
    }
    while (-(k - 1) as f64).exp2() <= theta {
        k -= 1;
    }
    k
}

pub fn dyadic_decomposition(center: Point, lambda: f64, eta: f64, theta: f64) -> Result<DyadicDecomposition> {
    if !is_power_of_two(lambda) {
        return Err(Error::InvalidParameter(format!("lambda must be a power of two, got {lambda}")));
    }
    if !(eta > 0.0 && eta.is_finite()) || !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "eta and theta must be positive (got {eta}, {theta})"
        )));
    }
    let mut m = 0u32;
    while (m + 1) < 63 && ((m + 1) as f64).exp2() * lambda <= eta / 2.0 {
        m += 1;
    }
    if (m as f64).exp2() * lambda > eta / 2.0 || m < 2 {
        return Err(Error::ScaleSeparation(format!(
            "eta = {eta} is too small for lambda = {lambda}: need 4 lambda <= eta/2"
        )));
    }
    Ok(DyadicDecomposition {
        center,
        lambda,
        eta,
        m_lambda: m,
        k_eps: k_eps_for(theta),
    })
}

impl DyadicDecomposition {
    pub fn center(&self) -> Point {
        self.center
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn m_lambda(&self) -> u32 {
        self.m_lambda
    }

    pub fn k_eps(&self) -> i32 {
        self.k_eps
    }

    /// Half-side `h_k` of `Q_k`, `k >= -2`.
    pub fn half_side(&self, k: i32) -> f64 {
        let big = (self.m_lambda as f64).exp2();
        match k {
            i32::MIN..=-3 => panic!("squares are indexed from -2, got {k}"),
            -2 => (big + 1.0) * self.lambda,
            -1 => big * self.lambda,
            _ => (big - 2.0 + (-k as f64).exp2()) * self.lambda,
        }
    }

    /// Side `2^-max(k,0) lambda` of the cubes tiling `L_k`.
    pub fn cube_side(&self, k: i32) -> f64 {
        (-(k.max(0)) as f64).exp2() * self.lambda
    }

    /// Whether `p` (absolute) lies in `Q_k`.
    pub fn contains(&self, k: i32, p: Point) -> bool {
        let h = self.half_side(k);
        let q = p - self.center;
        q.x >= -h && q.x < h && q.y >= -h && q.y < h
    }

    /// Whether `p` lies in `Q(lambda) = Q_{-1}`.
    pub fn covers(&self, p: Point) -> bool {
        self.contains(-1, p)
    }

    pub fn region_of(&self, p: Point) -> Region {
        if !self.contains(-2, p) {
            return Region::Outside;
        }
        for k in -1..=self.k_eps.max(-1) {
            if !self.contains(k, p) {
                return Region::Layer(k);
            }
        }
        Region::Hole
    }

    /// `h_k / side(k)` and `h_{k-1} / side(k)`, both integers.
    fn layer_extent(&self, k: i32) -> (i64, i64) {
        let s = self.cube_side(k);
        (
            (self.half_side(k) / s).round() as i64,
            (self.half_side(k - 1) / s).round() as i64,
        )
    }

    /// Indices `z` (relative to the center) of the cubes
    /// `center + side (z + [0,1)^2)` tiling `L_k`, `-1 <= k <= k_eps`.
    pub fn layer_cubes(&self, k: i32) -> Vec<[i64; 2]> {
        let (inner, outer) = self.layer_extent(k);
        let mut out = Vec::new();
        for zy in -outer..outer {
            for zx in -outer..outer {
                let in_hole = zx >= -inner && zx < inner && zy >= -inner && zy < inner;
                if !in_hole {
                    out.push([zx, zy]);
                }
            }
        }
        out
    }

    pub fn cube_count(&self, k: i32) -> usize {
        let (inner, outer) = self.layer_extent(k);
        (4 * (outer * outer - inner * inner)) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexRecoveryOptions {
    pub c0: f64,
    /// Samples for the winding-number check at each singularity.
    pub winding_samples: usize,
}

impl Default for VortexRecoveryOptions {
    fn default() -> Self {
        Self {
            c0: C0_VORTICES,
            winding_samples: 256,
        }
    }
}

/// Per-site evaluator of the multiscale construction inside `Q(lambda)`
/// around one singularity.
pub struct DyadicRecovery<'a, M: SpinMap + ?Sized> {
    map: &'a M,
    dec: DyadicDecomposition,
    circle: DiscreteCircle,
    epsilon: f64,
    ramp: f64,
}

impl<'a, M: SpinMap + ?Sized> DyadicRecovery<'a, M> {
    pub fn new(
        map: &'a M,
        dec: DyadicDecomposition,
        circle: DiscreteCircle,
        epsilon: f64,
        c0: f64,
    ) -> Result<Self> {
        check_scales(dec.lambda, c0, epsilon, circle.theta())?;
        Ok(Self {
            map,
            dec,
            circle,
            epsilon,
            ramp: c0 * epsilon / circle.theta(),
        })
    }

    pub fn decomposition(&self) -> &DyadicDecomposition {
        &self.dec
    }

    fn sample(&self, q: Point) -> Result<UnitVector> {
        self.map.value(q).ok_or(Error::SingularSample { x: q.x, y: q.y })
    }

    /// Map value at the midpoint of the cube of side `s` with relative index `z`.
    pub fn cube_value(&self, s: f64, z: [i64; 2]) -> Result<UnitVector> {
        let c = self.dec.center;
        self.sample(Point::new(
            c.x + s * (z[0] as f64 + 0.5),
            c.y + s * (z[1] as f64 + 0.5),
        ))
    }

    /// Piecewise-constant field `w` at an absolute point: the value of the
    /// cube containing it, on the `lambda`-grid outside `Q(lambda)` and on
    /// the `k_eps`-grid inside `Q_{k_eps}`.
    pub fn coarse_value(&self, p: Point) -> Result<UnitVector> {
        let k = match self.dec.region_of(p) {
            Region::Outside => -1,
            Region::Layer(k) => k,
            Region::Hole => self.dec.k_eps,
        };
        let s = self.dec.cube_side(k);
        let q = p - self.dec.center;
        self.cube_value(s, [(q.x / s).floor() as i64, (q.y / s).floor() as i64])
    }

    /// Datum on the side of layer `k` starting at relative node `node`
    /// (in units of the layer's cube side).
    fn side_datum(&self, k: i32, node: [i64; 2], axis: Axis) -> Result<BoundaryDatum> {
        let s = self.dec.cube_side(k);
        let c = self.dec.center;
        let start = Point::new(c.x + s * node[0] as f64, c.y + s * node[1] as f64);
        let (along, across) = match axis {
            Axis::Horizontal => ((s, 0.0), (0.0, s / 4.0)),
            Axis::Vertical => ((0.0, s), (s / 4.0, 0.0)),
        };
        let mid = start.offset(along.0 / 2.0, along.1 / 2.0);
        let lower = self.coarse_value(mid.offset(-across.0, -across.1))?;
        let upper = self.coarse_value(mid.offset(across.0, across.1))?;
        let values = [
            self.coarse_value(start)?,
            midpoint(&lower, &upper),
            self.coarse_value(start.offset(along.0, along.1))?,
        ];
        let scale = (k.max(0) as f64).exp2();
        BoundaryDatum::new(Side::new(start, axis, s), values, self.ramp, scale)
    }

    /// Whether the side lies on the inner boundary of layer `k`.
    fn on_inner_boundary(&self, k: i32, node: [i64; 2], axis: Axis) -> bool {
        let (h, _) = self.dec.layer_extent(k);
        let (along, across) = match axis {
            Axis::Horizontal => (node[0], node[1]),
            Axis::Vertical => (node[1], node[0]),
        };
        (across == h || across == -h) && along >= -h && along < h
    }

    fn boundary_value(&self, k: i32, node: [i64; 2], axis: Axis, t: f64) -> Result<UnitVector> {
        if !self.on_inner_boundary(k, node, axis) {
            return Ok(self.side_datum(k, node, axis)?.eval(t));
        }
        let half = self.dec.cube_side(k) / 2.0;
        let second = (t >= half) as i64;
        let sub = match axis {
            Axis::Horizontal => [2 * node[0] + second, 2 * node[1]],
            Axis::Vertical => [2 * node[0], 2 * node[1] + second],
        };
        let t = if second == 1 { t - half } else { t };
        Ok(self.side_datum(k + 1, sub, axis)?.eval(t))
    }

    /// State at a site of `Q(lambda)`.
    pub fn state_at(&self, p: Point) -> Result<u32> {
        let k = match self.dec.region_of(p) {
            Region::Layer(k) if k >= 0 && k < self.dec.k_eps => k,
            Region::Layer(k) if k >= self.dec.k_eps => return self.core_state(p),
            Region::Hole => return self.core_state(p),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "({}, {}) is outside the dyadic square",
                    p.x, p.y
                )))
            }
        };
        let s = self.dec.cube_side(k);
        let q = p - self.dec.center;
        let z = [(q.x / s).floor() as i64, (q.y / s).floor() as i64];
        let a = q.x - z[0] as f64 * s;
        let b = q.y - z[1] as f64 * s;
        let (face, dist, t) = nearest_face(a, b, s);
        let (node, axis) = match face {
            Face::Bottom => (z, Axis::Horizontal),
            Face::Right => ([z[0] + 1, z[1]], Axis::Vertical),
            Face::Top => ([z[0], z[1] + 1], Axis::Horizontal),
            Face::Left => (z, Axis::Vertical),
        };
        let boundary = self.boundary_value(k, node, axis, t)?;
        let inner = self.cube_value(s, z)?;
        let u = transition(boundary, inner, dist, self.epsilon, self.circle.theta());
        Ok(project_to_discrete(&u, &self.circle))
    }

    /// Direct discretization of the map near the singularity; the
    /// singular point itself gets state 0.
    fn core_state(&self, p: Point) -> Result<u32> {
        if p == self.dec.center {
            return Ok(0);
        }
        Ok(project_to_discrete(&self.sample(p)?, &self.circle))
    }
}

/// Recovery field for a map with unit-degree singularities at the atoms of
/// `mu`: the multiscale construction inside each `Q(lambda, x_h)` and the
/// flat recovery of the `lambda`-midpoint discretization elsewhere.
pub fn recovery_with_vortices<M: SpinMap + ?Sized>(
    map: &M,
    mu: &VorticityMeasure,
    lambda: f64,
    eta: f64,
    domain: Arc<LatticeDomain>,
    circle: DiscreteCircle,
    opts: VortexRecoveryOptions,
) -> Result<SpinField> {
    let eps = domain.epsilon();
    let atoms = mu.atoms();
    for (i, a) in atoms.iter().enumerate() {
        if a.charge.abs() != 1 {
            return Err(Error::Placement(format!(
                "singularity at ({}, {}) has charge {}, expected +-1",
                a.position.x, a.position.y, a.charge
            )));
        }
        let (gx, gy) = (a.position.x / lambda, a.position.y / lambda);
        if gx.fract() != 0.0 || gy.fract() != 0.0 {
            return Err(Error::Placement(format!(
                "singularity at ({}, {}) is not on the lambda-grid",
                a.position.x, a.position.y
            )));
        }
        for b in &atoms[i + 1..] {
            if a.position.dist(&b.position) < 2.0 * eta {
                return Err(Error::Placement(format!(
                    "singularities ({}, {}) and ({}, {}) are closer than 2 eta",
                    a.position.x, a.position.y, b.position.x, b.position.y
                )));
            }
        }
    }
    let decs = atoms
        .iter()
        .map(|a| dyadic_decomposition(a.position, lambda, eta, circle.theta()))
        .collect::<Result<Vec<_>>>()?;
    for a in atoms {
        let deg = winding_number(map, a.position, lambda / 2.0, opts.winding_samples)?;
        if deg != a.charge as i64 {
            return Err(Error::Placement(format!(
                "map has degree {deg} at ({}, {}), measure has {}",
                a.position.x, a.position.y, a.charge
            )));
        }
    }
    let evaluators = decs
        .into_iter()
        .map(|d| DyadicRecovery::new(map, d, circle, eps, opts.c0))
        .collect::<Result<Vec<_>>>()?;
    let pc = PcField::sample_midpoints(map, lambda, domain.shape())?;
    let flat = FlatRecovery::new(
        &pc,
        circle,
        eps,
        FlatRecoveryOptions {
            c0: opts.c0,
            continuity_tolerance: None,
        },
    )?;
    SpinField::try_from_fn(domain, circle, |_, p| {
        match evaluators.iter().find(|e| e.dec.covers(p)) {
            Some(e) => e.state_at(p),
            None => Ok(flat.state_at(p)),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_eps_examples() {
        assert_eq!(k_eps_for(0.1), 4);
        assert_eq!(k_eps_for(0.125), 3);
        assert_eq!(k_eps_for(0.2), 3);
        assert_eq!(k_eps_for(1.0), 0);
        assert_eq!(k_eps_for(2.5), -1);
    }

    #[test]
    fn m_lambda_example() {
        let d = dyadic_decomposition(Point::ORIGIN, 1.0 / 32.0, 0.5, 0.1).unwrap();
        assert_eq!(d.m_lambda(), 3);
        assert_eq!(d.k_eps(), 4);
        assert!(matches!(
            dyadic_decomposition(Point::ORIGIN, 1.0 / 32.0, 0.2, 0.1),
            Err(Error::ScaleSeparation(_))
        ));
        assert!(dyadic_decomposition(Point::ORIGIN, 0.3, 10.0, 0.1).is_err());
    }

    #[test]
    fn layer_zero_count() {
        let d = dyadic_decomposition(Point::ORIGIN, 1.0 / 32.0, 0.5, 0.1).unwrap();
        let big = 1 << d.m_lambda();
        assert_eq!(d.cube_count(0), 4 * (2 * big) - 4);
        assert_eq!(d.layer_cubes(0).len(), d.cube_count(0));
        for k in -1..=d.k_eps() {
            assert_eq!(d.layer_cubes(k).len(), d.cube_count(k));
        }
    }

    #[test]
    fn regions_are_nested() {
        let d = dyadic_decomposition(Point::new(0.5, 0.25), 1.0 / 16.0, 2.0, 0.2).unwrap();
        assert_eq!(d.region_of(Point::new(0.5, 0.25)), Region::Hole);
        assert_eq!(d.region_of(Point::new(10.0, 0.0)), Region::Outside);
        let h = d.half_side(-1);
        assert_eq!(d.region_of(Point::new(0.5 - h, 0.25)), Region::Layer(0));
        assert_eq!(d.region_of(Point::new(0.5 + h, 0.25)), Region::Layer(-1));
        for k in -1..d.k_eps() {
            assert!(d.half_side(k) > d.half_side(k + 1));
        }
        let inner = ((1u64 << d.m_lambda()) as f64 - 2.0) * d.lambda();
        assert!(d.half_side(d.k_eps()) > inner);
    }
}
