//! Test configurations realized at a given lattice spacing.

use std::f64::consts::PI;
use std::sync::Arc;

use nclock::constructions::{
    recovery_flat, recovery_with_vortices, vortex_field, vortex_state, FlatRecoveryOptions, VortexRecoveryOptions,
    C0_FLAT,
};
use nclock::maps::VortexMap;
use nclock::{
    build_domain, DiscreteCircle, Error, PcField, Point, Result, Shape, SpinField, UnitVector, VorticityMeasure,
};
use serde::{Deserialize, Serialize};

/// Family `eps -> theta_eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum ThetaRule {
    /// `theta = c eps`
    Proportional { c: f64 },
    /// `theta = eps |ln eps|^p`
    Loglaw { p: f64 },
    Fixed { value: f64 },
}

impl ThetaRule {
    pub fn theta(&self, eps: f64) -> f64 {
        match *self {
            ThetaRule::Proportional { c } => c * eps,
            ThetaRule::Loglaw { p } => eps * eps.ln().abs().powf(p),
            ThetaRule::Fixed { value } => value,
        }
    }

    pub fn tag(&self) -> String {
        match *self {
            ThetaRule::Proportional { c } => format!("proportional({c})"),
            ThetaRule::Loglaw { p } => format!("loglaw({p})"),
            ThetaRule::Fixed { value } => format!("fixed({value})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Scenario {
    /// Sector vortices of the given signs, evenly spaced on the horizontal
    /// midline of the unit square `[-1/2, 1/2)^2`.
    Vortex { signs: Vec<i32> },
    /// Straight vertical interface of the given length between the values
    /// `0` and `jump`.
    Interface { jump: f64, length: f64 },
    /// A `+1` vortex at the origin glued to the flat recovery of its
    /// midpoint discretization.
    Combined,
}

/// Optional overrides of the construction parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Overrides {
    pub lambda: Option<f64>,
    pub eta: Option<f64>,
    pub c0: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Realization {
    pub field: SpinField,
    /// Vortex count `M` entering the logarithmic cost.
    pub vortices: u32,
    pub target: VorticityMeasure,
}

/// Smallest power of two that is at least `x`.
pub fn dyadic_ceil(x: f64) -> f64 {
    2f64.powi(x.log2().ceil() as i32)
}

fn vortex_centers(signs: &[i32], eps: f64) -> Vec<(Point, i32)> {
    let m = signs.len();
    signs
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            let x = (j + 1) as f64 / (m + 1) as f64 - 0.5;
            (Point::new((x / eps).round() * eps, 0.0), s)
        })
        .collect()
}

impl Scenario {
    pub fn realize(&self, eps: f64, circle: DiscreteCircle, o: &Overrides) -> Result<Realization> {
        match self {
            Scenario::Vortex { signs } => vortex(signs, eps, circle),
            Scenario::Interface { jump, length } => interface(*jump, *length, eps, circle, o),
            Scenario::Combined => combined(eps, circle, o),
        }
    }
}

fn vortex(signs: &[i32], eps: f64, circle: DiscreteCircle) -> Result<Realization> {
    if signs.is_empty() || signs.iter().any(|s| s.abs() != 1) {
        return Err(Error::InvalidParameter(format!("vortex signs must be a nonempty list of +-1, got {signs:?}")));
    }
    let shape = Shape::centered_square(Point::ORIGIN, 0.5);
    let domain = Arc::new(build_domain(shape, eps)?);
    let centers = vortex_centers(signs, eps);
    let field = if let [(c, s)] = centers[..] {
        vortex_field(c, s, domain, circle)?
    } else {
        SpinField::try_from_fn(domain, circle, |_, p| {
            let mut phase = 0.0;
            for &(c, s) in &centers {
                if p == c {
                    return Ok(0);
                }
                let k = vortex_state(c, s, p, &circle);
                phase += circle.theta() * k as f64;
            }
            Ok(nclock::circle::project_to_discrete(&UnitVector::from_angle(phase), &circle))
        })?
    };
    let target = VorticityMeasure::new(
        centers.iter().map(|&(position, charge)| nclock::Atom { position, charge }),
        shape,
    );
    Ok(Realization {
        field,
        vortices: signs.len() as u32,
        target,
    })
}

fn interface(jump: f64, length: f64, eps: f64, circle: DiscreteCircle, o: &Overrides) -> Result<Realization> {
    if !(jump.abs() <= PI && length > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "interface needs |jump| <= pi and positive length, got {jump}, {length}"
        )));
    }
    let c0 = o.c0.unwrap_or(C0_FLAT);
    let ramp = c0 * eps / circle.theta();
    // The window must sit inside the middle plateau of one cell side, away
    // from the corner plateaus of width 2 ramp.
    let lambda = o.lambda.unwrap_or_else(|| dyadic_ceil(length + 4.0 * ramp));
    let window = Shape::rectangle(
        Point::new(-length / 2.0, lambda / 2.0 - length / 2.0),
        Point::new(length / 2.0, lambda / 2.0 + length / 2.0),
    );
    let pc = PcField::from_fn(lambda, &window, |[cx, _]| {
        Ok(UnitVector::from_angle(if cx < 0 { 0.0 } else { jump }))
    })?;
    let domain = Arc::new(build_domain(window, eps)?);
    let opts = FlatRecoveryOptions {
        c0,
        continuity_tolerance: None,
    };
    let field = recovery_flat(&pc, domain, circle, opts)?;
    Ok(Realization {
        field,
        vortices: 0,
        target: VorticityMeasure::empty(window),
    })
}

fn combined(eps: f64, circle: DiscreteCircle, o: &Overrides) -> Result<Realization> {
    let c0 = o.c0.unwrap_or(C0_FLAT);
    let lambda = o.lambda.unwrap_or_else(|| dyadic_ceil(4.0 * c0 * eps / circle.theta()));
    let eta = o.eta.unwrap_or(12.0 * lambda);
    let shape = Shape::centered_square(Point::ORIGIN, eta / 2.0);
    let domain = Arc::new(build_domain(shape, eps)?);
    let mu = VorticityMeasure::single(Point::ORIGIN, 1, shape);
    let opts = VortexRecoveryOptions {
        c0,
        ..Default::default()
    };
    let field = recovery_with_vortices(&VortexMap::new(Point::ORIGIN, 1), &mu, lambda, eta, domain, circle, opts)?;
    Ok(Realization {
        field,
        vortices: 1,
        target: mu,
    })
}
