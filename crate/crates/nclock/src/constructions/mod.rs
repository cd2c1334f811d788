//! Explicit spin-field constructions: vortex discretizations, geodesic
//! boundary data, per-cell interpolation, dyadic gluing around singularities
//! and degree splitting.

mod datum;
mod dyadic;
mod flat;
mod split;
mod vortex;

pub use datum::{boundary_datum, BoundaryDatum, Side};
pub use dyadic::{
    dyadic_decomposition, recovery_with_vortices, DyadicDecomposition, DyadicRecovery,
    VortexRecoveryOptions,
};
pub use flat::{recovery_flat, FlatRecovery, FlatRecoveryOptions};
pub use split::{split_degree, SplitMap};
pub use vortex::{radius_r_eps, vortex_field, vortex_state};

/// Transition constant for the recovery of piecewise-constant fields.
pub const C0_FLAT: f64 = std::f64::consts::TAU + 0.1;
/// Transition constant used on the dyadic layers around a vortex.
pub const C0_VORTICES: f64 = 393.0;
/// Constant of the interior rigidity radius on the dyadic layers.
pub const C2_RIGIDITY: f64 = 96.0;
