//! Zero-temperature N-clock and XY lattice spin models: discrete circles,
//! spin fields on `eps Z^2`, nearest-neighbor energies, vorticity and flat
//! distances, explicit recovery constructions and continuum limit
//! functionals.

pub mod assignment;
pub mod circle;
pub mod constructions;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod limits;
pub mod maps;
pub mod sum;
pub mod vorticity;

pub use circle::{DiscreteCircle, GeodesicPath, UnitVector};
pub use error::{Error, Result};
pub use geometry::{Point, Shape};
pub use lattice::{build_domain, LatticeDomain, PcField, SpinField};
pub use maps::SpinMap;
pub use vorticity::{Atom, VorticityMeasure};
