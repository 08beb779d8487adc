//! Numerical laboratory for circle dynamics near bounded-type Siegel disks:
//! continued-fraction combinatorics, dynamical length on critical circle
//! maps, admissible arc sequences, hyperbolic geometry of slit domains, and
//! branch-tracked pull-backs of Jordan curves under rational maps.

pub mod admissible;
pub mod circle;
pub mod error;
pub(crate) mod exec;
pub mod hypgeo;
pub mod pullback;
pub mod rotation;

pub use error::{Error, Result};
