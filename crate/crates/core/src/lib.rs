//! Exact dynamics of the lattice map `(x, y) ↦ (x + α y' + β, y')`,
//! `y' = y − sign(x)`, and of its first return map to the positive ray.

pub mod arith;
pub mod codes;
pub mod error;
pub mod iet;
pub mod lattice;
pub mod params;
pub mod poincare;
pub mod reduced;
pub mod verify;

pub use error::{Error, Result};
pub use iet::{CellData, Iet};
pub use lattice::{LatticePoint, TorusPoint};
pub use params::{NormalizationResult, ParityClass, Params};
