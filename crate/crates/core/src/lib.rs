//! Bicomplex Prabhakar functions: bicomplex arithmetic, the three-parameter
//! Mittag-Leffler function with bicomplex parameters and argument, its
//! integral transforms, fractional integrals and kinetic-equation solvers.

pub mod bicomplex;
mod dd;
pub mod error;
pub mod kinetic;
pub mod prabhakar;
pub mod quadrature;
pub mod special;
pub mod transforms;
pub mod verify;

pub use bicomplex::{Bicomplex, ComplexPair, Hyperbolic};
pub use error::{Error, Result};
pub use prabhakar::{BicomplexPrabhakar, PrabhakarParams};
pub use special::{ComplexPrabhakar, ComplexPrabhakarArgs, SeriesPolicy, SeriesValue};
