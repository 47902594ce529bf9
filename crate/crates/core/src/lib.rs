//! Scattered plane waves, resolvent kernels and spectral projectors for
//! scalar and elastic waves outside simple obstacles, together with the
//! machinery that checks the correlation/Green's function identity.

pub mod elastic;
pub mod error;
pub mod geom;
pub mod greenfn;
pub mod scalarwave;
pub mod specfun;
pub mod sphquad;
pub mod verify;

pub use error::{Error, Result};
