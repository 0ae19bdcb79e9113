#![cfg_attr(not(test), no_std)]
//! Random multi-point MRC solver for sound-soft obstacle scattering in two
//! and three dimensions.
//!
//! The crate is `no_std` with `alloc`. It covers special functions, obstacle
//! geometry, outgoing basis functions, truncated-SVD least squares, the
//! iterative solver, field reconstruction and analytic disk/sphere series.

extern crate alloc;

pub mod basis;
pub mod error;
pub mod field;
pub mod geometry;
pub mod lsq;
pub mod mrc;
pub mod oracle;
pub mod point;
pub mod quadrature;
pub mod specfun;

pub use error::{MrcError, Result};
pub use point::{Dimension, Point};
