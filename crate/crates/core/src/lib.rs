#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bicircle;
pub mod curvature;
pub mod error;
pub mod integrator;
pub mod io;
pub mod moebius;
pub mod solver;

pub use error::{Error, Result};
