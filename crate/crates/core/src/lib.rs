//! Exact-arithmetic workbench for straight-line programs over polynomial
//! rings and the parametric elimination problems they encode.

pub mod certify;
pub mod eliminate;
pub mod error;
pub mod families;
pub mod field;
pub mod polyring;
pub mod slp;
pub mod suite;
pub mod transforms;

pub use error::{Error, Result};
