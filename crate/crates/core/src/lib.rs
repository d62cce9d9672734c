//! Exact trace-map dynamics for two- and three-generator free groups.

pub mod autact;
pub mod checks;
pub mod classify;
pub mod error;
pub mod exactnum;
pub mod limits;
pub mod matgroups;
pub mod orbits;
pub mod quadforms;
pub mod sample;
pub mod tracepoints;

pub use autact::{AutWord, Gen, Letter};
pub use error::{Error, Result};
pub use exactnum::{CycNum, Rat};
pub use limits::Limits;
pub use tracepoints::{AngleVector, RegionTag, TraceTuple};
