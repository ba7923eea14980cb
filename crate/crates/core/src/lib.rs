//! Exact sumsets, additive energy, direct-sum quantities and inequality
//! checks over finite abelian groups `Z/n1 x ... x Z/nd`.

pub mod cli;
pub mod constructions;
pub mod conv;
pub mod energy;
pub mod error;
pub mod group;
pub mod literal;
pub mod quantities;
pub mod ratio;
pub mod report;
pub mod set;
pub mod sumset;
pub mod verify;

pub use error::{Error, Result};
pub use group::{Element, GroupSpec};
pub use set::GroupSet;
