pub mod census;
pub mod constraints;
pub mod curves;
pub mod cusp;
pub mod error;
pub mod holonomy;
pub mod homology;
pub mod isosig;
pub mod perm;
pub mod rational;
pub mod render;
pub mod search;
pub mod slope;
pub mod triangulation;

pub use error::{Error, Result};
