pub mod cli;
pub mod cohomology;
pub mod cone;
pub mod error;
pub mod homology;
pub mod input;
pub mod lattice;
pub mod matrix;
pub mod semigroup;

pub use error::{Error, Result};
