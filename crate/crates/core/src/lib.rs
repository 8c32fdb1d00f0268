//! Exact and peak-based cluster size distributions of excursion sets of
//! random fields on ℤᵈ, with simulation-based estimators to check them.

pub mod empirical;
pub mod error;
pub mod fields;
pub mod lattice;
pub mod linalg;
pub mod mvnprob;
pub mod shapes;
pub mod theory;

pub use error::{Error, Result};
