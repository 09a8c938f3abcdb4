//! Auslander-Reiten quivers of categories of m-periodic complexes of
//! projectives over finite-dimensional monomial path algebras.

pub mod error;
pub mod algebra;
pub mod artheory;
pub mod complexes;
pub mod modules;
pub mod decomp;
pub mod periodic;
pub mod sectional;
pub mod field;
pub mod cli;

pub use cli::run;
pub use error::{Error, Result};
