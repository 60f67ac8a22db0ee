//! Exact computations with orbifold curves, multiple fibres and the
//! explicit constructions built on them.

pub mod algebra;
pub mod error;
pub mod orbifold;

pub use error::{Error, Result};
pub mod function_field;
pub mod report;
pub mod pluriform;
pub mod arithmetic;
pub mod sextic;
