//! Finite models of distributive involutive FL-algebras and distributive
//! quasi relation algebras: validation, frame duality, enumeration,
//! representations over ordered equivalence relations, and the
//! quasi-relation-algebra subreducts of small relation algebras.

pub mod algebra;
pub mod catalog;
pub mod enumerate;
pub mod error;
pub mod filters;
pub mod frame;
pub mod poset;
pub mod ra;
pub mod report;
pub mod represent;
pub mod sets;

pub use algebra::FinAlgebra;
pub use error::{Error, Result};
pub use frame::Frame;
pub use report::ValidationReport;
pub mod data;
pub mod io;
pub mod morphisms;
