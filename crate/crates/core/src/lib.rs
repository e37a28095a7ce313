//! Real conic bundles over curves: topology of the real locus under elementary
//! transformations and blow-ups, the subgroup of `H²(X(ℝ), ℤ)` coming from
//! algebraic classes of the complexification, the quotient obstruction group,
//! and approximation decisions for smooth maps into the sphere.

pub mod bundle;
pub mod cohom;
pub mod decide;
pub mod document;
pub mod error;
pub mod exactpoly;
pub mod oracle;
pub mod report;

pub use error::{Error, Result};
