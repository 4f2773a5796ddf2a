//! Finite forcing laboratory: regular-open completions of finite posets,
//! generic filters, a forcing language with Boolean-valued semantics,
//! extensional collapse of membership-like relations, and Boolean-valued
//! name hierarchies.

pub mod bnames;
pub mod cli;
pub mod corpus;
pub mod docs;
pub mod error;
pub mod extensional;
pub mod filters;
pub mod fixtures;
pub mod language;
pub mod pointset;
pub mod poset;
pub mod ralgebra;
pub mod semantics;
pub mod verdict;

pub use error::{Error, Result};
pub use pointset::PointSet;
pub use poset::Poset;
pub use ralgebra::{RegularAlgebra, RegularElement};
pub use verdict::Verdict;
