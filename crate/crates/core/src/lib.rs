pub mod bounds;
pub mod codes;
pub mod error;
pub mod finite_field;
mod par;
pub mod qcombinatorics;
pub mod rank_space;
pub mod real;
pub mod search;

pub use error::{Error, Result};
pub use finite_field::{Field, FieldElement};
pub use rank_space::{Els, RankVector, Space, DEFAULT_CAP};
