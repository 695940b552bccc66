//! Twisted unoriented Dijkgraaf–Witten theory for finite ℤ₂-graded groups.

pub mod cohomology;
pub mod cyclotomic;
pub mod error;
pub mod groupoids;
pub mod groups;
pub mod moduli;
pub mod reptheory;
pub mod sweep;
pub mod tqft;
pub mod transgression;

pub use error::{Error, Result};
