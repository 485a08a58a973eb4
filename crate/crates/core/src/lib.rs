//! Construction, enumeration, classification and measurement of 2-valent
//! arc-transitive asymmetric digraphs and of the 4-valent graphs underlying
//! them, together with the census pipeline and file formats.

pub mod altinv;
pub mod canon;
pub mod census;
pub mod classify;
pub mod constructions;
pub mod digraph;
pub mod error;
pub mod fp;
pub mod io;
pub mod perm;

pub use digraph::Digraph;
pub use error::{Error, Result};
