//! Loewy lengths of centers of blocks of finite group algebras.

pub mod blocks;
pub mod bounds;
pub mod comalg;
pub mod corpus;
pub mod error;
pub mod field;
pub mod group;
pub mod linalg;
pub mod par;
pub mod poly;

pub use error::{Error, Result};
