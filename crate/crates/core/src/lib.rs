pub mod algebra;
pub mod cocycle;
pub mod complex;
pub mod dot;
pub mod error;
pub mod group;
pub mod io;
pub mod sample;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
