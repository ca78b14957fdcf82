pub mod arith;
pub mod census;
pub mod cli;
pub mod config;
pub mod descent;
pub mod error;
pub mod io;
pub mod linalg;
pub mod quiver;
pub mod twisted;

pub use error::{Error, Result};
