pub mod cluster;
pub mod error;
pub mod exec;
pub mod field;
pub mod local;
pub mod plane;

pub use error::{Error, Result};
