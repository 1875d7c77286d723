pub mod brauer;
pub mod error;
pub mod exact;
pub mod localfield;
pub mod numberfield;
pub mod obstruction;
pub mod pencil;
pub mod points;
pub mod reduction;
pub mod report;
pub mod input;
pub mod fixtures;

pub use error::{Error, Result};
