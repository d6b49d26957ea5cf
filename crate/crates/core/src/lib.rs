pub mod base;
pub mod bounds;
pub mod category;
pub mod day;
pub mod error;
pub mod isbell;
pub mod kan;
pub mod presheaf;

pub use bounds::Bounds;
pub use error::{Error, Result};
