pub mod dg;
pub mod error;
pub mod integrator;
pub mod io;
pub mod linalg;
pub mod mesh;
pub mod models;
pub mod sensitivity;

pub use error::{Error, Result};
