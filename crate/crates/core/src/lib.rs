pub mod cubeface;
pub mod error;
pub mod exactlat;
pub mod faces;
pub mod gen;
pub mod halfspace;
mod hull;
pub mod idp;
pub mod io;
pub mod polytope;
pub mod prismatoid;
pub mod report;
pub mod smooth;
pub mod verify;

pub use error::{Error, Result};
