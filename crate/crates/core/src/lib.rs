pub mod arith;
pub mod class_group;
pub mod cli;
pub mod cyclo;
pub mod error;
pub mod fetch;
pub mod gassmann;
pub mod ideal;
pub mod io;
pub mod lseries;
pub mod number_field;
pub mod qsm;
pub mod reciprocity;

pub use error::{Error, Result};
