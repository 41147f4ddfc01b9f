//! Support code for the `agstar` command-line tool.

pub mod file;
pub mod records;

pub use file::{ComplexFile, ParseError};
