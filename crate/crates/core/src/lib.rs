//! Combinatorial search for even sets of lines on smooth quartic surfaces.

pub mod arrangement;
pub mod filters;
pub mod lattice;
pub mod enumerator;
pub mod catalog;
pub mod chern;
pub mod cli;
