//! Exact combinatorial mutations of two-dimensional Fano polygons and the
//! arithmetic of fake weighted projective planes.

pub mod cli;
pub mod diophantine;
pub mod fwps;
pub mod lattice;
pub mod mutation;
pub mod normal_form;
pub mod pell;
pub mod schema;
