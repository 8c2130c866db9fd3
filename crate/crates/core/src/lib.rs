//! Exact computer algebra for formal group laws, the Brown–Peterson Hopf algebroid,
//! graded comodules and their cobar Ext, and Landweber exactness.

pub mod arith;
pub mod graded;
pub mod numtheory;
pub mod fgl;
pub mod hopf;
pub mod comod;
pub mod landweber;
pub mod suite;
pub mod cli;
