#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod eigenfunctions;
pub mod fields;
pub mod grid;
pub mod quad;
pub mod specfun;
pub mod spectrum;
pub mod verify;
