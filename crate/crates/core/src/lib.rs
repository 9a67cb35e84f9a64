//! Coxeter and 0-Hecke word calculus, prioritized face collapses on subword
//! simplices, CW-poset interval checks and an exact type-A matrix oracle.

pub mod cli;
pub mod collapse;
pub mod coxeter;
pub mod error;
pub mod exec;
pub mod hecke;
pub mod poset;
pub mod tnn;

pub use coxeter::{CoxeterSystem, GroupElement, Word};
pub use error::{Error, Result};
pub use exec::Exec;
