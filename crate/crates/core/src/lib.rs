//! Exact computer algebra for local cohomology, depth of complexes,
//! annihilator theorems and sp-filtrations over quotients of polynomial rings.

pub mod cli;
pub mod complexkernel;
pub mod error;
pub mod faltings;
pub mod localcoh;
pub mod modkernel;
pub mod ringkernel;
pub mod spfilt;
pub mod tstruct;
mod xint;

pub use error::{Error, Result};
pub use xint::XInt;
