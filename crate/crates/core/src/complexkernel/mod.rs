//! Bounded complexes, truncations, Koszul complexes, homotopies and hyper-Ext.

mod complex;
mod homotopy;
mod koszul;
mod rhom;
mod truncation;

pub(crate) use complex::fmt_term;
pub use complex::{BddComplex, ChainMap};
pub use homotopy::{
    cohomology_annihilator, derived_annihilator_ideal, null_homotopy_mult, verify_homotopy, DerivedAnnihilator,
    Homotopy,
};
pub use koszul::{koszul, tensor_koszul, tensor_koszul_step, KoszulStep};
pub use rhom::{complex_depth_at_prime, hom_complex, hyper_ext, hyper_ext_inf, rhom_cyclic, vanishes_at};
pub use truncation::{soft_truncate_le, truncation_series, TruncationSeries, TruncationStage};

use crate::error::Result;
use crate::xint::XInt;

/// `(sup X, inf X)`.
pub fn cohomology_and_bounds(x: &BddComplex) -> Result<(XInt, XInt)> {
    x.sup_inf()
}

#[cfg(test)]
mod tests;
