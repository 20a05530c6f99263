//! Finitely presented modules, resolutions, Ext, grade and depth.

mod matrix;
mod module;
mod resolution;

pub use matrix::Matrix;
pub use module::{minimal_columns, monomials_of_degree, vec_degree, FgModule, Pruned, Subquotient};
pub use resolution::{ext, ext_from_resolution, grade, local_depth, mcm_test, resolve, FreeResolution};

use crate::error::Result;
use crate::localcoh::SpcSubset;
use crate::ringkernel::Ideal;

/// `ann M` and the support `V(ann M)`.
pub fn annihilator_and_support(m: &FgModule) -> Result<(Ideal, SpcSubset)> {
    let ann = m.annihilator()?;
    Ok((ann.clone(), SpcSubset::closed(ann)))
}
