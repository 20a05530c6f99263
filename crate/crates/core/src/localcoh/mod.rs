//! Closed subsets of Spec, torsion, vanishing bounds and graded Čech cohomology.

mod cech;
mod spc;
mod torsion;

pub use cech::{
    annihilation_test, graded_local_cohomology, AnnihilationReport, AnnihilationVerdict, AnnihilationWitness,
    CechComplex, GradedWindow, LcPiece, DEFAULT_TMAX,
};
pub use spc::{LocalizedSpc, SpcSubset};
pub use torsion::{lc_vanishing_bound, lc_vanishing_bound_module, torsion_submodule};

#[cfg(test)]
mod tests;
