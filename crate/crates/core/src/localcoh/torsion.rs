use super::spc::SpcSubset;
use crate::complexkernel::{hyper_ext_inf, BddComplex};
use crate::error::{Error, Result};
use crate::modkernel::{grade, FgModule, Matrix, Subquotient};
use crate::ringkernel::ModuleGb;
use crate::xint::XInt;

/// Largest exponent tried before giving up on `Γ`.
const TORSION_MAX_POWER: u32 = 64;

fn annihilated_by_power(m: &FgModule, w: &SpcSubset, t: u32) -> Result<Subquotient> {
    let ring = m.ring();
    let gens = w.defining().power(t).minimalized()?;
    let r = m.rank();
    let mut map = Matrix::zero(0, r);
    for g in gens.gens() {
        map = map.vstack(&Matrix::scalar(g, r));
    }
    let n = gens.gens().len();
    let target = FgModule::new(ring, r * n, m.relations().repeat_diag(n), None)?;
    m.kernel_of(&map, &target)
}

/// `Γ_W(M) = ∪_t (0 :_M a^t)` for `W = V(a)`, as a submodule of `M`.
pub fn torsion_submodule(w: &SpcSubset, m: &FgModule) -> Result<Subquotient> {
    if w.ring() != m.ring() {
        return Err(Error::RingMismatch);
    }
    let ring = m.ring();
    let mut prev = annihilated_by_power(m, w, 1)?;
    for t in 2..=TORSION_MAX_POWER {
        let next = annihilated_by_power(m, w, t)?;
        let mut cols = prev.gens.columns();
        cols.extend(m.relations().columns());
        let gb = ModuleGb::compute(ring, m.rank(), &cols)?;
        if next.gens.columns().iter().all(|c| gb.contains(c)) {
            return Ok(prev);
        }
        prev = next;
    }
    Err(Error::ResourceLimit(format!("(0 :_M a^t) still growing at t = {TORSION_MAX_POWER}")))
}

/// `min{i : H^i_Z(M) ≠ 0}`, which is `grade(a, M)`.
pub fn lc_vanishing_bound_module(z: &SpcSubset, m: &FgModule) -> Result<XInt> {
    grade(z.defining(), m)
}

/// `min{i : H^i_Z(X) ≠ 0} = min{i : Ext^i(R/a, X) ≠ 0}`.
pub fn lc_vanishing_bound(z: &SpcSubset, x: &BddComplex) -> Result<XInt> {
    if z.ring() != x.ring() {
        return Err(Error::RingMismatch);
    }
    hyper_ext_inf(z.defining(), x)
}
