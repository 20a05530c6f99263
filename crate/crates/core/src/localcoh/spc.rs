use std::fmt;

use crate::error::{Error, Result};
use crate::ringkernel::{Ideal, PolyRing, PrimeIdeal};

/// A closed subset `V(a)` of Spec R. Specialization closed; finite unions
/// stay closed, which is all that is representable here.
#[derive(Clone, Debug)]
pub struct SpcSubset {
    defining: Ideal,
}

impl PartialEq for SpcSubset {
    /// Equality of the underlying sets, i.e. of radicals.
    fn eq(&self, other: &Self) -> bool {
        self.defining.radical_equals(&other.defining).unwrap_or(false)
    }
}

impl SpcSubset {
    pub fn closed(a: Ideal) -> Self {
        SpcSubset { defining: a }
    }

    /// The whole spectrum.
    pub fn everything(ring: &PolyRing) -> Self {
        SpcSubset { defining: Ideal::zero(ring) }
    }

    pub fn empty(ring: &PolyRing) -> Self {
        SpcSubset { defining: Ideal::unit(ring) }
    }

    pub fn defining(&self) -> &Ideal {
        &self.defining
    }

    pub fn ring(&self) -> &PolyRing {
        self.defining.ring()
    }

    pub fn union(&self, other: &SpcSubset) -> Result<SpcSubset> {
        Ok(SpcSubset { defining: self.defining.intersection(&other.defining)? })
    }

    pub fn intersect(&self, other: &SpcSubset) -> Result<SpcSubset> {
        Ok(SpcSubset { defining: self.defining.sum(&other.defining)? })
    }

    /// `p ∈ V(a)`.
    pub fn contains_prime(&self, p: &PrimeIdeal) -> Result<bool> {
        p.ideal().radical_contains(&self.defining)
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &SpcSubset) -> Result<bool> {
        self.defining.radical_contains(&other.defining)
    }

    pub fn is_empty(&self) -> Result<bool> {
        self.defining.radical_contains_poly(&self.ring().one())
    }

    /// `W_P`, kept as the same defining ideal with the membership rule
    /// `pR_P ∈ W_P ⇔ p ⊆ P and p ∈ W`. Nonempty exactly when `P ∈ W`.
    pub fn localize(&self, p: &PrimeIdeal) -> Result<LocalizedSpc> {
        Ok(LocalizedSpc { set: self.clone(), at: p.clone(), nonempty: self.contains_prime(p)? })
    }

    /// `W/I` over the ring `R/I`.
    pub fn quotient(&self, i: &Ideal) -> Result<SpcSubset> {
        if i.is_unit()? {
            return Err(Error::Precondition("quotient by the unit ideal".into()));
        }
        let ring = self.ring().quotient(i.gens())?;
        let gens = self.defining.gens().to_vec();
        Ok(SpcSubset { defining: Ideal::new(&ring, gens) })
    }
}

impl fmt::Display for SpcSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}", self.defining)
    }
}

/// The localization `W_P` of a closed subset at a prime.
#[derive(Clone, Debug)]
pub struct LocalizedSpc {
    pub set: SpcSubset,
    pub at: PrimeIdeal,
    pub nonempty: bool,
}

impl LocalizedSpc {
    /// Whether `pR_P` lies in `W_P`.
    pub fn contains(&self, p: &PrimeIdeal) -> Result<bool> {
        Ok(self.at.ideal().contains(p.ideal())? && self.set.contains_prime(p)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_and_localization() {
        let r = PolyRing::rational(&["x", "y"]);
        let vx = SpcSubset::closed(Ideal::parse(&r, "<x>").unwrap());
        let vy = SpcSubset::closed(Ideal::parse(&r, "<y>").unwrap());
        let u = vx.union(&vy).unwrap();
        assert_eq!(u, SpcSubset::closed(Ideal::parse(&r, "<x*y>").unwrap()));
        let m = SpcSubset::closed(Ideal::parse(&r, "<x, y>").unwrap());
        let px = PrimeIdeal::variables(&r, &[0]).unwrap();
        assert!(!m.localize(&px).unwrap().nonempty);
        let q = m.quotient(&Ideal::parse(&r, "<x>").unwrap()).unwrap();
        assert!(!q.ring().is_polynomial_ring());
        assert!(SpcSubset::empty(&r).is_empty().unwrap());
    }
}
