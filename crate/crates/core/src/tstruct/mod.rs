//! Aisles of sp-filtrations of Spec R and the finite-generation check.

use crate::complexkernel::{cohomology_annihilator, BddComplex};
use crate::error::{Error, Result};
use crate::localcoh::{
    annihilation_test, lc_vanishing_bound, AnnihilationReport, AnnihilationVerdict, GradedWindow, SpcSubset,
};
use crate::modkernel::FgModule;
use crate::ringkernel::{Ideal, Poly, PolyRing, PrimeIdeal};
use crate::spfilt::{weak_cousin_check, FinPoset, SpFiltration};
use crate::xint::XInt;

/// A decreasing family of closed subsets on `[lo, hi]`, constant beyond.
#[derive(Clone, Debug, PartialEq)]
pub struct RingFiltration {
    ring: PolyRing,
    lo: i64,
    levels: Vec<SpcSubset>,
}

impl RingFiltration {
    /// `levels[k] = φ(lo + k)`.
    pub fn new(ring: &PolyRing, lo: i64, levels: Vec<SpcSubset>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Invalid("a filtration needs at least one level".into()));
        }
        for (k, l) in levels.iter().enumerate() {
            if l.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if k > 0 && !l.is_subset(&levels[k - 1])? {
                return Err(Error::Invalid(format!(
                    "level {} is not contained in level {}",
                    lo + k as i64,
                    lo + k as i64 - 1
                )));
            }
        }
        Ok(RingFiltration { ring: ring.clone(), lo, levels })
    }

    /// Listed levels; gaps copy the nearest listed level below.
    pub fn from_listed(ring: &PolyRing, listed: &[(i64, SpcSubset)]) -> Result<Self> {
        let mut sorted = listed.to_vec();
        sorted.sort_by_key(|p| p.0);
        let (lo, hi) = match (sorted.first(), sorted.last()) {
            (Some(a), Some(b)) => (a.0, b.0),
            _ => return Err(Error::Invalid("a filtration needs at least one level".into())),
        };
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Invalid(format!("level {} listed twice", w[0].0)));
            }
        }
        let levels =
            (lo..=hi).map(|i| sorted.iter().rev().find(|p| p.0 <= i).expect("lowest listed").1.clone()).collect();
        RingFiltration::new(ring, lo, levels)
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.levels.len() as i64 - 1)
    }

    pub fn level(&self, i: i64) -> &SpcSubset {
        let k = (i - self.lo).clamp(0, self.levels.len() as i64 - 1);
        &self.levels[k as usize]
    }

    /// `φ[1](i) = φ(i + 1)`.
    pub fn shift(&self, n: i64) -> RingFiltration {
        RingFiltration { ring: self.ring.clone(), lo: self.lo - n, levels: self.levels.clone() }
    }

    /// `{ 0: V<x>; 1: V<1> }`
    pub fn display_body(&self) -> String {
        let (lo, hi) = self.window();
        let parts: Vec<String> = (lo..=hi).map(|i| format!("{i}: {}", self.level(i))).collect();
        format!("{{ {} }}", parts.join("; "))
    }

    /// The sets `{p : p ∈ φ(i)}` on a prime-backed poset.
    pub fn restrict(&self, poset: &FinPoset) -> Result<SpFiltration> {
        let primes =
            poset.primes().ok_or_else(|| Error::Precondition("restriction needs a prime-backed poset".into()))?;
        let (lo, hi) = self.window();
        let mut levels = Vec::new();
        for i in lo - 1..=hi + 1 {
            let mut s = 0u64;
            for (k, p) in primes.iter().enumerate() {
                if self.level(i).contains_prime(p)? {
                    s |= 1 << k;
                }
            }
            levels.push(s);
        }
        SpFiltration::new(poset, lo, hi, levels)
    }
}

/// A degree `i` with `supp H^i(X) ⊄ φ(i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AisleViolation {
    pub degree: i64,
    /// `ann H^i(X)`.
    pub annihilator: Ideal,
    /// A generator of the level's ideal outside `√ann H^i(X)`.
    pub direction: Poly,
}

/// `X ∈ A(φ)`: `supp H^i(X) ⊆ φ(i)` for all `i`.
pub fn aisle_membership(x: &BddComplex, phi: &RingFiltration) -> Result<Option<AisleViolation>> {
    if x.ring() != phi.ring() {
        return Err(Error::RingMismatch);
    }
    for i in x.nonzero_degrees()? {
        let ann = x.cohomology_module(i)?.annihilator()?;
        for g in phi.level(i).defining().gens() {
            if !ann.radical_contains_poly(g)? {
                return Ok(Some(AisleViolation { degree: i, annihilator: ann, direction: g.clone() }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiEntry {
    pub prime: usize,
    pub i: i64,
    pub in_aisle: bool,
    pub in_level: bool,
}

#[derive(Clone, Debug, Default)]
pub struct PsiReport {
    pub entries: Vec<PsiEntry>,
}

impl PsiReport {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.in_aisle != e.in_level).count()
    }

    pub fn ok(&self) -> bool {
        self.failures() == 0
    }

    pub fn report_line(&self) -> String {
        format!(
            "PSI {} checked={} failures={}",
            if self.ok() { "ok" } else { "fail" },
            self.entries.len(),
            self.failures()
        )
    }
}

/// Compares `(R/p)[-i] ∈ A(φ)` with `p ∈ φ(i)` for every prime and `i` in range.
pub fn psi_roundtrip_check(phi: &RingFiltration, primes: &[PrimeIdeal], range: (i64, i64)) -> Result<PsiReport> {
    let mut rep = PsiReport::default();
    for (k, p) in primes.iter().enumerate() {
        let rp = FgModule::cyclic(p.ideal());
        for i in range.0..=range.1 {
            let x = BddComplex::from_module(&rp, i);
            let in_aisle = aisle_membership(&x, phi)?.is_none();
            let in_level = phi.level(i).contains_prime(p)?;
            rep.entries.push(PsiEntry { prime: k, i, in_aisle, in_level });
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug)]
pub enum Lemma19Verdict {
    /// `I` with `V(I) ⊆ φ(n)` killing `H^j_(φ(n))(X)` for `j ≤ n` on the window.
    Certificate {
        ideal: Ideal,
        report: Option<AnnihilationReport>,
    },
    Inconclusive(String),
}

fn candidates(x: &BddComplex, a: &Ideal, n: i64) -> Result<Vec<Ideal>> {
    let ring = x.ring();
    let mut anns = Vec::new();
    for j in x.nonzero_degrees()? {
        if j <= n {
            anns.push(x.cohomology_module(j)?.annihilator()?);
        }
    }
    let mut out = Vec::new();
    if let Some(last) = anns.last() {
        out.push(last.clone());
    }
    let mut prod = Ideal::unit(ring);
    for c in &anns {
        prod = prod.product(c)?;
    }
    out.push(prod.clone());
    out.push(cohomology_annihilator(x)?);
    for k in 1..=3 {
        out.push(a.power(k));
    }
    out.push(prod.product(a)?);
    out.push(prod.sum(a)?);
    Ok(out)
}

/// Checks weak Cousin on the supplied primes and the vanishing premise below
/// `n`, then looks for an ideal `I` with `V(I) ⊆ φ(n)` annihilating
/// `H^(≤n)_(φ(n))(X)` on the window.
pub fn lemma19_check(
    phi: &RingFiltration,
    x: &BddComplex,
    n: i64,
    win: &GradedWindow,
    primes: &[PrimeIdeal],
) -> Result<Lemma19Verdict> {
    if !primes.is_empty() {
        let names: Vec<String> = (0..primes.len()).map(|k| format!("p{k}")).collect();
        let poset = FinPoset::from_primes(names, primes.to_vec())?;
        if let Some(v) = weak_cousin_check(&phi.restrict(&poset)?) {
            return Err(Error::Precondition(format!(
                "weak Cousin fails: {} lies in level {} but {} is not in level {}",
                primes[v.q].ideal(),
                v.i,
                primes[v.p].ideal(),
                v.i - 1
            )));
        }
    }
    let (_, inf) = x.sup_inf()?;
    if let XInt::Fin(inf) = inf {
        for i in inf..n {
            let b = lc_vanishing_bound(phi.level(i), x)?;
            if b <= XInt::Fin(i) {
                return Err(Error::Precondition(format!("premise fails at level {i}: H^{b}_(φ({i}))(X) is nonzero")));
            }
        }
    }
    let z = phi.level(n);
    let ring = x.ring();
    if lc_vanishing_bound(z, x)? > XInt::Fin(n) {
        return Ok(Lemma19Verdict::Certificate { ideal: Ideal::unit(ring), report: None });
    }
    let a = z.defining();
    for cand in candidates(x, a, n)? {
        let cand = cand.minimalized()?;
        if cand.is_unit()? || !cand.radical_contains(a)? {
            continue;
        }
        let rep = annihilation_test(&cand, z, x, n + 1, win)?;
        if let AnnihilationVerdict::Holds { .. } = rep.verdict {
            return Ok(Lemma19Verdict::Certificate { ideal: cand, report: Some(rep) });
        }
    }
    Ok(Lemma19Verdict::Inconclusive("no candidate ideal annihilates the window".into()))
}

#[cfg(test)]
mod tests;
