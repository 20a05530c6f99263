//! Height-plus-depth conditions against annihilation of local cohomology for
//! bounded complexes, the Koszul reduction step, and a bounded annihilator search.

use crate::complexkernel::{
    cohomology_annihilator, complex_depth_at_prime, derived_annihilator_ideal, tensor_koszul, truncation_series,
    BddComplex,
};
use crate::error::{Error, Result};
use crate::localcoh::{
    annihilation_test, lc_vanishing_bound, AnnihilationVerdict, AnnihilationWitness, GradedWindow, SpcSubset,
};
use crate::ringkernel::{Ideal, Poly, PrimeIdeal};
use crate::xint::XInt;

/// Maximum nesting of reduction steps inside a search.
pub const MAX_DEPTH: usize = 8;

pub const DEFAULT_BUDGET: usize = 64;

/// Pairs `(p, q)` with `p ∈ Z`, `q ⊆ p` and `q ∉ Y`.
#[derive(Clone, Debug)]
pub struct PrimePairList {
    y: SpcSubset,
    z: SpcSubset,
    pairs: Vec<(PrimeIdeal, PrimeIdeal)>,
}

impl PrimePairList {
    pub fn new(y: &SpcSubset, z: &SpcSubset, pairs: Vec<(PrimeIdeal, PrimeIdeal)>) -> Result<Self> {
        for (k, (p, q)) in pairs.iter().enumerate() {
            if !z.contains_prime(p)? {
                return Err(Error::Invalid(format!("pair {k}: {} is not in Z", p.ideal())));
            }
            if y.contains_prime(q)? {
                return Err(Error::Invalid(format!("pair {k}: {} lies in Y", q.ideal())));
            }
            if !p.ideal().contains(q.ideal())? {
                return Err(Error::Invalid(format!("pair {k}: {} is not contained in {}", q.ideal(), p.ideal())));
            }
        }
        Ok(PrimePairList { y: y.clone(), z: z.clone(), pairs })
    }

    pub fn pairs(&self) -> &[(PrimeIdeal, PrimeIdeal)] {
        &self.pairs
    }

    pub fn y(&self) -> &SpcSubset {
        &self.y
    }

    pub fn z(&self) -> &SpcSubset {
        &self.z
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition1Violation {
    pub index: usize,
    pub height: usize,
    pub depth: XInt,
}

/// `height p/q + depth X_q ≥ n` over the list; the first violating pair otherwise.
pub fn condition1_check(x: &BddComplex, n: i64, pairs: &PrimePairList) -> Result<Option<Condition1Violation>> {
    for (index, (p, q)) in pairs.pairs().iter().enumerate() {
        let height = p.height_over(q)?;
        let depth = complex_depth_at_prime(x, q)?;
        if depth.offset(height as i64) < XInt::Fin(n) {
            return Ok(Some(Condition1Violation { index, height, depth }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition2Verdict {
    /// `certified` when local cohomology below `n` vanishes outright.
    Holds {
        certified: bool,
    },
    /// `V(b) ⊄ Y`: a generator of `Y`'s ideal outside `√b`.
    FailsContainment(Poly),
    FailsAnnihilation(AnnihilationWitness),
    Inconclusive(String),
}

impl Condition2Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Condition2Verdict::Holds { .. })
    }
}

/// `V(b) ⊆ Y` and `b H^i_Z(X) = 0` for `i < n` on the window.
pub fn condition2_verify(
    x: &BddComplex,
    y: &SpcSubset,
    z: &SpcSubset,
    n: i64,
    b: &Ideal,
    win: &GradedWindow,
) -> Result<Condition2Verdict> {
    for g in y.defining().gens() {
        if !b.radical_contains_poly(g)? {
            return Ok(Condition2Verdict::FailsContainment(g.clone()));
        }
    }
    match annihilation_test(b, z, x, n, win) {
        Ok(rep) => Ok(match rep.verdict {
            AnnihilationVerdict::Holds { certified } => Condition2Verdict::Holds { certified },
            AnnihilationVerdict::Fails(w) => Condition2Verdict::FailsAnnihilation(w),
            AnnihilationVerdict::Inconclusive(m) => Condition2Verdict::Inconclusive(m),
        }),
        Err(Error::RingMismatch) => Err(Error::RingMismatch),
        Err(e) => Ok(Condition2Verdict::Inconclusive(e.to_string())),
    }
}

/// One pass of the derived-quotient reduction.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    /// Acts null-homotopically on `X`; `supp X = V(I)`.
    pub i: Ideal,
    /// `(I : b_Y^∞)`.
    pub j: Ideal,
    pub ys: Vec<Poly>,
    /// `X ⊗ K(y_1..y_s)`; zero when `J = R`.
    pub x_prime: BddComplex,
    pub s: usize,
    /// `(I : y_1) ⋯ (I : y_s)`.
    pub colons: Vec<Ideal>,
}

impl ReductionTrace {
    /// `J = R`: `X` is supported inside `Y`.
    pub fn is_trivial(&self) -> bool {
        self.ys.is_empty()
    }

    /// `c ↦ c (I : y_s) ⋯ (I : y_1)`.
    pub fn transfer(&self, c: &Ideal) -> Result<Ideal> {
        let mut b = c.clone();
        for q in self.colons.iter().rev() {
            b = b.product(q)?;
        }
        b.minimalized()
    }

    pub fn line(&self, k: usize) -> String {
        format!("STEP {k}: I={} J={} s={}", self.i, self.j, self.s)
    }
}

pub fn reduction_step(x: &BddComplex, y: &SpcSubset) -> Result<ReductionTrace> {
    let ring = x.ring();
    if x.is_acyclic()? {
        return Err(Error::Precondition("the complex is acyclic".into()));
    }
    let i = derived_annihilator_ideal(x)?.ideal;
    let j = i.saturation(y.defining())?.minimalized()?;
    if !j.contains(&i)? {
        return Err(Error::Internal("I is not contained in its saturation".into()));
    }
    if j.is_unit()? {
        return Ok(ReductionTrace { i, j, ys: Vec::new(), x_prime: BddComplex::zero(ring), s: 0, colons: Vec::new() });
    }
    let ys = j.gens().to_vec();
    let x_prime = tensor_koszul(x, &ys)?;
    let supp = cohomology_annihilator(&x_prime)?;
    if !supp.radical_equals(&j)? {
        return Err(Error::Internal(format!("supp X' = V({supp}) differs from V({j})")));
    }
    let colons = ys.iter().map(|g| i.quotient_poly(g)).collect::<Result<Vec<_>>>()?;
    let s = ys.len();
    Ok(ReductionTrace { i, j, ys, x_prime, s, colons })
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found { b: Ideal, verdict: Condition2Verdict },
    NotFound { tried: usize },
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub trace: Vec<String>,
}

struct Search<'a> {
    y: &'a SpcSubset,
    z: &'a SpcSubset,
    win: &'a GradedWindow,
    budget: usize,
    tried: usize,
    steps: usize,
    trace: Vec<String>,
}

impl Search<'_> {
    fn candidates(&self, x: &BddComplex) -> Result<Vec<Ideal>> {
        let ring = x.ring();
        let a_y = self.y.defining();
        let mut heads = Vec::new();
        if let Ok(ser) = truncation_series(x) {
            for st in &ser.stages {
                heads.push(st.head.annihilator()?);
            }
        }
        let mut prod = Ideal::unit(ring);
        for h in &heads {
            prod = prod.product(h)?;
        }
        let mut out = heads.clone();
        out.push(prod.clone());
        for k in 1..=3 {
            let p = a_y.power(k);
            out.push(prod.sum(&p)?);
            out.push(prod.product(&p)?);
            out.push(p);
        }
        Ok(out)
    }

    fn try_candidate(&mut self, x: &BddComplex, n: i64, b: &Ideal) -> Result<Option<Condition2Verdict>> {
        if self.tried >= self.budget {
            return Ok(None);
        }
        let b = b.minimalized()?;
        if !b.radical_contains(self.y.defining())? {
            return Ok(None);
        }
        self.tried += 1;
        let v = condition2_verify(x, self.y, self.z, n, &b, self.win)?;
        Ok(v.holds().then_some(v))
    }

    fn run(&mut self, x: &BddComplex, n: i64, depth: usize) -> Result<Option<(Ideal, Condition2Verdict)>> {
        let ring = x.ring();
        if lc_vanishing_bound(self.z, x)? >= XInt::Fin(n) {
            return Ok(Some((Ideal::unit(ring), Condition2Verdict::Holds { certified: true })));
        }
        for c in self.candidates(x)? {
            if let Some(v) = self.try_candidate(x, n, &c)? {
                return Ok(Some((c.minimalized()?, v)));
            }
        }
        if depth >= MAX_DEPTH || self.tried >= self.budget {
            return Ok(None);
        }
        let step = match reduction_step(x, self.y) {
            Ok(s) if !s.is_trivial() => s,
            Ok(_) | Err(Error::Inconclusive(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        self.steps += 1;
        self.trace.push(step.line(self.steps));
        if let Some((c, _)) = self.run(&step.x_prime, n - step.s as i64, depth + 1)? {
            let b0 = step.transfer(&c)?;
            if let Some(v) = self.try_candidate(x, n, &b0)? {
                return Ok(Some((b0, v)));
            }
        }
        Ok(None)
    }
}

/// Looks for `b` with `V(b) ⊆ Y` passing the annihilation test below `n`.
/// Candidates: annihilators of the truncation heads, their product, its sums
/// and products with powers of `Y`'s ideal, and transfers of ideals found
/// for the reduced complex. `budget` bounds the number of verifications.
pub fn annihilator_search(
    x: &BddComplex,
    y: &SpcSubset,
    z: &SpcSubset,
    n: i64,
    win: &GradedWindow,
    budget: usize,
) -> Result<SearchReport> {
    let mut s = Search { y, z, win, budget, tried: 0, steps: 0, trace: Vec::new() };
    let outcome = match s.run(x, n, 0)? {
        Some((b, verdict)) => SearchOutcome::Found { b, verdict },
        None => SearchOutcome::NotFound { tried: s.tried },
    };
    Ok(SearchReport { outcome, trace: s.trace })
}

#[cfg(test)]
mod tests;
