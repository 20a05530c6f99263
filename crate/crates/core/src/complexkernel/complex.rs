use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::modkernel::{resolve, vec_degree, FgModule, Matrix, Subquotient};
use crate::ringkernel::PolyRing;
use crate::xint::XInt;

/// A bounded cochain complex `X^lo -> ... -> X^hi` of finitely presented
/// modules. Terms entered by users are free; soft truncations produce
/// presented terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BddComplex {
    ring: PolyRing,
    lo: i64,
    terms: Vec<FgModule>,
    /// `diffs[k]`: `X^(lo+k) -> X^(lo+k+1)`.
    diffs: Vec<Matrix>,
}

/// A degreewise map of complexes; `maps[k]` acts on degree `lo + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub lo: i64,
    pub maps: Vec<Matrix>,
}

impl ChainMap {
    pub fn at(&self, i: i64) -> Option<&Matrix> {
        if i < self.lo {
            return None;
        }
        self.maps.get((i - self.lo) as usize)
    }
}

impl BddComplex {
    pub fn new(ring: &PolyRing, lo: i64, terms: Vec<FgModule>, diffs: Vec<Matrix>) -> Result<Self> {
        let x = BddComplex { ring: ring.clone(), lo, terms, diffs };
        x.validate()?;
        Ok(x.trimmed())
    }

    /// A complex of free modules `R^ranks[k]` in degree `lo + k`.
    pub fn free(
        ring: &PolyRing,
        lo: i64,
        ranks: &[usize],
        diffs: Vec<Matrix>,
        degrees: Option<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        let mut terms = Vec::with_capacity(ranks.len());
        for (k, &r) in ranks.iter().enumerate() {
            let d = degrees.as_ref().map(|v| v[k].clone());
            terms.push(FgModule::new(ring, r, Matrix::zero(r, 0), d)?);
        }
        BddComplex::new(ring, lo, terms, diffs)
    }

    pub fn zero(ring: &PolyRing) -> Self {
        BddComplex { ring: ring.clone(), lo: 0, terms: Vec::new(), diffs: Vec::new() }
    }

    /// `M` placed in degree `deg` as a single presented term.
    pub fn from_module(m: &FgModule, deg: i64) -> Self {
        BddComplex { ring: m.ring().clone(), lo: deg, terms: vec![m.clone()], diffs: Vec::new() }.trimmed()
    }

    /// `M` in degree `deg` replaced by a finite free resolution, which
    /// must exist (it does over polynomial rings).
    pub fn resolved_module(m: &FgModule, deg: i64) -> Result<Self> {
        let ring = m.ring();
        let len = ring.nvars() + 1;
        let res = resolve(m, len)?;
        let mut ranks = res.ranks();
        while ranks.len() > 1 && *ranks.last().expect("nonempty") == 0 {
            ranks.pop();
        }
        if ranks.len() > len {
            return Err(Error::Precondition("module has no short finite free resolution".into()));
        }
        let l = ranks.len() - 1;
        // cohomological: F_l in degree deg - l, ..., F_0 in degree deg
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for k in (0..=l).rev() {
            let d = res.degrees.as_ref().map(|v| v[k].clone());
            terms.push(FgModule::new(ring, ranks[k], Matrix::zero(ranks[k], 0), d)?);
            if k > 0 {
                diffs.push(res.maps[k - 1].clone());
            }
        }
        BddComplex::new(ring, deg - l as i64, terms, diffs)
    }

    fn validate(&self) -> Result<()> {
        if self.diffs.len() + 1 != self.terms.len() && !(self.terms.is_empty() && self.diffs.is_empty()) {
            return Err(Error::Invalid("a complex needs one differential between consecutive terms".into()));
        }
        let graded = self.terms.iter().all(|t| t.is_graded());
        for (k, d) in self.diffs.iter().enumerate() {
            let i = self.lo + k as i64;
            let (s, t) = (&self.terms[k], &self.terms[k + 1]);
            if d.rows() != t.rank() || d.cols() != s.rank() {
                return Err(Error::Invalid(format!(
                    "d({i}) has shape {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    t.rank(),
                    s.rank()
                )));
            }
            for c in d.mul(&self.ring, s.relations()).columns() {
                if !t.is_zero_element(&c)? {
                    return Err(Error::Invalid(format!("d({i}) does not respect the relations of degree {i}")));
                }
            }
            if graded && !self.terms.is_empty() {
                let sd = s.degrees().expect("graded");
                let td = t.degrees().expect("graded");
                for j in 0..d.cols() {
                    if let Some(e) = vec_degree(&self.ring, &d.col(j), td)? {
                        if e != sd[j] {
                            return Err(Error::Invalid(format!("d({i}) is not homogeneous of degree 0")));
                        }
                    }
                }
            }
        }
        for k in 0..self.diffs.len().saturating_sub(1) {
            let i = self.lo + k as i64;
            let dd = self.diffs[k + 1].mul(&self.ring, &self.diffs[k]);
            for c in dd.columns() {
                if !self.terms[k + 2].is_zero_element(&c)? {
                    return Err(Error::Invalid(format!("d({}) * d({i}) is not zero", i + 1)));
                }
            }
        }
        Ok(())
    }

    /// Drops zero-rank terms at both ends.
    fn trimmed(mut self) -> Self {
        while self.terms.first().is_some_and(|t| t.rank() == 0) {
            self.terms.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        while self.terms.last().is_some_and(|t| t.rank() == 0) {
            self.terms.pop();
            self.diffs.pop();
        }
        if self.terms.is_empty() {
            self.lo = 0;
            self.diffs.clear();
        }
        self
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top degree; `lo - 1` for the zero complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[FgModule] {
        &self.terms
    }

    pub fn term(&self, i: i64) -> Option<&FgModule> {
        if i < self.lo {
            return None;
        }
        self.terms.get((i - self.lo) as usize)
    }

    /// Rank of the ambient free module of `X^i`, zero outside the range.
    pub fn rank(&self, i: i64) -> usize {
        self.term(i).map_or(0, |t| t.rank())
    }

    /// `d^i: X^i -> X^(i+1)` as a matrix; zero outside the range.
    pub fn diff(&self, i: i64) -> Matrix {
        if i >= self.lo && ((i - self.lo) as usize) < self.diffs.len() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            Matrix::zero(self.rank(i + 1), self.rank(i))
        }
    }

    pub fn is_free(&self) -> bool {
        self.terms.iter().all(|t| t.relations().cols() == 0)
    }

    pub fn is_graded(&self) -> bool {
        !self.terms.is_empty() && self.terms.iter().all(|t| t.is_graded())
    }

    /// Relation matrix of `X^i` (`rank x 0` for free terms).
    pub fn rels(&self, i: i64) -> Matrix {
        match self.term(i) {
            Some(t) => t.relations().clone(),
            None => Matrix::zero(0, 0),
        }
    }

    /// `H^i(X)` with its generators as cycles in the ambient free module of `X^i`.
    pub fn cohomology(&self, i: i64) -> Result<Subquotient> {
        let Some(t) = self.term(i) else {
            return Ok(Subquotient { module: FgModule::zero(&self.ring), gens: Matrix::zero(0, 0) });
        };
        let kgens = match self.term(i + 1) {
            Some(next) => t.kernel_of(&self.diff(i), next)?.gens,
            None => Matrix::identity(&self.ring, t.rank()),
        };
        let rels = self.diff(i - 1).hstack(t.relations());
        FgModule::subquotient(&self.ring, &kgens, &rels, t.degrees())
    }

    pub fn cohomology_module(&self, i: i64) -> Result<FgModule> {
        Ok(self.cohomology(i)?.module)
    }

    /// `(sup, inf)` over nonzero cohomology; `(-inf, +inf)` for an acyclic complex.
    pub fn sup_inf(&self) -> Result<(XInt, XInt)> {
        let mut nz = Vec::new();
        for i in self.lo..=self.hi() {
            if !self.cohomology_module(i)?.is_zero()? {
                nz.push(i);
            }
        }
        Ok(match (nz.last(), nz.first()) {
            (Some(&s), Some(&f)) => (XInt::Fin(s), XInt::Fin(f)),
            _ => (XInt::NegInf, XInt::PosInf),
        })
    }

    /// Degrees with nonzero cohomology, ascending.
    pub fn nonzero_degrees(&self) -> Result<Vec<i64>> {
        let mut nz = Vec::new();
        for i in self.lo..=self.hi() {
            if !self.cohomology_module(i)?.is_zero()? {
                nz.push(i);
            }
        }
        Ok(nz)
    }

    pub fn is_acyclic(&self) -> Result<bool> {
        Ok(self.nonzero_degrees()?.is_empty())
    }

    /// `X[n]`: `X[n]^i = X^(i+n)`, differentials times `(-1)^n`.
    pub fn shift(&self, n: i64) -> BddComplex {
        let diffs =
            if n % 2 == 0 { self.diffs.clone() } else { self.diffs.iter().map(|d| d.neg(&self.ring)).collect() };
        let lo = if self.terms.is_empty() { 0 } else { self.lo - n };
        BddComplex { ring: self.ring.clone(), lo, terms: self.terms.clone(), diffs }
    }

    /// Internal degree twist of every term (graded complexes).
    pub fn twist(&self, k: i64) -> BddComplex {
        BddComplex {
            ring: self.ring.clone(),
            lo: self.lo,
            terms: self.terms.iter().map(|t| t.twist(k)).collect(),
            diffs: self.diffs.clone(),
        }
    }

    pub fn ungraded(&self) -> BddComplex {
        BddComplex {
            ring: self.ring.clone(),
            lo: self.lo,
            terms: self.terms.iter().map(|t| t.ungraded()).collect(),
            diffs: self.diffs.clone(),
        }
    }

    /// Session syntax: `{ -1: R^1; 0: R^1; d(-1) = [[x]] }`.
    pub fn display(&self) -> String {
        let mut s = String::from("{");
        let mut parts: Vec<String> = Vec::new();
        for (k, t) in self.terms.iter().enumerate() {
            let i = self.lo + k as i64;
            parts.push(format!("{i}: {}", fmt_term(t)));
        }
        for (k, d) in self.diffs.iter().enumerate() {
            let i = self.lo + k as i64;
            parts.push(format!("d({i}) = {}", d.fmt(&self.ring)));
        }
        if !parts.is_empty() {
            s.push(' ');
            s.push_str(&parts.join("; "));
            s.push(' ');
        }
        s.push('}');
        s
    }
}

/// `R^r`, `R^r graded [..]`, or the `coker` form for presented terms.
pub(crate) fn fmt_term(t: &FgModule) -> String {
    if t.relations().cols() > 0 {
        return t.display();
    }
    let mut s = format!("R^{}", t.rank());
    if let Some(d) = t.degrees() {
        let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        let _ = write!(s, " graded [{}]", ds.join(", "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringkernel::Ideal;

    #[test]
    fn multiplication_complex_cohomology() {
        let r = PolyRing::rational(&["x"]);
        let x = BddComplex::free(&r, -1, &[1, 1], vec![Matrix::parse(&r, "[[x]]").unwrap()], None).unwrap();
        assert!(x.cohomology_module(-1).unwrap().is_zero().unwrap());
        let h0 = x.cohomology_module(0).unwrap();
        assert!(h0.annihilator().unwrap().equals(&Ideal::parse(&r, "<x>").unwrap()).unwrap());
        assert_eq!(x.sup_inf().unwrap(), (XInt::Fin(0), XInt::Fin(0)));
    }

    #[test]
    fn zero_differential_and_single_term() {
        let r = PolyRing::rational(&["x"]);
        let z = BddComplex::free(&r, -1, &[1, 1], vec![Matrix::zero(1, 1)], None).unwrap();
        assert_eq!(z.nonzero_degrees().unwrap(), vec![-1, 0]);
        let single = BddComplex::free(&r, 3, &[1], vec![], None).unwrap();
        assert_eq!(single.sup_inf().unwrap(), (XInt::Fin(3), XInt::Fin(3)));
        assert_eq!(single.shift(2).sup_inf().unwrap(), (XInt::Fin(1), XInt::Fin(1)));
    }

    #[test]
    fn nonzero_square_is_rejected() {
        let r = PolyRing::rational(&["x"]);
        let one = Matrix::parse(&r, "[[1]]").unwrap();
        let e = BddComplex::free(&r, 0, &[1, 1, 1], vec![one.clone(), one], None).unwrap_err();
        assert!(e.to_string().contains("d(1) * d(0)"));
    }

    #[test]
    fn display_uses_session_syntax() {
        let r = PolyRing::rational(&["x"]);
        let x = BddComplex::free(&r, -1, &[1, 1], vec![Matrix::parse(&r, "[[x]]").unwrap()], None).unwrap();
        assert_eq!(x.display(), "{ -1: R^1; 0: R^1; d(-1) = [[x]] }");
    }

    #[test]
    fn resolved_module_is_quasi_isomorphic() {
        let r = PolyRing::rational_graded(&["x", "y"]);
        let m = FgModule::cyclic(&Ideal::parse(&r, "<x, y>").unwrap());
        let x = BddComplex::resolved_module(&m, 0).unwrap();
        assert_eq!((x.lo(), x.hi()), (-2, 0));
        assert_eq!(x.nonzero_degrees().unwrap(), vec![0]);
    }
}
