use std::fmt;

use super::poset::{ElemSet, FinPoset};
use crate::error::{Error, Result};
use crate::xint::XInt;

/// A decreasing family of upward-closed subsets indexed by `ℤ`, stored on
/// `[lo - 1, hi + 1]` and constant beyond.
#[derive(Clone, Debug, PartialEq)]
pub struct SpFiltration {
    poset: FinPoset,
    lo: i64,
    hi: i64,
    /// `levels[k] = φ(lo - 1 + k)`.
    levels: Vec<ElemSet>,
}

impl SpFiltration {
    /// `levels[k]` is `φ(lo - 1 + k)` for `k` in `0..=hi - lo + 2`.
    pub fn new(poset: &FinPoset, lo: i64, hi: i64, levels: Vec<ElemSet>) -> Result<Self> {
        if hi < lo {
            return Err(Error::Invalid(format!("empty window [{lo}, {hi}]")));
        }
        if levels.len() as i64 != hi - lo + 3 {
            return Err(Error::Invalid("wrong number of levels for the window".into()));
        }
        for (k, &s) in levels.iter().enumerate() {
            let i = lo - 1 + k as i64;
            if s & !poset.full() != 0 {
                return Err(Error::Invalid(format!("level {i} mentions unknown elements")));
            }
            if !poset.is_up_closed(s) {
                return Err(Error::Invalid(format!("level {i} = {} is not upward-closed", poset.fmt_set(s))));
            }
            if k > 0 && s & !levels[k - 1] != 0 {
                return Err(Error::Invalid(format!("level {i} is not contained in level {}", i - 1)));
            }
        }
        Ok(SpFiltration { poset: poset.clone(), lo, hi, levels })
    }

    /// From explicitly listed levels: unlisted indices copy the nearest listed
    /// level below, or the lowest listed level when there is none.
    pub fn from_listed(poset: &FinPoset, lo: i64, hi: i64, listed: &[(i64, ElemSet)]) -> Result<Self> {
        if listed.is_empty() {
            return Err(Error::Invalid("a filtration needs at least one level".into()));
        }
        let mut sorted = listed.to_vec();
        sorted.sort_by_key(|p| p.0);
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Invalid(format!("level {} listed twice", w[0].0)));
            }
        }
        let levels =
            (lo - 1..=hi + 1).map(|i| sorted.iter().rev().find(|p| p.0 <= i).unwrap_or(&sorted[0]).1).collect();
        SpFiltration::new(poset, lo, hi, levels)
    }

    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn level(&self, i: i64) -> ElemSet {
        let k = (i - (self.lo - 1)).clamp(0, self.levels.len() as i64 - 1);
        self.levels[k as usize]
    }

    pub fn contains(&self, i: i64, p: usize) -> bool {
        self.level(i) >> p & 1 == 1
    }

    /// `{ -1: {..}; 0: {..}; ...; tails lo=.. hi=.. }`
    pub fn display_body(&self) -> String {
        let mut parts: Vec<String> =
            (self.lo - 1..=self.hi + 1).map(|i| format!("{i}: {}", self.poset.fmt_set(self.level(i)))).collect();
        parts.push(format!("tails lo={} hi={}", self.lo, self.hi));
        format!("{{ {} }}", parts.join("; "))
    }
}

impl fmt::Display for SpFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_body())
    }
}

/// An order-preserving function to `ℤ ∪ {±∞}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TFunction {
    poset: FinPoset,
    values: Vec<XInt>,
}

impl TFunction {
    pub fn new(poset: &FinPoset, values: Vec<XInt>) -> Result<Self> {
        if values.len() != poset.len() {
            return Err(Error::Invalid("one value per element is required".into()));
        }
        for i in 0..poset.len() {
            for j in 0..poset.len() {
                if poset.le(i, j) && values[i] > values[j] {
                    return Err(Error::Invalid(format!(
                        "not order-preserving: {} ≤ {} but {} > {}",
                        poset.names()[i],
                        poset.names()[j],
                        values[i],
                        values[j]
                    )));
                }
            }
        }
        Ok(TFunction { poset: poset.clone(), values })
    }

    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn values(&self) -> &[XInt] {
        &self.values
    }

    pub fn value(&self, p: usize) -> XInt {
        self.values[p]
    }

    /// `p ↦ height p`: the ring height for prime-backed posets, else the
    /// longest chain ending at `p`.
    pub fn height_function(poset: &FinPoset) -> Result<TFunction> {
        let values = match poset.primes() {
            Some(ps) => ps.iter().map(|p| Ok(XInt::Fin(p.height()? as i64))).collect::<Result<Vec<_>>>()?,
            None => (0..poset.len())
                .map(|j| XInt::Fin((0..poset.len()).filter_map(|i| poset.height(i, j)).max().unwrap_or(0) as i64))
                .collect(),
        };
        TFunction::new(poset, values)
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self.poset.names().iter().zip(&self.values).map(|(n, v)| format!("{n}={v}")).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// `F(φ)(p) = sup{i : p ∈ φ(i)} + 1`.
pub fn f_map(phi: &SpFiltration) -> TFunction {
    let poset = phi.poset();
    let (lo, hi) = phi.window();
    let values = (0..poset.len())
        .map(|p| {
            if phi.contains(hi + 1, p) {
                XInt::PosInf
            } else if !phi.contains(lo - 1, p) {
                XInt::NegInf
            } else {
                let top = (lo - 1..=hi).rev().find(|&i| phi.contains(i, p)).expect("in the lower tail");
                XInt::Fin(top + 1)
            }
        })
        .collect();
    TFunction { poset: poset.clone(), values }
}

/// `Φ(f)(i) = {p : f(p) > i}`; finite values must lie in `[lo, hi + 1]`.
pub fn phi_map(f: &TFunction, lo: i64, hi: i64) -> Result<SpFiltration> {
    for (p, v) in f.values().iter().enumerate() {
        if let XInt::Fin(x) = v {
            if *x < lo || *x > hi + 1 {
                return Err(Error::Invalid(format!(
                    "value {x} at {} lies outside the window [{lo}, {}]",
                    f.poset().names()[p],
                    hi + 1
                )));
            }
        }
    }
    let levels = (lo - 1..=hi + 1)
        .map(|i| {
            let mut s = 0u64;
            for (p, v) in f.values().iter().enumerate() {
                if *v > XInt::Fin(i) {
                    s |= 1 << p;
                }
            }
            s
        })
        .collect();
    SpFiltration::new(f.poset(), lo, hi, levels)
}

/// A cover `p ⋖ q` and level `i` with `q ∈ φ(i)` but `p ∉ φ(i-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CousinViolation {
    pub p: usize,
    pub q: usize,
    pub i: i64,
}

pub fn weak_cousin_check(phi: &SpFiltration) -> Option<CousinViolation> {
    let (lo, hi) = phi.window();
    for &(p, q) in phi.poset().covers() {
        for i in lo - 1..=hi + 2 {
            if phi.contains(i, q) && !phi.contains(i - 1, p) {
                return Some(CousinViolation { p, q, i });
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TCheckMode {
    Full,
    Saturated,
}

/// `f(p) ≤ f(q) ≤ f(p) + height(q/p)` over comparable pairs (full) or covers
/// (saturated); returns the first failing pair.
pub fn t_function_check(f: &TFunction, mode: TCheckMode) -> Option<(usize, usize)> {
    let poset = f.poset();
    let pairs: Vec<(usize, usize)> = match mode {
        TCheckMode::Saturated => poset.covers().to_vec(),
        TCheckMode::Full => {
            let n = poset.len();
            (0..n).flat_map(|p| (0..n).map(move |q| (p, q))).filter(|&(p, q)| poset.lt(p, q)).collect()
        }
    };
    for (p, q) in pairs {
        let h = poset.height(p, q).expect("comparable") as i64;
        let (fp, fq) = (f.value(p), f.value(q));
        if fp > fq || fq > fp.offset(h) {
            return Some((p, q));
        }
    }
    None
}
